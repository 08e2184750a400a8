#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ipd/rng.hpp"

namespace ipd::hmm {

inline constexpr int kAlphabet = 8;
inline constexpr int kMaxStates = 4;

// Multinomial HMM over the 8 conditional-action symbols with a left-to-right
// (sequential) transition structure: trans[i][j] == 0 for j < i, and all
// initial mass sits on state 0. Returns to an earlier hidden state are not
// possible.
struct Model {
  int num_states = 1;
  std::vector<double> initial;               // size num_states
  std::vector<std::vector<double>> trans;    // num_states x num_states, row-stochastic
  std::vector<std::vector<double>> emit;     // num_states x kAlphabet, row-stochastic

  // Left-to-right model with uniform emissions, self-transition bias.
  static Model uniform(int h);

  // Throws std::invalid_argument when any structural invariant is violated
  // (row sums off by more than 1e-9, lower-triangular transition mass,
  // initial mass off state 0, state count outside [1, kMaxStates]).
  void validate() const;
};

struct FitConfig {
  int restarts = 10000;
  int max_em_iters = 500;
  double ll_tolerance = 1e-6;
  double min_transition = 0.01;
  double test_fraction = 0.2;
  bool viterbi_score = false;  // score candidates by Viterbi-path likelihood instead of forward
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Total log P(sequence | model) over all sequences, computed with per-step
// scaling so sequences of length 99 and beyond do not underflow. Returns
// -infinity when any sequence is impossible under the model.
double forward_log_likelihood(const Model& model, const std::vector<int>& seq);
double forward_log_likelihood(const Model& model, const std::vector<std::vector<int>>& seqs);

struct FitResult {
  Model model;
  double train_ll = 0.0;
  std::vector<double> ll_trace;  // per-iteration training ll of the winning restart
  int best_restart = 0;
};

// Baum-Welch over the given symbol sequences with `restarts` random
// initializations (Dirichlet(1) rows respecting the structural zeros); the
// restart with the best final training likelihood wins. h=1 is the closed
// form: pooled symbol frequencies with trans=[[1]]. Restarts run in parallel
// when config.jobs allows; the winner does not depend on scheduling.
FitResult fit_baum_welch(const std::vector<std::vector<int>>& seqs, int h,
                         const FitConfig& config);

// Most probable hidden path (monotone non-decreasing by construction).
// Symbols impossible under every state keep the path defined through
// log-space -infinity handling.
std::vector<int> viterbi_decode(const Model& model, const std::vector<int>& seq);
double viterbi_log_likelihood(const Model& model, const std::vector<int>& seq);

struct SamplePath {
  std::vector<int> states;
  std::vector<int> symbols;
};
SamplePath sample_path(const Model& model, int length, Rng& rng);
std::vector<int> sample(const Model& model, int length, Rng& rng);

// Fraction of time each state is occupied in the Viterbi decodings of the
// sequences, and the occupancy-weighted average emission distribution.
std::vector<double> viterbi_occupancy(const Model& model,
                                      const std::vector<std::vector<int>>& seqs);
std::array<double, kAlphabet> occupancy_weighted_emissions(
    const Model& model, const std::vector<std::vector<int>>& seqs);

struct SelectionReport {
  Model model;
  int chosen_h = 1;
  double test_ll = 0.0;
  bool degenerate_split = false;  // train == test (single-sequence corpus)

  struct Candidate {
    int h = 0;
    double train_ll = 0.0;
    double test_ll = 0.0;
    bool accepted = false;
    std::string reject_reason;
  };
  std::vector<Candidate> candidates;  // in fit order h = 4, 3, 2, 1
  std::vector<std::string> diagnostics;
};

// Model selection over h in [4, 3, 2, 1]: split the sequences into train and
// test by config.test_fraction (seeded, at least one sequence on each side),
// fit each h on the train split and score it on the test split. A candidate
// is accepted only when every structurally-allowed transition it retains has
// probability >= config.min_transition (self-loops included) and its Viterbi
// decoding of the train split visits all h states. The accepted candidate
// with the highest test likelihood wins; ties within config.ll_tolerance go
// to the smaller h. h=1 always passes the constraints, so a model is always
// returned. Throws std::invalid_argument for fewer than 2 sequences.
SelectionReport select_model(const std::vector<std::vector<int>>& seqs,
                             const FitConfig& config);

// Display-side pruning: emissions below emit_floor and transitions at or
// below trans_floor are dropped without renormalizing what remains, and
// states no longer reachable from state 0 are dropped entirely. Symbols carry
// human-readable triplet labels via symbol_label().
struct DisplayState {
  int state = 0;                                   // index in the source model
  std::vector<std::pair<int, double>> emissions;   // (symbol, original probability)
};
struct DisplayModel {
  std::vector<DisplayState> states;                          // states[0] is the initial state
  std::vector<std::tuple<int, int, double>> transitions;     // (from, to, original probability)
};
DisplayModel prune_for_display(const Model& model, double emit_floor = 0.05,
                               double trans_floor = 0.01);

nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

// DOT rendering of a pruned model in the figure style: rectangular states
// listing the retained triplet emissions, initial state bold, forward edges
// labeled with their transition probability.
std::string to_dot(const DisplayModel& display, const std::string& graph_name = "hmm");

}  // namespace ipd::hmm
