#include "ipd/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ipd/game.hpp"
#include "ipd/parallel.hpp"

namespace ipd::hmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRowSumTol = 1e-9;
// Probabilities above this are "retained": present in the fitted model rather
// than numerically indistinguishable from a structural zero.
constexpr double kRetainEps = 1e-12;

constexpr std::uint64_t kStreamSplit = 101;
constexpr std::uint64_t kStreamRestart = 102;

struct FlatModel {
  int h = 1;
  std::vector<double> trans;  // h*h row-major
  std::vector<double> emit;   // h*kAlphabet row-major
};

FlatModel flatten(const Model& m) {
  FlatModel f;
  f.h = m.num_states;
  f.trans.resize(static_cast<std::size_t>(f.h) * f.h);
  f.emit.resize(static_cast<std::size_t>(f.h) * kAlphabet);
  for (int i = 0; i < f.h; ++i) {
    for (int j = 0; j < f.h; ++j) f.trans[i * f.h + j] = m.trans[i][j];
    for (int k = 0; k < kAlphabet; ++k) f.emit[i * kAlphabet + k] = m.emit[i][k];
  }
  return f;
}

Model unflatten(const FlatModel& f) {
  Model m;
  m.num_states = f.h;
  m.initial.assign(f.h, 0.0);
  m.initial[0] = 1.0;
  m.trans.assign(f.h, std::vector<double>(f.h, 0.0));
  m.emit.assign(f.h, std::vector<double>(kAlphabet, 0.0));
  for (int i = 0; i < f.h; ++i) {
    for (int j = 0; j < f.h; ++j) m.trans[i][j] = f.trans[i * f.h + j];
    for (int k = 0; k < kAlphabet; ++k) m.emit[i][k] = f.emit[i * kAlphabet + k];
  }
  return m;
}

void check_sequences(const std::vector<std::vector<int>>& seqs) {
  if (seqs.empty()) throw std::invalid_argument("hmm: empty sequence set");
  bool any_len2 = false;
  for (const auto& s : seqs) {
    if (s.empty()) throw std::invalid_argument("hmm: empty sequence");
    if (s.size() >= 2) any_len2 = true;
    for (int x : s)
      if (x < 0 || x >= kAlphabet) throw std::invalid_argument("hmm: symbol out of range");
  }
  if (!any_len2) throw std::invalid_argument("hmm: all sequences shorter than 2");
}

// Scaled forward pass over one sequence; returns log-likelihood (kNegInf if
// the sequence is impossible). When alpha/scale are non-null they receive the
// per-step normalized alpha rows and normalizers for reuse by the backward
// pass.
double forward_flat(const FlatModel& f, const std::vector<int>& seq,
                    std::vector<double>* alpha, std::vector<double>* scale) {
  const int h = f.h;
  const std::size_t T = seq.size();
  double ll = 0.0;
  std::vector<double> cur(h), prev(h);

  for (int j = 0; j < h; ++j) cur[j] = 0.0;
  cur[0] = f.emit[seq[0]];  // initial mass is all on state 0
  double s = cur[0];
  for (int j = 1; j < h; ++j) s += cur[j];
  if (s <= 0.0) return kNegInf;
  for (int j = 0; j < h; ++j) cur[j] /= s;
  ll += std::log(s);
  if (alpha)
    for (int j = 0; j < h; ++j) (*alpha)[j] = cur[j];
  if (scale) (*scale)[0] = s;

  for (std::size_t t = 1; t < T; ++t) {
    std::swap(cur, prev);
    const int x = seq[t];
    s = 0.0;
    for (int j = 0; j < h; ++j) {
      double acc = 0.0;
      for (int i = 0; i <= j; ++i) acc += prev[i] * f.trans[i * h + j];
      acc *= f.emit[j * kAlphabet + x];
      cur[j] = acc;
      s += acc;
    }
    if (s <= 0.0) return kNegInf;
    for (int j = 0; j < h; ++j) cur[j] /= s;
    ll += std::log(s);
    if (alpha)
      for (int j = 0; j < h; ++j) (*alpha)[t * h + j] = cur[j];
    if (scale) (*scale)[t] = s;
  }
  return ll;
}

struct EmAccumulators {
  std::vector<double> trans_num;  // h*h
  std::vector<double> trans_den;  // h, gamma summed over t < T-1
  std::vector<double> emit_num;   // h*kAlphabet
  std::vector<double> emit_den;   // h, gamma summed over all t

  explicit EmAccumulators(int h)
      : trans_num(static_cast<std::size_t>(h) * h),
        trans_den(h),
        emit_num(static_cast<std::size_t>(h) * kAlphabet),
        emit_den(h) {}

  void reset() {
    std::fill(trans_num.begin(), trans_num.end(), 0.0);
    std::fill(trans_den.begin(), trans_den.end(), 0.0);
    std::fill(emit_num.begin(), emit_num.end(), 0.0);
    std::fill(emit_den.begin(), emit_den.end(), 0.0);
  }
};

struct EmWorkspace {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> scale;
  EmAccumulators acc;

  EmWorkspace(int h, std::size_t max_len)
      : alpha(max_len * h), beta(max_len * h), scale(max_len), acc(h) {}
};

void normalize_row(double* row, int n, const double* fallback) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += row[j];
  if (s <= 0.0) {
    for (int j = 0; j < n; ++j) row[j] = fallback[j];
    return;
  }
  for (int j = 0; j < n; ++j) row[j] /= s;
}

// One full Baum-Welch run from the given starting parameters. Returns the
// exact forward log-likelihood of the returned parameters; optionally records
// the per-iteration training log-likelihood trace.
double em_fit(const std::vector<std::vector<int>>& seqs, FlatModel& f, const FitConfig& cfg,
              EmWorkspace& ws, std::vector<double>* trace) {
  const int h = f.h;
  double prev_ll = kNegInf;

  for (int iter = 0; iter < cfg.max_em_iters; ++iter) {
    ws.acc.reset();
    double ll = 0.0;

    for (const auto& seq : seqs) {
      const std::size_t T = seq.size();
      double seq_ll = forward_flat(f, seq, &ws.alpha, &ws.scale);
      if (seq_ll == kNegInf) return kNegInf;  // impossible under current params
      ll += seq_ll;

      // Backward pass, scaled by the forward normalizers.
      for (int i = 0; i < h; ++i) ws.beta[(T - 1) * h + i] = 1.0;
      for (std::size_t t = T - 1; t > 0; --t) {
        const int x = seq[t];
        const double inv_s = 1.0 / ws.scale[t];
        for (int i = 0; i < h; ++i) {
          double acc = 0.0;
          for (int j = i; j < h; ++j)
            acc += f.trans[i * h + j] * f.emit[j * kAlphabet + x] * ws.beta[t * h + j];
          ws.beta[(t - 1) * h + i] = acc * inv_s;
        }
      }

      for (std::size_t t = 0; t < T; ++t) {
        const int x = seq[t];
        for (int i = 0; i < h; ++i) {
          const double g = ws.alpha[t * h + i] * ws.beta[t * h + i];
          ws.acc.emit_num[i * kAlphabet + x] += g;
          ws.acc.emit_den[i] += g;
          if (t + 1 < T) ws.acc.trans_den[i] += g;
        }
        if (t + 1 < T) {
          const int xn = seq[t + 1];
          const double inv_s = 1.0 / ws.scale[t + 1];
          for (int i = 0; i < h; ++i) {
            const double a = ws.alpha[t * h + i];
            if (a == 0.0) continue;
            for (int j = i; j < h; ++j) {
              ws.acc.trans_num[i * h + j] += a * f.trans[i * h + j] *
                                             f.emit[j * kAlphabet + xn] *
                                             ws.beta[(t + 1) * h + j] * inv_s;
            }
          }
        }
      }
    }

    if (trace) trace->push_back(ll);

    // M-step. Rows with zero expected mass keep their previous values.
    for (int i = 0; i < h; ++i) {
      if (ws.acc.trans_den[i] > 0.0) {
        std::vector<double> old(f.trans.begin() + i * h, f.trans.begin() + (i + 1) * h);
        for (int j = 0; j < h; ++j)
          f.trans[i * h + j] = j < i ? 0.0 : ws.acc.trans_num[i * h + j];
        normalize_row(&f.trans[i * h], h, old.data());
      }
      if (ws.acc.emit_den[i] > 0.0) {
        std::vector<double> old(f.emit.begin() + i * kAlphabet,
                                f.emit.begin() + (i + 1) * kAlphabet);
        for (int k = 0; k < kAlphabet; ++k)
          f.emit[i * kAlphabet + k] = ws.acc.emit_num[i * kAlphabet + k];
        normalize_row(&f.emit[i * kAlphabet], kAlphabet, old.data());
      }
    }

    if (iter > 0 && ll - prev_ll < cfg.ll_tolerance) break;
    prev_ll = ll;
  }

  // Exact likelihood of the parameters actually returned.
  double final_ll = 0.0;
  for (const auto& seq : seqs) {
    double l = forward_flat(f, seq, nullptr, nullptr);
    if (l == kNegInf) return kNegInf;
    final_ll += l;
  }
  if (trace) trace->push_back(final_ll);
  return final_ll;
}

void random_init(FlatModel& f, Rng& rng) {
  const int h = f.h;
  for (int i = 0; i < h; ++i) {
    double s = 0.0;
    for (int j = 0; j < h; ++j) {
      f.trans[i * h + j] = j < i ? 0.0 : rng.exponential();  // Dirichlet(1) on allowed entries
      s += f.trans[i * h + j];
    }
    for (int j = i; j < h; ++j) f.trans[i * h + j] /= s;
    s = 0.0;
    for (int k = 0; k < kAlphabet; ++k) {
      f.emit[i * kAlphabet + k] = rng.exponential();
      s += f.emit[i * kAlphabet + k];
    }
    for (int k = 0; k < kAlphabet; ++k) f.emit[i * kAlphabet + k] /= s;
  }
}

FlatModel closed_form_h1(const std::vector<std::vector<int>>& seqs) {
  FlatModel f;
  f.h = 1;
  f.trans = {1.0};
  f.emit.assign(kAlphabet, 0.0);
  double total = 0.0;
  for (const auto& seq : seqs)
    for (int x : seq) {
      f.emit[x] += 1.0;
      total += 1.0;
    }
  for (double& e : f.emit) e /= total;
  return f;
}

int sample_categorical(const double* probs, int n, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Guard against rounding shortfall: fall back to the last positive entry.
  for (int i = n - 1; i >= 0; --i)
    if (probs[i] > 0.0) return i;
  return n - 1;
}

}  // namespace

Model Model::uniform(int h) {
  if (h < 1 || h > kMaxStates) throw std::invalid_argument("hmm: state count outside [1,4]");
  Model m;
  m.num_states = h;
  m.initial.assign(h, 0.0);
  m.initial[0] = 1.0;
  m.trans.assign(h, std::vector<double>(h, 0.0));
  m.emit.assign(h, std::vector<double>(kAlphabet, 1.0 / kAlphabet));
  for (int i = 0; i < h; ++i) {
    int allowed = h - i;
    for (int j = i; j < h; ++j) m.trans[i][j] = 1.0 / allowed;
  }
  return m;
}

void Model::validate() const {
  if (num_states < 1 || num_states > kMaxStates)
    throw std::invalid_argument("hmm: state count outside [1,4]");
  if (static_cast<int>(initial.size()) != num_states ||
      static_cast<int>(trans.size()) != num_states ||
      static_cast<int>(emit.size()) != num_states)
    throw std::invalid_argument("hmm: parameter shape mismatch");

  double s = 0.0;
  for (double p : initial) s += p;
  if (std::abs(s - 1.0) > kRowSumTol || std::abs(initial[0] - 1.0) > kRowSumTol)
    throw std::invalid_argument("hmm: initial distribution must put all mass on state 0");

  for (int i = 0; i < num_states; ++i) {
    if (static_cast<int>(trans[i].size()) != num_states ||
        static_cast<int>(emit[i].size()) != kAlphabet)
      throw std::invalid_argument("hmm: parameter shape mismatch");
    double ts = 0.0;
    for (int j = 0; j < num_states; ++j) {
      if (j < i && trans[i][j] != 0.0)
        throw std::invalid_argument("hmm: transition to an earlier state");
      if (trans[i][j] < 0.0) throw std::invalid_argument("hmm: negative transition");
      ts += trans[i][j];
    }
    if (std::abs(ts - 1.0) > kRowSumTol)
      throw std::invalid_argument("hmm: transition row does not sum to 1");
    double es = 0.0;
    for (double p : emit[i]) {
      if (p < 0.0) throw std::invalid_argument("hmm: negative emission");
      es += p;
    }
    if (std::abs(es - 1.0) > kRowSumTol)
      throw std::invalid_argument("hmm: emission row does not sum to 1");
  }
}

double forward_log_likelihood(const Model& model, const std::vector<int>& seq) {
  if (seq.empty()) throw std::invalid_argument("hmm: empty sequence");
  for (int x : seq)
    if (x < 0 || x >= kAlphabet) throw std::invalid_argument("hmm: symbol out of range");
  FlatModel f = flatten(model);
  return forward_flat(f, seq, nullptr, nullptr);
}

double forward_log_likelihood(const Model& model, const std::vector<std::vector<int>>& seqs) {
  if (seqs.empty()) throw std::invalid_argument("hmm: empty sequence set");
  FlatModel f = flatten(model);
  double ll = 0.0;
  for (const auto& seq : seqs) {
    if (seq.empty()) throw std::invalid_argument("hmm: empty sequence");
    double l = forward_flat(f, seq, nullptr, nullptr);
    if (l == kNegInf) return kNegInf;
    ll += l;
  }
  return ll;
}

FitResult fit_baum_welch(const std::vector<std::vector<int>>& seqs, int h,
                         const FitConfig& config) {
  check_sequences(seqs);
  if (h < 1 || h > kMaxStates) throw std::invalid_argument("hmm: state count outside [1,4]");
  if (config.restarts < 1) throw std::invalid_argument("hmm: restarts must be >= 1");

  FitResult result;

  if (h == 1) {
    FlatModel f = closed_form_h1(seqs);
    result.model = unflatten(f);
    result.train_ll = forward_log_likelihood(result.model, seqs);
    result.ll_trace = {result.train_ll};
    result.best_restart = 0;
    return result;
  }

  std::size_t max_len = 0;
  for (const auto& s : seqs) max_len = std::max(max_len, s.size());

  const int restarts = config.restarts;
  std::vector<double> lls(restarts, kNegInf);

  parallel_for(static_cast<std::size_t>(restarts), config.jobs, [&](std::size_t r) {
    Rng rng = Rng::derive(config.seed, {kStreamRestart, static_cast<std::uint64_t>(h), r});
    FlatModel f;
    f.h = h;
    f.trans.resize(static_cast<std::size_t>(h) * h);
    f.emit.resize(static_cast<std::size_t>(h) * kAlphabet);
    random_init(f, rng);
    EmWorkspace ws(h, max_len);
    lls[r] = em_fit(seqs, f, config, ws, nullptr);
  });

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (lls[r] > lls[best]) best = r;

  // Re-run the winning restart to recover its model and trace (same stream,
  // same arithmetic, so the result is identical to the parallel pass).
  Rng rng = Rng::derive(config.seed,
                        {kStreamRestart, static_cast<std::uint64_t>(h),
                         static_cast<std::uint64_t>(best)});
  FlatModel f;
  f.h = h;
  f.trans.resize(static_cast<std::size_t>(h) * h);
  f.emit.resize(static_cast<std::size_t>(h) * kAlphabet);
  random_init(f, rng);
  EmWorkspace ws(h, max_len);
  result.ll_trace.clear();
  result.train_ll = em_fit(seqs, f, config, ws, &result.ll_trace);
  result.model = unflatten(f);
  result.best_restart = best;
  return result;
}

std::vector<int> viterbi_decode(const Model& model, const std::vector<int>& seq) {
  if (seq.empty()) throw std::invalid_argument("hmm: empty sequence");
  const int h = model.num_states;
  const std::size_t T = seq.size();

  std::vector<double> log_trans(static_cast<std::size_t>(h) * h, kNegInf);
  std::vector<double> log_emit(static_cast<std::size_t>(h) * kAlphabet, kNegInf);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j)
      log_trans[i * h + j] = model.trans[i][j] > 0.0 ? std::log(model.trans[i][j]) : kNegInf;
    for (int k = 0; k < kAlphabet; ++k)
      log_emit[i * kAlphabet + k] = model.emit[i][k] > 0.0 ? std::log(model.emit[i][k]) : kNegInf;
  }

  std::vector<double> score(T * h, kNegInf);
  std::vector<int> back(T * h, 0);
  score[0] = log_emit[seq[0]];  // state 0 carries all initial mass
  for (std::size_t t = 1; t < T; ++t) {
    for (int j = 0; j < h; ++j) {
      double best = kNegInf;
      int arg = 0;
      for (int i = 0; i <= j; ++i) {
        double cand = score[(t - 1) * h + i] + log_trans[i * h + j];
        if (cand > best) {
          best = cand;
          arg = i;
        }
      }
      score[t * h + j] = best + log_emit[j * kAlphabet + seq[t]];
      back[t * h + j] = arg;
    }
  }

  int last = 0;
  for (int j = 1; j < h; ++j)
    if (score[(T - 1) * h + j] > score[(T - 1) * h + last]) last = j;

  std::vector<int> path(T);
  path[T - 1] = last;
  for (std::size_t t = T - 1; t > 0; --t) path[t - 1] = back[t * h + path[t]];
  return path;
}

double viterbi_log_likelihood(const Model& model, const std::vector<int>& seq) {
  auto path = viterbi_decode(model, seq);
  double ll = 0.0;
  auto add = [&](double p) { ll += p > 0.0 ? std::log(p) : kNegInf; };
  add(model.initial[path[0]]);
  add(model.emit[path[0]][seq[0]]);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    add(model.trans[path[t - 1]][path[t]]);
    add(model.emit[path[t]][seq[t]]);
  }
  return ll;
}

SamplePath sample_path(const Model& model, int length, Rng& rng) {
  if (length < 1) throw std::invalid_argument("hmm: sample length must be >= 1");
  SamplePath out;
  out.states.reserve(length);
  out.symbols.reserve(length);
  int state = sample_categorical(model.initial.data(), model.num_states, rng);
  for (int t = 0; t < length; ++t) {
    out.states.push_back(state);
    out.symbols.push_back(sample_categorical(model.emit[state].data(), kAlphabet, rng));
    if (t + 1 < length)
      state = sample_categorical(model.trans[state].data(), model.num_states, rng);
  }
  return out;
}

std::vector<int> sample(const Model& model, int length, Rng& rng) {
  return sample_path(model, length, rng).symbols;
}

std::vector<double> viterbi_occupancy(const Model& model,
                                      const std::vector<std::vector<int>>& seqs) {
  std::vector<double> counts(model.num_states, 0.0);
  double total = 0.0;
  for (const auto& seq : seqs) {
    for (int s : viterbi_decode(model, seq)) {
      counts[s] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0)
    for (double& c : counts) c /= total;
  return counts;
}

std::array<double, kAlphabet> occupancy_weighted_emissions(
    const Model& model, const std::vector<std::vector<int>>& seqs) {
  auto occupancy = viterbi_occupancy(model, seqs);
  std::array<double, kAlphabet> out{};
  for (int s = 0; s < model.num_states; ++s)
    for (int k = 0; k < kAlphabet; ++k) out[k] += occupancy[s] * model.emit[s][k];
  return out;
}

SelectionReport select_model(const std::vector<std::vector<int>>& seqs,
                             const FitConfig& config) {
  check_sequences(seqs);
  const int n = static_cast<int>(seqs.size());
  if (n < 2)
    throw std::invalid_argument("select_model: need at least 2 sequences for a train/test split");
  if (config.test_fraction <= 0.0 || config.test_fraction >= 1.0)
    throw std::invalid_argument("select_model: test_fraction must be in (0,1)");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = Rng::derive(config.seed, {kStreamSplit});
  split_rng.shuffle(order);

  int n_test = static_cast<int>(std::lround(config.test_fraction * n));
  n_test = std::clamp(n_test, 1, n - 1);
  const int n_train = n - n_test;

  std::vector<std::vector<int>> train, test;
  train.reserve(n_train);
  test.reserve(n_test);
  for (int i = 0; i < n_train; ++i) train.push_back(seqs[order[i]]);
  for (int i = n_train; i < n; ++i) test.push_back(seqs[order[i]]);

  SelectionReport report;
  std::vector<std::pair<int, Model>> accepted_models;

  for (int h : {4, 3, 2, 1}) {
    SelectionReport::Candidate cand;
    cand.h = h;

    FitResult fit = fit_baum_welch(train, h, config);
    cand.train_ll = fit.train_ll;

    if (config.viterbi_score) {
      cand.test_ll = 0.0;
      for (const auto& seq : test) cand.test_ll += viterbi_log_likelihood(fit.model, seq);
    } else {
      cand.test_ll = forward_log_likelihood(fit.model, test);
    }

    cand.accepted = true;
    for (int i = 0; i < h && cand.accepted; ++i) {
      for (int j = i; j < h; ++j) {
        double p = fit.model.trans[i][j];
        if (p > kRetainEps && p < config.min_transition) {
          cand.accepted = false;
          cand.reject_reason = "retained transition below minimum";
          break;
        }
      }
    }
    if (cand.accepted) {
      std::vector<bool> visited(h, false);
      for (const auto& seq : train)
        for (int s : viterbi_decode(fit.model, seq)) visited[s] = true;
      for (int s = 0; s < h; ++s) {
        if (!visited[s]) {
          cand.accepted = false;
          cand.reject_reason = "state " + std::to_string(s) + " unused in Viterbi decoding";
          break;
        }
      }
    }
    if (cand.accepted && !std::isfinite(cand.test_ll)) {
      cand.accepted = false;
      cand.reject_reason = "test set impossible under candidate";
    }

    report.candidates.push_back(cand);
    if (cand.accepted) accepted_models.emplace_back(h, std::move(fit.model));
  }

  // Winner: highest test ll among accepted; within ll_tolerance of the top,
  // the smallest h wins.
  double best_ll = kNegInf;
  for (const auto& c : report.candidates)
    if (c.accepted && c.test_ll > best_ll) best_ll = c.test_ll;

  const SelectionReport::Candidate* winner = nullptr;
  for (const auto& c : report.candidates) {
    if (!c.accepted) continue;
    if (c.test_ll >= best_ll - config.ll_tolerance) {
      if (!winner || c.h < winner->h) winner = &c;
    }
  }

  if (!winner) {
    // Unreachable in practice: the h=1 closed form always satisfies the
    // constraints. Kept as a guard.
    report.diagnostics.push_back("no candidate passed constraints; falling back to h=1");
    FitResult fit = fit_baum_welch(train, 1, config);
    report.model = fit.model;
    report.chosen_h = 1;
    report.test_ll = forward_log_likelihood(fit.model, test);
    return report;
  }

  report.chosen_h = winner->h;
  report.test_ll = winner->test_ll;
  for (const auto& [h, model] : accepted_models)
    if (h == winner->h) report.model = model;
  return report;
}

DisplayModel prune_for_display(const Model& model, double emit_floor, double trans_floor) {
  model.validate();
  const int h = model.num_states;

  // Transitions at or below the floor are discarded; reachability is then
  // recomputed from state 0 over what remains.
  std::vector<std::tuple<int, int, double>> kept_edges;
  for (int i = 0; i < h; ++i)
    for (int j = i; j < h; ++j)
      if (model.trans[i][j] > trans_floor) kept_edges.emplace_back(i, j, model.trans[i][j]);

  std::vector<bool> reachable(h, false);
  reachable[0] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [i, j, w] : kept_edges) {
      if (reachable[i] && !reachable[j]) {
        reachable[j] = true;
        changed = true;
      }
    }
  }

  DisplayModel display;
  for (int i = 0; i < h; ++i) {
    if (!reachable[i]) continue;
    DisplayState st;
    st.state = i;
    for (int k = 0; k < kAlphabet; ++k)
      if (model.emit[i][k] >= emit_floor) st.emissions.emplace_back(k, model.emit[i][k]);
    display.states.push_back(std::move(st));
  }
  for (auto [i, j, w] : kept_edges)
    if (reachable[i] && reachable[j]) display.transitions.emplace_back(i, j, w);
  return display;
}

nlohmann::json to_json(const Model& model) {
  nlohmann::json j;
  j["states"] = model.num_states;
  j["initial"] = model.initial;
  j["transition"] = model.trans;
  j["emission"] = model.emit;
  std::vector<std::string> labels;
  for (int k = 0; k < kAlphabet; ++k) labels.push_back(symbol_label(k));
  j["symbols"] = labels;
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  Model m;
  m.num_states = j.at("states").get<int>();
  m.initial = j.at("initial").get<std::vector<double>>();
  m.trans = j.at("transition").get<std::vector<std::vector<double>>>();
  m.emit = j.at("emission").get<std::vector<std::vector<double>>>();
  m.validate();
  return m;
}

std::string to_dot(const DisplayModel& display, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box];\n";
  for (std::size_t s = 0; s < display.states.size(); ++s) {
    const auto& st = display.states[s];
    os << "  s" << st.state << " [label=\"";
    if (st.emissions.empty()) {
      os << "(none)";
    } else {
      for (std::size_t e = 0; e < st.emissions.size(); ++e) {
        if (e > 0) os << "\\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", st.emissions[e].second);
        os << symbol_label(st.emissions[e].first) << " " << buf;
      }
    }
    os << "\"";
    if (s == 0) os << ", penwidth=2.5";  // bold initial state
    os << "];\n";
  }
  for (auto [i, j, w] : display.transitions) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", w);
    os << "  s" << i << " -> s" << j << " [label=\"" << buf << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ipd::hmm
