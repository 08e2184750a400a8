#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipd/rng.hpp"
#include "ipd/session.hpp"
#include "ipd/strategy.hpp"

namespace ipd {

enum class Matching { Fixed, Shuffled };

struct SimConfig {
  int n_players = 2;
  int rounds = 100;
  Matching matching = Matching::Fixed;
  double noise_epsilon = 0.0;
  // Geometric stopping: after each round the game continues with probability
  // omega, capped at `rounds`. Disabled by default (exactly `rounds` rounds).
  std::optional<double> continuation_omega;
  bool avoid_repeat_partners = false;
  std::uint64_t seed = 0;
  PayoffMatrix payoffs;

  void validate() const;  // throws std::invalid_argument
};

// Uniform random perfect matching over n players (n even). Each of the
// (n-1)!! matchings is equally likely.
std::vector<std::pair<int, int>> shuffled_pairing(int n, Rng& rng);

// As above but rejecting matchings that repeat any pair from `prev`.
// Requires n >= 4 (with 2 players the repeat is unavoidable).
std::vector<std::pair<int, int>> shuffled_pairing_avoiding(
    int n, const std::vector<std::pair<int, int>>& prev, Rng& rng);

// Play one full session. Deterministic given (config, specs): the pairing and
// every player's decisions and noise draws consume RNG streams derived from
// config.seed. specs.size() must equal config.n_players.
SessionData run_session(const SimConfig& config, const std::vector<StrategySpec>& specs,
                        const std::string& session_id = "");

// Accumulated points of one history under the payoff matrix.
long total_payoff(const PlayerHistory& history, const PayoffMatrix& payoffs = {});

}  // namespace ipd
