#include "ipd/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ipd {

namespace {

constexpr std::uint64_t kStreamPairing = 11;
constexpr std::uint64_t kStreamPlayer = 12;
constexpr std::uint64_t kStreamStopping = 13;

std::string default_player_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d", i);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  if (n_players < 2 || n_players % 2 != 0)
    throw std::invalid_argument("simulator: n_players must be even and >= 2");
  if (rounds < 2) throw std::invalid_argument("simulator: rounds must be >= 2");
  if (noise_epsilon < 0.0 || noise_epsilon > 1.0)
    throw std::invalid_argument("simulator: noise_epsilon outside [0,1]");
  if (continuation_omega && (*continuation_omega < 0.0 || *continuation_omega > 1.0))
    throw std::invalid_argument("simulator: continuation_omega outside [0,1]");
  if (avoid_repeat_partners && matching == Matching::Shuffled && n_players == 2)
    throw std::invalid_argument("simulator: cannot avoid repeat partners with 2 players");
  if (!payoffs.is_dilemma())
    throw std::invalid_argument("simulator: payoff matrix violates the dilemma ordering");
}

std::vector<std::pair<int, int>> shuffled_pairing(int n, Rng& rng) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("shuffled_pairing: n must be even and >= 2");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::pair<int, int>> matching;
  matching.reserve(n / 2);
  for (int i = 0; i < n; i += 2) matching.emplace_back(order[i], order[i + 1]);
  return matching;
}

std::vector<std::pair<int, int>> shuffled_pairing_avoiding(
    int n, const std::vector<std::pair<int, int>>& prev, Rng& rng) {
  if (n < 4)
    throw std::invalid_argument("shuffled_pairing_avoiding: need at least 4 players");
  std::set<std::pair<int, int>> banned;
  for (auto [a, b] : prev) banned.insert({std::min(a, b), std::max(a, b)});
  for (;;) {
    auto matching = shuffled_pairing(n, rng);
    bool ok = true;
    for (auto [a, b] : matching)
      if (banned.count({std::min(a, b), std::max(a, b)})) {
        ok = false;
        break;
      }
    if (ok) return matching;
  }
}

SessionData run_session(const SimConfig& config, const std::vector<StrategySpec>& specs,
                        const std::string& session_id) {
  config.validate();
  if (static_cast<int>(specs.size()) != config.n_players)
    throw std::invalid_argument("run_session: roster size does not match n_players");

  const int n = config.n_players;
  SessionData session;
  session.session_id = session_id.empty()
                           ? "sim-" + std::to_string(config.seed)
                           : session_id;
  session.treatment = config.matching == Matching::Fixed ? Treatment::FP : Treatment::SP;
  session.players.resize(n);

  std::vector<StrategyState> states;
  states.reserve(n);
  std::vector<Rng> player_rngs;
  player_rngs.reserve(n);
  for (int i = 0; i < n; ++i) {
    session.players[i].player_id = default_player_id(i);
    states.emplace_back(specs[i]);
    player_rngs.push_back(Rng::derive(config.seed, {kStreamPlayer, static_cast<std::uint64_t>(i)}));
  }

  Rng pairing_rng = Rng::derive(config.seed, {kStreamPairing});
  Rng stopping_rng = Rng::derive(config.seed, {kStreamStopping});

  std::vector<std::pair<int, int>> fixed_matching;
  if (config.matching == Matching::Fixed) {
    fixed_matching.reserve(n / 2);
    for (int i = 0; i < n; i += 2) fixed_matching.emplace_back(i, i + 1);
  }

  // prev_action / prev_partner_action feed next round's contexts; in SP the
  // context comes from the previous round's partner even though the payoff
  // partner has changed.
  std::vector<Action> prev_action(n), prev_partner_action(n);
  std::vector<std::pair<int, int>> prev_matching;

  for (int round = 1; round <= config.rounds; ++round) {
    std::vector<std::pair<int, int>> matching;
    if (config.matching == Matching::Fixed) {
      matching = fixed_matching;
    } else if (config.avoid_repeat_partners && round > 1) {
      matching = shuffled_pairing_avoiding(n, prev_matching, pairing_rng);
    } else {
      matching = shuffled_pairing(n, pairing_rng);
    }

    std::vector<Action> executed(n);
    for (int i = 0; i < n; ++i) {
      std::optional<Context> ctx;
      if (round > 1) ctx = Context{prev_action[i], prev_partner_action[i]};
      Action decided = states[i].act(ctx, round, player_rngs[i]);
      executed[i] = apply_noise(decided, config.noise_epsilon, player_rngs[i]);
    }

    for (auto [a, b] : matching) {
      session.players[a].actions.push_back(executed[a]);
      session.players[a].opp_actions.push_back(executed[b]);
      session.players[a].partner_ids.push_back(session.players[b].player_id);
      session.players[b].actions.push_back(executed[b]);
      session.players[b].opp_actions.push_back(executed[a]);
      session.players[b].partner_ids.push_back(session.players[a].player_id);
    }
    session.pairing.push_back(matching);

    for (auto [a, b] : matching) {
      prev_action[a] = executed[a];
      prev_partner_action[a] = executed[b];
      prev_action[b] = executed[b];
      prev_partner_action[b] = executed[a];
    }
    prev_matching = std::move(matching);

    if (config.continuation_omega && round < config.rounds &&
        !stopping_rng.bernoulli(*config.continuation_omega))
      break;
  }

  return session;
}

long total_payoff(const PlayerHistory& history, const PayoffMatrix& payoffs) {
  long total = 0;
  for (std::size_t t = 0; t < history.rounds(); ++t)
    total += payoffs.payoff(history.actions[t], history.opp_actions[t]).first;
  return total;
}

}  // namespace ipd
