#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/game.hpp"
#include "ipd/hmm.hpp"
#include "ipd/rng.hpp"

namespace ipd {

enum class StrategyKind {
  AllC,
  AllD,
  TitForTat,
  GenerousTitForTat,
  WinStayLoseShift,
  GrimTrigger,
  RandomCoin,
  HmmAgent,
  SwitchAt,  // plays `first` before switch_round, `second` from it on
};

struct StrategySpec {
  StrategyKind kind = StrategyKind::AllC;
  double prob = 0.0;  // GTFT forgiveness probability / RandomCoin P(C)
  std::shared_ptr<const hmm::Model> model;  // HmmAgent
  int switch_round = 0;                     // SwitchAt: first round `second` applies (1-based)
  StrategyKind first = StrategyKind::AllC;  // SwitchAt inner kinds (parameterless)
  StrategyKind second = StrategyKind::AllD;

  std::string name() const;

  // Parses tokens like "TFT", "AllD", "GTFT(0.3)", "Coin(0.5)",
  // "Switch(TFT,AllD,51)", "Hmm(path/to/model.json)". Throws on bad syntax.
  static StrategySpec parse(std::string_view token);
};

// "30xTFT,2xAllD" -> 32 specs. A roster token without a count prefix means a
// single player.
std::vector<StrategySpec> parse_roster(std::string_view roster);

// Per-player mutable strategy state. `act` consumes the player's RNG stream;
// ctx is absent exactly on round 1.
class StrategyState {
 public:
  explicit StrategyState(const StrategySpec& spec);

  Action act(const std::optional<Context>& ctx, int round, Rng& rng);

  // True once the HMM agent had to fall back to a coin because both symbols
  // consistent with a context carried zero emission mass.
  bool hmm_fallback_hit() const { return hmm_fallback_hit_; }

 private:
  Action act_kind(StrategyKind kind, const std::optional<Context>& ctx, Rng& rng);

  StrategySpec spec_;
  bool grim_triggered_ = false;
  int hmm_state_ = 0;
  bool hmm_started_ = false;
  bool hmm_fallback_hit_ = false;
};

// Decision of a strategy for one round; updates the internal state. Noise is
// not applied here.
Action strategy_action(StrategyState& state, const std::optional<Context>& ctx, int round,
                       Rng& rng);

// Trembling hand: flips the decided action with probability epsilon.
Action apply_noise(Action a, double epsilon, Rng& rng);

// One HMM-agent step: restrict the current state's emission row to the two
// symbols consistent with ctx, renormalize, sample the action, then sample the
// state transition. When both consistent symbols have zero mass the action is
// a fair coin and *fell_back is set.
std::pair<Action, int> hmm_agent_action(const hmm::Model& model, int hidden_state, Context ctx,
                                        Rng& rng, bool* fell_back = nullptr);

// Round-1 HMM-agent action: the initial state's emission marginalized over
// contexts.
Action hmm_agent_first_action(const hmm::Model& model, int hidden_state, Rng& rng);

}  // namespace ipd
