#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ipd {

enum class Action : std::uint8_t { C = 0, D = 1 };

inline char to_char(Action a) { return a == Action::C ? 'C' : 'D'; }
std::optional<Action> action_from_char(char c);
inline Action flipped(Action a) { return a == Action::C ? Action::D : Action::C; }

// The pair (own action, opponent action) from the previous round. Ordering is
// always player-opponent: CD means the focal player cooperated and the
// opponent defected.
struct Context {
  Action own_prev = Action::C;
  Action opp_prev = Action::C;

  // (CC, CD, DC, DD) -> (0, 1, 2, 3)
  int index() const {
    return 2 * static_cast<int>(own_prev) + static_cast<int>(opp_prev);
  }
  static Context from_index(int idx);
  std::string label() const;  // "CC", "CD", "DC", "DD"

  bool operator==(const Context&) const = default;
};

inline constexpr int kNumContexts = 4;
inline constexpr int kNumSymbols = 8;

// A context together with the action taken after observing it. The symbol is
// the observation alphabet for all sequence models:
//   (CC)C=0 (CC)D=1 (CD)C=2 (CD)D=3 (DC)C=4 (DC)D=5 (DD)C=6 (DD)D=7
struct ConditionalAction {
  Context context;
  Action action = Action::C;

  int symbol() const {
    return 2 * context.index() + static_cast<int>(action);
  }
  static ConditionalAction from_symbol(int symbol);
  std::string label() const;  // "(CC)C" etc.

  bool operator==(const ConditionalAction&) const = default;
};

std::string symbol_label(int symbol);

struct PayoffMatrix {
  int temptation = 4;
  int reward = 3;
  int punishment = 1;
  int sucker = 0;

  // T > R > P > S with 2R > T + S
  bool is_dilemma() const {
    return temptation > reward && reward > punishment && punishment > sucker &&
           2 * reward > temptation + sucker;
  }

  // (focal points, opponent points) for one round.
  std::pair<int, int> payoff(Action focal, Action opponent) const;
};

// One participant's complete record for a session: what they played, what the
// partner they faced each round played, and who that partner was.
struct PlayerHistory {
  std::string player_id;
  std::vector<Action> actions;
  std::vector<Action> opp_actions;
  std::vector<std::string> partner_ids;

  std::size_t rounds() const { return actions.size(); }
};

// Per-participant counts used by every clustering: how often each context was
// experienced and how often it was answered with cooperation.
struct FeatureVector {
  std::array<long, 4> context_counts{};  // (CC), (CD), (DC), (DD)
  std::array<long, 4> coop_counts{};     // (CC)C, (CD)C, (DC)C, (DD)C

  // 8-dimensional point for clustering / embedding. With normalized=true the
  // context counts become frequencies and the coop counts become per-context
  // cooperation rates (0 when the context never occurred).
  std::array<double, 8> as_point(bool normalized = false) const;

  bool operator==(const FeatureVector&) const = default;
};

// Conditional-action sequence of a history: element t pairs the context from
// round t+1 with the action taken at round t+2 (1-based), so a T-round history
// yields T-1 symbols. Throws std::invalid_argument for histories shorter than
// two rounds ("no context available").
std::vector<ConditionalAction> encode_conditional(const PlayerHistory& history);
std::vector<int> encode_symbols(const PlayerHistory& history);

FeatureVector feature_vector(const PlayerHistory& history);

struct ContextRate {
  long occurrences = 0;
  long cooperations = 0;

  // Percentage of cooperative follow-ups; empty when the context never
  // occurred (undefined, deliberately not 0).
  std::optional<double> percent() const {
    if (occurrences == 0) return std::nullopt;
    return 100.0 * static_cast<double>(cooperations) / static_cast<double>(occurrences);
  }
};

// Pooled per-context occurrence and cooperation counts over a set of
// histories. Throws on an empty collection.
std::array<ContextRate, 4> cooperation_rate(const std::vector<PlayerHistory>& histories);

}  // namespace ipd
