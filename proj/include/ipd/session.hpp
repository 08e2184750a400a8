#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipd/game.hpp"

namespace ipd {

enum class Treatment { FP, SP };

inline std::string to_string(Treatment t) { return t == Treatment::FP ? "FP" : "SP"; }
std::optional<Treatment> treatment_from_string(const std::string& s);

// A full treatment session: per-round actions, pairings, and mutual
// references between paired histories. The common currency of the simulator,
// the ingest layer, and the analysis pipeline.
struct SessionData {
  std::string session_id;
  Treatment treatment = Treatment::FP;
  std::vector<PlayerHistory> players;
  // pairing[r] is the perfect matching for round r+1, as player-index pairs.
  std::vector<std::vector<std::pair<int, int>>> pairing;

  std::size_t rounds() const { return pairing.size(); }
  int player_index(const std::string& player_id) const;  // -1 when absent
};

// Structural checks: every round's pairing is a perfect matching without
// self-pairs, FP pairings are constant, history lengths match the round
// count, and paired histories cross-reference each other consistently
// (i.opp_actions[t] == j.actions[t], partner ids match). Returns a list of
// problems; empty means the session is consistent.
std::vector<std::string> check_consistency(const SessionData& session);

}  // namespace ipd
