#include "ipd/session.hpp"

#include <set>
#include <sstream>

namespace ipd {

std::optional<Treatment> treatment_from_string(const std::string& s) {
  if (s == "FP") return Treatment::FP;
  if (s == "SP") return Treatment::SP;
  return std::nullopt;
}

int SessionData::player_index(const std::string& player_id) const {
  for (std::size_t i = 0; i < players.size(); ++i)
    if (players[i].player_id == player_id) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> check_consistency(const SessionData& session) {
  std::vector<std::string> problems;
  auto report = [&](const std::string& msg) { problems.push_back(msg); };

  const std::size_t rounds = session.rounds();
  const std::size_t n = session.players.size();

  if (n % 2 != 0) report("odd number of players");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = session.players[i];
    if (p.actions.size() != rounds || p.opp_actions.size() != rounds ||
        p.partner_ids.size() != rounds) {
      std::ostringstream os;
      os << "player " << p.player_id << ": history length does not match " << rounds
         << " rounds";
      report(os.str());
      return problems;  // further checks would index out of range
    }
  }

  for (std::size_t r = 0; r < rounds; ++r) {
    const auto& matching = session.pairing[r];
    std::set<int> seen;
    for (auto [a, b] : matching) {
      if (a < 0 || b < 0 || a >= static_cast<int>(n) || b >= static_cast<int>(n)) {
        report("round " + std::to_string(r + 1) + ": pair index out of range");
        continue;
      }
      if (a == b) report("round " + std::to_string(r + 1) + ": self-pairing");
      if (!seen.insert(a).second || !seen.insert(b).second)
        report("round " + std::to_string(r + 1) + ": player paired twice");
    }
    if (seen.size() != n)
      report("round " + std::to_string(r + 1) + ": matching does not cover all players");

    for (auto [a, b] : matching) {
      if (a < 0 || b < 0 || a >= static_cast<int>(n) || b >= static_cast<int>(n) || a == b)
        continue;
      const auto& pa = session.players[a];
      const auto& pb = session.players[b];
      if (pa.opp_actions[r] != pb.actions[r] || pb.opp_actions[r] != pa.actions[r])
        report("round " + std::to_string(r + 1) + ": actions of pair (" + pa.player_id + "," +
               pb.player_id + ") are not cross-consistent");
      if (pa.partner_ids[r] != pb.player_id || pb.partner_ids[r] != pa.player_id)
        report("round " + std::to_string(r + 1) + ": partner ids of pair (" + pa.player_id +
               "," + pb.player_id + ") do not match the pairing");
    }

    if (session.treatment == Treatment::FP && r > 0 && matching != session.pairing[0])
      report("round " + std::to_string(r + 1) + ": FP pairing changed");
  }

  return problems;
}

}  // namespace ipd
