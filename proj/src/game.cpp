#include "ipd/game.hpp"

#include <stdexcept>

namespace ipd {

std::optional<Action> action_from_char(char c) {
  switch (c) {
    case 'C':
      return Action::C;
    case 'D':
      return Action::D;
    default:
      return std::nullopt;
  }
}

Context Context::from_index(int idx) {
  if (idx < 0 || idx >= kNumContexts) throw std::out_of_range("context index out of range");
  return Context{idx < 2 ? Action::C : Action::D, idx % 2 == 0 ? Action::C : Action::D};
}

std::string Context::label() const {
  return std::string{to_char(own_prev), to_char(opp_prev)};
}

ConditionalAction ConditionalAction::from_symbol(int symbol) {
  if (symbol < 0 || symbol >= kNumSymbols) throw std::out_of_range("symbol out of range");
  return ConditionalAction{Context::from_index(symbol / 2),
                           symbol % 2 == 0 ? Action::C : Action::D};
}

std::string ConditionalAction::label() const {
  return "(" + context.label() + ")" + to_char(action);
}

std::string symbol_label(int symbol) {
  return ConditionalAction::from_symbol(symbol).label();
}

std::pair<int, int> PayoffMatrix::payoff(Action focal, Action opponent) const {
  if (focal == Action::C && opponent == Action::C) return {reward, reward};
  if (focal == Action::C && opponent == Action::D) return {sucker, temptation};
  if (focal == Action::D && opponent == Action::C) return {temptation, sucker};
  return {punishment, punishment};
}

std::array<double, 8> FeatureVector::as_point(bool normalized) const {
  std::array<double, 8> p{};
  if (!normalized) {
    for (int c = 0; c < 4; ++c) {
      p[c] = static_cast<double>(context_counts[c]);
      p[4 + c] = static_cast<double>(coop_counts[c]);
    }
    return p;
  }
  long total = 0;
  for (long n : context_counts) total += n;
  for (int c = 0; c < 4; ++c) {
    p[c] = total > 0 ? static_cast<double>(context_counts[c]) / static_cast<double>(total) : 0.0;
    p[4 + c] = context_counts[c] > 0
                   ? static_cast<double>(coop_counts[c]) / static_cast<double>(context_counts[c])
                   : 0.0;
  }
  return p;
}

namespace {

void require_encodable(const PlayerHistory& history) {
  if (history.rounds() < 2) throw std::invalid_argument("no context available");
  if (history.opp_actions.size() != history.rounds())
    throw std::invalid_argument("opponent action sequence length mismatch");
}

}  // namespace

std::vector<ConditionalAction> encode_conditional(const PlayerHistory& history) {
  require_encodable(history);
  std::vector<ConditionalAction> out;
  out.reserve(history.rounds() - 1);
  for (std::size_t t = 0; t + 1 < history.rounds(); ++t) {
    Context ctx{history.actions[t], history.opp_actions[t]};
    out.push_back(ConditionalAction{ctx, history.actions[t + 1]});
  }
  return out;
}

std::vector<int> encode_symbols(const PlayerHistory& history) {
  auto encoded = encode_conditional(history);
  std::vector<int> symbols(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) symbols[i] = encoded[i].symbol();
  return symbols;
}

FeatureVector feature_vector(const PlayerHistory& history) {
  FeatureVector fv;
  for (const auto& ca : encode_conditional(history)) {
    int c = ca.context.index();
    ++fv.context_counts[c];
    if (ca.action == Action::C) ++fv.coop_counts[c];
  }
  return fv;
}

std::array<ContextRate, 4> cooperation_rate(const std::vector<PlayerHistory>& histories) {
  if (histories.empty()) throw std::invalid_argument("cooperation_rate: empty collection");
  std::array<ContextRate, 4> rates{};
  for (const auto& h : histories) {
    FeatureVector fv = feature_vector(h);
    for (int c = 0; c < 4; ++c) {
      rates[c].occurrences += fv.context_counts[c];
      rates[c].cooperations += fv.coop_counts[c];
    }
  }
  return rates;
}

}  // namespace ipd
