#include "ipd/strategy.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ipd {

namespace {

std::string kind_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::AllC:
      return "AllC";
    case StrategyKind::AllD:
      return "AllD";
    case StrategyKind::TitForTat:
      return "TFT";
    case StrategyKind::GenerousTitForTat:
      return "GTFT";
    case StrategyKind::WinStayLoseShift:
      return "WSLS";
    case StrategyKind::GrimTrigger:
      return "Grim";
    case StrategyKind::RandomCoin:
      return "Coin";
    case StrategyKind::HmmAgent:
      return "Hmm";
    case StrategyKind::SwitchAt:
      return "Switch";
  }
  return "?";
}

std::optional<StrategyKind> plain_kind(std::string_view name) {
  if (name == "AllC") return StrategyKind::AllC;
  if (name == "AllD") return StrategyKind::AllD;
  if (name == "TFT") return StrategyKind::TitForTat;
  if (name == "WSLS") return StrategyKind::WinStayLoseShift;
  if (name == "Grim") return StrategyKind::GrimTrigger;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string StrategySpec::name() const {
  char buf[64];
  switch (kind) {
    case StrategyKind::GenerousTitForTat:
      std::snprintf(buf, sizeof(buf), "GTFT(%g)", prob);
      return buf;
    case StrategyKind::RandomCoin:
      std::snprintf(buf, sizeof(buf), "Coin(%g)", prob);
      return buf;
    case StrategyKind::SwitchAt:
      return "Switch(" + kind_name(first) + "," + kind_name(second) + "," +
             std::to_string(switch_round) + ")";
    default:
      return kind_name(kind);
  }
}

StrategySpec StrategySpec::parse(std::string_view token) {
  token = trim(token);
  StrategySpec spec;

  auto paren = token.find('(');
  if (paren == std::string_view::npos) {
    if (auto k = plain_kind(token)) {
      spec.kind = *k;
      return spec;
    }
    if (token == "GTFT") {
      spec.kind = StrategyKind::GenerousTitForTat;
      spec.prob = 0.3;
      return spec;
    }
    throw std::invalid_argument("unknown strategy: " + std::string(token));
  }

  if (token.back() != ')') throw std::invalid_argument("unbalanced parentheses in strategy: " +
                                                       std::string(token));
  std::string_view head = token.substr(0, paren);
  std::string args(token.substr(paren + 1, token.size() - paren - 2));

  if (head == "GTFT" || head == "Coin") {
    spec.kind = head == "GTFT" ? StrategyKind::GenerousTitForTat : StrategyKind::RandomCoin;
    try {
      spec.prob = std::stod(args);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad probability in strategy: " + std::string(token));
    }
    if (spec.prob < 0.0 || spec.prob > 1.0)
      throw std::invalid_argument("probability outside [0,1] in strategy: " + std::string(token));
    return spec;
  }

  if (head == "Switch") {
    std::vector<std::string> parts;
    std::stringstream ss(args);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(std::string(trim(part)));
    if (parts.size() != 3)
      throw std::invalid_argument("Switch takes (first,second,round): " + std::string(token));
    auto k1 = plain_kind(parts[0]);
    auto k2 = plain_kind(parts[1]);
    if (!k1 || !k2)
      throw std::invalid_argument("Switch inner strategies must be parameterless: " +
                                  std::string(token));
    spec.kind = StrategyKind::SwitchAt;
    spec.first = *k1;
    spec.second = *k2;
    spec.switch_round = std::stoi(parts[2]);
    if (spec.switch_round < 1)
      throw std::invalid_argument("Switch round must be >= 1: " + std::string(token));
    return spec;
  }

  if (head == "Hmm") {
    std::ifstream in{std::string(args)};
    if (!in) throw std::invalid_argument("cannot open HMM model file: " + args);
    nlohmann::json j;
    in >> j;
    spec.kind = StrategyKind::HmmAgent;
    spec.model = std::make_shared<hmm::Model>(hmm::model_from_json(j));
    return spec;
  }

  throw std::invalid_argument("unknown strategy: " + std::string(token));
}

std::vector<StrategySpec> parse_roster(std::string_view roster) {
  std::vector<StrategySpec> specs;
  std::stringstream ss{std::string(roster)};
  std::string token;
  while (std::getline(ss, token, ',')) {
    // Re-join tokens split inside parentheses, e.g. Switch(TFT,AllD,51).
    while (std::count(token.begin(), token.end(), '(') >
           std::count(token.begin(), token.end(), ')')) {
      std::string more;
      if (!std::getline(ss, more, ',')) break;
      token += "," + more;
    }
    std::string_view tv = trim(token);
    if (tv.empty()) continue;
    int count = 1;
    auto x = tv.find('x');
    if (x != std::string_view::npos && x > 0) {
      bool numeric = true;
      for (std::size_t i = 0; i < x; ++i)
        if (!std::isdigit(static_cast<unsigned char>(tv[i]))) numeric = false;
      if (numeric) {
        count = std::stoi(std::string(tv.substr(0, x)));
        tv = tv.substr(x + 1);
      }
    }
    if (count < 1) throw std::invalid_argument("roster count must be >= 1");
    StrategySpec spec = StrategySpec::parse(tv);
    for (int i = 0; i < count; ++i) specs.push_back(spec);
  }
  if (specs.empty()) throw std::invalid_argument("empty roster");
  return specs;
}

StrategyState::StrategyState(const StrategySpec& spec) : spec_(spec) {
  if (spec_.kind == StrategyKind::HmmAgent) {
    if (!spec_.model) throw std::invalid_argument("HmmAgent without a model");
    spec_.model->validate();
  }
}

Action StrategyState::act_kind(StrategyKind kind, const std::optional<Context>& ctx, Rng& rng) {
  switch (kind) {
    case StrategyKind::AllC:
      return Action::C;
    case StrategyKind::AllD:
      return Action::D;
    case StrategyKind::TitForTat:
      return ctx ? ctx->opp_prev : Action::C;
    case StrategyKind::GenerousTitForTat:
      if (!ctx || ctx->opp_prev == Action::C) return Action::C;
      return rng.bernoulli(spec_.prob) ? Action::C : Action::D;
    case StrategyKind::WinStayLoseShift:
      // Win (payoff T or R, i.e. the opponent cooperated) -> repeat own
      // action; lose (P or S) -> switch.
      if (!ctx) return Action::C;
      return ctx->opp_prev == Action::C ? ctx->own_prev : flipped(ctx->own_prev);
    case StrategyKind::GrimTrigger:
      if (ctx && *ctx != Context{Action::C, Action::C}) grim_triggered_ = true;
      return grim_triggered_ ? Action::D : Action::C;
    case StrategyKind::RandomCoin:
      return rng.bernoulli(spec_.prob) ? Action::C : Action::D;
    default:
      throw std::logic_error("act_kind: unsupported kind");
  }
}

Action StrategyState::act(const std::optional<Context>& ctx, int round, Rng& rng) {
  switch (spec_.kind) {
    case StrategyKind::HmmAgent: {
      const hmm::Model& model = *spec_.model;
      if (!hmm_started_) {
        hmm_started_ = true;
        hmm_state_ = 0;
        Action a = hmm_agent_first_action(model, hmm_state_, rng);
        // Advance the hidden chain after acting, mirroring the per-round step.
        int next = hmm_state_;
        double u = rng.uniform();
        double acc = 0.0;
        for (int j = hmm_state_; j < model.num_states; ++j) {
          acc += model.trans[hmm_state_][j];
          if (u < acc) {
            next = j;
            break;
          }
        }
        hmm_state_ = next;
        return a;
      }
      if (!ctx) throw std::invalid_argument("HmmAgent: missing context after round 1");
      bool fell_back = false;
      auto [a, next] = hmm_agent_action(model, hmm_state_, *ctx, rng, &fell_back);
      hmm_fallback_hit_ = hmm_fallback_hit_ || fell_back;
      hmm_state_ = next;
      return a;
    }
    case StrategyKind::SwitchAt:
      return act_kind(round >= spec_.switch_round ? spec_.second : spec_.first, ctx, rng);
    default:
      return act_kind(spec_.kind, ctx, rng);
  }
}

Action strategy_action(StrategyState& state, const std::optional<Context>& ctx, int round,
                       Rng& rng) {
  return state.act(ctx, round, rng);
}

Action apply_noise(Action a, double epsilon, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("apply_noise: epsilon outside [0,1]");
  return rng.bernoulli(epsilon) ? flipped(a) : a;
}

std::pair<Action, int> hmm_agent_action(const hmm::Model& model, int hidden_state, Context ctx,
                                        Rng& rng, bool* fell_back) {
  if (hidden_state < 0 || hidden_state >= model.num_states)
    throw std::invalid_argument("hmm_agent_action: hidden state out of range");

  const int sym_c = ConditionalAction{ctx, Action::C}.symbol();
  const int sym_d = ConditionalAction{ctx, Action::D}.symbol();
  const double pc = model.emit[hidden_state][sym_c];
  const double pd = model.emit[hidden_state][sym_d];

  Action a;
  if (pc + pd <= 0.0) {
    if (fell_back) *fell_back = true;
    a = rng.bernoulli(0.5) ? Action::C : Action::D;
  } else {
    a = rng.bernoulli(pc / (pc + pd)) ? Action::C : Action::D;
  }

  int next = hidden_state;
  double u = rng.uniform();
  double acc = 0.0;
  for (int j = hidden_state; j < model.num_states; ++j) {
    acc += model.trans[hidden_state][j];
    if (u < acc) {
      next = j;
      break;
    }
  }
  return {a, next};
}

Action hmm_agent_first_action(const hmm::Model& model, int hidden_state, Rng& rng) {
  double pc = 0.0, pd = 0.0;
  for (int k = 0; k < hmm::kAlphabet; ++k) {
    if (k % 2 == 0)
      pc += model.emit[hidden_state][k];
    else
      pd += model.emit[hidden_state][k];
  }
  if (pc + pd <= 0.0) return rng.bernoulli(0.5) ? Action::C : Action::D;
  return rng.bernoulli(pc / (pc + pd)) ? Action::C : Action::D;
}

}  // namespace ipd
