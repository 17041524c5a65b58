#include "autobid/learning.hpp"

#include "autobid/errors.hpp"

#include <cmath>

namespace autobid {

Rational domination_sup(const Instance& instance, std::size_t bidder) {
  if (bidder >= instance.n) throw InputError("bidder out of range");
  std::optional<Rational> best;
  for (std::size_t j = 0; j < instance.k; ++j) {
    const Rational& v = instance.values(bidder, j);
    if (sgn(v) <= 0) continue;
    Rational others;
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (i != bidder) others = max(others, instance.values(i, j));
    }
    const Rational& r = instance.reserves[j];
    if (v >= max(instance.cap * others, r)) continue;
    Rational t = max(others, r) / v;
    if (!best || t < *best) best = t;
  }
  return best ? min(*best, instance.cap) : instance.cap;
}

Rational m_safe(const Instance& instance, std::size_t bidder, const Rational& mu) {
  if (mu < 0 || mu >= 1) throw ParameterError("mu must lie in [0, 1)");
  return max(Rational(1), (1 - mu) * domination_sup(instance, bidder));
}

std::vector<Rational> m_safe_all(const Instance& instance, const Rational& mu) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < instance.n; ++i) out.push_back(m_safe(instance, i, mu));
  return out;
}

Rational UpdateRule::operator()(const Extended& r) const {
  if (kind == Kind::custom) {
    if (!custom) throw ParameterError("custom rule without a function");
    return min(cap, max(m_safe, custom(r)));
  }
  if (r < Rational(1)) return m_safe;
  if (r.is_infinite()) return cap;
  if (kind == Kind::step) return cap;
  const Rational& x = r.value();
  if (x == 1) return m_safe;
  Rational out;
  if (kind == Kind::poly) {
    Rational power(1);
    const unsigned long d = param.get_num().get_ui();
    for (unsigned long t = 0; t < d; ++t) {
      power *= x;
      if (m_safe * power >= cap) return cap;
    }
    out = ceil_to(m_safe * power, kRuleQuantum);
  } else {
    const Rational linear = m_safe * (1 + param * (x - 1));
    if (linear >= cap) return cap;
    const double exponent = to_double(param * (x - 1));
    if (exponent > std::log(to_double(cap / m_safe)) + 1) return cap;
    const Rational curved(m_safe.get_d() * std::exp(exponent));
    out = max(ceil_to(curved, kRuleQuantum), ceil_to(linear, kRuleQuantum));
  }
  return min(cap, max(m_safe, out));
}

Rational UpdateRule::constant() const {
  switch (kind) {
    case Kind::step: return Rational(1);
    case Kind::poly:
    case Kind::exp:
    case Kind::custom: return param;
  }
  return param;
}

UpdateRule UpdateRule::step(const Rational& m_safe, const Rational& cap) {
  UpdateRule rule;
  rule.kind = Kind::step;
  rule.m_safe = m_safe;
  rule.cap = cap;
  return rule;
}

UpdateRule UpdateRule::poly(unsigned degree, const Rational& m_safe, const Rational& cap) {
  if (degree == 0) throw ParameterError("poly degree must be positive");
  UpdateRule rule = step(m_safe, cap);
  rule.kind = Kind::poly;
  rule.param = Rational(degree);
  return rule;
}

UpdateRule UpdateRule::exp(const Rational& rate, const Rational& m_safe, const Rational& cap) {
  if (rate <= 0) throw ParameterError("exp rate must be positive");
  UpdateRule rule = step(m_safe, cap);
  rule.kind = Kind::exp;
  rule.param = rate;
  return rule;
}

std::string rule_kind_name(UpdateRule::Kind kind) {
  switch (kind) {
    case UpdateRule::Kind::step: return "step";
    case UpdateRule::Kind::poly: return "poly";
    case UpdateRule::Kind::exp: return "exp";
    case UpdateRule::Kind::custom: return "custom";
  }
  return "custom";
}

UpdateRule::Kind parse_rule_kind(const std::string& name) {
  if (name == "step") return UpdateRule::Kind::step;
  if (name == "poly") return UpdateRule::Kind::poly;
  if (name == "exp") return UpdateRule::Kind::exp;
  throw ParameterError("unknown rule '" + name + "' (expected step, poly or exp)");
}

std::vector<UpdateRule> uniform_rules(const Instance& instance, UpdateRule::Kind kind, const Rational& param,
                                      const Rational& mu) {
  std::vector<UpdateRule> rules;
  for (std::size_t i = 0; i < instance.n; ++i) {
    const Rational safe = m_safe(instance, i, mu);
    switch (kind) {
      case UpdateRule::Kind::step: rules.push_back(UpdateRule::step(safe, instance.cap)); break;
      case UpdateRule::Kind::poly:
        if (param.get_den() != 1 || sgn(param) <= 0) throw ParameterError("poly degree must be a positive integer");
        rules.push_back(UpdateRule::poly(static_cast<unsigned>(param.get_num().get_ui()), safe, instance.cap));
        break;
      case UpdateRule::Kind::exp: rules.push_back(UpdateRule::exp(param, safe, instance.cap)); break;
      case UpdateRule::Kind::custom: throw ParameterError("custom rules cannot be built uniformly");
    }
  }
  return rules;
}

Extended SequenceTrace::ratio(std::size_t t, std::size_t bidder) const {
  return Extended::ratio(cum_value.at(t).at(bidder), cum_spend.at(t).at(bidder));
}

namespace {

void push_round(const Instance& instance, SequenceTrace& trace, Profile m) {
  RoundRecord rec;
  rec.outcome = allocate(instance, m, trace.policy);
  rec.m = std::move(m);
  std::vector<Rational> cv(instance.n), cs(instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) {
    rec.value.push_back(value_obtained(instance, rec.outcome, i));
    rec.spend.push_back(spend(rec.outcome, i));
    cv[i] = rec.value[i] + (trace.cum_value.empty() ? Rational(0) : trace.cum_value.back()[i]);
    cs[i] = rec.spend[i] + (trace.cum_spend.empty() ? Rational(0) : trace.cum_spend.back()[i]);
  }
  trace.rounds.push_back(std::move(rec));
  trace.cum_value.push_back(std::move(cv));
  trace.cum_spend.push_back(std::move(cs));
}

}  // namespace

SequenceTrace make_trace(const Instance& instance, const std::vector<Profile>& profiles, AllocationPolicy policy) {
  SequenceTrace trace;
  trace.policy = policy;
  for (const auto& m : profiles) {
    validate_profile(instance, m);
    push_round(instance, trace, m);
  }
  return trace;
}

SequenceTrace run_dynamics(const Instance& instance, const std::vector<UpdateRule>& rules, std::size_t T,
                           std::optional<Profile> initial, AllocationPolicy policy) {
  if (T == 0) throw ParameterError("T must be at least 1");
  if (rules.size() != instance.n) throw ParameterError("one update rule per bidder is required");
  Profile m;
  if (initial) {
    m = *initial;
  } else {
    for (const auto& rule : rules) m.push_back(rule.m_safe);
  }
  validate_profile(instance, m);
  SequenceTrace trace;
  trace.policy = policy;
  for (std::size_t t = 0; t < T; ++t) {
    push_round(instance, trace, m);
    Profile next(instance.n);
    for (std::size_t i = 0; i < instance.n; ++i) next[i] = rules[i](trace.ratio(t, i));
    m = std::move(next);
  }
  return trace;
}

}  // namespace autobid
