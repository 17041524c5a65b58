#include "autobid/cover.hpp"

#include "autobid/errors.hpp"

#include <cmath>

namespace autobid {

void CoverCSP::validate() const {
  if (variables == 0) throw InputError("cover CSP needs at least one variable");
  if (alphabet == 0) throw InputError("alphabet must be nonempty");
  for (const auto& clause : clauses) {
    if (clause.empty()) throw InputError("clauses must be nonempty");
    for (const auto& lit : clause) {
      if (lit.var >= variables || lit.label >= alphabet) throw InputError("literal out of range");
    }
  }
}

std::size_t cover_value(const CoverCSP& csp, const std::vector<std::optional<std::size_t>>& assignment) {
  if (assignment.size() != csp.variables) throw InputError("assignment must cover every variable");
  std::size_t count = 0;
  for (const auto& clause : csp.clauses) {
    for (const auto& lit : clause) {
      if (assignment[lit.var] && *assignment[lit.var] == lit.label) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::size_t best_cover_value(const CoverCSP& csp) {
  csp.validate();
  if (std::pow(static_cast<double>(csp.alphabet), static_cast<double>(csp.variables)) > 1e7) {
    throw BudgetError("too many assignments for exhaustive search");
  }
  std::vector<std::size_t> digits(csp.variables, 0);
  std::vector<std::optional<std::size_t>> current(csp.variables);
  std::size_t best = 0;
  while (true) {
    for (std::size_t v = 0; v < csp.variables; ++v) current[v] = digits[v];
    best = std::max(best, cover_value(csp, current));
    std::size_t pos = 0;
    while (pos < csp.variables && ++digits[pos] == csp.alphabet) digits[pos++] = 0;
    if (pos == csp.variables) break;
  }
  return best;
}

CoverCSP max_cover_encoding(std::size_t q, std::size_t universe, const std::vector<std::vector<std::size_t>>& family) {
  CoverCSP csp;
  csp.variables = q;
  csp.alphabet = family.size();
  csp.clauses.resize(universe);
  for (std::size_t f = 0; f < family.size(); ++f) {
    for (std::size_t u : family[f]) {
      if (u >= universe) throw InputError("set element outside the universe");
    }
  }
  for (std::size_t u = 0; u < universe; ++u) {
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t f = 0; f < family.size(); ++f) {
        for (std::size_t x : family[f]) {
          if (x == u) {
            csp.clauses[u].push_back({i, f});
            break;
          }
        }
      }
    }
  }
  std::erase_if(csp.clauses, [](const auto& c) { return c.empty(); });
  return csp;
}

namespace {

Rational count(std::size_t x) { return Rational(static_cast<unsigned long>(x)); }

void check_common(const Rational& epsilon, const CoverCSP& csp) {
  csp.validate();
  if (epsilon <= 0 || epsilon >= 1) throw ParameterError("epsilon must lie in (0, 1)");
  if (csp.alphabet < 2) throw ParameterError("alphabet must have at least two labels");
  if (csp.clauses.empty()) throw ParameterError("cover CSP needs at least one clause");
}

}  // namespace

LearningParams revenue_learning_params(const Rational& epsilon, const Rational& delta, const CoverCSP& csp) {
  check_common(epsilon, csp);
  if (delta <= 0 || delta >= 1) throw ParameterError("delta must lie in (0, 1)");
  const Rational d = count(csp.variables);
  const Rational S = count(csp.alphabet);
  const Rational C = count(csp.clauses.size());
  LearningParams p;
  p.objective = Objective::revenue;
  p.epsilon = epsilon;
  p.delta = delta;
  p.M = 2 / delta;
  p.lambda = 2 * d / delta;
  p.K = p.lambda * p.M * (S - 1) / epsilon;
  p.eta = delta * C / (d * (S * p.M + p.K));
  p.beta = p.eta * p.M;
  for (Rational* x : {&p.M, &p.lambda, &p.K, &p.eta, &p.beta}) x->canonicalize();
  return p;
}

LearningParams welfare_learning_params(const Rational& epsilon, const CoverCSP& csp) {
  check_common(epsilon, csp);
  const Rational d = count(csp.variables);
  const Rational S = count(csp.alphabet);
  const Rational C = count(csp.clauses.size());
  LearningParams p;
  p.objective = Objective::welfare;
  p.epsilon = epsilon;
  p.delta = epsilon;
  p.mu = epsilon * epsilon;
  p.M = 1 / epsilon;
  p.alpha = epsilon;
  p.lambda = 2 * d / epsilon;
  p.K = p.lambda * p.M * (S - 1) / epsilon;
  p.eta = epsilon * C / (d * (S * p.M + p.K));
  p.beta = min(epsilon * epsilon, p.eta * p.M);
  p.s = (1 + epsilon) / (1 - p.mu) - 1;
  for (Rational* x : {&p.mu, &p.M, &p.lambda, &p.K, &p.eta, &p.beta, &p.s}) x->canonicalize();
  return p;
}

CompiledInstance compile_cover(const CoverCSP& csp, const LearningParams& p) {
  csp.validate();
  if (p.M < 1) throw ParameterError("cap must be at least 1");
  if (sgn(p.K) <= 0 || sgn(p.eta) <= 0) throw ParameterError("K and eta must be positive");
  const GadgetScale scale{p.epsilon, p.M, p.eta};
  InstanceBuilder b;
  std::vector<std::vector<std::size_t>> assign(csp.variables);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < csp.variables; ++i) {
    names.push_back("x" + std::to_string(i));
    assign[i] = emit_label_assignment(b, names.back(), csp.alphabet, p.M, p.K, p.eta);
  }
  b.mark_stage("assign");
  std::vector<std::size_t> clause_bidders;
  for (std::size_t c = 0; c < csp.clauses.size(); ++c) {
    std::vector<std::size_t> literals;
    for (const auto& lit : csp.clauses[c]) literals.push_back(assign[lit.var][lit.label]);
    const std::string key = "c" + std::to_string(c);
    const std::size_t bidder = b.add_bidder("clause:" + key);
    const std::size_t item = b.add_item("clause:" + key);
    b.set_value(bidder, item, 1 + p.epsilon);
    for (std::size_t l : literals) b.set_value(l, item, 1 / p.M);
    clause_bidders.push_back(bidder);
  }
  b.mark_stage("clause");
  if (p.objective == Objective::welfare) {
    for (std::size_t c = 0; c < csp.clauses.size(); ++c) {
      emit_incumbent(b, "c" + std::to_string(c), clause_bidders[c], scale, p.objective);
    }
    b.mark_stage("incumbent");
  }
  CompiledInstance out = finish(b, p.M);
  out.vertices = names;
  out.alphabet = csp.alphabet;
  out.params = {
      {"epsilon", to_string(p.epsilon)},
      {"delta", to_string(p.delta)},
      {"M", to_string(p.M)},
      {"K", to_string(p.K)},
      {"eta", to_string(p.eta)},
      {"lambda", to_string(p.lambda)},
      {"beta", to_string(p.beta)},
      {"mu", to_string(p.mu)},
      {"alpha", to_string(p.alpha)},
      {"s", to_string(p.s)},
      {"objective", objective_name(p.objective)},
      {"variables", std::to_string(csp.variables)},
      {"clauses", std::to_string(csp.clauses.size())},
      {"sigma", std::to_string(csp.alphabet)},
      {"bidders", std::to_string(out.instance.n)},
      {"items", std::to_string(out.instance.k)},
  };
  return out;
}

}  // namespace autobid
