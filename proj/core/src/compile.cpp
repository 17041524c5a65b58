#include "autobid/gadgets.hpp"

#include "autobid/errors.hpp"

#include <set>

namespace autobid {

std::size_t CompiledInstance::bidder(const std::string& role) const {
  auto it = bidder_roles.find(role);
  if (it == bidder_roles.end()) throw InputError("no bidder with role '" + role + "'");
  return it->second;
}

std::size_t CompiledInstance::item(const std::string& role) const {
  auto it = item_roles.find(role);
  if (it == item_roles.end()) throw InputError("no item with role '" + role + "'");
  return it->second;
}

std::string CompiledInstance::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw InputError("compiled instance lacks parameter '" + key + "'");
}

namespace {

void index_roles(CompiledInstance& c) {
  c.bidder_roles.clear();
  c.item_roles.clear();
  for (std::size_t i = 0; i < c.instance.bidder_labels.size(); ++i) {
    if (!c.bidder_roles.emplace(c.instance.bidder_labels[i], i).second) {
      throw InputError("duplicate bidder role '" + c.instance.bidder_labels[i] + "'");
    }
  }
  for (std::size_t j = 0; j < c.instance.item_labels.size(); ++j) {
    if (!c.item_roles.emplace(c.instance.item_labels[j], j).second) {
      throw InputError("duplicate item role '" + c.instance.item_labels[j] + "'");
    }
  }
}

void refresh_registry(CompiledInstance& c) {
  c.reserve_registry.clear();
  for (std::size_t j = 0; j < c.instance.k; ++j) {
    if (sgn(c.instance.reserves[j]) > 0) c.reserve_registry.push_back({j, c.instance.reserves[j]});
  }
}

Rational param_value(const CompiledInstance& c, const std::string& key) { return parse_rational(c.param(key)); }

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

CompiledInstance finish(const InstanceBuilder& b, const Rational& cap) {
  CompiledInstance c;
  c.instance = b.build(cap);
  c.stages = b.stages();
  index_roles(c);
  refresh_registry(c);
  return c;
}

CompiledInstance expand_reserves(const CompiledInstance& compiled) {
  if (compiled.reserve_registry.empty()) return compiled;
  const Instance& src = compiled.instance;
  if (src.cap <= 2) throw ParameterError("reserve expansion needs cap > 2");
  const std::size_t R = compiled.reserve_registry.size();
  CompiledInstance out = compiled;
  Instance inst = Instance::make(src.n + 2 * R, src.k + 2 * R, src.cap);
  for (std::size_t i = 0; i < src.n; ++i) {
    for (std::size_t j = 0; j < src.k; ++j) inst.values(i, j) = src.values(i, j);
    inst.ros_targets[i] = src.ros_targets[i];
    inst.budgets[i] = src.budgets[i];
  }
  inst.reserves.assign(src.k + 2 * R, Rational(0));
  inst.bidder_labels = src.bidder_labels;
  inst.item_labels = src.item_labels;
  if (inst.bidder_labels.empty()) {
    for (std::size_t i = 0; i < src.n; ++i) inst.bidder_labels.push_back("bidder:" + std::to_string(i));
  }
  if (inst.item_labels.empty()) {
    for (std::size_t j = 0; j < src.k; ++j) inst.item_labels.push_back("item:" + std::to_string(j));
  }
  std::set<std::size_t> replaced;
  for (std::size_t t = 0; t < R; ++t) {
    const auto& entry = compiled.reserve_registry[t];
    const Rational& r = entry.value;
    const std::size_t a1 = src.n + 2 * t;
    const std::size_t a2 = a1 + 1;
    const std::size_t i1 = src.k + 2 * t;
    const std::size_t i2 = i1 + 1;
    const std::string base = "reserve-aux:" + inst.item_labels[entry.item];
    inst.bidder_labels.push_back(base + ":1");
    inst.bidder_labels.push_back(base + ":2");
    inst.item_labels.push_back(base + ":item1");
    inst.item_labels.push_back(base + ":item2");
    inst.values(a1, i2) = 2 * r;
    inst.values(a1, entry.item) = r;
    inst.values(a2, i1) = r / 2;
    inst.values(a2, i2) = r;
    inst.values(a2, entry.item) = r / 2;
    replaced.insert(entry.item);
  }
  for (std::size_t j = 0; j < src.k; ++j) {
    if (!replaced.count(j)) inst.reserves[j] = src.reserves[j];
  }
  out.instance = std::move(inst);
  out.stages.push_back(Stage{"reserve-aux", out.instance.n, out.instance.k});
  index_roles(out);
  refresh_registry(out);
  return out;
}

CompiledInstance compile(const LabelCover& lc, const ReductionParams& params) {
  lc.validate();
  validate_params(params, lc.alphabet);
  ReductionParams p = params;
  const std::size_t V = lc.num_vertices();
  const std::size_t E = lc.edges.size();
  const std::size_t S = lc.alphabet;
  const Rational bound = eta_bound(p, V, E, S);
  if (sgn(p.eta) == 0) p.eta = bound;
  else if (p.eta > bound) throw ParameterError("eta exceeds delta|E| / (|V|(|Sigma|M+K) + 5|E||Sigma|)");
  const GadgetScale scale{p.epsilon, p.M, p.eta};

  InstanceBuilder b;
  std::vector<std::vector<std::size_t>> assign(V);
  for (std::size_t v = 0; v < V; ++v) assign[v] = emit_label_assignment(b, lc.vertex_name(v), S, p.M, p.K, p.eta);
  b.mark_stage("assign");
  std::vector<std::vector<std::size_t>> nand(E, std::vector<std::size_t>(S));
  for (std::size_t e = 0; e < E; ++e) {
    const auto& edge = lc.edges[e];
    for (std::size_t s = 0; s < S; ++s) {
      nand[e][s] = emit_nand(b, "e" + std::to_string(e) + ":" + std::to_string(s), assign[edge.u][s],
                             assign[lc.vertex_of_right(edge.v)][edge.projection[s]], scale);
    }
  }
  b.mark_stage("nand");
  std::vector<std::vector<std::size_t>> neg(E, std::vector<std::size_t>(S));
  for (std::size_t e = 0; e < E; ++e) {
    for (std::size_t s = 0; s < S; ++s) {
      neg[e][s] = emit_not(b, "e" + std::to_string(e) + ":" + std::to_string(s), nand[e][s], scale);
    }
  }
  b.mark_stage("not");
  std::vector<std::size_t> edge_bidders(E);
  for (std::size_t e = 0; e < E; ++e) edge_bidders[e] = emit_edge_block(b, "e" + std::to_string(e), neg[e], scale);
  b.mark_stage("edge");
  if (p.objective == Objective::welfare) {
    for (std::size_t e = 0; e < E; ++e) emit_incumbent(b, "e" + std::to_string(e), edge_bidders[e], scale, p.objective);
    b.mark_stage("incumbent");
  }

  CompiledInstance c = finish(b, p.M);
  if (p.gamma) {
    apply_signals(c.instance, *p.gamma);
    refresh_registry(c);
  }
  for (std::size_t v = 0; v < V; ++v) c.vertices.push_back(lc.vertex_name(v));
  c.alphabet = S;
  c.reduction = p;
  c.params = {
      {"epsilon", to_string(p.epsilon)},
      {"delta", to_string(p.delta)},
      {"M", to_string(p.M)},
      {"K", to_string(p.K)},
      {"eta", to_string(p.eta)},
      {"eta_bound", to_string(bound)},
      {"gamma", p.gamma ? to_string(*p.gamma) : "none"},
      {"objective", objective_name(p.objective)},
      {"reserves", reserve_mode_name(p.reserves)},
      {"vertices", std::to_string(V)},
      {"edges", std::to_string(E)},
      {"sigma", std::to_string(S)},
      {"wire_error", to_string(6 * (p.M + Rational(static_cast<unsigned long>(S))) / p.K)},
  };
  if (p.reserves == ReserveMode::expand) c = expand_reserves(c);
  c.params.emplace_back("bidders", std::to_string(c.instance.n));
  c.params.emplace_back("items", std::to_string(c.instance.k));
  return c;
}

Labeling decode(const CompiledInstance& compiled, const Profile& m, std::optional<Rational> threshold) {
  validate_profile(compiled.instance, m);
  const Rational thr = threshold.value_or(compiled.instance.cap);
  Labeling out(compiled.vertices.size());
  for (std::size_t v = 0; v < compiled.vertices.size(); ++v) {
    for (std::size_t s = 0; s < compiled.alphabet; ++s) {
      const std::size_t b = compiled.bidder("assign:" + compiled.vertices[v] + ":" + std::to_string(s));
      if (m[b] >= thr) {
        if (out[v]) throw InputError("two labels qualify for vertex '" + compiled.vertices[v] + "'");
        out[v] = s;
      }
    }
  }
  return out;
}

Instance stage_instance(const CompiledInstance& compiled, std::size_t stage) {
  if (stage >= compiled.stages.size()) throw InputError("no such stage");
  const Stage& st = compiled.stages[stage];
  const Instance& src = compiled.instance;
  Instance inst = Instance::make(st.bidders, st.items, src.cap);
  for (std::size_t i = 0; i < st.bidders; ++i) {
    for (std::size_t j = 0; j < st.items; ++j) inst.values(i, j) = src.values(i, j);
    inst.ros_targets[i] = src.ros_targets[i];
    inst.budgets[i] = src.budgets[i];
  }
  for (std::size_t j = 0; j < st.items; ++j) inst.reserves[j] = src.reserves[j];
  if (!src.bidder_labels.empty()) inst.bidder_labels.assign(src.bidder_labels.begin(), src.bidder_labels.begin() + st.bidders);
  if (!src.item_labels.empty()) inst.item_labels.assign(src.item_labels.begin(), src.item_labels.begin() + st.items);
  return inst;
}

GridSpec structural_grid(const CompiledInstance& compiled, const Rational& beta) {
  const Instance& inst = compiled.instance;
  const Rational& M = inst.cap;
  const Rational eps = param_value(compiled, "epsilon");
  const Rational S(static_cast<unsigned long>(compiled.alphabet));
  Rational K = 0;
  for (const auto& [key, value] : compiled.params) {
    if (key == "K") K = parse_rational(value);
  }
  const bool welfare = [&] {
    for (const auto& [key, value] : compiled.params) {
      if (key == "objective") return value == "welfare";
    }
    return false;
  }();
  GridSpec g;
  g.beta = beta;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const std::string role = inst.bidder_labels.empty() ? std::string() : inst.bidder_labels[i];
    std::set<Rational> pts{Rational(1), M};
    if (starts_with(role, "assign:")) {
      if (sgn(K) > 0) pts.insert((M * S + K) / (S + K));
    } else if (starts_with(role, "nand:")) {
      pts.insert(1 + 3 * eps);
    } else if (starts_with(role, "not:")) {
      pts.insert(1 + 2 * eps);
    } else if (starts_with(role, "edge:") || starts_with(role, "clause:")) {
      if (welfare) pts.insert(M / (1 + eps));
    } else if (starts_with(role, "reserve-aux:")) {
      pts.insert(Rational(2));
    }
    std::vector<Rational> c;
    for (const auto& x : pts) {
      if (x >= 1 && x <= M) c.push_back(x);
    }
    g.candidates.push_back(std::move(c));
  }
  return g;
}

RevenueBounds revenue_bounds(const CompiledInstance& compiled, std::size_t edges) {
  const Rational eta = param_value(compiled, "eta");
  const Rational M = compiled.instance.cap;
  const Rational K = param_value(compiled, "K");
  const Rational eps = param_value(compiled, "epsilon");
  const Rational V(static_cast<unsigned long>(compiled.vertices.size()));
  const Rational E(static_cast<unsigned long>(edges));
  const Rational S(static_cast<unsigned long>(compiled.alphabet));
  RevenueBounds r;
  r.gadget_slack = eta * (V * (S * M + K) + 5 * E * S);
  r.unsat_slack = E * (1 + eps) / M;
  return r;
}

std::size_t priced_edges(const CompiledInstance& compiled, const Profile& m) {
  validate_profile(compiled.instance, m);
  const Instance& inst = compiled.instance;
  std::size_t count = 0;
  for (const auto& [role, j] : compiled.item_roles) {
    if (!starts_with(role, "edge:")) continue;
    const std::size_t edge_bidder = compiled.bidder(role);
    Rational competing;
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (i != edge_bidder) competing = max(competing, m[i] * inst.values(i, j));
    }
    if (competing >= 1) ++count;
  }
  return count;
}

}  // namespace autobid
