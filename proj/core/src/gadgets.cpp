#include "autobid/gadgets.hpp"

#include "autobid/errors.hpp"

namespace autobid {

std::string objective_name(Objective o) { return o == Objective::revenue ? "revenue" : "welfare"; }
std::string reserve_mode_name(ReserveMode r) { return r == ReserveMode::native ? "native" : "expand"; }

ReductionParams derive_params(const Rational& epsilon, const Rational& delta, std::size_t alphabet) {
  if (epsilon <= 0 || epsilon >= 1) throw ParameterError("epsilon must lie in (0, 1)");
  if (delta <= 0 || delta >= 1) throw ParameterError("delta must lie in (0, 1)");
  if (alphabet < 2) throw ParameterError("alphabet must have at least two labels");
  ReductionParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.M = (1 + epsilon) / delta;
  p.K = 6 * p.M * static_cast<unsigned long>(alphabet) / epsilon;
  p.M.canonicalize();
  p.K.canonicalize();
  return p;
}

Rational eta_bound(const ReductionParams& p, std::size_t vertices, std::size_t edges, std::size_t alphabet) {
  const Rational V(static_cast<unsigned long>(vertices));
  const Rational E(static_cast<unsigned long>(edges));
  const Rational S(static_cast<unsigned long>(alphabet));
  const Rational denom = V * (S * p.M + p.K) + 5 * E * S;
  if (sgn(denom) == 0) return Rational(1);
  Rational eta = p.delta * E / denom;
  eta.canonicalize();
  if (sgn(eta) == 0) return Rational(1);
  return eta;
}

void validate_params(const ReductionParams& p, std::size_t alphabet) {
  if (p.epsilon <= 0 || p.epsilon >= 1) throw ParameterError("epsilon must lie in (0, 1)");
  if (p.delta <= 0 || p.delta >= 1) throw ParameterError("delta must lie in (0, 1)");
  if (alphabet < 2) throw ParameterError("alphabet must have at least two labels");
  if (p.M < (1 + p.epsilon) / p.delta) throw ParameterError("M must be at least (1+epsilon)/delta");
  const Rational S(static_cast<unsigned long>(alphabet));
  if (p.K < 6 * p.M * S / p.epsilon) throw ParameterError("K must be at least 6 M |Sigma| / epsilon");
  if (p.eta < 0) throw ParameterError("eta must be nonnegative");
  if (p.gamma && (*p.gamma < 0 || *p.gamma >= 1)) throw ParameterError("gamma must lie in [0, 1)");
  // Non-label multipliers sit within 1 + (M+|Sigma|)/K; three NAND/NOT
  // layers stretch that sixfold before it reaches the edge item.
  const Rational wire = 6 * (p.M + S) / p.K;
  if (wire > p.epsilon) throw ParameterError("accumulated wire error 6(M+|Sigma|)/K exceeds epsilon");
  if (p.reserves == ReserveMode::expand && p.M <= 2) throw ParameterError("reserve expansion needs M > 2");
}

std::size_t InstanceBuilder::add_bidder(std::string role) {
  bidder_roles_.push_back(std::move(role));
  return bidder_roles_.size() - 1;
}

std::size_t InstanceBuilder::add_item(std::string role) {
  item_roles_.push_back(std::move(role));
  reserves_.emplace_back(0);
  return item_roles_.size() - 1;
}

void InstanceBuilder::set_value(std::size_t bidder, std::size_t item, Rational v) {
  if (bidder >= num_bidders() || item >= num_items()) throw std::out_of_range("builder index out of range");
  v.canonicalize();
  values_[{bidder, item}] = std::move(v);
}

void InstanceBuilder::add_reserve(std::size_t item, const Rational& r) {
  if (item >= num_items()) throw std::out_of_range("builder index out of range");
  reserves_[item] = max(reserves_[item], r);
}

void InstanceBuilder::mark_stage(std::string name) {
  stages_.push_back(Stage{std::move(name), num_bidders(), num_items()});
}

Instance InstanceBuilder::build(const Rational& cap) const {
  Instance inst = Instance::make(num_bidders(), num_items(), cap);
  for (const auto& [key, v] : values_) inst.values(key.first, key.second) = v;
  inst.reserves = reserves_;
  inst.bidder_labels = bidder_roles_;
  inst.item_labels = item_roles_;
  return inst;
}

std::vector<std::size_t> emit_label_assignment(InstanceBuilder& b, const std::string& vertex, std::size_t alphabet,
                                               const Rational& M, const Rational& K, const Rational& eta) {
  std::vector<std::size_t> bidders;
  std::vector<std::size_t> items;
  for (std::size_t s = 0; s < alphabet; ++s) bidders.push_back(b.add_bidder("assign:" + vertex + ":" + std::to_string(s)));
  for (std::size_t s = 0; s < alphabet; ++s) items.push_back(b.add_item("assign:" + vertex + ":" + std::to_string(s)));
  const std::size_t k_item = b.add_item("assign:" + vertex + ":K");
  for (std::size_t s = 0; s < alphabet; ++s) {
    for (std::size_t t = 0; t < alphabet; ++t) b.set_value(bidders[s], items[t], s == t ? eta * M : eta);
    b.set_value(bidders[s], k_item, eta * K);
  }
  return bidders;
}

std::size_t emit_nand(InstanceBuilder& b, const std::string& key, std::size_t input1, std::size_t input2,
                      const GadgetScale& s) {
  const std::size_t out = b.add_bidder("nand:" + key);
  std::size_t item[4];
  for (int t = 0; t < 4; ++t) item[t] = b.add_item("nand:" + key + ":" + std::to_string(t + 1));
  const Rational half(1, 2);
  b.set_value(input1, item[0], s.eta / (2 * s.M));
  b.set_value(input2, item[1], s.eta / (2 * s.M));
  b.set_value(out, item[0], s.eta * (half + s.epsilon));
  b.set_value(out, item[1], s.eta * (half + s.epsilon));
  b.set_value(out, item[2], s.eta);
  b.set_value(out, item[3], s.eta / (2 * s.M));
  b.add_reserve(item[2], s.eta * (1 + 3 * s.epsilon));
  b.add_reserve(item[3], s.eta * half);
  return out;
}

std::size_t emit_not(InstanceBuilder& b, const std::string& key, std::size_t input, const GadgetScale& s) {
  const std::size_t out = b.add_bidder("not:" + key);
  std::size_t item[3];
  for (int t = 0; t < 3; ++t) item[t] = b.add_item("not:" + key + ":" + std::to_string(t + 1));
  b.set_value(input, item[0], s.eta / s.M);
  b.set_value(out, item[0], s.eta * (1 + s.epsilon));
  b.set_value(out, item[1], s.eta);
  b.set_value(out, item[2], s.eta / s.M);
  b.add_reserve(item[1], s.eta * (1 + 2 * s.epsilon));
  b.add_reserve(item[2], s.eta);
  return out;
}

std::size_t emit_edge_block(InstanceBuilder& b, const std::string& key, const std::vector<std::size_t>& competitors,
                            const GadgetScale& s) {
  const std::size_t edge = b.add_bidder("edge:" + key);
  const std::size_t item = b.add_item("edge:" + key);
  b.set_value(edge, item, 1 + s.epsilon);
  for (std::size_t c : competitors) b.set_value(c, item, 1 / s.M);
  return edge;
}

std::size_t emit_incumbent(InstanceBuilder& b, const std::string& key, std::size_t edge_bidder,
                           const GadgetScale& s, Objective objective) {
  if (objective != Objective::welfare) throw ParameterError("incumbent gadgets exist only in welfare mode");
  const std::size_t inc = b.add_bidder("incumbent:" + key);
  const std::size_t item = b.add_item("incumbent:" + key);
  b.set_value(inc, item, Rational(1));
  b.set_value(edge_bidder, item, (1 + s.epsilon) / s.M);
  return inc;
}

void apply_signals(Instance& instance, const Rational& gamma) {
  if (gamma < 0 || gamma >= 1) throw ParameterError("gamma must lie in [0, 1)");
  for (std::size_t j = 0; j < instance.k; ++j) {
    Rational top;
    for (std::size_t i = 0; i < instance.n; ++i) top = max(top, instance.values(i, j));
    instance.reserves[j] = max(instance.reserves[j], gamma * top);
  }
}

}  // namespace autobid
