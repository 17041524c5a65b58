#pragma once

#include "autobid/equilibrium.hpp"
#include "autobid/label_cover.hpp"
#include "autobid/model.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace autobid {

enum class Objective { revenue, welfare };
enum class ReserveMode { native, expand };

std::string objective_name(Objective o);
std::string reserve_mode_name(ReserveMode r);

struct ReductionParams {
  Rational epsilon;
  Rational delta;
  Rational M;
  Rational K;
  /// Zero means "use the per-instance bound at compile time".
  Rational eta{0};
  std::optional<Rational> gamma;
  Objective objective = Objective::revenue;
  ReserveMode reserves = ReserveMode::native;
};

/// M = (1+eps)/delta, K = 6 M |Sigma| / eps, eta left for compile().
ReductionParams derive_params(const Rational& epsilon, const Rational& delta, std::size_t alphabet);

/// delta |E| / (|V| (|Sigma| M + K) + 5 |E| |Sigma|).
Rational eta_bound(const ReductionParams& p, std::size_t vertices, std::size_t edges, std::size_t alphabet);

/// Throws ParameterError when a recipe constraint fails.
void validate_params(const ReductionParams& p, std::size_t alphabet);

struct ReserveEntry {
  std::size_t item;
  Rational value;
};

/// Name plus bidder/item counts at the end of a compilation stage. Stages
/// are prefixes of the bidder and item orders.
struct Stage {
  std::string name;
  std::size_t bidders = 0;
  std::size_t items = 0;
};

/// Accumulates named bidders/items with sparse values and native reserves.
class InstanceBuilder {
 public:
  std::size_t add_bidder(std::string role);
  std::size_t add_item(std::string role);
  void set_value(std::size_t bidder, std::size_t item, Rational v);
  /// Raises the native reserve of an item to at least r and records it.
  void add_reserve(std::size_t item, const Rational& r);
  void mark_stage(std::string name);

  std::size_t num_bidders() const { return bidder_roles_.size(); }
  std::size_t num_items() const { return item_roles_.size(); }
  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<std::string>& bidder_roles() const { return bidder_roles_; }
  const std::vector<std::string>& item_roles() const { return item_roles_; }

  Instance build(const Rational& cap) const;

 private:
  std::vector<std::string> bidder_roles_;
  std::vector<std::string> item_roles_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> values_;
  std::vector<Rational> reserves_;
  std::vector<Stage> stages_;
};

/// Scale shared by every gadget: epsilon, cap and the eta value scale.
struct GadgetScale {
  Rational epsilon;
  Rational M;
  Rational eta{1};
};

/// |Sigma| bidders "assign:<vertex>:<s>", items "assign:<vertex>:<s>" and
/// "assign:<vertex>:K"; values eta*M on the diagonal, eta off it, eta*K last.
std::vector<std::size_t> emit_label_assignment(InstanceBuilder& b, const std::string& vertex, std::size_t alphabet,
                                               const Rational& M, const Rational& K, const Rational& eta);

/// Output bidder "nand:<key>" over four items; returns the output bidder.
std::size_t emit_nand(InstanceBuilder& b, const std::string& key, std::size_t input1, std::size_t input2,
                      const GadgetScale& s);

/// Output bidder "not:<key>" over three items; returns the output bidder.
std::size_t emit_not(InstanceBuilder& b, const std::string& key, std::size_t input, const GadgetScale& s);

/// Edge bidder "edge:<key>" valuing item "edge:<key>" at 1+eps; each
/// competitor values it 1/M. Not eta-scaled. Returns the edge bidder.
std::size_t emit_edge_block(InstanceBuilder& b, const std::string& key, const std::vector<std::size_t>& competitors,
                            const GadgetScale& s);

/// Incumbent bidder "incumbent:<key>" valuing item "incumbent:<key>" at 1;
/// the edge bidder values it (1+eps)/M. Throws ParameterError in revenue mode.
std::size_t emit_incumbent(InstanceBuilder& b, const std::string& key, std::size_t edge_bidder,
                           const GadgetScale& s, Objective objective);

/// Raises every item's reserve to gamma * (largest value on the item).
void apply_signals(Instance& instance, const Rational& gamma);

struct CompiledInstance {
  Instance instance;
  std::map<std::string, std::size_t> bidder_roles;
  std::map<std::string, std::size_t> item_roles;
  /// Native reserves still carried by the instance (empty after expansion).
  std::vector<ReserveEntry> reserve_registry;
  std::vector<Stage> stages;
  /// Resolved parameters for report headers, in emission order.
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> vertices;
  std::size_t alphabet = 0;
  std::optional<ReductionParams> reduction;

  std::size_t bidder(const std::string& role) const;
  std::size_t item(const std::string& role) const;
  bool has_bidder(const std::string& role) const { return bidder_roles.count(role) != 0; }
  std::string param(const std::string& key) const;
};

/// Builds a CompiledInstance from a builder, indexing roles by label.
CompiledInstance finish(const InstanceBuilder& b, const Rational& cap);

/// Replaces each registered reserve by two auxiliary bidders and items.
CompiledInstance expand_reserves(const CompiledInstance& compiled);

CompiledInstance compile(const LabelCover& lc, const ReductionParams& params);

/// Label sigma for vertex u iff m_{u,sigma} >= threshold (default: cap).
/// Throws InputError when two labels qualify for one vertex.
Labeling decode(const CompiledInstance& compiled, const Profile& m, std::optional<Rational> threshold = std::nullopt);

/// Instance restricted to the first `stage` prefix.
Instance stage_instance(const CompiledInstance& compiled, std::size_t stage);

/// Role-aware candidate multipliers: the critical points of each gadget.
GridSpec structural_grid(const CompiledInstance& compiled, const Rational& beta = Rational(0));

/// Parameter echo plus revenue bounds for a compiled label-cover instance.
struct RevenueBounds {
  Rational gadget_slack;   ///< eta (|V|(|Sigma|M+K) + 5|E||Sigma|)
  Rational unsat_slack;    ///< |E| (1+eps)/M
  Rational upper(std::size_t satisfied) const { return gadget_slack + Rational(static_cast<unsigned long>(satisfied)) + unsat_slack; }
};
RevenueBounds revenue_bounds(const CompiledInstance& compiled, std::size_t edges);

/// Number of edge items whose competing bid reaches 1 (some m_{e,s} at cap).
std::size_t priced_edges(const CompiledInstance& compiled, const Profile& m);

}  // namespace autobid
