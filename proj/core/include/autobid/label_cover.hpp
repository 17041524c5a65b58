#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace autobid {

/// Bipartite label cover: edge (u, v) is satisfied when projection[label(u)] == label(v).
struct LabelCover {
  struct Edge {
    std::size_t u;  ///< index into left
    std::size_t v;  ///< index into right
    std::vector<std::size_t> projection;
  };

  std::vector<std::string> left;
  std::vector<std::string> right;
  std::size_t alphabet = 0;
  std::vector<Edge> edges;

  std::size_t num_vertices() const { return left.size() + right.size(); }
  /// Vertex index over left then right.
  std::size_t vertex_of_right(std::size_t v) const { return left.size() + v; }
  const std::string& vertex_name(std::size_t vertex) const;

  /// Throws InputError on unknown endpoints, partial projections or clashing names.
  void validate() const;
};

/// One optional label per vertex (left then right).
using Labeling = std::vector<std::optional<std::size_t>>;

std::size_t csp_value(const LabelCover& lc, const Labeling& labeling);

struct BestLabeling {
  std::size_t value = 0;
  Labeling labeling;
};

/// Exhaustive search over all |Sigma|^|V| total labelings.
BestLabeling best_labeling(const LabelCover& lc);

}  // namespace autobid
