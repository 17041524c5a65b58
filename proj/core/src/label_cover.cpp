#include "autobid/label_cover.hpp"

#include "autobid/errors.hpp"

#include <cmath>
#include <set>

namespace autobid {

const std::string& LabelCover::vertex_name(std::size_t vertex) const {
  return vertex < left.size() ? left[vertex] : right[vertex - left.size()];
}

void LabelCover::validate() const {
  if (alphabet == 0) throw InputError("alphabet must be nonempty");
  std::set<std::string> names;
  for (std::size_t v = 0; v < num_vertices(); ++v) {
    const auto& name = vertex_name(v);
    if (name.empty() || name.find(':') != std::string::npos) {
      throw InputError("vertex names must be nonempty and free of ':'");
    }
    if (!names.insert(name).second) throw InputError("duplicate vertex name '" + name + "'");
  }
  for (const auto& e : edges) {
    if (e.u >= left.size() || e.v >= right.size()) throw InputError("edge endpoint does not exist");
    if (e.projection.size() != alphabet) throw InputError("projection must be total on the alphabet");
    for (std::size_t s : e.projection) {
      if (s >= alphabet) throw InputError("projection maps outside the alphabet");
    }
  }
}

std::size_t csp_value(const LabelCover& lc, const Labeling& labeling) {
  if (labeling.size() != lc.num_vertices()) throw InputError("labeling must cover every vertex");
  for (const auto& l : labeling) {
    if (l && *l >= lc.alphabet) throw InputError("label outside the alphabet");
  }
  std::size_t count = 0;
  for (const auto& e : lc.edges) {
    const auto& lu = labeling[e.u];
    const auto& lv = labeling[lc.vertex_of_right(e.v)];
    if (lu && lv && e.projection[*lu] == *lv) ++count;
  }
  return count;
}

BestLabeling best_labeling(const LabelCover& lc) {
  const std::size_t nv = lc.num_vertices();
  if (std::pow(static_cast<double>(lc.alphabet), static_cast<double>(nv)) > 1e7) {
    throw BudgetError("too many labelings for exhaustive search");
  }
  BestLabeling best;
  std::vector<std::size_t> digits(nv, 0);
  Labeling current(nv);
  best.labeling.assign(nv, std::size_t{0});
  while (true) {
    for (std::size_t v = 0; v < nv; ++v) current[v] = digits[v];
    const std::size_t value = csp_value(lc, current);
    if (value > best.value) {
      best.value = value;
      best.labeling = current;
    }
    std::size_t pos = 0;
    while (pos < nv && ++digits[pos] == lc.alphabet) digits[pos++] = 0;
    if (pos == nv) break;
  }
  return best;
}

}  // namespace autobid
