#pragma once

// Independent reference computations used by unit tests and the acceptance
// binary. Nothing here calls the library's LP or clearing code.

#include "autobid/model.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

using autobid::Instance;
using autobid::Profile;
using autobid::Rational;

/// p/q in canonical form; the two-argument mpq constructor does not reduce.
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

struct Row {
  std::vector<Rational> a;
  Rational b;
  bool equality;  // a.x == b, otherwise a.x >= b
};

/// Exact Gaussian elimination; nullopt unless the square system has a unique solution.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
  const std::size_t d = b.size();
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && sgn(A[p][c]) == 0) ++p;
    if (p == d) return std::nullopt;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || sgn(A[r][c]) == 0) continue;
      const Rational f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < d; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(d);
  for (std::size_t c = 0; c < d; ++c) x[c] = b[c] / A[c][c];
  return x;
}

/// Nonempty iff some choice of d tight rows has a unique solution satisfying
/// every row. Valid for bounded polyhedra.
inline bool polytope_nonempty(std::size_t d, const std::vector<Row>& rows) {
  auto satisfied = [&](const std::vector<Rational>& x) {
    for (const auto& r : rows) {
      Rational lhs;
      for (std::size_t k = 0; k < d; ++k) lhs += r.a[k] * x[k];
      if (r.equality ? lhs != r.b : lhs < r.b) return false;
    }
    return true;
  };
  if (d == 0) return satisfied({});
  if (rows.size() < d) return false;
  std::vector<bool> pick(rows.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(d), true);
  do {
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (pick[r]) {
        A.push_back(rows[r].a);
        b.push_back(rows[r].b);
      }
    }
    auto x = solve_square(A, b);
    if (x && satisfied(*x)) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

/// Exact (beta = 0) equilibrium test by vertex enumeration of the allocation
/// polytope. Default RoS targets and infinite budgets only.
inline bool equilibrium_by_vertices(const Instance& inst, const Profile& m) {
  struct Var {
    std::size_t bidder;  // inst.n stands for the reserve pseudo-bidder
    std::size_t item;
  };
  std::vector<Var> vars;
  std::vector<Rational> price(inst.k);
  std::vector<bool> live(inst.k, false);
  for (std::size_t j = 0; j < inst.k; ++j) {
    std::vector<Rational> entries;
    for (std::size_t i = 0; i < inst.n; ++i) entries.push_back(m[i] * inst.values(i, j));
    entries.push_back(inst.reserves[j]);
    std::sort(entries.begin(), entries.end(), std::greater<>());
    const Rational top = entries[0];
    if (sgn(top) == 0) continue;
    live[j] = true;
    price[j] = entries.size() > 1 ? entries[1] : Rational(0);
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (m[i] * inst.values(i, j) == top) vars.push_back({i, j});
    }
    if (inst.reserves[j] == top) vars.push_back({inst.n, j});
  }
  const std::size_t d = vars.size();
  std::vector<Row> rows;
  for (std::size_t v = 0; v < d; ++v) {
    Row r{std::vector<Rational>(d), Rational(0), false};
    r.a[v] = 1;
    rows.push_back(r);
  }
  for (std::size_t j = 0; j < inst.k; ++j) {
    if (!live[j]) continue;
    Row r{std::vector<Rational>(d), Rational(1), true};
    for (std::size_t v = 0; v < d; ++v) {
      if (vars[v].item == j) r.a[v] = 1;
    }
    rows.push_back(r);
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    Row r{std::vector<Rational>(d), Rational(0), m[i] < inst.cap};
    bool any = false;
    for (std::size_t v = 0; v < d; ++v) {
      if (vars[v].bidder == i) {
        r.a[v] = inst.values(i, vars[v].item) - price[vars[v].item];
        any = true;
      }
    }
    if (any) rows.push_back(r);
  }
  return polytope_nonempty(d, rows);
}

/// Does m' dominate [1, m'): every item bidder i could obtain at m' (ties
/// included) against any opponent profile from `opp_grid` is also obtainable
/// at multiplier 1 against the same opponents.
inline bool dominates(const Instance& inst, std::size_t bidder, const Rational& m_prime,
                      const std::vector<Rational>& opp_grid) {
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (i != bidder) others.push_back(i);
  }
  std::vector<std::size_t> digit(others.size(), 0);
  while (true) {
    for (std::size_t j = 0; j < inst.k; ++j) {
      const Rational& v = inst.values(bidder, j);
      if (sgn(v) <= 0) continue;
      Rational rival = inst.reserves[j];
      for (std::size_t t = 0; t < others.size(); ++t) rival = autobid::max(rival, opp_grid[digit[t]] * inst.values(others[t], j));
      if (m_prime * v >= rival && v < rival) return false;
    }
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == opp_grid.size()) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  return true;
}

}  // namespace oracle
