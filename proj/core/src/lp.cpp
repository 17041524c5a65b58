#include "autobid/lp.hpp"

#include <stdexcept>

namespace autobid {

std::size_t LinearProgram::add_var() {
  objective_.emplace_back(0);
  return objective_.size() - 1;
}

void LinearProgram::add_row(std::vector<Term> terms, Sense sense, Rational rhs) {
  for (const auto& t : terms) {
    if (t.var >= objective_.size()) throw std::out_of_range("LP term refers to unknown variable");
  }
  rows_.push_back(Row{std::move(terms), sense, std::move(rhs)});
}

void LinearProgram::set_objective(std::size_t var, Rational coeff) {
  if (var >= objective_.size()) throw std::out_of_range("LP objective refers to unknown variable");
  objective_[var] = std::move(coeff);
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), t_(rows, std::vector<Rational>(cols + 1)), obj_(cols + 1), basis_(rows) {}

  std::vector<Rational>& row(std::size_t i) { return t_[i]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t num_rows() const { return t_.size(); }
  std::size_t rhs() const { return cols_; }
  std::vector<Rational>& obj() { return obj_; }

  void erase_row(std::size_t i) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& pr = t_[r];
    const Rational piv = pr[c];
    for (auto& v : pr) {
      if (sgn(v) != 0) v /= piv;
    }
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i != r) eliminate(t_[i], pr, c);
    }
    eliminate(obj_, pr, c);
    basis_[r] = c;
  }

  /// Maximizes the objective encoded in obj_ (reduced costs) over allowed
  /// columns. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    const std::size_t rhs_col = rhs();
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && sgn(obj_[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        Rational ratio = t_[i][rhs_col] / t_[i][enter];
        if (leave == t_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
  }

 private:
  static void eliminate(std::vector<Rational>& target, const std::vector<Rational>& pr, std::size_t c) {
    if (sgn(target[c]) == 0) return;
    const Rational f = target[c];
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (sgn(pr[j]) != 0) target[j] -= f * pr[j];
    }
  }

  std::size_t cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  using Sense = LinearProgram::Sense;
  const std::size_t n = lp.num_vars();
  const auto& rows = lp.rows();
  const std::size_t m = rows.size();

  std::vector<Sense> sense(m);
  std::vector<int> flip(m, 1);
  std::size_t extra = 0;
  std::size_t artificial = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = rows[i].sense;
    if (sgn(rows[i].rhs) < 0) {
      flip[i] = -1;
      if (sense[i] == Sense::le) sense[i] = Sense::ge;
      else if (sense[i] == Sense::ge) sense[i] = Sense::le;
    }
    if (sense[i] != Sense::eq) ++extra;
    if (sense[i] != Sense::le) ++artificial;
  }

  const std::size_t art_begin = n + extra;
  const std::size_t cols = art_begin + artificial;
  Tableau tab(m, cols);
  std::size_t next_extra = n;
  std::size_t next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = tab.row(i);
    for (const auto& term : rows[i].terms) {
      r[term.var] += flip[i] > 0 ? term.coeff : Rational(-term.coeff);
    }
    r[tab.rhs()] = flip[i] > 0 ? rows[i].rhs : Rational(-rows[i].rhs);
    if (sense[i] == Sense::le) {
      r[next_extra] = 1;
      tab.basis(i) = next_extra++;
    } else {
      if (sense[i] == Sense::ge) r[next_extra++] = -1;
      r[next_art] = 1;
      tab.basis(i) = next_art++;
    }
  }

  // Phase 1: maximize -(sum of artificials).
  auto& obj = tab.obj();
  for (std::size_t j = art_begin; j < cols; ++j) obj[j] = -1;
  for (std::size_t i = 0; i < tab.num_rows(); ++i) {
    if (tab.basis(i) >= art_begin) {
      const auto& r = tab.row(i);
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(r[j]) != 0) obj[j] += r[j];
      }
    }
  }
  std::vector<bool> allowed(cols, true);
  tab.optimize(allowed);

  LpResult result;
  if (sgn(obj[tab.rhs()]) > 0) {
    result.status = LpResult::Status::infeasible;
    return result;
  }

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.num_rows();) {
    if (tab.basis(i) < art_begin) {
      ++i;
      continue;
    }
    std::size_t col = art_begin;
    for (std::size_t j = 0; j < art_begin; ++j) {
      if (sgn(tab.row(i)[j]) != 0) {
        col = j;
        break;
      }
    }
    if (col == art_begin) {
      tab.erase_row(i);
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }
  for (std::size_t j = art_begin; j < cols; ++j) allowed[j] = false;

  bool has_objective = false;
  for (const auto& c : lp.objective()) {
    if (sgn(c) != 0) has_objective = true;
  }
  result.status = LpResult::Status::optimal;
  if (has_objective) {
    std::vector<Rational> cost(cols + 1);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective()[j];
    for (std::size_t j = 0; j <= cols; ++j) obj[j] = cost[j];
    for (std::size_t i = 0; i < tab.num_rows(); ++i) {
      const Rational& cb = cost[tab.basis(i)];
      if (sgn(cb) == 0) continue;
      const auto& r = tab.row(i);
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(r[j]) != 0) obj[j] -= cb * r[j];
      }
    }
    if (!tab.optimize(allowed)) result.status = LpResult::Status::unbounded;
  }

  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < tab.num_rows(); ++i) {
    if (tab.basis(i) < n) result.x[tab.basis(i)] = tab.row(i)[tab.rhs()];
  }
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.objective()[j] * result.x[j];
  return result;
}

}  // namespace autobid
