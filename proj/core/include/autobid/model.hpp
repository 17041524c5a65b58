#pragma once

#include "autobid/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace autobid {

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Budgets: nullopt means +infinity.
using Budget = std::optional<Rational>;

struct Instance {
  std::size_t n = 0;
  std::size_t k = 0;
  Matrix<Rational> values;
  std::vector<Rational> reserves;
  Rational cap{1};
  std::vector<Rational> ros_targets;
  std::vector<Budget> budgets;
  std::vector<std::string> bidder_labels;
  std::vector<std::string> item_labels;

  /// n bidders, k items, all values 0, no reserves, tau = 1, budgets = inf.
  static Instance make(std::size_t n, std::size_t k, Rational cap);

  const Rational& value(std::size_t i, std::size_t j) const { return values(i, j); }
  bool has_default_targets() const;

  /// Throws InputError on any broken invariant.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

using Profile = std::vector<Rational>;

/// Throws InputError unless profile has n entries, each in [1, cap].
void validate_profile(const Instance& instance, const Profile& m);

struct Outcome {
  Matrix<Rational> allocation;        ///< n x k bidder shares
  std::vector<Rational> reserve_share;  ///< pseudo-bidder share per item
  std::vector<Rational> prices;       ///< p_j
  /// Price paid per unit by bidder i on item j. Equals prices[j] except in
  /// beta-approximate outcomes where near-winners face individual prices.
  Matrix<Rational> unit_price;

  static Outcome empty(std::size_t n, std::size_t k);
};

void check_shape(const Instance& instance, const Outcome& outcome);

Rational value_obtained(const Instance& instance, const Outcome& outcome, std::size_t bidder);
Rational spend(const Outcome& outcome, std::size_t bidder);

Rational optimal_welfare(const Instance& instance);
Rational liquid_welfare(const Instance& instance, const Outcome& outcome);
Rational revenue(const Outcome& outcome);

/// Multiplies values, reserves and finite budgets by eta.
Instance scale_instance(const Instance& instance, const Rational& eta);

}  // namespace autobid
