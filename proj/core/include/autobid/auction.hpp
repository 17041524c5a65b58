#pragma once

#include "autobid/model.hpp"

#include <cstddef>
#include <vector>

namespace autobid {

/// b_ij = m_i * v_ij.
Matrix<Rational> bids(const Instance& instance, const Profile& m);

struct ItemClearing {
  std::vector<std::size_t> winners;  ///< real bidders attaining the top bid
  bool reserve_wins = false;         ///< pseudo-bidder attains the top bid
  Rational top;                      ///< max over bids and reserve
  Rational price;                    ///< multiset max with one copy of the top removed

  /// Top bid and reserve are both zero; allocation is value- and price-neutral.
  bool null_item() const { return sgn(top) == 0; }
};

struct Clearing {
  std::vector<ItemClearing> items;
};

Clearing clear(const Instance& instance, const Profile& m);

enum class AllocationPolicy { equal_split, ros_binding };

/// Deterministic allocation consistent with clear().
Outcome allocate(const Instance& instance, const Profile& m,
                 AllocationPolicy policy = AllocationPolicy::equal_split);

/// Allocation under equal splitting of an existing clearing.
Outcome equal_split(const Instance& instance, const Clearing& clearing);

}  // namespace autobid
