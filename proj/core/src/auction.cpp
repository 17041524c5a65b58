#include "autobid/auction.hpp"

#include "autobid/support_system.hpp"

namespace autobid {

Matrix<Rational> bids(const Instance& instance, const Profile& m) {
  validate_profile(instance, m);
  Matrix<Rational> b(instance.n, instance.k);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t j = 0; j < instance.k; ++j) b(i, j) = m[i] * instance.values(i, j);
  }
  return b;
}

Clearing clear(const Instance& instance, const Profile& m) {
  const Matrix<Rational> b = bids(instance, m);
  Clearing c;
  c.items.resize(instance.k);
  for (std::size_t j = 0; j < instance.k; ++j) {
    auto& item = c.items[j];
    const Rational& r = instance.reserves[j];
    item.top = r;
    for (std::size_t i = 0; i < instance.n; ++i) item.top = max(item.top, b(i, j));
    std::size_t top_copies = 0;
    Rational below;
    for (std::size_t i = 0; i < instance.n; ++i) {
      if (b(i, j) == item.top) {
        item.winners.push_back(i);
        ++top_copies;
      } else {
        below = max(below, b(i, j));
      }
    }
    if (r == item.top) {
      item.reserve_wins = sgn(r) > 0 || item.winners.empty();
      ++top_copies;
    } else {
      below = max(below, r);
    }
    item.price = top_copies >= 2 ? item.top : below;
  }
  return c;
}

Outcome equal_split(const Instance& instance, const Clearing& clearing) {
  Outcome out = Outcome::empty(instance.n, instance.k);
  for (std::size_t j = 0; j < instance.k; ++j) {
    const auto& item = clearing.items[j];
    out.prices[j] = item.price;
    for (std::size_t i = 0; i < instance.n; ++i) out.unit_price(i, j) = item.price;
    if (item.null_item()) {
      if (instance.n > 0) out.allocation(0, j) = 1;
      else out.reserve_share[j] = 1;
      continue;
    }
    if (item.winners.empty()) {
      out.reserve_share[j] = 1;
      continue;
    }
    const Rational share(1, static_cast<unsigned long>(item.winners.size()));
    for (std::size_t i : item.winners) out.allocation(i, j) = share;
  }
  return out;
}

Outcome allocate(const Instance& instance, const Profile& m, AllocationPolicy policy) {
  const Clearing c = clear(instance, m);
  if (policy == AllocationPolicy::ros_binding) {
    detail::SupportOptions full;
    auto sys = detail::build_support_system(instance, m, full);
    auto res = solve(sys.lp);
    if (!res.feasible()) {
      detail::SupportOptions tight;
      tight.binding_only = true;
      sys = detail::build_support_system(instance, m, tight);
      res = solve(sys.lp);
    }
    if (res.feasible()) {
      Outcome out = detail::extract_outcome(instance, sys, res.x);
      for (std::size_t j = 0; j < instance.k; ++j) {
        for (std::size_t i = 0; i < instance.n; ++i) out.unit_price(i, j) = c.items[j].price;
      }
      return out;
    }
  }
  return equal_split(instance, c);
}

}  // namespace autobid
