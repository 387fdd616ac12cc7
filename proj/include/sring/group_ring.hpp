#pragma once

#include <map>
#include <string>
#include <vector>

#include "sring/abelian.hpp"
#include "sring/util.hpp"

namespace sring {

/// Sparse integer-coefficient element of the group ring Z[H]. Absent ranks
/// have coefficient zero. Immutable-by-convention value type.
class RingElement {
 public:
  explicit RingElement(GroupSpec group) : group_(std::move(group)) {}

  const GroupSpec& group() const { return group_; }
  const std::map<int, coeff_t>& coefficients() const { return coeffs_; }

  coeff_t coeff(int rank) const {
    auto it = coeffs_.find(rank);
    return it == coeffs_.end() ? 0 : it->second;
  }

  void set_coeff(int rank, coeff_t c) {
    if (c == 0)
      coeffs_.erase(rank);
    else
      coeffs_[rank] = c;
  }

  void add_coeff(int rank, coeff_t c) { set_coeff(rank, checked_add(coeff(rank), c)); }

  bool is_zero() const { return coeffs_.empty(); }
  std::vector<int> support() const;

  // rank-sorted "rank:coeff" pairs
  std::string dump() const;

  bool operator==(const RingElement& o) const {
    return group_ == o.group_ && coeffs_ == o.coeffs_;
  }

 private:
  GroupSpec group_;
  std::map<int, coeff_t> coeffs_;
};

// underline(S): coefficient 1 on S, 0 elsewhere.
RingElement simple_quantity(const GroupSpec& g, const std::vector<int>& set);

// Convolution. Throws std::invalid_argument on group mismatch.
RingElement multiply(const RingElement& x, const RingElement& y);

RingElement add(const RingElement& x, const RingElement& y);

// x^(m): coefficients pushed forward along g -> m*g, summing on collisions.
// Negative m means inverse powers.
RingElement power_map(const RingElement& x, long long m);

// { g : coeff(g) != 0 mod m }
std::vector<int> schur_wielandt_extract(const RingElement& x, int m);

// { g : coeff(g) == k } (k = 0 yields the complement of the support).
std::vector<int> coefficient_class(const RingElement& x, coeff_t k);

}  // namespace sring
