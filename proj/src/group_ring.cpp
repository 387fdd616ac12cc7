#include "sring/group_ring.hpp"

#include <sstream>
#include <stdexcept>

namespace sring {

std::vector<int> RingElement::support() const {
  std::vector<int> out;
  out.reserve(coeffs_.size());
  for (auto& [r, c] : coeffs_) out.push_back(r);
  return out;
}

std::string RingElement::dump() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [r, c] : coeffs_) {
    if (!first) os << " ";
    os << r << ":" << coeff_to_string(c);
    first = false;
  }
  return os.str();
}

RingElement simple_quantity(const GroupSpec& g, const std::vector<int>& set) {
  RingElement x(g);
  for (int r : set) {
    if (r < 0 || r >= g.order()) throw std::invalid_argument("simple_quantity: rank out of range");
    x.set_coeff(r, 1);
  }
  return x;
}

RingElement multiply(const RingElement& x, const RingElement& y) {
  if (x.group() != y.group()) throw std::invalid_argument("group mismatch in multiply");
  const GroupSpec& g = x.group();
  RingElement out(g);
  for (auto& [a, ca] : x.coefficients())
    for (auto& [b, cb] : y.coefficients()) out.add_coeff(g.add(a, b), checked_mul(ca, cb));
  return out;
}

RingElement add(const RingElement& x, const RingElement& y) {
  if (x.group() != y.group()) throw std::invalid_argument("group mismatch in add");
  RingElement out = x;
  for (auto& [b, cb] : y.coefficients()) out.add_coeff(b, cb);
  return out;
}

RingElement power_map(const RingElement& x, long long m) {
  const GroupSpec& g = x.group();
  RingElement out(g);
  for (auto& [r, c] : x.coefficients()) out.add_coeff(g.power(r, m), c);
  return out;
}

std::vector<int> schur_wielandt_extract(const RingElement& x, int m) {
  if (m < 2) throw std::invalid_argument("schur_wielandt_extract: modulus < 2");
  std::vector<int> out;
  for (auto& [r, c] : x.coefficients())
    if (c % m != 0) out.push_back(r);
  return out;
}

std::vector<int> coefficient_class(const RingElement& x, coeff_t k) {
  std::vector<int> out;
  if (k == 0) {
    for (int r = 0; r < x.group().order(); ++r)
      if (x.coeff(r) == 0) out.push_back(r);
    return out;
  }
  for (auto& [r, c] : x.coefficients())
    if (c == k) out.push_back(r);
  return out;
}

}  // namespace sring
