#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sring {

// Resource-bound violations (CLI maps these to exit code 3).
struct size_limit_error : std::runtime_error {
  explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed external input: group spec strings, JSON files (CLI exit code 2).
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Group-ring coefficients. Convolution powers at desk scale stay far below
// 2^127; every arithmetic op is overflow-checked so a violation throws
// instead of wrapping.
using coeff_t = __int128;

inline coeff_t checked_add(coeff_t a, coeff_t b) {
  coeff_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow (add)");
  return r;
}

inline coeff_t checked_mul(coeff_t a, coeff_t b) {
  coeff_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow (mul)");
  return r;
}

inline std::string coeff_to_string(coeff_t v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

// Unsigned big integer, base 1e9 limbs. Only needed for permutation group
// orders (|Sym(64)| and friends overflow every native type).
class BigUnsigned {
 public:
  BigUnsigned() : limbs_{0} {}
  explicit BigUnsigned(std::uint64_t v) {
    do {
      limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
      v /= kBase;
    } while (v > 0);
  }

  void mul_small(std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
  }

  bool fits_u64() const {
    if (limbs_.size() > 3) return false;
    unsigned __int128 v = value128();
    return v <= UINT64_MAX;
  }

  std::uint64_t as_u64() const {
    if (!fits_u64()) throw std::overflow_error("group order exceeds 64 bits");
    return static_cast<std::uint64_t>(value128());
  }

  bool operator==(const BigUnsigned& o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigUnsigned& o) const { return !(*this == o); }

  std::string str() const {
    std::string s = std::to_string(limbs_.back());
    for (auto it = limbs_.rbegin() + 1; it != limbs_.rend(); ++it) {
      std::string part = std::to_string(*it);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

 private:
  static constexpr std::uint64_t kBase = 1000000000ULL;
  unsigned __int128 value128() const {
    unsigned __int128 v = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) v = v * kBase + *it;
    return v;
  }
  std::vector<std::uint32_t> limbs_;  // little-endian
};

inline std::uint64_t hash_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline void hash_combine(std::uint64_t& seed, std::uint64_t v) {
  seed ^= hash_mix(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline std::uint64_t hash_ints(const std::vector<int>& v) {
  std::uint64_t h = 0x12345678abcdefULL;
  for (int x : v) hash_combine(h, static_cast<std::uint64_t>(x));
  return h;
}

// Deterministic RNG wrapper. std::uniform_int_distribution is
// implementation-defined, so bounded draws are hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bULL) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool coin() { return (next() & 1) != 0; }

 private:
  std::uint64_t state_;
};

inline long long gcd_ll(long long a, long long b) {
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

inline long long lcm_ll(long long a, long long b) { return a / gcd_ll(a, b) * b; }

inline bool is_prime_small(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace sring
