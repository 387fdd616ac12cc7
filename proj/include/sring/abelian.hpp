#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sring/util.hpp"

namespace sring {

/// A finite abelian group presented as a direct product of cyclic factors,
/// e.g. [2,2,2,3] for Z2^3 x Z3. Elements are exponent vectors, identified
/// with their mixed-radix rank (last factor fastest-varying). Cheap to copy;
/// immutable after construction.
class GroupSpec {
 public:
  GroupSpec();  // trivial group, order 1

  // Throws input_error if any factor < 2.
  static GroupSpec from_factors(const std::vector<int>& factors);

  // Grammar: Z<k>(^<e>)? (x Z<k>(^<e>)?)*, case-insensitive, whitespace
  // ignored. "Z1" denotes the trivial group.
  static GroupSpec parse(const std::string& spec);

  const std::vector<int>& factors() const;
  int order() const;
  int exponent() const;
  std::string spec_string() const;

  int identity() const { return 0; }
  int add(int a, int b) const;
  int inverse(int a) const;
  int sub(int a, int b) const;  // a - b
  // m * a (additively); m may be any integer, reduced per coordinate.
  int power(int a, long long m) const;
  int element_order(int a) const;

  std::vector<int> exponents(int rank) const;
  int rank_of(const std::vector<int>& exps) const;

  bool operator==(const GroupSpec& o) const { return factors() == o.factors(); }
  bool operator!=(const GroupSpec& o) const { return !(*this == o); }

 private:
  struct Impl;
  explicit GroupSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct Subgroup {
  std::vector<int> members;     // sorted ranks, always contains 0
  std::vector<int> generators;  // some generating set (ranks)

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int rank) const;
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

/// A group automorphism stored as images of the standard generating set
/// (one generator per factor) together with the full permutation on ranks.
struct GroupAutomorphism {
  std::vector<int> gen_images;
  std::vector<int> images;

  int apply(int rank) const { return images[rank]; }
  bool operator==(const GroupAutomorphism& o) const { return images == o.images; }
  bool operator<(const GroupAutomorphism& o) const { return images < o.images; }
};

GroupAutomorphism identity_automorphism(const GroupSpec& g);
// (f then g): returns the automorphism x -> g(f(x))... note order: compose(g, f)(x) = g(f(x)).
GroupAutomorphism compose(const GroupSpec& grp, const GroupAutomorphism& g,
                          const GroupAutomorphism& f);
GroupAutomorphism inverse(const GroupSpec& grp, const GroupAutomorphism& a);

// h = h_{q'} + h_q with h_{q'} in the q-complement P and h_q in the order-q
// subgroup Q; computed as h_{q'} = (q q*) h with q q* = 1 mod exponent(P).
// Requires q prime dividing |H| exactly once.
std::pair<int, int> decompose_q(const GroupSpec& g, int h, int q);

// x -> t*x for gcd(t, exponent) = 1.
GroupAutomorphism unit_action(const GroupSpec& g, long long t);

// M_q = { t in Z*_{eq} : t = 1 mod e }, e = exponent of the q-complement,
// as explicit automorphisms (contains the identity; isomorphic to Z_q^*).
std::vector<GroupAutomorphism> mq_automorphisms(const GroupSpec& g, int q);

// The unique subgroups of order |H|/q and q for a simple prime divisor q.
Subgroup q_complement(const GroupSpec& g, int q);
Subgroup q_subgroup(const GroupSpec& g, int q);

bool is_simple_prime_divisor(const GroupSpec& g, int q);
std::vector<int> simple_prime_divisors(const GroupSpec& g);

// Subgroup generated by the given ranks.
Subgroup span_of(const GroupSpec& g, const std::vector<int>& gens);

// Complete subgroup lattice, sorted by (order, members). Throws
// size_limit_error when |H| > max_order.
std::vector<Subgroup> all_subgroups(const GroupSpec& g, int max_order = 256);

// Full Aut(H) by free choice of generator images with validity filtering;
// cached per factor list. Sorted by image vector.
const std::vector<GroupAutomorphism>& automorphism_group(const GroupSpec& g,
                                                         int max_order = 256);

// H is an E-group when every Sylow subgroup is elementary abelian
// (equivalently no factor is divisible by p^2 for any prime p).
bool is_e_group(const GroupSpec& g);

/// An abstract finite abelian group given by its Cayley table on ids
/// 0..n-1 with identity 0. Used to give subgroups and quotients their own
/// GroupSpec coordinates.
struct LocalAbelian {
  int n = 1;
  std::vector<int> table;  // n*n, table[a*n+b] = a+b

  int at(int a, int b) const { return table[a * n + b]; }
  int inv(int a) const;
  int power(int a, long long m) const;
  int order_of(int a) const;
};

struct AbelianDecomposition {
  GroupSpec group;
  std::vector<int> to_local;    // new rank -> local id
  std::vector<int> from_local;  // local id -> new rank
};

// Structure of a LocalAbelian as an explicit isomorphism onto a GroupSpec
// (invariant factors found greedily via maximal-order elements).
AbelianDecomposition decompose_abelian(const LocalAbelian& g);

}  // namespace sring
