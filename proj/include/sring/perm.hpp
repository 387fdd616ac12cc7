#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sring/abelian.hpp"
#include "sring/schur.hpp"
#include "sring/util.hpp"

namespace sring {

/// Bijection on [0, n). Composition is (a*b)(x) = a(b(x)).
struct Permutation {
  std::vector<int> img;

  Permutation() = default;
  explicit Permutation(int n) : img(n) {
    for (int i = 0; i < n; ++i) img[i] = i;
  }
  explicit Permutation(std::vector<int> images) : img(std::move(images)) {}

  int degree() const { return static_cast<int>(img.size()); }
  int operator()(int x) const { return img[x]; }
  bool is_identity() const;
  Permutation inverse() const;
  long long order() const;
  int first_moved() const;  // -1 for the identity

  bool operator==(const Permutation& o) const { return img == o.img; }
  bool operator!=(const Permutation& o) const { return img != o.img; }
  bool operator<(const Permutation& o) const { return img < o.img; }
};

Permutation compose(const Permutation& a, const Permutation& b);  // a after b
// y^{-1} * a * y
Permutation conjugate(const Permutation& a, const Permutation& y);

/// Permutation group with a deterministic Schreier–Sims stabilizer chain.
/// Immutable after construction; queries are thread-safe.
class PermGroup {
 public:
  PermGroup() = default;

  // base_hint is a prescribed prefix of the base (redundant points allowed).
  static PermGroup from_generators(int degree, const std::vector<Permutation>& gens,
                                   const std::vector<int>& base_hint = {0});
  static PermGroup trivial(int degree);
  static PermGroup symmetric(int degree);  // chain built analytically

  int degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return gens_; }
  const std::vector<int>& base() const { return base_; }

  BigUnsigned order() const;
  std::uint64_t order_u64() const { return order().as_u64(); }
  std::string order_str() const { return order().str(); }
  bool order_is_factorial() const;  // |G| == degree!

  bool contains(const Permutation& p) const;
  bool contains_all(const std::vector<Permutation>& ps) const;

  // Strong generators fixing the first prefix_len base points.
  std::vector<Permutation> stabilizer_gens(int prefix_len) const;

  // All elements; throws size_limit_error when the order exceeds the bound.
  std::vector<Permutation> elements(std::uint64_t bound = 2000000) const;

  bool is_transitive() const;

 private:
  struct Level {
    int point = 0;
    std::vector<Permutation> gens;                    // strong gens fixing earlier base points
    std::vector<int> orbit;                           // BFS order
    std::vector<std::optional<Permutation>> trans;    // u_v with u_v(point) = v
  };

  void rebuild_level(int l);
  // sift from chain level `from`; returns (residue, level it got stuck at)
  std::pair<Permutation, int> sift(const Permutation& p, int from) const;
  void schreier_sims();

  int degree_ = 0;
  std::vector<Permutation> gens_;    // input generators
  std::vector<Permutation> strong_;  // strong generating set
  std::vector<int> base_;
  std::vector<Level> chain_;
};

/// n x n matrix of color ids; for schemes, color 0 is the diagonal.
struct ColorMatrix {
  int n = 0;
  int num_colors = 0;
  std::vector<int> cells;  // row-major

  int at(int i, int j) const { return cells[static_cast<size_t>(i) * n + j]; }
  std::string dump() const;  // n rows of space-separated color ids
};

// color(g, h) = block index of h - g (the fixed orientation convention).
ColorMatrix scheme(const SchurPartition& p);

// Color matrix of a colored Cayley structure Cay(H,(S_1..S_r)); colors are
// the membership atoms, so its automorphisms are exactly the common
// automorphisms of the Cay(H,S_i).
ColorMatrix colored_cayley_matrix(const GroupSpec& g,
                                  const std::vector<std::vector<int>>& connection_sets);

bool is_color_automorphism(const ColorMatrix& c, const Permutation& p);

// Right translation x -> x + t as a permutation of ranks.
Permutation translation(const GroupSpec& g, int t);

// Regular representation of H: all right translations.
PermGroup regular_representation(const GroupSpec& g);

// Full color-preserving automorphism group by iterated color-degree
// refinement plus individualize-and-refine backtracking. verified_seeds are
// known automorphisms (checked, then used to prune). Throws
// size_limit_error when n exceeds the bound.
PermGroup aut_scheme(const ColorMatrix& c, int max_n = 64,
                     const std::vector<Permutation>& verified_seeds = {});

// Orbits of the stabilizer of point 0 as a Schur partition V(G, H).
// G must contain the regular representation.
SchurPartition transitivity_module(const PermGroup& g, const GroupSpec& h);

struct RegularSubgroup {
  std::vector<Permutation> gens;      // aligned with H's factor list
  std::vector<Permutation> elements;  // all |H|, sorted
};

// All regular subgroups of G isomorphic to H, by backtracking over
// generator images, deduplicated as point sets. G must be enumerable within
// enum_bound elements.
std::vector<RegularSubgroup> regular_subgroups(const PermGroup& g, const GroupSpec& h,
                                               std::uint64_t enum_bound = 2000000);

struct ConjugationResult {
  std::optional<Permutation> conjugator;
  bool exhausted = false;  // refusal certified by exhausting the candidate tree
};

// Find y in G with A^y <= B, where A is an H-regular group given by
// generators. Complete search: regular targets inside B, then isomorphism
// images of A's generating tuple, then the base-point image.
ConjugationResult conjugate_into(const std::vector<Permutation>& a_gens, const PermGroup& b,
                                 const PermGroup& g, const GroupSpec& h,
                                 std::uint64_t enum_bound = 2000000);

// Exhaustive scan over all elements of G (for small G): first y with
// A^y <= B.
std::optional<Permutation> brute_conjugacy_scan(const std::vector<Permutation>& a_gens,
                                                const PermGroup& b, const PermGroup& g,
                                                std::uint64_t enum_bound = 50000);

// Elements of the subgroup generated by gens (throws size_limit_error past
// the bound). Sorted.
std::vector<Permutation> group_closure(const std::vector<Permutation>& gens, int degree,
                                       std::size_t bound);

BigUnsigned factorial_big(int n);

}  // namespace sring
