#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sring/abelian.hpp"
#include "sring/ci.hpp"
#include "sring/schur.hpp"

namespace sring {

/// One of the classical Schurian p-S-rings over C_p^3: B1 = full ring,
/// B2 = Z[C_p^2] wr Z[C_p], B3 = (Z[C_p] wr Z[C_p]) (x) Z[C_p],
/// B4 = Z[C_p] wr Z[C_p^2], B5 = Z[C_p] wr Z[C_p] wr Z[C_p],
/// B6 = cyclotomic of an order-p automorphism with exactly p fixed points.
struct CatalogEntry {
  std::string label;  // "B1".."B6"
  SchurPartition partition;
  std::optional<GroupAutomorphism> alpha;  // only for B6
};

// Wreath product along a subgroup chain {e} = L0 < L1 < ... < Lk = H:
// singletons inside L1, L_{i-1}-cosets inside L_i \ L_{i-1}.
SchurPartition iterated_wreath(const GroupSpec& g, const std::vector<Subgroup>& chain);

// Tensor of partitions over complementary subgroups A, B (A n B = {e},
// A + B = H): blocks are the sumsets S + T.
SchurPartition tensor_product(const GroupSpec& g, const Subgroup& a,
                              const std::vector<std::vector<int>>& a_blocks, const Subgroup& b,
                              const std::vector<std::vector<int>>& b_blocks);

// Order-p automorphisms of C_p^3 with exactly p fixed points (exhaustive
// census over Aut).
std::vector<GroupAutomorphism> b6_alpha_census(const GroupSpec& g, int p);

// The B-catalog over C_p^3 (p = 2 or 3); B6 is reported absent rather than
// errored when no qualifying automorphism exists.
std::vector<CatalogEntry> build_catalog(int p);

struct EnumerationLimits {
  int max_order = 27;
  long long node_budget = 200000000;  // backtracking nodes before giving up
};

// All valid Schur partitions over H by backtracking with inverse-closure,
// power-map and closure pruning; canonical order.
std::vector<SchurPartition> enumerate_srings(const GroupSpec& h,
                                             const EnumerationLimits& limits = {});

// True iff V(Aut(scheme(P)), H) has exactly P's blocks.
bool schurian_check(const SchurPartition& p, const CiLimits& limits = {});

// Catalog entry Cayley-isomorphic to P, if any.
std::optional<std::string> match_catalog(const SchurPartition& p,
                                         const std::vector<CatalogEntry>& catalog);

}  // namespace sring
