#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sring/abelian.hpp"
#include "sring/group_ring.hpp"

namespace sring {

/// An inverse-closed, identity-isolating partition of a finite abelian group:
/// the combinatorial face of a Schur ring. Blocks are kept in canonical order
/// ((size, smallest rank) lexicographic, so {e} is block 0 for valid
/// partitions); construction only checks partition-ness, the S-ring axioms
/// are checked by validate().
class SchurPartition {
 public:
  SchurPartition(GroupSpec group, std::vector<std::vector<int>> blocks);

  const GroupSpec& group() const { return group_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_of(int rank) const { return block_of_[rank]; }
  int rank() const { return static_cast<int>(blocks_.size()); }  // number of basic sets

  bool is_discrete() const { return rank() == group_.order(); }
  bool is_rank_two() const { return rank() <= 2; }

  // every block size a power of p
  bool is_p_sring(int p) const;

  // "0|1,3|2" style canonical key, for dedup and determinism
  std::string canonical_key() const;

  bool operator==(const SchurPartition& o) const {
    return group_ == o.group_ && blocks_ == o.blocks_;
  }
  bool operator!=(const SchurPartition& o) const { return !(*this == o); }

 private:
  GroupSpec group_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

SchurPartition discrete_partition(const GroupSpec& g);
SchurPartition rank_two_partition(const GroupSpec& g);

struct ValidityReport {
  bool ok = true;
  std::string violated_axiom;  // "partition" | "identity" | "inverse" | "closure"
  std::string witness;

  explicit operator bool() const { return ok; }
};

// Checks the three S-ring axioms; closure is checked by multiplying all
// block pairs and testing coefficient constancy on every block.
ValidityReport validate(const SchurPartition& p);

// Least S-ring containing the seed sets: iterate {pairwise block products,
// inverses, coprime power maps, coefficient-class splits} to a fixpoint.
// Empty seeds yield the rank-two partition.
SchurPartition generated_sring(const GroupSpec& g, const std::vector<std::vector<int>>& seeds);

// Is the set a union of blocks?
bool is_aset(const SchurPartition& p, const std::vector<int>& set);

// All subgroups that are unions of blocks; includes {e} and H.
std::vector<Subgroup> asubgroups(const SchurPartition& p);

// Stabilizer { g in H : T+g = T } of a nonempty set under translation,
// always a subgroup. When the identity lies in T the stabilizer is
// contained in T, so this agrees with the variant that ranges g over T.
Subgroup radical(const GroupSpec& g, const std::vector<int>& t);

/// Restriction / quotient carry the section group's own coordinates plus
/// the maps connecting them to the parent group.
struct SectionSring {
  SchurPartition part;
  std::vector<int> to_parent;    // section rank -> representative parent rank
  std::vector<int> from_parent;  // parent rank -> section rank (-1 outside domain)
};

// Blocks of p inside U, re-indexed to U's own coordinates. U must be an
// A-subgroup (throws std::invalid_argument otherwise).
SectionSring restriction(const SchurPartition& p, const Subgroup& u);

// pi-images of blocks over H/L, multiplicity discarded. L must be an
// A-subgroup.
SectionSring quotient(const SchurPartition& p, const Subgroup& l);

// Orbit partition of a subgroup M <= Aut(H). Throws if M is not closed
// under composition.
SchurPartition cyclotomic(const GroupSpec& g, const std::vector<GroupAutomorphism>& m);

// P1 = maximal A-subgroup inside the q-complement, Q1 = minimal A-subgroup
// containing the order-q subgroup.
std::pair<Subgroup, Subgroup> p1_q1(const SchurPartition& p, int q);

bool is_primitive(const SchurPartition& p);

// Wielandt: over a group with a simple prime divisor, primitive => rank <= 2
// (or |H| prime). Returns whether the instance is consistent.
bool wielandt_check(const SchurPartition& p, int q);

struct GwreathCertificate {
  Subgroup l, u;
  bool trivial = false;  // L = {e} or U = H
  // per block outside U: (block index, L-coset representatives)
  std::vector<std::pair<int, std::vector<int>>> coset_witnesses;
};

struct StarFactorization {
  int block = 0;            // block index
  std::vector<int> r, s;    // T = R+S with R <= K, S <= L, both A-sets
};

struct StarCertificate {
  Subgroup k, l;
  bool trivial = false;  // K = {e} or K = H
  std::vector<std::pair<int, std::vector<int>>> coset_witnesses;  // blocks in L\K
  std::vector<StarFactorization> factorizations;                  // blocks outside K u L
};

struct StarRefusal {
  std::string reason;
  std::vector<int> failing_block;
};

// All pairs (L, U) of A-subgroups with L <= U such that every block outside
// U is a union of L-cosets; trivial pairs are flagged, not dropped.
std::vector<GwreathCertificate> detect_gwreath(const SchurPartition& p);

// Star-decomposition check for given A-subgroups K, L (conditions (a)-(c));
// refusal carries the first failing block.
std::optional<StarCertificate> detect_star(const SchurPartition& p, const Subgroup& k,
                                           const Subgroup& l, StarRefusal* refusal = nullptr);

// First nontrivial hit iterating K descending by order and L ascending over
// A-subgroups containing Q.
std::optional<StarCertificate> detect_star_scan(const SchurPartition& p, int q);

// Re-verify a certificate against the partition it was issued for.
bool reverify(const SchurPartition& p, const GwreathCertificate& c);
bool reverify(const SchurPartition& p, const StarCertificate& c);

struct TrichotomyResult {
  char tag = '?';  // 'a' | 'b' | 'c'
  std::vector<int> s1, sm1, s0;        // the partition of T_{q'}
  std::optional<std::string> refutation;  // must stay empty on valid inputs
};

// Structure of an M_q-invariant block: T = S1 u S-1·Q# u S0·Q, with the
// clause checks (a) T <= P1, (b) T = S-1(Q1\P1) and S-1 <= P1, (c) Q1+T = T.
// Throws std::invalid_argument if T is not M_q-invariant.
TrichotomyResult trichotomy_classify(const SchurPartition& p, int q, const std::vector<int>& t);

// Helper shared with the samplers: partition of H into the atoms of the
// Boolean algebra generated by the seed sets, with the identity isolated.
// (Not necessarily an S-ring; it is the color partition of a colored Cayley
// structure.)
SchurPartition seed_atoms(const GroupSpec& g, const std::vector<std::vector<int>>& seeds);

}  // namespace sring
