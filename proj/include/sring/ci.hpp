#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sring/abelian.hpp"
#include "sring/perm.hpp"
#include "sring/schur.hpp"

namespace sring {

/// Outcome of a CI decision, with re-verifiable evidence: a conjugator per
/// regular subgroup for CI, or a certified refusal witness for not-CI.
struct CiVerdict {
  bool ci = false;
  std::string method;  // babai | star | gwreath | full-ring | rank2

  struct ConjEntry {
    std::vector<std::vector<int>> subgroup_gens;  // generator image arrays
    std::vector<int> conjugator;
  };
  std::vector<ConjEntry> conjugators;

  struct Refusal {
    std::vector<std::vector<int>> subgroup_gens;
    bool exhausted = false;
    bool brute_confirmed = false;  // |H| <= 8: full conjugacy scan agreed
  };
  std::optional<Refusal> refusal;

  std::string aut_order;
  int regular_subgroup_count = -1;  // -1 when the fast path skipped enumeration
};

struct CiLimits {
  int max_order = 64;
  std::uint64_t enum_bound = 2000000;
};

// Babai's criterion: G := Aut(scheme(P)); CI iff every H-regular subgroup
// of G is conjugate to the regular representation inside G. Fast paths:
// G = Hhat (full group ring) and G = Sym(H) (rank two).
CiVerdict babai_ci_check(const SchurPartition& p, const CiLimits& limits = {});

// All conjugators in the verdict re-map their subgroup into Hhat.
bool verify_verdict(const SchurPartition& p, const CiVerdict& v);

// Group automorphism mapping P's blocks onto P2's blocks, if any
// (same-group Cayley isomorphism).
std::optional<GroupAutomorphism> cayley_isomorphic(const SchurPartition& p,
                                                   const SchurPartition& p2);

// Is f (with f(0) = 0) a normalized combinatorial isomorphism from P onto
// the partition it induces, i.e. an element of Iso_1(P, *)? When `target`
// is given, additionally requires the induced partition to equal it.
bool is_normalized_iso(const SchurPartition& p, const Permutation& f,
                       const SchurPartition* target = nullptr);

// All normalized combinatorial isomorphisms P -> P2 by exhaustive scan
// (|H| <= 8; colors may permute, blocks map onto blocks).
std::vector<Permutation> iso1_search(const SchurPartition& p, const SchurPartition& p2,
                                     int max_order = 8);

// Same verdict as babai_ci_check; for |H| <= 8 additionally certifies
// Iso_1(A, *) = Aut(A)_1 Aut(H) elementwise and cross-checks the two.
CiVerdict ci_sring_check(const SchurPartition& p, const CiLimits& limits = {});

struct PreceqResult {
  bool holds = false;
  bool via_symmetric_shortcut = false;
  // one (subgroup generators, conjugator) pair per regular subgroup of Y
  std::vector<CiVerdict::ConjEntry> certificates;
  std::optional<std::vector<std::vector<int>>> witness;  // failing subgroup gens
};

// X <=_Hhat Y: every H-regular subgroup of Y conjugates into X by an
// element of Y. Both must contain the regular representation.
PreceqResult preceq_check(const PermGroup& x, const PermGroup& y, const GroupSpec& h,
                          const CiLimits& limits = {});

// Greedy descent to a preceq-minimal overgroup of Hhat inside G, over the
// complete lattice of intermediate subgroups (G must be small enough to
// enumerate).
PermGroup minimality_reduce(const PermGroup& g, const GroupSpec& h,
                            std::uint64_t enum_bound = 20000);

/// Theorem-based fast paths either produce a verdict (cross-checked against
/// Babai) or refuse because a hypothesis is not met. Refusal is not a
/// not-CI verdict.
struct TheoremOutcome {
  std::optional<CiVerdict> verdict;
  std::string refusal_reason;
  bool cross_check_agrees = true;  // babai agreed with the theorem path

  bool applied() const { return verdict.has_value(); }
};

// Star CI theorem: a nontrivial star decomposition with CI factors over
// an E-group implies CI.
TheoremOutcome ci_via_star(const SchurPartition& p, const Subgroup& k, const Subgroup& l,
                           const CiLimits& limits = {});

// Generalized-wreath CI theorem: a nontrivial generalized wreath product
// over an E-group with CI restriction/quotient and the section equality
// Aut_{U/L} = Aut_U^{U/L} Aut_{H/L}^{U/L} implies CI.
TheoremOutcome ci_via_gwreath(const SchurPartition& p, const Subgroup& l, const Subgroup& u,
                              const CiLimits& limits = {});

struct CatalogEntry;  // catalog.hpp

/// One transitivity module pushed through the decomposition pipeline:
/// trichotomy scan, wedge/star branch selection, theorem application, and
/// the Babai ground truth. Any inconsistency lands in `refutations`.
struct ModuleAnalysis {
  std::string branch;  // trivial | wedge-gwreath | star-rank2 | star-fullalg | fallback-babai
  std::string fallback_reason;
  std::string catalog_label;
  bool branch_applied = false;
  bool branch_ci = false;
  CiVerdict babai;
  std::vector<std::string> refutations;
};

// q must be a simple prime divisor of |H| with |H|/q a prime cube for the
// wedge catalog annotation to engage; the structural checks run regardless.
ModuleAnalysis analyze_module(const SchurPartition& part, int q, const CiLimits& limits = {},
                              const std::vector<CatalogEntry>* catalog = nullptr);

struct VerifyConfig {
  int samples = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  CiLimits limits;
};

struct SampleRecord {
  int index = 0;
  std::vector<std::vector<int>> connection_sets;
  std::string partition_key;
  int partition_rank = 0;
  std::string branch;         // trivial | wedge-gwreath | star-rank2 | star-fullalg | fallback-babai
  std::string fallback_reason;
  std::string catalog_label;  // B1..B6 when the wedge quotient matched
  bool babai_ci = false;
  std::string babai_method;
  bool branch_ci = false;     // meaningful when a theorem branch applied
  bool branch_applied = false;
};

struct TheoremReport {
  int p = 0, q = 0;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<SampleRecord> records;
  std::map<std::string, int> branch_histogram;
  std::vector<std::string> refutations;  // must be empty on a correct run

  bool clean() const { return refutations.empty(); }
};

// Sample colored Cayley structures over Z_p^3 x Z_q, compute their
// transitivity modules, walk the decomposition pipeline (wedge / star
// branches), and confirm every verdict with the Babai check.
TheoremReport verify_main_theorem(int p, int q, const VerifyConfig& cfg = {});

struct NonCiSearchReport {
  GroupSpec group;
  bool found = false;
  std::vector<int> witness_set;       // connection set of the first witness
  std::string witness_partition_key;
  CiVerdict witness_verdict;
  int classes_examined = 0;
};

// Scan connection sets S <= H\{e} up to Aut(H) for a Cayley digraph whose
// transitivity module fails the Babai check.
NonCiSearchReport find_non_ci_search(const GroupSpec& h, const CiLimits& limits = {});

}  // namespace sring
