#include "sring/schur.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sring {

namespace {

std::vector<std::vector<int>> canonical_blocks(std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return blocks;
}

std::string set_to_string(const std::vector<int>& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  return os.str();
}

std::vector<int> add_sets(const GroupSpec& g, const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> out;
  for (int x : a)
    for (int y : b) out.insert(g.add(x, y));
  return {out.begin(), out.end()};
}

std::vector<int> translate_set(const GroupSpec& g, const std::vector<int>& s, int t) {
  std::vector<int> out;
  out.reserve(s.size());
  for (int x : s) out.push_back(g.add(x, t));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SchurPartition::SchurPartition(GroupSpec group, std::vector<std::vector<int>> blocks)
    : group_(std::move(group)), blocks_(canonical_blocks(std::move(blocks))) {
  block_of_.assign(group_.order(), -1);
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].empty()) throw std::invalid_argument("SchurPartition: empty block");
    for (int r : blocks_[i]) {
      if (r < 0 || r >= group_.order())
        throw std::invalid_argument("SchurPartition: rank out of range");
      if (block_of_[r] != -1) throw std::invalid_argument("SchurPartition: blocks not disjoint");
      block_of_[r] = static_cast<int>(i);
    }
  }
  for (int r = 0; r < group_.order(); ++r)
    if (block_of_[r] == -1) throw std::invalid_argument("SchurPartition: blocks do not cover H");
}

bool SchurPartition::is_p_sring(int p) const {
  for (const auto& b : blocks_) {
    size_t s = b.size();
    while (s % p == 0) s /= p;
    if (s != 1) return false;
  }
  return true;
}

std::string SchurPartition::canonical_key() const {
  std::ostringstream os;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << "|";
    os << set_to_string(blocks_[i]);
  }
  return os.str();
}

SchurPartition discrete_partition(const GroupSpec& g) {
  std::vector<std::vector<int>> blocks;
  for (int r = 0; r < g.order(); ++r) blocks.push_back({r});
  return SchurPartition(g, std::move(blocks));
}

SchurPartition rank_two_partition(const GroupSpec& g) {
  if (g.order() == 1) return discrete_partition(g);
  std::vector<int> rest;
  for (int r = 1; r < g.order(); ++r) rest.push_back(r);
  return SchurPartition(g, {{0}, rest});
}

ValidityReport validate(const SchurPartition& p) {
  const GroupSpec& g = p.group();
  ValidityReport rep;
  if (p.blocks()[0] != std::vector<int>{0}) {
    rep.ok = false;
    rep.violated_axiom = "identity";
    rep.witness = "block containing e: {" + set_to_string(p.blocks()[p.block_of(0)]) + "}";
    return rep;
  }
  // inverse closure
  for (const auto& t : p.blocks()) {
    std::vector<int> inv;
    for (int x : t) inv.push_back(g.inverse(x));
    std::sort(inv.begin(), inv.end());
    if (inv != p.blocks()[p.block_of(inv[0])]) {
      rep.ok = false;
      rep.violated_axiom = "inverse";
      rep.witness = "{" + set_to_string(t) + "}^(-1) = {" + set_to_string(inv) + "} is not a block";
      return rep;
    }
  }
  // multiplicative closure: coefficients of block products constant per block
  for (size_t i = 0; i < p.blocks().size(); ++i) {
    RingElement ti = simple_quantity(g, p.blocks()[i]);
    for (size_t j = i; j < p.blocks().size(); ++j) {
      RingElement prod = multiply(ti, simple_quantity(g, p.blocks()[j]));
      for (const auto& b : p.blocks()) {
        coeff_t c0 = prod.coeff(b[0]);
        for (int x : b) {
          if (prod.coeff(x) != c0) {
            rep.ok = false;
            rep.violated_axiom = "closure";
            rep.witness = "T" + std::to_string(i) + "*T" + std::to_string(j) +
                          " has non-constant coefficients on {" + set_to_string(b) + "}";
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

SchurPartition seed_atoms(const GroupSpec& g, const std::vector<std::vector<int>>& seeds) {
  std::vector<std::vector<char>> member(seeds.size(), std::vector<char>(g.order(), 0));
  for (size_t i = 0; i < seeds.size(); ++i)
    for (int r : seeds[i]) {
      if (r < 0 || r >= g.order()) throw std::invalid_argument("seed rank out of range");
      member[i][r] = 1;
    }
  std::map<std::vector<char>, std::vector<int>> atoms;
  for (int r = 0; r < g.order(); ++r) {
    std::vector<char> sig(seeds.size() + 1);
    sig[0] = (r == 0);
    for (size_t i = 0; i < seeds.size(); ++i) sig[i + 1] = member[i][r];
    atoms[sig].push_back(r);
  }
  std::vector<std::vector<int>> blocks;
  for (auto& [sig, blk] : atoms) blocks.push_back(blk);
  return SchurPartition(g, std::move(blocks));
}

namespace {

// refine the partition by a signature function; returns true if split
bool refine_by(std::vector<std::vector<int>>& blocks, const GroupSpec& g,
               const std::function<long long(int)>& sig) {
  bool changed = false;
  std::vector<std::vector<int>> next;
  for (auto& b : blocks) {
    std::map<long long, std::vector<int>> groups;
    for (int x : b) groups[sig(x)].push_back(x);
    if (groups.size() > 1) changed = true;
    for (auto& [s, part] : groups) next.push_back(part);
  }
  blocks = std::move(next);
  return changed;
}

}  // namespace

SchurPartition generated_sring(const GroupSpec& g, const std::vector<std::vector<int>>& seeds) {
  SchurPartition atoms = seed_atoms(g, seeds);
  std::vector<std::vector<int>> blocks = atoms.blocks();

  // coprime multipliers act by coefficient transport (Lemma: T^(m) stays in
  // the ring); applying them during closure accelerates convergence.
  std::vector<long long> units;
  for (int m = 1; m < std::max(2, g.exponent()); ++m)
    if (gcd_ll(m, g.order()) == 1) units.push_back(m);
  if (units.empty()) units.push_back(1);

  for (;;) {
    bool changed = false;
    std::vector<int> block_of(g.order());
    for (size_t i = 0; i < blocks.size(); ++i)
      for (int x : blocks[i]) block_of[x] = static_cast<int>(i);

    // inverse closure
    changed |= refine_by(blocks, g, [&](int x) { return static_cast<long long>(block_of[g.inverse(x)]); });
    // coprime power maps
    for (long long m : units) {
      std::vector<int> bo(g.order());
      for (size_t i = 0; i < blocks.size(); ++i)
        for (int x : blocks[i]) bo[x] = static_cast<int>(i);
      changed |= refine_by(blocks, g, [&](int x) { return static_cast<long long>(bo[g.power(x, m)]); });
    }
    // products of block pairs, split by exact coefficient
    size_t nb = blocks.size();
    for (size_t i = 0; i < nb && i < blocks.size(); ++i) {
      for (size_t j = i; j < nb && j < blocks.size(); ++j) {
        if (i >= blocks.size() || j >= blocks.size()) break;
        RingElement prod =
            multiply(simple_quantity(g, blocks[i]), simple_quantity(g, blocks[j]));
        changed |= refine_by(blocks, g, [&](int x) {
          return static_cast<long long>(prod.coeff(x));
        });
      }
    }
    if (!changed) break;
  }
  return SchurPartition(g, std::move(blocks));
}

bool is_aset(const SchurPartition& p, const std::vector<int>& set) {
  std::set<int> s(set.begin(), set.end());
  for (int x : set)
    for (int y : p.blocks()[p.block_of(x)])
      if (!s.count(y)) return false;
  return true;
}

std::vector<Subgroup> asubgroups(const SchurPartition& p) {
  std::vector<Subgroup> out;
  for (const auto& s : all_subgroups(p.group()))
    if (is_aset(p, s.members)) out.push_back(s);
  return out;
}

Subgroup radical(const GroupSpec& g, const std::vector<int>& t) {
  if (t.empty()) throw std::invalid_argument("radical: empty set");
  std::vector<int> ts = t;
  std::sort(ts.begin(), ts.end());
  Subgroup s;
  for (int x = 0; x < g.order(); ++x)
    if (translate_set(g, ts, x) == ts) s.members.push_back(x);
  for (int m : s.members)
    if (m != 0) s.generators.push_back(m);
  return s;
}

namespace {

LocalAbelian local_group_on(const GroupSpec& g, const std::vector<int>& members) {
  std::vector<int> idx(g.order(), -1);
  for (size_t i = 0; i < members.size(); ++i) idx[members[i]] = static_cast<int>(i);
  LocalAbelian loc;
  loc.n = static_cast<int>(members.size());
  loc.table.resize(static_cast<size_t>(loc.n) * loc.n);
  for (int i = 0; i < loc.n; ++i)
    for (int j = 0; j < loc.n; ++j) {
      int s = g.add(members[i], members[j]);
      if (idx[s] < 0) throw std::invalid_argument("not closed under the group operation");
      loc.table[static_cast<size_t>(i) * loc.n + j] = idx[s];
    }
  return loc;
}

}  // namespace

SectionSring restriction(const SchurPartition& p, const Subgroup& u) {
  const GroupSpec& g = p.group();
  if (!is_aset(p, u.members)) throw std::invalid_argument("not-asubgroup: U is not a block union");
  if (u.members.empty() || u.members[0] != 0)
    throw std::invalid_argument("restriction: U must contain the identity");

  LocalAbelian loc = local_group_on(g, u.members);
  AbelianDecomposition dec = decompose_abelian(loc);

  std::vector<int> local_of(g.order(), -1);
  for (size_t i = 0; i < u.members.size(); ++i) local_of[u.members[i]] = static_cast<int>(i);

  std::set<int> seen;
  std::vector<std::vector<int>> blocks;
  for (int m : u.members) {
    int b = p.block_of(m);
    if (!seen.insert(b).second) continue;
    std::vector<int> blk;
    for (int x : p.blocks()[b]) blk.push_back(dec.from_local[local_of[x]]);
    blocks.push_back(blk);
  }
  SectionSring out{SchurPartition(dec.group, std::move(blocks)), {}, {}};
  out.to_parent.resize(dec.group.order());
  for (int r = 0; r < dec.group.order(); ++r) out.to_parent[r] = u.members[dec.to_local[r]];
  out.from_parent.assign(g.order(), -1);
  for (int r = 0; r < dec.group.order(); ++r) out.from_parent[out.to_parent[r]] = r;
  return out;
}

SectionSring quotient(const SchurPartition& p, const Subgroup& l) {
  const GroupSpec& g = p.group();
  if (!is_aset(p, l.members)) throw std::invalid_argument("not-asubgroup: L is not a block union");

  // canonical coset representatives: minimal rank
  std::vector<int> rep(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (rep[x] != -1) continue;
    int mn = x;
    for (int m : l.members) mn = std::min(mn, g.add(x, m));
    for (int m : l.members) rep[g.add(x, m)] = mn;
  }
  for (int x = 0; x < g.order(); ++x)
    if (rep[x] == x) reps.push_back(x);
  std::vector<int> rep_idx(g.order(), -1);
  for (size_t i = 0; i < reps.size(); ++i) rep_idx[reps[i]] = static_cast<int>(i);

  LocalAbelian loc;
  loc.n = static_cast<int>(reps.size());
  loc.table.resize(static_cast<size_t>(loc.n) * loc.n);
  for (int i = 0; i < loc.n; ++i)
    for (int j = 0; j < loc.n; ++j)
      loc.table[static_cast<size_t>(i) * loc.n + j] = rep_idx[rep[g.add(reps[i], reps[j])]];
  AbelianDecomposition dec = decompose_abelian(loc);

  std::set<std::vector<int>> image_blocks;
  for (const auto& t : p.blocks()) {
    std::set<int> img;
    for (int x : t) img.insert(dec.from_local[rep_idx[rep[x]]]);
    image_blocks.insert(std::vector<int>(img.begin(), img.end()));
  }
  // exact duplicates were merged by the set; partial overlaps will fail the
  // partition check below (only possible when L is not an A-subgroup of a
  // valid S-ring).
  std::vector<std::vector<int>> blocks(image_blocks.begin(), image_blocks.end());
  SectionSring out{SchurPartition(dec.group, std::move(blocks)), {}, {}};
  out.to_parent.resize(dec.group.order());
  for (int r = 0; r < dec.group.order(); ++r) out.to_parent[r] = reps[dec.to_local[r]];
  out.from_parent.assign(g.order(), -1);
  for (int x = 0; x < g.order(); ++x) out.from_parent[x] = dec.from_local[rep_idx[rep[x]]];
  return out;
}

SchurPartition cyclotomic(const GroupSpec& g, const std::vector<GroupAutomorphism>& m) {
  // closure check
  std::set<std::vector<int>> images;
  for (const auto& a : m) images.insert(a.images);
  for (const auto& a : m)
    for (const auto& b : m)
      if (!images.count(compose(g, a, b).images))
        throw std::invalid_argument("cyclotomic: M not closed under composition");
  // orbit partition (union-find)
  std::vector<int> parent(g.order());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : m)
    for (int x = 0; x < g.order(); ++x) {
      int rx = find(x), ry = find(a.images[x]);
      if (rx != ry) parent[rx] = ry;
    }
  std::map<int, std::vector<int>> orbits;
  for (int x = 0; x < g.order(); ++x) orbits[find(x)].push_back(x);
  std::vector<std::vector<int>> blocks;
  for (auto& [root, orb] : orbits) blocks.push_back(orb);
  return SchurPartition(g, std::move(blocks));
}

std::pair<Subgroup, Subgroup> p1_q1(const SchurPartition& p, int q) {
  const GroupSpec& g = p.group();
  if (!is_simple_prime_divisor(g, q)) throw std::invalid_argument("not-simple-divisor");
  Subgroup pc = q_complement(g, q);
  Subgroup qs = q_subgroup(g, q);
  auto subs = asubgroups(p);

  // P1: join of all A-subgroups inside P (the largest one, H abelian)
  std::vector<int> join_gens;
  for (const auto& s : subs) {
    if (std::includes(pc.members.begin(), pc.members.end(), s.members.begin(), s.members.end()))
      join_gens.insert(join_gens.end(), s.members.begin(), s.members.end());
  }
  Subgroup p1 = span_of(g, join_gens);

  // Q1: intersection of all A-subgroups containing Q
  std::vector<int> inter;
  bool first = true;
  for (const auto& s : subs) {
    if (!std::includes(s.members.begin(), s.members.end(), qs.members.begin(), qs.members.end()))
      continue;
    if (first) {
      inter = s.members;
      first = false;
    } else {
      std::vector<int> tmp;
      std::set_intersection(inter.begin(), inter.end(), s.members.begin(), s.members.end(),
                            std::back_inserter(tmp));
      inter = std::move(tmp);
    }
  }
  Subgroup q1;
  q1.members = inter;
  for (int x : q1.members)
    if (x != 0) q1.generators.push_back(x);
  return {p1, q1};
}

bool is_primitive(const SchurPartition& p) {
  for (const auto& s : asubgroups(p))
    if (s.order() != 1 && s.order() != p.group().order()) return false;
  return true;
}

bool wielandt_check(const SchurPartition& p, int q) {
  if (!is_simple_prime_divisor(p.group(), q)) throw std::invalid_argument("not-simple-divisor");
  if (!is_primitive(p)) return true;
  return p.rank() <= 2 || is_prime_small(p.group().order());
}

namespace {

// is `set` a union of cosets of l? if so fill coset reps (canonical minimum)
bool coset_union(const GroupSpec& g, const std::vector<int>& set, const Subgroup& l,
                 std::vector<int>* reps_out) {
  std::set<int> s(set.begin(), set.end());
  std::set<int> reps;
  for (int x : set) {
    int mn = x;
    for (int m : l.members) {
      int y = g.add(x, m);
      if (!s.count(y)) return false;
      mn = std::min(mn, y);
    }
    reps.insert(mn);
  }
  if (reps_out) reps_out->assign(reps.begin(), reps.end());
  return true;
}

}  // namespace

std::vector<GwreathCertificate> detect_gwreath(const SchurPartition& p) {
  const GroupSpec& g = p.group();
  auto subs = asubgroups(p);
  std::vector<GwreathCertificate> out;
  for (const auto& l : subs) {
    for (const auto& u : subs) {
      if (!std::includes(u.members.begin(), u.members.end(), l.members.begin(), l.members.end()))
        continue;
      GwreathCertificate cert;
      cert.l = l;
      cert.u = u;
      cert.trivial = (l.order() == 1) || (u.order() == g.order());
      bool ok = true;
      for (size_t bi = 0; bi < p.blocks().size() && ok; ++bi) {
        const auto& t = p.blocks()[bi];
        if (u.contains(t[0])) continue;  // blocks never straddle an A-subgroup
        std::vector<int> reps;
        if (coset_union(g, t, l, &reps))
          cert.coset_witnesses.emplace_back(static_cast<int>(bi), std::move(reps));
        else
          ok = false;
      }
      if (ok) out.push_back(std::move(cert));
    }
  }
  return out;
}

std::optional<StarCertificate> detect_star(const SchurPartition& p, const Subgroup& k,
                                           const Subgroup& l, StarRefusal* refusal) {
  const GroupSpec& g = p.group();
  for (const Subgroup* s : {&k, &l})
    for (int a : s->members)
      for (int b : s->members)
        if (!s->contains(g.add(a, b)))
          throw std::invalid_argument("detect_star: K and L must be subgroups");
  if (!is_aset(p, k.members) || !is_aset(p, l.members))
    throw std::invalid_argument("detect_star: K and L must be A-subgroups");

  StarCertificate cert;
  cert.k = k;
  cert.l = l;
  cert.trivial = (k.order() == 1) || (k.order() == g.order());

  std::vector<int> dmembers;
  std::set_intersection(k.members.begin(), k.members.end(), l.members.begin(), l.members.end(),
                        std::back_inserter(dmembers));
  Subgroup d;
  d.members = dmembers;

  // (a) K n L normal in L: automatic, H abelian.
  // blocks inside each side
  std::vector<int> kblocks, lblocks;
  for (size_t bi = 0; bi < p.blocks().size(); ++bi) {
    int x = p.blocks()[bi][0];
    if (k.contains(x)) kblocks.push_back(static_cast<int>(bi));
    if (l.contains(x)) lblocks.push_back(static_cast<int>(bi));
  }

  for (size_t bi = 0; bi < p.blocks().size(); ++bi) {
    const auto& t = p.blocks()[bi];
    if (k.contains(t[0])) continue;
    if (l.contains(t[0])) {
      // (b) blocks in L\K are unions of (K n L)-cosets
      std::vector<int> reps;
      if (!coset_union(g, t, d, &reps)) {
        if (refusal) {
          refusal->reason = "block in L\\K is not a union of (K n L)-cosets";
          refusal->failing_block = t;
        }
        return std::nullopt;
      }
      cert.coset_witnesses.emplace_back(static_cast<int>(bi), std::move(reps));
      continue;
    }
    // (c) outside blocks factor as T = R+S with R <= K, S <= L A-sets.
    // Iterate candidate S over block unions on the smaller side; given S the
    // maximal R is forced: R = { x in K : x+S <= T }, and T = R'+S holds for
    // some A-set R' iff it holds for the union R' of blocks inside R.
    bool use_l_side = lblocks.size() <= kblocks.size();
    const std::vector<int>& side = use_l_side ? lblocks : kblocks;
    const Subgroup& other = use_l_side ? k : l;
    if (side.size() > 20) throw size_limit_error("detect_star: too many blocks on both sides");

    std::set<int> tset(t.begin(), t.end());
    bool found = false;
    for (std::uint64_t mask = 1; mask < (1ULL << side.size()) && !found; ++mask) {
      std::vector<int> s_fac;
      for (size_t i = 0; i < side.size(); ++i)
        if (mask & (1ULL << i))
          s_fac.insert(s_fac.end(), p.blocks()[side[i]].begin(), p.blocks()[side[i]].end());
      // maximal candidate on the other side
      std::vector<int> rmax;
      for (int x : other.members) {
        bool all = true;
        for (int s : s_fac)
          if (!tset.count(g.add(x, s))) {
            all = false;
            break;
          }
        if (all) rmax.push_back(x);
      }
      if (rmax.empty()) continue;
      // union of blocks fully inside rmax
      std::set<int> rset(rmax.begin(), rmax.end());
      std::vector<int> r_fac;
      for (int bj : (use_l_side ? kblocks : lblocks)) {
        bool all = true;
        for (int x : p.blocks()[bj])
          if (!rset.count(x)) {
            all = false;
            break;
          }
        if (all) r_fac.insert(r_fac.end(), p.blocks()[bj].begin(), p.blocks()[bj].end());
      }
      if (r_fac.empty()) continue;
      std::sort(r_fac.begin(), r_fac.end());
      std::sort(s_fac.begin(), s_fac.end());
      std::vector<int> prod = add_sets(g, r_fac, s_fac);
      std::vector<int> tsorted = t;
      std::sort(tsorted.begin(), tsorted.end());
      if (prod == tsorted) {
        StarFactorization f;
        f.block = static_cast<int>(bi);
        f.r = use_l_side ? r_fac : s_fac;
        f.s = use_l_side ? s_fac : r_fac;
        cert.factorizations.push_back(std::move(f));
        found = true;
      }
    }
    if (!found) {
      if (refusal) {
        refusal->reason = "outside block admits no T = R+S factorization into A-sets";
        refusal->failing_block = t;
      }
      return std::nullopt;
    }
  }
  return cert;
}

std::optional<StarCertificate> detect_star_scan(const SchurPartition& p, int q) {
  auto subs = asubgroups(p);
  Subgroup qs = q_subgroup(p.group(), q);
  std::vector<Subgroup> ks = subs, ls;
  std::sort(ks.begin(), ks.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() > b.order();
    return a.members < b.members;
  });
  for (const auto& s : subs)
    if (std::includes(s.members.begin(), s.members.end(), qs.members.begin(), qs.members.end()))
      ls.push_back(s);
  for (const auto& k : ks)
    for (const auto& l : ls) {
      auto cert = detect_star(p, k, l);
      if (cert && !cert->trivial) return cert;
    }
  return std::nullopt;
}

bool reverify(const SchurPartition& p, const GwreathCertificate& c) {
  const GroupSpec& g = p.group();
  if (!is_aset(p, c.l.members) || !is_aset(p, c.u.members)) return false;
  std::set<int> witnessed;
  for (const auto& [bi, reps] : c.coset_witnesses) {
    witnessed.insert(bi);
    std::set<int> rebuilt;
    for (int r : reps)
      for (int m : c.l.members) rebuilt.insert(g.add(r, m));
    std::set<int> blk(p.blocks()[bi].begin(), p.blocks()[bi].end());
    if (rebuilt != blk) return false;
  }
  for (size_t bi = 0; bi < p.blocks().size(); ++bi)
    if (!c.u.contains(p.blocks()[bi][0]) && !witnessed.count(static_cast<int>(bi))) return false;
  return true;
}

bool reverify(const SchurPartition& p, const StarCertificate& c) {
  const GroupSpec& g = p.group();
  if (!is_aset(p, c.k.members) || !is_aset(p, c.l.members)) return false;
  std::vector<int> d;
  std::set_intersection(c.k.members.begin(), c.k.members.end(), c.l.members.begin(),
                        c.l.members.end(), std::back_inserter(d));
  std::set<int> covered;
  for (const auto& [bi, reps] : c.coset_witnesses) {
    covered.insert(bi);
    std::set<int> rebuilt;
    for (int r : reps)
      for (int m : d) rebuilt.insert(g.add(r, m));
    std::set<int> blk(p.blocks()[bi].begin(), p.blocks()[bi].end());
    if (rebuilt != blk) return false;
  }
  for (const auto& f : c.factorizations) {
    covered.insert(f.block);
    if (!is_aset(p, f.r) || !is_aset(p, f.s)) return false;
    for (int x : f.r)
      if (!c.k.contains(x)) return false;
    for (int x : f.s)
      if (!c.l.contains(x)) return false;
    std::vector<int> prod = add_sets(g, f.r, f.s);
    std::vector<int> blk = p.blocks()[f.block];
    std::sort(blk.begin(), blk.end());
    if (prod != blk) return false;
  }
  for (size_t bi = 0; bi < p.blocks().size(); ++bi) {
    int x = p.blocks()[bi][0];
    if (!c.k.contains(x) && !covered.count(static_cast<int>(bi))) return false;
  }
  return true;
}

TrichotomyResult trichotomy_classify(const SchurPartition& p, int q, const std::vector<int>& t) {
  const GroupSpec& g = p.group();
  if (!is_simple_prime_divisor(g, q)) throw std::invalid_argument("not-simple-divisor");

  std::vector<int> ts = t;
  std::sort(ts.begin(), ts.end());
  for (const auto& a : mq_automorphisms(g, q)) {
    std::vector<int> img;
    for (int x : ts) img.push_back(a.images[x]);
    std::sort(img.begin(), img.end());
    if (img != ts)
      throw std::invalid_argument("precondition-violation: block is not M_q-invariant");
  }

  Subgroup qs = q_subgroup(g, q);
  std::set<int> tset(ts.begin(), ts.end());
  std::set<int> squo;  // T_{q'}
  for (int x : ts) squo.insert(decompose_q(g, x, q).first);

  TrichotomyResult res;
  for (int s : squo) {
    // R_s = s^{-1} T n Q
    std::vector<int> rs;
    for (int m : qs.members)
      if (tset.count(g.add(s, m))) rs.push_back(m);
    if (rs.size() == 1 && rs[0] == 0)
      res.s1.push_back(s);
    else if (rs.size() == qs.members.size())
      res.s0.push_back(s);
    else if (rs.size() == qs.members.size() - 1 &&
             std::find(rs.begin(), rs.end(), 0) == rs.end())
      res.sm1.push_back(s);
    else {
      res.refutation = "R_s not in {{1}, Q#, Q} for s=" + std::to_string(s);
      return res;
    }
  }

  auto [p1, q1] = p1_q1(p, q);
  std::set<int> p1set(p1.members.begin(), p1.members.end());

  if (!res.s1.empty()) {
    res.tag = 'a';
    if (!res.sm1.empty() || !res.s0.empty())
      res.refutation = "case (a): S_{-1} or S_0 nonempty alongside S_1";
    else
      for (int x : ts)
        if (!p1set.count(x)) {
          res.refutation = "case (a): T not contained in P1";
          break;
        }
  } else if (!res.sm1.empty()) {
    res.tag = 'b';
    for (int x : res.sm1)
      if (!p1set.count(x)) {
        res.refutation = "case (b): S_{-1} not contained in P1";
        break;
      }
    if (!res.refutation) {
      std::vector<int> q1mp1;
      for (int x : q1.members)
        if (!p1set.count(x)) q1mp1.push_back(x);
      std::vector<int> prod = add_sets(g, res.sm1, q1mp1);
      if (prod != ts) res.refutation = "case (b): T != S_{-1}(Q1 \\ P1)";
    }
  } else {
    res.tag = 'c';
    std::vector<int> prod = add_sets(g, q1.members, ts);
    if (prod != ts) res.refutation = "case (c): Q1 T != T";
  }
  return res;
}

}  // namespace sring
