#include "sring/catalog.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "sring/group_ring.hpp"
#include "sring/perm.hpp"

namespace sring {

SchurPartition iterated_wreath(const GroupSpec& g, const std::vector<Subgroup>& chain) {
  if (chain.size() < 2 || chain.front().order() != 1 || chain.back().order() != g.order())
    throw std::invalid_argument("iterated_wreath: chain must run from {e} to H");
  std::vector<std::vector<int>> blocks{{0}};
  for (size_t i = 1; i < chain.size(); ++i) {
    const Subgroup& inner = chain[i - 1];
    const Subgroup& outer = chain[i];
    std::set<int> seen;
    for (int x : outer.members) {
      if (x == 0 || inner.contains(x) || seen.count(x)) continue;
      std::vector<int> coset;
      for (int m : inner.members) {
        int y = g.add(x, m);
        coset.push_back(y);
        seen.insert(y);
      }
      std::sort(coset.begin(), coset.end());
      blocks.push_back(coset);
    }
  }
  return SchurPartition(g, std::move(blocks));
}

SchurPartition tensor_product(const GroupSpec& g, const Subgroup& a,
                              const std::vector<std::vector<int>>& a_blocks, const Subgroup& b,
                              const std::vector<std::vector<int>>& b_blocks) {
  if (static_cast<long long>(a.order()) * b.order() != g.order())
    throw std::invalid_argument("tensor_product: |A||B| != |H|");
  std::vector<std::vector<int>> blocks;
  for (const auto& s : a_blocks)
    for (const auto& t : b_blocks) {
      std::vector<int> sum;
      for (int x : s)
        for (int y : t) sum.push_back(g.add(x, y));
      std::sort(sum.begin(), sum.end());
      sum.erase(std::unique(sum.begin(), sum.end()), sum.end());
      blocks.push_back(std::move(sum));
    }
  return SchurPartition(g, std::move(blocks));
}

std::vector<GroupAutomorphism> b6_alpha_census(const GroupSpec& g, int p) {
  std::vector<GroupAutomorphism> out;
  for (const auto& phi : automorphism_group(g)) {
    int fixed = 0;
    for (int x = 0; x < g.order(); ++x)
      if (phi.images[x] == x) ++fixed;
    if (fixed != p) continue;
    // order p: phi^p = id, phi != id
    Permutation perm(phi.images);
    if (perm.order() == p) out.push_back(phi);
  }
  return out;
}

std::vector<CatalogEntry> build_catalog(int p) {
  if (p != 2 && p != 3) throw std::invalid_argument("build_catalog: p must be 2 or 3");
  GroupSpec g = GroupSpec::from_factors({p, p, p});
  int e1 = g.rank_of({1, 0, 0});
  int e2 = g.rank_of({0, 1, 0});
  int e3 = g.rank_of({0, 0, 1});
  Subgroup triv = span_of(g, {});
  Subgroup l1 = span_of(g, {e1});
  Subgroup l12 = span_of(g, {e1, e2});
  Subgroup full = span_of(g, {e1, e2, e3});
  Subgroup l3 = span_of(g, {e3});

  std::vector<CatalogEntry> out;
  out.push_back({"B1", discrete_partition(g), std::nullopt});
  out.push_back({"B2", iterated_wreath(g, {triv, l12, full}), std::nullopt});
  {
    // wreath structure on <e1,e2> in H coordinates, tensored with Z[<e3>]
    std::vector<std::vector<int>> ab{{0}};
    for (int x : l1.members)
      if (x != 0) ab.push_back({x});
    std::set<int> seen(l1.members.begin(), l1.members.end());
    for (int x : l12.members) {
      if (seen.count(x)) continue;
      std::vector<int> coset;
      for (int m : l1.members) {
        int y = g.add(x, m);
        coset.push_back(y);
        seen.insert(y);
      }
      std::sort(coset.begin(), coset.end());
      ab.push_back(std::move(coset));
    }
    std::vector<std::vector<int>> bb;
    for (int x : l3.members) bb.push_back({x});
    out.push_back({"B3", tensor_product(g, l12, ab, l3, bb), std::nullopt});
  }
  out.push_back({"B4", iterated_wreath(g, {triv, l1, full}), std::nullopt});
  out.push_back({"B5", iterated_wreath(g, {triv, l1, l12, full}), std::nullopt});

  auto alphas = b6_alpha_census(g, p);
  if (!alphas.empty()) {
    const GroupAutomorphism& alpha = alphas.front();
    std::vector<GroupAutomorphism> m{identity_automorphism(g)};
    GroupAutomorphism acc = alpha;
    while (!Permutation(acc.images).is_identity()) {
      m.push_back(acc);
      acc = compose(g, acc, alpha);
    }
    out.push_back({"B6", cyclotomic(g, m), alpha});
  }
  return out;
}

// --------------------------------------------------------- enumeration

namespace {

struct SringEnumerator {
  const GroupSpec& g;
  const EnumerationLimits& limits;
  int n;
  std::vector<long long> units;  // coprime multipliers (mod exponent)
  std::vector<int> assigned;     // rank -> block id or -1
  std::vector<std::vector<int>> blocks;
  std::map<std::pair<int, int>, RingElement> products;
  long long nodes = 0;
  std::vector<SchurPartition> results;

  SringEnumerator(const GroupSpec& gg, const EnumerationLimits& lim) : g(gg), limits(lim), n(gg.order()) {
    for (int m = 2; m < std::max(2, g.exponent()); ++m)
      if (gcd_ll(m, n) == 1) units.push_back(m);
    assigned.assign(n, -1);
    assigned[0] = 0;
    blocks.push_back({0});
  }

  void tick() {
    if (++nodes > limits.node_budget)
      throw size_limit_error("enumerate_srings: node budget exhausted");
  }

  bool set_compatible(const std::vector<int>& image) const {
    // image must be equal to an assigned block, or fully unassigned
    int first_block = assigned[image[0]];
    if (first_block < 0) {
      for (int x : image)
        if (assigned[x] >= 0) return false;
      return true;
    }
    std::vector<int> blk = blocks[first_block];
    std::vector<int> img = image;
    std::sort(img.begin(), img.end());
    return img == blk;
  }

  bool closure_ok_for_new(int new_id) {
    // products of all assigned pairs must have constant coefficients on
    // every assigned block; only pairs or regions involving new_id changed
    for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
      for (int j = i; j < static_cast<int>(blocks.size()); ++j) {
        auto key = std::make_pair(i, j);
        auto it = products.find(key);
        if (it == products.end())
          it = products
                   .emplace(key, multiply(simple_quantity(g, blocks[i]),
                                          simple_quantity(g, blocks[j])))
                   .first;
        const RingElement& prod = it->second;
        if (i == new_id || j == new_id) {
          // check constancy on all assigned blocks
          for (const auto& b : blocks) {
            coeff_t c0 = prod.coeff(b[0]);
            for (int x : b)
              if (prod.coeff(x) != c0) return false;
          }
        } else {
          // old product: check constancy on the new block only
          const auto& b = blocks[new_id];
          coeff_t c0 = prod.coeff(b[0]);
          for (int x : b)
            if (prod.coeff(x) != c0) return false;
        }
      }
    }
    return true;
  }

  void drop_products_for(int id) {
    for (auto it = products.begin(); it != products.end();)
      if (it->first.first >= id || it->first.second >= id)
        it = products.erase(it);
      else
        ++it;
  }

  int assign_block(std::vector<int> t) {
    int id = static_cast<int>(blocks.size());
    for (int x : t) assigned[x] = id;
    std::sort(t.begin(), t.end());
    blocks.push_back(std::move(t));
    return id;
  }

  void unassign_block(int id) {
    for (int x : blocks[id]) assigned[x] = -1;
    blocks.resize(id);
    drop_products_for(id);
  }

  // full leaf-level check for the candidate block of the smallest
  // unassigned element, then recurse
  void try_block(const std::vector<int>& t) {
    tick();
    std::vector<int> tinv;
    for (int x : t) tinv.push_back(g.inverse(x));
    std::sort(tinv.begin(), tinv.end());
    std::vector<int> ts = t;
    std::sort(ts.begin(), ts.end());

    bool self_inverse = (tinv == ts);
    if (!self_inverse) {
      // T^{-1} must be disjoint from T and fully unassigned
      for (int x : tinv)
        if (assigned[x] >= 0 || std::binary_search(ts.begin(), ts.end(), x)) return;
    }
    int id1 = assign_block(ts);
    int id2 = self_inverse ? -1 : assign_block(tinv);

    bool ok = true;
    // power-map compatibility for every assigned block
    for (int bid = 0; bid < static_cast<int>(blocks.size()) && ok; ++bid) {
      for (long long u : units) {
        std::vector<int> img;
        img.reserve(blocks[bid].size());
        for (int x : blocks[bid]) img.push_back(g.power(x, u));
        if (!set_compatible(img)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) ok = closure_ok_for_new(id1);
    if (ok && id2 >= 0) ok = closure_ok_for_new(id2);
    if (ok) recurse();

    if (id2 >= 0) unassign_block(id2);
    unassign_block(id1);
  }

  void recurse() {
    int m = -1;
    for (int x = 1; x < n; ++x)
      if (assigned[x] < 0) {
        m = x;
        break;
      }
    if (m < 0) {
      SchurPartition cand(g, blocks);
      if (validate(cand).ok) results.push_back(std::move(cand));
      return;
    }
    // The block T of m is grown jointly over {x, -x} pairs: either
    // -m lies in T (then T must be symmetric, pairs join as wholes) or it
    // does not (then T n -T = {} and each pair contributes at most one side,
    // the other being reserved for T^{-1}).
    int minv = g.inverse(m);
    std::vector<std::pair<int, int>> pairs;  // (x, -x) with x <= -x, both unassigned
    for (int x = m + 1; x < n; ++x) {
      if (assigned[x] >= 0 || x == minv) continue;  // m, -m are handled by the case split
      int xi = g.inverse(x);
      if (xi < x) continue;  // take each pair once
      if (assigned[xi] >= 0) continue;
      pairs.emplace_back(x, xi);
    }
    if (minv == m) {
      // m is an involution: T is automatically symmetric in m
      std::vector<int> current{m};
      grow_symmetric(pairs, 0, current);
    } else {
      if (assigned[minv] < 0) {
        std::vector<int> current{m, minv};
        std::sort(current.begin(), current.end());
        grow_symmetric(pairs, 0, current);
      }
      // -m outside T: T n -T = {} (skipping involutions, which would land
      // in both T and T^{-1})
      std::vector<int> current{m};
      grow_split(pairs, 0, current);
    }
  }

  // -m in T: T = -T, pairs enter as wholes
  void grow_symmetric(const std::vector<std::pair<int, int>>& pairs, size_t idx,
                      std::vector<int>& current) {
    if (idx == pairs.size()) {
      try_block(current);
      return;
    }
    tick();
    auto [x, xi] = pairs[idx];
    current.push_back(x);
    if (xi != x) current.push_back(xi);
    grow_symmetric(pairs, idx + 1, current);
    current.pop_back();
    if (xi != x) current.pop_back();
    grow_symmetric(pairs, idx + 1, current);
  }

  // -m outside T: at most one side of each pair, involutions excluded
  void grow_split(const std::vector<std::pair<int, int>>& pairs, size_t idx,
                  std::vector<int>& current) {
    if (idx == pairs.size()) {
      try_block(current);
      return;
    }
    tick();
    auto [x, xi] = pairs[idx];
    if (xi != x) {
      current.push_back(x);
      grow_split(pairs, idx + 1, current);
      current.back() = xi;
      grow_split(pairs, idx + 1, current);
      current.pop_back();
    }
    grow_split(pairs, idx + 1, current);
  }
};

}  // namespace

std::vector<SchurPartition> enumerate_srings(const GroupSpec& h, const EnumerationLimits& limits) {
  if (h.order() > limits.max_order)
    throw size_limit_error("enumerate_srings: order " + std::to_string(h.order()) +
                           " exceeds bound " + std::to_string(limits.max_order));
  SringEnumerator en(h, limits);
  en.recurse();
  std::sort(en.results.begin(), en.results.end(),
            [](const SchurPartition& a, const SchurPartition& b) {
              if (a.rank() != b.rank()) return a.rank() > b.rank();
              return a.canonical_key() < b.canonical_key();
            });
  en.results.erase(std::unique(en.results.begin(), en.results.end()), en.results.end());
  return en.results;
}

bool schurian_check(const SchurPartition& p, const CiLimits& limits) {
  if (p.group().order() > limits.max_order)
    throw size_limit_error("schurian_check: order exceeds bound");
  PermGroup hhat = regular_representation(p.group());
  PermGroup aut = aut_scheme(scheme(p), limits.max_order, hhat.generators());
  SchurPartition v = transitivity_module(aut, p.group());
  return v.blocks() == p.blocks();
}

std::optional<std::string> match_catalog(const SchurPartition& p,
                                         const std::vector<CatalogEntry>& catalog) {
  for (const auto& entry : catalog) {
    if (entry.partition.group() != p.group()) continue;
    if (entry.partition.rank() != p.rank()) continue;
    if (cayley_isomorphic(p, entry.partition)) return entry.label;
  }
  return std::nullopt;
}

}  // namespace sring
