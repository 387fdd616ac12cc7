#include "sring/perm.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sring {

bool Permutation::is_identity() const {
  for (int i = 0; i < degree(); ++i)
    if (img[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation r(degree());
  for (int i = 0; i < degree(); ++i) r.img[img[i]] = i;
  return r;
}

long long Permutation::order() const {
  std::vector<char> seen(degree(), 0);
  long long ord = 1;
  for (int i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    long long len = 0;
    int x = i;
    while (!seen[x]) {
      seen[x] = 1;
      x = img[x];
      ++len;
    }
    ord = lcm_ll(ord, len);
  }
  return ord;
}

int Permutation::first_moved() const {
  for (int i = 0; i < degree(); ++i)
    if (img[i] != i) return i;
  return -1;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation r(a.degree());
  for (int i = 0; i < a.degree(); ++i) r.img[i] = a.img[b.img[i]];
  return r;
}

Permutation conjugate(const Permutation& a, const Permutation& y) {
  return compose(y.inverse(), compose(a, y));
}

// ---------------------------------------------------------------- PermGroup

PermGroup PermGroup::trivial(int degree) {
  PermGroup g;
  g.degree_ = degree;
  return g;
}

PermGroup PermGroup::from_generators(int degree, const std::vector<Permutation>& gens,
                                     const std::vector<int>& base_hint) {
  PermGroup g;
  g.degree_ = degree;
  for (int b : base_hint)
    if (b >= 0 && b < degree &&
        std::find(g.base_.begin(), g.base_.end(), b) == g.base_.end())
      g.base_.push_back(b);
  std::set<std::vector<int>> seen;
  for (const auto& p : gens) {
    if (p.degree() != degree) throw std::invalid_argument("generator degree mismatch");
    if (p.is_identity()) continue;
    if (seen.insert(p.img).second) g.gens_.push_back(p);
  }
  g.strong_ = g.gens_;
  g.schreier_sims();
  return g;
}

void PermGroup::rebuild_level(int l) {
  Level& lev = chain_[l];
  lev.gens.clear();
  for (const auto& s : strong_) {
    bool fixes = true;
    for (int i = 0; i < l; ++i)
      if (s.img[chain_[i].point] != chain_[i].point) {
        fixes = false;
        break;
      }
    if (fixes) lev.gens.push_back(s);
  }
  lev.orbit.clear();
  lev.trans.assign(degree_, std::nullopt);
  lev.trans[lev.point] = Permutation(degree_);
  lev.orbit.push_back(lev.point);
  for (size_t qi = 0; qi < lev.orbit.size(); ++qi) {
    int v = lev.orbit[qi];
    for (const auto& s : lev.gens) {
      int w = s.img[v];
      if (!lev.trans[w]) {
        lev.trans[w] = compose(s, *lev.trans[v]);
        lev.orbit.push_back(w);
      }
    }
  }
}

std::pair<Permutation, int> PermGroup::sift(const Permutation& p, int from) const {
  Permutation h = p;
  for (int l = from; l < static_cast<int>(chain_.size()); ++l) {
    int v = h.img[chain_[l].point];
    if (v == chain_[l].point) continue;
    if (!chain_[l].trans[v]) return {h, l};
    h = compose(chain_[l].trans[v]->inverse(), h);
  }
  return {h, static_cast<int>(chain_.size())};
}

void PermGroup::schreier_sims() {
  // make sure every strong generator moves some base point
  auto ensure_base = [&](const Permutation& p) {
    for (int b : base_)
      if (p.img[b] != b) return;
    int m = p.first_moved();
    if (m >= 0) base_.push_back(m);
  };
  for (const auto& s : strong_) ensure_base(s);
  chain_.clear();
  for (int b : base_) {
    Level lev;
    lev.point = b;
    chain_.push_back(std::move(lev));
  }
  for (int l = 0; l < static_cast<int>(chain_.size()); ++l) rebuild_level(l);
  if (chain_.empty()) return;

  // chain_ may grow (and reallocate) when a residue extends the base, so
  // all level state is re-indexed through chain_[l] rather than held by
  // reference across mutations
  int l = static_cast<int>(chain_.size()) - 1;
  while (l >= 0) {
    rebuild_level(l);
    bool clean = true;
    for (size_t oi = 0; clean && oi < chain_[l].orbit.size(); ++oi) {
      int v = chain_[l].orbit[oi];
      for (size_t si = 0; clean && si < chain_[l].gens.size(); ++si) {
        const Permutation s = chain_[l].gens[si];
        int w = s.img[v];
        Permutation schreier =
            compose(chain_[l].trans[w]->inverse(), compose(s, *chain_[l].trans[v]));
        if (schreier.is_identity()) continue;
        auto [res, mu] = sift(schreier, l + 1);
        if (res.is_identity()) continue;
        // new strong generator fixing base[0..mu-1]
        if (mu == static_cast<int>(chain_.size())) {
          ensure_base(res);
          while (chain_.size() < base_.size()) {
            Level nl;
            nl.point = base_[chain_.size()];
            chain_.push_back(std::move(nl));
          }
        }
        strong_.push_back(res);
        for (int i = l + 1; i < static_cast<int>(chain_.size()); ++i) rebuild_level(i);
        l = std::min(mu, static_cast<int>(chain_.size()) - 1);
        clean = false;
      }
    }
    if (clean) --l;
  }
}

PermGroup PermGroup::symmetric(int degree) {
  PermGroup g;
  g.degree_ = degree;
  if (degree <= 1) return g;
  for (int i = 0; i + 1 < degree; ++i) g.base_.push_back(i);
  // strong generators: all transpositions (i j); level l keeps those with
  // both points >= l, which generate Sym({l..n-1})
  for (int i = 0; i + 1 < degree; ++i)
    for (int j = i + 1; j < degree; ++j) {
      Permutation t(degree);
      std::swap(t.img[i], t.img[j]);
      g.strong_.push_back(t);
    }
  Permutation c(degree);  // an n-cycle and a transposition as the public generators
  for (int i = 0; i < degree; ++i) c.img[i] = (i + 1) % degree;
  Permutation t(degree);
  std::swap(t.img[0], t.img[1]);
  g.gens_ = degree == 2 ? std::vector<Permutation>{t} : std::vector<Permutation>{c, t};
  g.chain_.resize(g.base_.size());
  for (size_t l = 0; l < g.base_.size(); ++l) g.chain_[l].point = g.base_[l];
  for (int l = 0; l < static_cast<int>(g.chain_.size()); ++l) g.rebuild_level(l);
  return g;
}

BigUnsigned PermGroup::order() const {
  BigUnsigned n(1);
  for (const auto& lev : chain_) n.mul_small(lev.orbit.size());
  return n;
}

bool PermGroup::order_is_factorial() const { return order() == factorial_big(degree_); }

bool PermGroup::contains(const Permutation& p) const {
  if (p.degree() != degree_) return false;
  auto [res, lev] = sift(p, 0);
  return res.is_identity();
}

bool PermGroup::contains_all(const std::vector<Permutation>& ps) const {
  for (const auto& p : ps)
    if (!contains(p)) return false;
  return true;
}

std::vector<Permutation> PermGroup::stabilizer_gens(int prefix_len) const {
  std::vector<Permutation> out;
  for (const auto& s : strong_) {
    bool fixes = true;
    for (int i = 0; i < prefix_len && i < static_cast<int>(chain_.size()); ++i)
      if (s.img[chain_[i].point] != chain_[i].point) {
        fixes = false;
        break;
      }
    if (fixes) out.push_back(s);
  }
  return out;
}

std::vector<Permutation> PermGroup::elements(std::uint64_t bound) const {
  BigUnsigned ord = order();
  if (!ord.fits_u64() || ord.as_u64() > bound)
    throw size_limit_error("element enumeration: group order " + ord.str() + " exceeds bound");
  std::vector<Permutation> elems{Permutation(degree_)};
  for (int l = static_cast<int>(chain_.size()) - 1; l >= 0; --l) {
    std::vector<Permutation> next;
    next.reserve(elems.size() * chain_[l].orbit.size());
    for (int v : chain_[l].orbit)
      for (const auto& e : elems) next.push_back(compose(*chain_[l].trans[v], e));
    elems = std::move(next);
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool PermGroup::is_transitive() const {
  if (degree_ == 0) return true;
  std::vector<char> seen(degree_, 0);
  std::vector<int> todo{0};
  seen[0] = 1;
  int count = 1;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (const auto& gen : gens_) {
      int w = gen.img[v];
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        todo.push_back(w);
      }
    }
  }
  return count == degree_;
}

BigUnsigned factorial_big(int n) {
  BigUnsigned f(1);
  for (int i = 2; i <= n; ++i) f.mul_small(static_cast<std::uint64_t>(i));
  return f;
}

// ------------------------------------------------------------- ColorMatrix

std::string ColorMatrix::dump() const {
  std::ostringstream os;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) os << " ";
      os << at(i, j);
    }
    os << "\n";
  }
  return os.str();
}

ColorMatrix scheme(const SchurPartition& p) {
  const GroupSpec& g = p.group();
  ColorMatrix c;
  c.n = g.order();
  c.num_colors = p.rank();
  c.cells.resize(static_cast<size_t>(c.n) * c.n);
  for (int x = 0; x < c.n; ++x)
    for (int y = 0; y < c.n; ++y)
      c.cells[static_cast<size_t>(x) * c.n + y] = p.block_of(g.sub(y, x));
  return c;
}

ColorMatrix colored_cayley_matrix(const GroupSpec& g,
                                  const std::vector<std::vector<int>>& connection_sets) {
  return scheme(seed_atoms(g, connection_sets));
}

bool is_color_automorphism(const ColorMatrix& c, const Permutation& p) {
  if (p.degree() != c.n) return false;
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j)
      if (c.at(p.img[i], p.img[j]) != c.at(i, j)) return false;
  return true;
}

Permutation translation(const GroupSpec& g, int t) {
  Permutation p(g.order());
  for (int x = 0; x < g.order(); ++x) p.img[x] = g.add(x, t);
  return p;
}

PermGroup regular_representation(const GroupSpec& g) {
  std::vector<Permutation> gens;
  size_t k = g.factors().size();
  for (size_t i = 0; i < k; ++i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    gens.push_back(translation(g, g.rank_of(e)));
  }
  return PermGroup::from_generators(g.order(), gens, {0});
}

// ------------------------------------------------- scheme automorphism search

namespace {

using Cells = std::vector<std::vector<int>>;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
  bool same(int a, int b) { return find(a) == find(b); }
};

// Iterated color-degree refinement. Appends one event hash per cell per
// round; when `expected` is given, compares against it and bails out on the
// first mismatch (isomorphism-invariant pruning).
bool refine_to_stable(const ColorMatrix& c, Cells& cells, std::vector<std::uint64_t>& trace,
                      const std::vector<std::uint64_t>* expected, size_t* pos) {
  const int n = c.n;
  std::vector<std::uint64_t> sig(n);
  auto emit = [&](std::uint64_t ev) {
    trace.push_back(ev);
    if (expected) {
      if (*pos >= expected->size() || (*expected)[*pos] != ev) return false;
      ++*pos;
    }
    return true;
  };
  for (;;) {
    // vertex signatures against the current cells
    std::fill(sig.begin(), sig.end(), 0x5bd1e995u);
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      for (int v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (int w : cells[ci]) {
          acc += hash_mix(static_cast<std::uint64_t>(c.at(v, w)) * 2 + 0);
          acc += hash_mix(static_cast<std::uint64_t>(c.at(w, v)) * 2 + 1) * 0x100000001b3ULL;
        }
        hash_combine(sig[v], acc ^ hash_mix(ci));
      }
    }
    bool split = false;
    Cells next;
    next.reserve(cells.size());
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      std::map<std::uint64_t, std::vector<int>> frag;
      for (int v : cells[ci]) frag[sig[v]].push_back(v);
      std::uint64_t ev = hash_mix(ci * 2654435761u);
      hash_combine(ev, frag.size());
      for (auto& [s, part] : frag) {
        hash_combine(ev, s);
        hash_combine(ev, part.size());
      }
      if (!emit(ev)) return false;
      if (frag.size() > 1) split = true;
      for (auto& [s, part] : frag) next.push_back(std::move(part));
    }
    cells = std::move(next);
    if (!split) break;
  }
  if (!emit(hash_mix(0xfeedULL) ^ hash_mix(cells.size()))) return false;
  return true;
}

bool indiv_refine(const ColorMatrix& c, Cells cells, int cellpos, int v, Cells& out,
                  std::vector<std::uint64_t>& trace, const std::vector<std::uint64_t>* expected) {
  auto& cell = cells[cellpos];
  std::vector<int> rest;
  for (int x : cell)
    if (x != v) rest.push_back(x);
  Cells next;
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    if (i == cellpos) {
      next.push_back({v});
      next.push_back(rest);
    } else {
      next.push_back(cells[i]);
    }
  }
  size_t pos = 0;
  trace.clear();
  if (!refine_to_stable(c, next, trace, expected, &pos)) return false;
  if (expected && pos != expected->size()) return false;
  out = std::move(next);
  return true;
}

struct RBaseLevel {
  int cellpos = 0;
  int beta = 0;
  std::vector<std::uint64_t> trace;
};

struct AutSearch {
  const ColorMatrix& c;
  Cells root_cells;
  std::vector<RBaseLevel> levels;
  std::vector<int> leaf_order;  // rbase leaf: position -> vertex

  std::vector<Permutation> found;
  std::vector<UnionFind> uf;  // per spine level

  explicit AutSearch(const ColorMatrix& cm) : c(cm) {}

  void build_rbase() {
    root_cells = {std::vector<int>(c.n)};
    std::iota(root_cells[0].begin(), root_cells[0].end(), 0);
    std::vector<std::uint64_t> trace;
    size_t unused = 0;
    refine_to_stable(c, root_cells, trace, nullptr, &unused);
    Cells cur = root_cells;
    for (;;) {
      int pos = -1;
      for (size_t i = 0; i < cur.size(); ++i)
        if (cur[i].size() > 1) {
          pos = static_cast<int>(i);
          break;
        }
      if (pos < 0) break;
      RBaseLevel lev;
      lev.cellpos = pos;
      lev.beta = cur[pos][0];
      Cells nxt;
      indiv_refine(c, cur, pos, lev.beta, nxt, lev.trace, nullptr);
      levels.push_back(lev);
      cur = std::move(nxt);
    }
    for (auto& cell : cur) leaf_order.push_back(cell[0]);
    uf.assign(levels.size(), UnionFind(c.n));
  }

  void record(const Permutation& g) {
    found.push_back(g);
    size_t maxlev = 0;
    while (maxlev < levels.size() && g.img[levels[maxlev].beta] == levels[maxlev].beta) ++maxlev;
    for (size_t l = 0; l <= maxlev && l < levels.size(); ++l)
      for (int x = 0; x < c.n; ++x) uf[l].unite(x, g.img[x]);
  }

  std::optional<Permutation> extract_leaf(const Cells& cells) const {
    Permutation g(c.n);
    for (size_t j = 0; j < cells.size(); ++j) g.img[leaf_order[j]] = cells[j][0];
    if (g.is_identity()) return std::nullopt;
    if (!is_color_automorphism(c, g)) return std::nullopt;
    return g;
  }

  std::optional<Permutation> offspine(size_t level, const Cells& cells) {
    if (level == levels.size()) return extract_leaf(cells);
    const RBaseLevel& lev = levels[level];
    std::vector<int> cand = cells[lev.cellpos];
    for (int v : cand) {
      Cells next;
      std::vector<std::uint64_t> trace;
      if (!indiv_refine(c, cells, lev.cellpos, v, next, trace, &lev.trace)) continue;
      if (auto r = offspine(level + 1, next)) return r;
    }
    return std::nullopt;
  }

  void spine(size_t level, const Cells& cells) {
    if (level == levels.size()) return;  // identity leaf
    const RBaseLevel& lev = levels[level];
    std::vector<int> cand = cells[lev.cellpos];
    {
      Cells next;
      std::vector<std::uint64_t> trace;
      // the spine replays the rbase construction, so the trace always matches
      if (!indiv_refine(c, cells, lev.cellpos, lev.beta, next, trace, &lev.trace))
        throw std::logic_error("aut_scheme: spine trace diverged from the rbase");
      spine(level + 1, next);
    }
    std::vector<int> processed{lev.beta};
    for (int v : cand) {
      if (v == lev.beta) continue;
      bool skip = false;
      for (int w : processed)
        if (uf[level].same(v, w)) {
          skip = true;
          break;
        }
      if (skip) continue;
      Cells next;
      std::vector<std::uint64_t> trace;
      if (indiv_refine(c, cells, lev.cellpos, v, next, trace, &lev.trace)) {
        if (auto g = offspine(level + 1, next)) record(*g);
      }
      processed.push_back(v);
    }
  }
};

}  // namespace

PermGroup aut_scheme(const ColorMatrix& c, int max_n, const std::vector<Permutation>& verified_seeds) {
  if (c.n > max_n)
    throw size_limit_error("aut_scheme: degree " + std::to_string(c.n) + " exceeds bound " +
                           std::to_string(max_n));
  if (c.n <= 1) return PermGroup::trivial(std::max(c.n, 0));

  // rank-two fast path: constant diagonal, constant off-diagonal
  bool rank2 = true;
  for (int i = 0; i < c.n && rank2; ++i)
    for (int j = 0; j < c.n; ++j)
      if ((i == j && c.at(i, j) != c.at(0, 0)) || (i != j && c.at(i, j) != c.at(0, 1))) {
        rank2 = false;
        break;
      }
  if (rank2) return PermGroup::symmetric(c.n);

  AutSearch search(c);
  search.build_rbase();
  for (const auto& s : verified_seeds)
    if (!s.is_identity() && is_color_automorphism(c, s)) search.record(s);
  search.spine(0, search.root_cells);

  std::vector<Permutation> gens = search.found;
  if (gens.empty()) gens.push_back(Permutation(c.n));
  return PermGroup::from_generators(c.n, gens, {0});
}

SchurPartition transitivity_module(const PermGroup& g, const GroupSpec& h) {
  if (g.degree() != h.order())
    throw std::invalid_argument("transitivity_module: degree mismatch");
  PermGroup work = g;
  if (g.base().empty() || g.base()[0] != 0)
    work = PermGroup::from_generators(g.degree(), g.generators(), {0});
  // G must contain all right translations
  size_t k = h.factors().size();
  for (size_t i = 0; i < k; ++i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    if (!work.contains(translation(h, h.rank_of(e))))
      throw std::invalid_argument("not-overgroup: G does not contain the regular representation");
  }
  auto stab = work.stabilizer_gens(1);
  UnionFind ufind(h.order());
  for (const auto& s : stab)
    for (int x = 0; x < h.order(); ++x) ufind.unite(x, s.img[x]);
  std::map<int, std::vector<int>> orbits;
  for (int x = 0; x < h.order(); ++x) orbits[ufind.find(x)].push_back(x);
  std::vector<std::vector<int>> blocks;
  for (auto& [root, orb] : orbits) blocks.push_back(orb);
  return SchurPartition(h, std::move(blocks));
}

// ------------------------------------------------------- regular subgroups

namespace {

struct TupleSearch {
  const GroupSpec& h;
  int n;
  std::vector<std::vector<Permutation>> candidates;  // per factor slot
  std::vector<size_t> slot_order;                    // visit slots with few candidates first
  std::vector<Permutation> chosen;                   // in visit order
  // box: products of the chosen prefix
  std::vector<Permutation> box;

  std::function<void(const std::vector<Permutation>&, const std::vector<Permutation>&)> on_found;

  explicit TupleSearch(const GroupSpec& hh) : h(hh), n(hh.order()) {}

  void run() {
    slot_order.resize(h.factors().size());
    std::iota(slot_order.begin(), slot_order.end(), 0);
    std::stable_sort(slot_order.begin(), slot_order.end(), [&](size_t a, size_t b) {
      return candidates[a].size() < candidates[b].size();
    });
    box.assign(1, Permutation(n));
    descend(0);
  }

  void descend(size_t pos) {
    if (pos == h.factors().size()) {
      if (static_cast<int>(box.size()) != n) return;
      std::vector<char> hit(n, 0);
      for (const auto& p : box) {
        if (hit[p.img[0]]) return;
        hit[p.img[0]] = 1;
      }
      // box is the full subgroup, regular by the distinct 0-images;
      // report generators back in factor order
      std::vector<Permutation> gens(h.factors().size(), Permutation(n));
      for (size_t i = 0; i < slot_order.size(); ++i) gens[slot_order[i]] = chosen[i];
      on_found(gens, box);
      return;
    }
    size_t slot = slot_order[pos];
    int d = h.factors()[slot];
    for (const auto& x : candidates[slot]) {
      bool ok = true;
      for (const auto& prev : chosen) {
        // commuting test with early exit
        for (int i = 0; i < n; ++i)
          if (prev.img[x.img[i]] != x.img[prev.img[i]]) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (!ok) continue;
      // extend the box by powers of x; all 0-images must stay distinct
      size_t old_size = box.size();
      std::vector<char> seen0(n, 0);
      for (const auto& p : box) seen0[p.img[0]] = 1;
      Permutation xp = x;
      bool distinct = true;
      for (int e = 1; e < d && distinct; ++e) {
        for (size_t i = 0; i < old_size; ++i) {
          Permutation prod = compose(xp, box[i]);
          if (seen0[prod.img[0]]) {
            distinct = false;
            break;
          }
          seen0[prod.img[0]] = 1;
          box.push_back(std::move(prod));
        }
        if (e + 1 < d) xp = compose(xp, x);
      }
      // canonical-choice prune: if a smaller candidate y extends the old box
      // to the same subgroup, the y-branch (visited earlier) already covers
      // this state
      if (distinct) {
        for (size_t bi = old_size; bi < box.size() && distinct; ++bi) {
          const Permutation& y = box[bi];
          if (!(y < x)) continue;
          bool fpf = true;
          for (int pt = 0; pt < n; ++pt)
            if (y.img[pt] == pt) {
              fpf = false;
              break;
            }
          if (!fpf || y.order() != d) continue;
          // same extension iff no proper power of y already lies in the old box
          bool fresh = true;
          Permutation yp = y;
          for (int e = 1; e + 1 < d && fresh; ++e) {
            yp = compose(yp, y);
            for (size_t i = 0; i < old_size; ++i)
              if (box[i] == yp) {
                fresh = false;
                break;
              }
          }
          if (fresh) distinct = false;  // prune
        }
      }
      if (distinct) {
        chosen.push_back(x);
        descend(pos + 1);
        chosen.pop_back();
      }
      box.resize(old_size);
    }
  }
};

}  // namespace

std::vector<RegularSubgroup> regular_subgroups(const PermGroup& g, const GroupSpec& h,
                                               std::uint64_t enum_bound) {
  const int n = h.order();
  if (g.degree() != n) throw std::invalid_argument("regular_subgroups: degree mismatch");
  std::vector<Permutation> elems = g.elements(enum_bound);

  TupleSearch search(h);
  search.candidates.resize(h.factors().size());
  for (size_t i = 0; i < h.factors().size(); ++i) {
    for (const auto& p : elems) {
      if (p.order() != h.factors()[i]) continue;
      // every non-identity element of a regular group is fixed-point-free
      bool fpf = true;
      for (int x = 0; x < n; ++x)
        if (p.img[x] == x) {
          fpf = false;
          break;
        }
      if (fpf) search.candidates[i].push_back(p);
    }
  }

  std::map<std::vector<std::vector<int>>, RegularSubgroup> dedup;
  search.on_found = [&](const std::vector<Permutation>& gens,
                        const std::vector<Permutation>& elements) {
    std::vector<std::vector<int>> key;
    key.reserve(elements.size());
    for (const auto& p : elements) key.push_back(p.img);
    std::sort(key.begin(), key.end());
    if (dedup.count(key)) return;
    RegularSubgroup r;
    r.gens = gens;
    r.elements = elements;
    std::sort(r.elements.begin(), r.elements.end());
    dedup.emplace(std::move(key), std::move(r));
  };
  search.run();

  std::vector<RegularSubgroup> out;
  for (auto& [key, r] : dedup) out.push_back(std::move(r));
  return out;
}

// --------------------------------------------------------- conjugacy search

std::vector<Permutation> group_closure(const std::vector<Permutation>& gens, int degree,
                                       std::size_t bound) {
  std::set<Permutation> seen;
  seen.insert(Permutation(degree));
  std::vector<Permutation> todo{Permutation(degree)};
  while (!todo.empty()) {
    Permutation cur = todo.back();
    todo.pop_back();
    for (const auto& gen : gens) {
      Permutation nxt = compose(gen, cur);
      if (seen.size() > bound) throw size_limit_error("group_closure: bound exceeded");
      if (seen.insert(nxt).second) todo.push_back(nxt);
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

// all generating tuples of the regular abelian group R matching H's factor
// orders, each defining an isomorphism H -> R
struct IsoEnumerator {
  const GroupSpec& h;
  const std::vector<Permutation>& relems;
  int n;
  std::vector<std::vector<const Permutation*>> cand;

  IsoEnumerator(const GroupSpec& hh, const std::vector<Permutation>& re)
      : h(hh), relems(re), n(hh.order()) {
    cand.resize(h.factors().size());
    for (size_t i = 0; i < h.factors().size(); ++i)
      for (const auto& p : relems)
        if (p.order() == h.factors()[i]) cand[i].push_back(&p);
  }

  // visit(box) where box[rank] = element of R corresponding to the H-rank;
  // return true from visit to stop early.
  bool enumerate(const std::function<bool(const std::vector<Permutation>&)>& visit) {
    std::vector<Permutation> box{Permutation(n)};
    std::vector<const Permutation*> chosen;
    return descend(0, box, chosen, visit);
  }

 private:
  bool descend(size_t slot, std::vector<Permutation>& box, std::vector<const Permutation*>& chosen,
               const std::function<bool(const std::vector<Permutation>&)>& visit) {
    if (slot == h.factors().size()) {
      if (static_cast<int>(box.size()) != n) return false;
      std::set<std::vector<int>> distinct;
      for (const auto& p : box) distinct.insert(p.img);
      if (static_cast<int>(distinct.size()) != n) return false;
      // reorder box to H-rank order: box is built factor-major in the same
      // mixed-radix order as GroupSpec ranks, so it already lines up.
      return visit(box);
    }
    int d = h.factors()[slot];
    for (const Permutation* x : cand[slot]) {
      size_t old_size = box.size();
      Permutation xp = *x;
      bool ok = true;
      for (int e = 1; e < d && ok; ++e) {
        for (size_t i = 0; i < old_size; ++i) box.push_back(compose(xp, box[i]));
        if (e + 1 < d) xp = compose(xp, *x);
      }
      if (ok) {
        chosen.push_back(x);
        if (descend(slot + 1, box, chosen, visit)) return true;
        chosen.pop_back();
      }
      box.resize(old_size);
    }
    return false;
  }
};

}  // namespace

ConjugationResult conjugate_into(const std::vector<Permutation>& a_gens, const PermGroup& b,
                                 const PermGroup& g, const GroupSpec& h,
                                 std::uint64_t enum_bound) {
  const int n = h.order();
  ConjugationResult out;
  std::vector<Permutation> a_elems = group_closure(a_gens, n, static_cast<size_t>(n) + 1);
  if (static_cast<int>(a_elems.size()) != n)
    throw std::invalid_argument("conjugate_into: A is not H-regular");

  // regular H-targets inside B
  std::vector<std::vector<Permutation>> targets;
  BigUnsigned border = b.order();
  if (border.fits_u64() && border.as_u64() == static_cast<std::uint64_t>(n)) {
    auto belems = b.elements(static_cast<std::uint64_t>(n));
    std::set<int> zero_images;
    for (const auto& p : belems) zero_images.insert(p.img[0]);
    if (static_cast<int>(zero_images.size()) == n) targets.push_back(belems);
  } else {
    for (auto& r : regular_subgroups(b, h, enum_bound)) targets.push_back(r.elements);
  }

  // H-box of A: one generating tuple is enough (iso freedom moves to the
  // target side)
  IsoEnumerator a_enum(h, a_elems);
  std::vector<Permutation> a_box;
  a_enum.enumerate([&](const std::vector<Permutation>& box) {
    a_box = box;
    return true;
  });
  if (a_box.empty()) throw std::invalid_argument("conjugate_into: A is not isomorphic to H");

  for (const auto& target : targets) {
    IsoEnumerator r_enum(h, target);
    bool stop = r_enum.enumerate([&](const std::vector<Permutation>& r_box) {
      // y(r_box[c](0)) = a_box[c](w0); require y in G, A^y <= B
      for (int w0 = 0; w0 < n; ++w0) {
        Permutation y(n);
        for (int cidx = 0; cidx < n; ++cidx) y.img[r_box[cidx].img[0]] = a_box[cidx].img[w0];
        if (!g.contains(y)) continue;
        bool all = true;
        for (const auto& a : a_gens)
          if (!b.contains(conjugate(a, y))) {
            all = false;
            break;
          }
        if (all) {
          out.conjugator = y;
          return true;
        }
      }
      return false;
    });
    if (stop) return out;
  }
  out.exhausted = true;
  return out;
}

std::optional<Permutation> brute_conjugacy_scan(const std::vector<Permutation>& a_gens,
                                                const PermGroup& b, const PermGroup& g,
                                                std::uint64_t enum_bound) {
  for (const auto& y : g.elements(enum_bound)) {
    bool all = true;
    for (const auto& a : a_gens)
      if (!b.contains(conjugate(a, y))) {
        all = false;
        break;
      }
    if (all) return y;
  }
  return std::nullopt;
}

}  // namespace sring
