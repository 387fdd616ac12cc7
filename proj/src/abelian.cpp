#include "sring/abelian.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace sring {

struct GroupSpec::Impl {
  std::vector<int> factors;
  int order = 1;
  int exponent = 1;
  std::vector<long long> weights;  // mixed-radix weights, last factor fastest
  std::vector<int> add_table;      // built when order <= kTableBound
  std::vector<int> neg_table;

  static constexpr int kTableBound = 512;

  explicit Impl(std::vector<int> f) : factors(std::move(f)) {
    long long ord = 1;
    for (int d : factors) {
      ord *= d;
      if (ord > (1LL << 30)) throw size_limit_error("group order too large");
      exponent = static_cast<int>(lcm_ll(exponent, d));
    }
    order = static_cast<int>(ord);
    weights.assign(factors.size(), 1);
    for (int i = static_cast<int>(factors.size()) - 2; i >= 0; --i)
      weights[i] = weights[i + 1] * factors[i + 1];
    if (order <= kTableBound) build_tables();
  }

  void build_tables() {
    add_table.resize(static_cast<size_t>(order) * order);
    neg_table.resize(order);
    std::vector<int> ea(factors.size()), eb(factors.size());
    for (int a = 0; a < order; ++a) {
      decode(a, ea);
      for (size_t i = 0; i < factors.size(); ++i)
        eb[i] = ea[i] == 0 ? 0 : factors[i] - ea[i];
      neg_table[a] = encode(eb);
      for (int b = 0; b < order; ++b) {
        decode(b, eb);
        int r = 0;
        for (size_t i = 0; i < factors.size(); ++i) {
          int s = ea[i] + eb[i];
          if (s >= factors[i]) s -= factors[i];
          r += static_cast<int>(weights[i]) * s;
        }
        add_table[static_cast<size_t>(a) * order + b] = r;
      }
    }
  }

  void decode(int rank, std::vector<int>& out) const {
    for (size_t i = 0; i < factors.size(); ++i) {
      out[i] = static_cast<int>(rank / weights[i]);
      rank = static_cast<int>(rank % weights[i]);
    }
  }

  int encode(const std::vector<int>& exps) const {
    long long r = 0;
    for (size_t i = 0; i < factors.size(); ++i) r += weights[i] * exps[i];
    return static_cast<int>(r);
  }
};

GroupSpec::GroupSpec() : impl_(std::make_shared<const Impl>(std::vector<int>{})) {}

GroupSpec GroupSpec::from_factors(const std::vector<int>& factors) {
  for (int f : factors)
    if (f < 2) throw input_error("invalid-spec: factor " + std::to_string(f) + " < 2");
  return GroupSpec(std::make_shared<const Impl>(factors));
}

GroupSpec GroupSpec::parse(const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "z1") return GroupSpec();
  std::vector<int> factors;
  size_t i = 0;
  auto read_int = [&](const char* what) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw input_error(std::string("invalid group spec: expected ") + what + " in '" + spec + "'");
    long long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      if (v > (1 << 20)) throw input_error("invalid group spec: number too large");
      ++i;
    }
    return static_cast<int>(v);
  };
  for (;;) {
    if (i >= s.size() || s[i] != 'z') throw input_error("invalid group spec: expected 'Z' in '" + spec + "'");
    ++i;
    int k = read_int("factor");
    int e = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      e = read_int("exponent");
      if (e < 1) throw input_error("invalid group spec: repeat count < 1");
    }
    for (int j = 0; j < e; ++j) factors.push_back(k);
    if (i == s.size()) break;
    if (s[i] != 'x') throw input_error("invalid group spec: expected 'x' in '" + spec + "'");
    ++i;
  }
  return from_factors(factors);
}

const std::vector<int>& GroupSpec::factors() const { return impl_->factors; }
int GroupSpec::order() const { return impl_->order; }
int GroupSpec::exponent() const { return impl_->exponent; }

std::string GroupSpec::spec_string() const {
  const auto& f = impl_->factors;
  if (f.empty()) return "Z1";
  std::ostringstream os;
  size_t i = 0;
  bool first = true;
  while (i < f.size()) {
    size_t j = i;
    while (j < f.size() && f[j] == f[i]) ++j;
    if (!first) os << "x";
    os << "Z" << f[i];
    if (j - i > 1) os << "^" << (j - i);
    first = false;
    i = j;
  }
  return os.str();
}

int GroupSpec::add(int a, int b) const {
  const Impl& im = *impl_;
  if (!im.add_table.empty()) return im.add_table[static_cast<size_t>(a) * im.order + b];
  std::vector<int> ea(im.factors.size()), eb(im.factors.size());
  im.decode(a, ea);
  im.decode(b, eb);
  for (size_t i = 0; i < im.factors.size(); ++i) {
    ea[i] += eb[i];
    if (ea[i] >= im.factors[i]) ea[i] -= im.factors[i];
  }
  return im.encode(ea);
}

int GroupSpec::inverse(int a) const {
  const Impl& im = *impl_;
  if (!im.neg_table.empty()) return im.neg_table[a];
  std::vector<int> ea(im.factors.size());
  im.decode(a, ea);
  for (size_t i = 0; i < im.factors.size(); ++i)
    if (ea[i] != 0) ea[i] = im.factors[i] - ea[i];
  return im.encode(ea);
}

int GroupSpec::sub(int a, int b) const { return add(a, inverse(b)); }

int GroupSpec::power(int a, long long m) const {
  const Impl& im = *impl_;
  std::vector<int> ea(im.factors.size());
  im.decode(a, ea);
  for (size_t i = 0; i < im.factors.size(); ++i) {
    long long mi = m % im.factors[i];
    if (mi < 0) mi += im.factors[i];
    ea[i] = static_cast<int>((static_cast<long long>(ea[i]) * mi) % im.factors[i]);
  }
  return im.encode(ea);
}

int GroupSpec::element_order(int a) const {
  const Impl& im = *impl_;
  std::vector<int> ea(im.factors.size());
  im.decode(a, ea);
  long long ord = 1;
  for (size_t i = 0; i < im.factors.size(); ++i)
    ord = lcm_ll(ord, im.factors[i] / gcd_ll(im.factors[i], ea[i]));
  return static_cast<int>(ord);
}

std::vector<int> GroupSpec::exponents(int rank) const {
  std::vector<int> out(impl_->factors.size());
  impl_->decode(rank, out);
  return out;
}

int GroupSpec::rank_of(const std::vector<int>& exps) const { return impl_->encode(exps); }

bool Subgroup::contains(int rank) const {
  return std::binary_search(members.begin(), members.end(), rank);
}

GroupAutomorphism identity_automorphism(const GroupSpec& g) {
  GroupAutomorphism a;
  a.images.resize(g.order());
  std::iota(a.images.begin(), a.images.end(), 0);
  size_t k = g.factors().size();
  a.gen_images.resize(k);
  for (size_t i = 0; i < k; ++i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    a.gen_images[i] = g.rank_of(e);
  }
  return a;
}

GroupAutomorphism compose(const GroupSpec& grp, const GroupAutomorphism& g,
                          const GroupAutomorphism& f) {
  GroupAutomorphism r;
  r.images.resize(grp.order());
  for (int x = 0; x < grp.order(); ++x) r.images[x] = g.images[f.images[x]];
  r.gen_images.resize(f.gen_images.size());
  for (size_t i = 0; i < f.gen_images.size(); ++i) r.gen_images[i] = g.images[f.gen_images[i]];
  return r;
}

GroupAutomorphism inverse(const GroupSpec& grp, const GroupAutomorphism& a) {
  GroupAutomorphism r;
  r.images.resize(grp.order());
  for (int x = 0; x < grp.order(); ++x) r.images[a.images[x]] = x;
  size_t k = grp.factors().size();
  r.gen_images.resize(k);
  for (size_t i = 0; i < k; ++i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    r.gen_images[i] = r.images[grp.rank_of(e)];
  }
  return r;
}

bool is_simple_prime_divisor(const GroupSpec& g, int q) {
  if (q < 2 || !is_prime_small(q)) return false;
  int n = g.order();
  return n % q == 0 && (n / q) % q != 0;
}

std::vector<int> simple_prime_divisors(const GroupSpec& g) {
  std::vector<int> out;
  int n = g.order();
  for (int p = 2; p <= n; ++p)
    if (is_prime_small(p) && is_simple_prime_divisor(g, p)) out.push_back(p);
  return out;
}

std::pair<int, int> decompose_q(const GroupSpec& g, int h, int q) {
  if (!is_simple_prime_divisor(g, q))
    throw std::invalid_argument("not-simple-divisor: q=" + std::to_string(q) + " for " + g.spec_string());
  int e = g.exponent() / q;  // exponent of the q-complement (q divides exponent exactly once)
  long long qstar = 1;
  if (e > 1) {
    // inverse of q mod e
    for (long long t = 1; t < e; ++t)
      if ((t * q) % e == 1) {
        qstar = t;
        break;
      }
  }
  int hp = g.power(h, qstar * q);
  int hq = g.sub(h, hp);
  return {hp, hq};
}

GroupAutomorphism unit_action(const GroupSpec& g, long long t) {
  long long e = g.exponent();
  long long tm = ((t % e) + e) % e;
  if (gcd_ll(tm, e) != 1) throw std::invalid_argument("non-unit: t=" + std::to_string(t));
  GroupAutomorphism a;
  a.images.resize(g.order());
  for (int x = 0; x < g.order(); ++x) a.images[x] = g.power(x, tm);
  size_t k = g.factors().size();
  a.gen_images.resize(k);
  for (size_t i = 0; i < k; ++i) {
    std::vector<int> exps(k, 0);
    exps[i] = 1;
    a.gen_images[i] = a.images[g.rank_of(exps)];
  }
  return a;
}

std::vector<GroupAutomorphism> mq_automorphisms(const GroupSpec& g, int q) {
  if (!is_simple_prime_divisor(g, q)) throw std::invalid_argument("not-simple-divisor");
  int e = g.exponent() / q;
  int eq = g.exponent();
  std::vector<GroupAutomorphism> out;
  for (int t = 1; t <= eq; ++t)
    if (t % e == 1 % e && gcd_ll(t, eq) == 1) out.push_back(unit_action(g, t));
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup q_complement(const GroupSpec& g, int q) {
  if (!is_simple_prime_divisor(g, q)) throw std::invalid_argument("not-simple-divisor");
  Subgroup s;
  int n = g.order() / q;
  for (int x = 0; x < g.order(); ++x)
    if (g.power(x, n) == 0) s.members.push_back(x);
  for (int m : s.members)
    if (m != 0) s.generators.push_back(m);
  return s;
}

Subgroup q_subgroup(const GroupSpec& g, int q) {
  if (!is_simple_prime_divisor(g, q)) throw std::invalid_argument("not-simple-divisor");
  Subgroup s;
  for (int x = 0; x < g.order(); ++x)
    if (g.power(x, q) == 0) s.members.push_back(x);
  for (int m : s.members)
    if (m != 0) {
      s.generators.push_back(m);
      break;
    }
  return s;
}

Subgroup span_of(const GroupSpec& g, const std::vector<int>& gens) {
  std::set<int> seen{0};
  std::vector<int> todo{0};
  while (!todo.empty()) {
    int x = todo.back();
    todo.pop_back();
    for (int gen : gens) {
      int y = g.add(x, gen);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  Subgroup s;
  s.members.assign(seen.begin(), seen.end());
  s.generators = gens;
  return s;
}

namespace {

std::vector<Subgroup> compute_all_subgroups(const GroupSpec& g) {
  std::map<std::vector<int>, std::vector<int>> found;  // members -> generators
  found[{0}] = {};
  std::vector<std::pair<std::vector<int>, std::vector<int>>> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> next;
    for (const auto& [members, gens] : frontier) {
      for (int x = 1; x < g.order(); ++x) {
        if (std::binary_search(members.begin(), members.end(), x)) continue;
        std::vector<int> gens2 = gens;
        gens2.push_back(x);
        Subgroup s = span_of(g, gens2);
        auto it = found.find(s.members);
        if (it == found.end()) {
          found.emplace(s.members, gens2);
          next.emplace_back(s.members, gens2);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  for (auto& [members, gens] : found) {
    Subgroup s;
    s.members = members;
    s.generators = gens;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const GroupSpec& g, int max_order) {
  if (g.order() > max_order)
    throw size_limit_error("size-limit: subgroup lattice for order " + std::to_string(g.order()));
  static std::mutex mu;
  static std::map<std::vector<int>, std::vector<Subgroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(g.factors());
  if (it == cache.end()) it = cache.emplace(g.factors(), compute_all_subgroups(g)).first;
  return it->second;
}

namespace {

std::vector<GroupAutomorphism> compute_automorphisms(const GroupSpec& g) {
  size_t k = g.factors().size();
  // candidate images per generator: elements killed by the factor order
  std::vector<std::vector<int>> candidates(k);
  for (size_t i = 0; i < k; ++i)
    for (int x = 0; x < g.order(); ++x)
      if (g.power(x, g.factors()[i]) == 0) candidates[i].push_back(x);

  std::vector<GroupAutomorphism> out;
  std::vector<int> images(k);
  std::vector<char> hit(g.order());
  std::vector<int> full(g.order());

  // iterative product over candidate tuples
  std::vector<size_t> idx(k, 0);
  for (;;) {
    for (size_t i = 0; i < k; ++i) images[i] = candidates[i][idx[i]];
    // build the induced endomorphism and test bijectivity
    std::fill(hit.begin(), hit.end(), 0);
    bool ok = true;
    for (int x = 0; x < g.order() && ok; ++x) {
      auto exps = g.exponents(x);
      int y = 0;
      for (size_t i = 0; i < k; ++i) y = g.add(y, g.power(images[i], exps[i]));
      full[x] = y;
      if (hit[y]) ok = false;
      hit[y] = 1;
    }
    if (ok) {
      GroupAutomorphism a;
      a.gen_images = images;
      a.images = full;
      out.push_back(std::move(a));
    }
    // advance
    size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < candidates[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    if (k == 0) {  // trivial group
      return out;
    }
  }
}

}  // namespace

const std::vector<GroupAutomorphism>& automorphism_group(const GroupSpec& g, int max_order) {
  if (g.order() > max_order)
    throw size_limit_error("size-limit: Aut(H) for order " + std::to_string(g.order()));
  static std::mutex mu;
  static std::map<std::vector<int>, std::vector<GroupAutomorphism>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(g.factors());
  if (it == cache.end()) it = cache.emplace(g.factors(), compute_automorphisms(g)).first;
  return it->second;
}

bool is_e_group(const GroupSpec& g) {
  for (int f : g.factors())
    for (int p = 2; p * p <= f; ++p)
      if (f % (p * p) == 0) return false;
  return true;
}

int LocalAbelian::inv(int a) const {
  for (int b = 0; b < n; ++b)
    if (at(a, b) == 0) return b;
  throw std::logic_error("LocalAbelian: no inverse");
}

int LocalAbelian::power(int a, long long m) const {
  long long mm = m % n;
  if (mm < 0) mm += n;  // a has order dividing n
  int acc = 0;
  for (long long i = 0; i < mm; ++i) acc = at(acc, a);
  return acc;
}

int LocalAbelian::order_of(int a) const {
  int acc = a, ord = 1;
  while (acc != 0) {
    acc = at(acc, a);
    ++ord;
  }
  return ord;
}

namespace {

// basis of a finite abelian group: (element, order) pairs, orders
// non-increasing. Greedy maximal-order element + lift through the quotient.
std::vector<std::pair<int, int>> abelian_basis(const LocalAbelian& g) {
  if (g.n == 1) return {};
  int best = 1, best_ord = g.order_of(1);
  for (int x = 2; x < g.n; ++x) {
    int o = g.order_of(x);
    if (o > best_ord) {
      best = x;
      best_ord = o;
    }
  }
  int gen = best, e = best_ord;
  // cyclic subgroup table and discrete log
  std::vector<int> cyc(e);
  std::vector<int> dlog(g.n, -1);
  int acc = 0;
  for (int kk = 0; kk < e; ++kk) {
    cyc[kk] = acc;
    dlog[acc] = kk;
    acc = g.at(acc, gen);
  }
  // canonical coset reps: minimal id in each coset
  std::vector<int> rep_of(g.n, -1);
  std::vector<int> reps;
  for (int x = 0; x < g.n; ++x) {
    if (rep_of[x] != -1) continue;
    int mn = x;
    for (int kk = 0; kk < e; ++kk) mn = std::min(mn, g.at(x, cyc[kk]));
    for (int kk = 0; kk < e; ++kk) rep_of[g.at(x, cyc[kk])] = mn;
  }
  for (int x = 0; x < g.n; ++x)
    if (rep_of[x] == x) reps.push_back(x);
  std::vector<int> rep_idx(g.n, -1);
  for (size_t i = 0; i < reps.size(); ++i) rep_idx[reps[i]] = static_cast<int>(i);

  LocalAbelian q;
  q.n = static_cast<int>(reps.size());
  q.table.resize(static_cast<size_t>(q.n) * q.n);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j)
      q.table[static_cast<size_t>(i) * q.n + j] = rep_idx[rep_of[g.at(reps[i], reps[j])]];

  std::vector<std::pair<int, int>> basis{{gen, e}};
  for (auto [xbar, m] : abelian_basis(q)) {
    int x = reps[xbar];
    int mx = g.power(x, m);  // lies in <gen>
    int kk = dlog[mx];
    if (kk < 0 || kk % m != 0) throw std::logic_error("abelian_basis: lift failed");
    int y = g.at(x, g.inv(g.power(gen, kk / m)));
    if (g.order_of(y) != m) throw std::logic_error("abelian_basis: lifted order mismatch");
    basis.emplace_back(y, m);
  }
  return basis;
}

}  // namespace

AbelianDecomposition decompose_abelian(const LocalAbelian& g) {
  auto basis = abelian_basis(g);
  std::vector<int> factors;
  for (auto& [elem, ord] : basis) factors.push_back(ord);
  AbelianDecomposition out;
  out.group = factors.empty() ? GroupSpec() : GroupSpec::from_factors(factors);
  out.to_local.assign(out.group.order(), -1);
  out.from_local.assign(g.n, -1);
  for (int r = 0; r < out.group.order(); ++r) {
    auto exps = out.group.exponents(r);
    int x = 0;
    for (size_t i = 0; i < basis.size(); ++i) x = g.at(x, g.power(basis[i].first, exps[i]));
    out.to_local[r] = x;
    out.from_local[x] = r;
  }
  for (int x = 0; x < g.n; ++x)
    if (out.from_local[x] == -1) throw std::logic_error("decompose_abelian: not a bijection");
  return out;
}

}  // namespace sring
