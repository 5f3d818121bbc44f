#include "qekr/families.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace qekr {

bool is_t_intersecting(const Family& family, int t) {
  const auto& m = family.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].dim() < t) return false;
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (intersection_dim(m[i], m[j]) < t) return false;
    }
  }
  return true;
}

bool is_cross_t_intersecting(const Family& u, const Family& w, int t) {
  if (u.ambient() != w.ambient() || u.field_order() != w.field_order()) {
    throw Error(ErrorKind::Domain, "families live in different ambient spaces");
  }
  for (const auto& x : u) {
    for (const auto& y : w) {
      if (intersection_dim(x, y) < t) return false;
    }
  }
  return true;
}

Family star_at(const Subspace& y, std::optional<int> upto, std::uint64_t cap) {
  const int n = y.ambient();
  const int top = upto ? std::min(*upto, n) : n;
  Family out(n, y.field_order());
  for (int k = y.dim(); k <= top; ++k) {
    GrassmannianStream stream(n, k, y.field_order(), cap);
    while (auto x = stream.next()) {
      if (contains(*x, y)) out.insert(std::move(*x));
    }
  }
  return out;
}

Family star_family(int n, int q, int t, std::optional<int> upto, std::uint64_t cap) {
  if (t < 0 || t > n) {
    throw Error(ErrorKind::Domain, "star dimension t must lie in [0, n]");
  }
  return star_at(Subspace::coordinate(n, t, q), upto, cap);
}

std::optional<Subspace> point_star_center(const Family& family, int t) {
  if (family.empty()) return std::nullopt;
  // Members are ordered by dimension first, so a star's center comes first.
  const Subspace& y = family.members().front();
  if (y.dim() != t) return std::nullopt;
  const int n = family.ambient();
  BigInt expected = 0;
  for (int k = t; k <= n; ++k) expected += gaussian_count(n - t, k - t, family.field_order());
  if (BigInt(family.size()) != expected) return std::nullopt;
  for (const auto& x : family) {
    if (!contains(x, y)) return std::nullopt;
  }
  return y;
}

Family top_family(int n, int q, int t, std::uint64_t cap) {
  if (t < 1) throw Error(ErrorKind::Domain, "t must be at least 1");
  Family out(n, q);
  const int lo = (n + t + 1) / 2;
  for (int k = std::max(lo, 0); k <= n; ++k) {
    GrassmannianStream stream(n, k, q, cap);
    while (auto x = stream.next()) out.insert(std::move(*x));
  }
  return out;
}

// --- branch and bound ---

namespace {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
void clear_bit(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

bool any(const Bits& b) {
  return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

template <class Fn>
void for_each_bit(const Bits& b, Fn&& fn) {
  for (std::size_t w = 0; w < b.size(); ++w) {
    std::uint64_t word = b[w];
    while (word) {
      const int bit = __builtin_ctzll(word);
      fn(w * 64 + static_cast<std::size_t>(bit));
      word &= word - 1;
    }
  }
}

int first_bit(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w) {
    if (b[w]) return static_cast<int>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(b[w])));
  }
  return -1;
}

struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;
  std::atomic<bool> expired{false};

  bool check() {
    if (!at) return false;
    if (expired.load(std::memory_order_relaxed)) return true;
    if (std::chrono::steady_clock::now() >= *at) expired.store(true, std::memory_order_relaxed);
    return expired.load(std::memory_order_relaxed);
  }
};

template <class W>
class Solver {
 public:
  Solver(const std::vector<Subspace>& vertices, const std::vector<W>& weights,
         const std::vector<Bits>& conflict, int n, int q, std::size_t cap, Deadline& deadline)
      : vertices_(vertices), weights_(weights), conflict_(conflict), n_(n), q_(q), cap_(cap),
        deadline_(deadline) {}

  struct Outcome {
    W best{};
    std::vector<Family> optima;
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
    bool aborted = false;
  };

  /// Root branch j: v_j included, v_0..v_{j-1} excluded.
  Outcome run_branch(std::size_t j, const W& seed) {
    out_ = Outcome{};
    out_.best = seed;
    if (deadline_.check()) {
      out_.aborted = true;
      return std::move(out_);
    }
    const std::size_t words = conflict_[0].size();
    Bits chosen(words, 0), cand(words, 0);
    set_bit(chosen, j);
    for (std::size_t v = j + 1; v < vertices_.size(); ++v) {
      if (!test_bit(conflict_[j], v)) set_bit(cand, v);
    }
    expand(chosen, weights_[j], cand);
    return std::move(out_);
  }

 private:
  void expand(Bits chosen, W cur, Bits cand) {
    ++out_.nodes;
    if ((out_.nodes & 0xFFF) == 0 && deadline_.check()) out_.aborted = true;
    if (out_.aborted) return;

    // Candidates with no conflict inside the candidate set belong to every maximal extension.
    std::vector<std::size_t> forced;
    for_each_bit(cand, [&](std::size_t v) {
      if (!intersects(conflict_[v], cand)) forced.push_back(v);
    });
    for (std::size_t v : forced) {
      clear_bit(cand, v);
      set_bit(chosen, v);
      cur += weights_[v];
    }
    if (!any(cand)) {
      record(chosen, cur);
      return;
    }
    W bound = cur;
    for_each_bit(cand, [&](std::size_t v) { bound += weights_[v]; });
    if (bound < out_.best) return;

    const auto v = static_cast<std::size_t>(first_bit(cand));
    clear_bit(cand, v);
    Bits with = cand;
    for (std::size_t i = 0; i < with.size(); ++i) with[i] &= ~conflict_[v][i];
    Bits chosen_with = chosen;
    set_bit(chosen_with, v);
    expand(std::move(chosen_with), cur + weights_[v], std::move(with));
    expand(std::move(chosen), std::move(cur), std::move(cand));
  }

  void record(const Bits& chosen, const W& cur) {
    if (cur < out_.best) return;
    if (out_.best < cur) {
      out_.best = cur;
      out_.optima.clear();
      out_.count = 0;
    }
    ++out_.count;
    std::vector<Subspace> members;
    for_each_bit(chosen, [&](std::size_t v) { members.push_back(vertices_[v]); });
    Family f(n_, q_, std::move(members));
    auto it = std::lower_bound(out_.optima.begin(), out_.optima.end(), f);
    if (static_cast<std::size_t>(it - out_.optima.begin()) < cap_) {
      out_.optima.insert(it, std::move(f));
      if (out_.optima.size() > cap_) out_.optima.pop_back();
    }
  }

  const std::vector<Subspace>& vertices_;
  const std::vector<W>& weights_;
  const std::vector<Bits>& conflict_;
  int n_;
  int q_;
  std::size_t cap_;
  Deadline& deadline_;
  Outcome out_;
};

Rational to_rational(const Int128& w) {
  const bool neg = w < 0;
  UInt128 u = neg ? static_cast<UInt128>(-w) : static_cast<UInt128>(w);
  BigInt hi(static_cast<unsigned long long>(u >> 64));
  BigInt lo(static_cast<unsigned long long>(u & ~std::uint64_t{0}));
  BigInt v = (hi << 64) + lo;
  return Rational(neg ? BigInt(-v) : v);
}

Rational to_rational(const BigInt& w) { return Rational(w); }

template <class W>
SearchResult run_search(const ExactContext& ctx, int t, const SearchConfig& cfg,
                        const std::vector<Subspace>& vertices, const std::vector<W>& weights,
                        const std::vector<Bits>& conflict, const W& seed, const Rational& scale) {
  SearchResult result;
  result.n = ctx.n;
  result.q = ctx.q;
  result.t = t;
  result.sigma = ctx.sigma;
  result.vertices = vertices.size();

  Deadline deadline;
  if (cfg.time_budget) {
    deadline.at = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(*cfg.time_budget));
  }

  using Outcome = typename Solver<W>::Outcome;
  std::vector<Outcome> outcomes(vertices.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Solver<W> solver(vertices, weights, conflict, ctx.n, ctx.q, cfg.max_optima_reported, deadline);
    for (std::size_t j = next.fetch_add(1); j < vertices.size(); j = next.fetch_add(1)) {
      outcomes[j] = solver.run_branch(j, seed);
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(vertices.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  W best = seed;
  bool found = false;
  bool aborted = false;
  for (const auto& o : outcomes) {
    result.explored_nodes += o.nodes;
    aborted = aborted || o.aborted;
    if (o.count > 0 && (!found || best < o.best)) {
      best = o.best;
      found = true;
    }
  }
  std::vector<Family> optima;
  for (auto& o : outcomes) {
    if (o.count == 0 || o.best != best) continue;
    result.optima_count += o.count;
    for (auto& f : o.optima) optima.push_back(std::move(f));
  }
  std::sort(optima.begin(), optima.end());
  result.optima_truncated = result.optima_count > cfg.max_optima_reported;
  if (optima.size() > cfg.max_optima_reported) optima.resize(cfg.max_optima_reported);
  result.optima = std::move(optima);
  result.optimum = to_rational(best) / scale;
  result.complete = !aborted;
  return result;
}

}  // namespace

SearchResult max_measure_t_intersecting(const ExactContext& ctx, int t, const SearchConfig& cfg) {
  if (t < 1) throw Error(ErrorKind::Domain, "t must be at least 1");
  if (cfg.max_optima_reported == 0 || cfg.max_vertices == 0 || cfg.threads == 0) {
    throw Error(ErrorKind::Domain, "search limits must be positive");
  }
  const int n = ctx.n;
  const int q = ctx.q;

  std::uint64_t vertex_count = 0;
  for (int k = t; k <= n; ++k) vertex_count += GrassmannianStream(n, k, q, cfg.enumeration_cap).size();
  if (vertex_count > cfg.max_vertices) {
    throw Error(ErrorKind::CapExceeded, "search graph has " + std::to_string(vertex_count) +
                                            " vertices, above the limit of " +
                                            std::to_string(cfg.max_vertices));
  }
  if (vertex_count == 0) {
    SearchResult r;
    r.n = n;
    r.q = q;
    r.t = t;
    r.sigma = ctx.sigma;
    r.optimum = 0;
    r.optima.emplace_back(n, q);
    r.optima_count = 1;
    r.complete = true;
    return r;
  }

  // Integer weights a^k b^(n-k) q^C(k,2) for sigma = a/b; mu = weight / (b^n (-sigma;q)_n).
  const BigInt a = numerator(ctx.sigma);
  const BigInt b = denominator(ctx.sigma);
  std::vector<BigInt> layer_weight(n + 1);
  for (int k = 0; k <= n; ++k) {
    layer_weight[k] = ipow(a, static_cast<unsigned long>(k)) *
                      ipow(b, static_cast<unsigned long>(n - k)) *
                      ipow(BigInt(q), static_cast<unsigned long>(binom2(k)));
  }
  const Rational scale = Rational(ipow(b, static_cast<unsigned long>(n))) *
                         q_pochhammer(ctx.sigma, Rational(q), n);

  std::vector<std::pair<BigInt, Subspace>> ranked;
  ranked.reserve(vertex_count);
  for (int k = t; k <= n; ++k) {
    GrassmannianStream stream(n, k, q, cfg.enumeration_cap);
    while (auto x = stream.next()) ranked.emplace_back(layer_weight[k], std::move(*x));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first > r.first;
    return l.second < r.second;
  });

  const std::size_t v_count = ranked.size();
  const std::size_t words = (v_count + 63) / 64;
  std::vector<Subspace> vertices;
  std::vector<BigInt> weights;
  vertices.reserve(v_count);
  weights.reserve(v_count);
  for (auto& [w, x] : ranked) {
    weights.push_back(std::move(w));
    vertices.push_back(std::move(x));
  }
  std::vector<Bits> conflict(v_count, Bits(words, 0));
  for (std::size_t i = 0; i < v_count; ++i) {
    for (std::size_t j = i + 1; j < v_count; ++j) {
      if (intersection_dim(vertices[i], vertices[j]) < t) {
        set_bit(conflict[i], j);
        set_bit(conflict[j], i);
      }
    }
  }

  // The star is t-intersecting, so its weight seeds every branch's incumbent.
  const Subspace center = Subspace::coordinate(n, t, q);
  BigInt seed = 0;
  BigInt total = 0;
  for (std::size_t i = 0; i < v_count; ++i) {
    total += weights[i];
    if (contains(vertices[i], center)) seed += weights[i];
  }

  if (msb(total) < 125) {
    std::vector<Int128> small;
    small.reserve(v_count);
    for (const auto& w : weights) {
      const auto hi = static_cast<unsigned long long>(BigInt(w >> 64));
      const auto lo = static_cast<unsigned long long>(BigInt(w & BigInt(~std::uint64_t{0})));
      small.push_back(static_cast<Int128>((static_cast<UInt128>(hi) << 64) | lo));
    }
    const auto hi = static_cast<unsigned long long>(BigInt(seed >> 64));
    const auto lo = static_cast<unsigned long long>(BigInt(seed & BigInt(~std::uint64_t{0})));
    const auto seed_small = static_cast<Int128>((static_cast<UInt128>(hi) << 64) | lo);
    return run_search<Int128>(ctx, t, cfg, vertices, small, conflict, seed_small, scale);
  }
  return run_search<BigInt>(ctx, t, cfg, vertices, weights, conflict, seed, scale);
}

// --- counterexample arithmetic ---

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long j = 1; j <= k; ++j) {
    r *= n - k + j;
    r /= j;
  }
  return r;
}

SubspacePairReport subspace_pair_counterexample(int ell, int q, std::uint64_t cap) {
  if (ell < 3) throw Error(ErrorKind::Domain, "ell must be at least 3");
  if (!is_supported_order(q)) throw Error(ErrorKind::Domain, "unsupported field order");
  const int n = 1 + ell;
  const Subspace z = Subspace::coordinate(n, 2, q);
  SubspacePairReport r{ell, q, n, Family(n, q), Family(n, q), 0, 0, 0, 0, 0, false, false};
  {
    GrassmannianStream lines(n, 1, q, cap);
    while (auto x = lines.next()) {
      if (contains(z, *x)) r.u.insert(std::move(*x));
    }
  }
  r.w = star_at(z, ell, cap).layer(ell);
  r.size_u = BigInt(r.u.size());
  r.size_w = BigInt(r.w.size());
  r.product = r.size_u * r.size_w;
  r.formula_product = gaussian_count(2, 1, q) * gaussian_count(ell - 1, 1, q);
  r.ekr_product = gaussian_count(n - 1, 0, q) * gaussian_count(n - 1, ell - 1, q);
  r.cross_intersecting = is_cross_t_intersecting(r.u, r.w, 1);
  r.exceeds = r.product > r.ekr_product;
  if (r.product != r.formula_product) {
    throw Error(ErrorKind::Invariant, "enumerated pair sizes disagree with the bracket formula");
  }
  return r;
}

SubsetCheckReport subset_counterexample_check(int k, int ell, int n) {
  if (k < 1 || ell < 1 || n < k + ell) {
    throw Error(ErrorKind::Domain, "need k, ell >= 1 and n >= k + ell");
  }
  SubsetCheckReport r;
  r.k = k;
  r.ell = ell;
  r.n = n;
  r.lhs = BigInt(2L * n - k - 1) * k * (ell - 1);
  r.rhs = BigInt(n - 1) * (n - 1);
  r.strict_inequality = r.lhs > r.rhs;
  r.size_u = binomial(n, k) - binomial(n - 2, k);
  r.size_w = binomial(n - 2, ell - 2);
  r.product = r.size_u * r.size_w;
  r.ekr_product = binomial(n - 1, k - 1) * binomial(n - 1, ell - 1);
  r.product_exceeds = r.product > r.ekr_product;
  return r;
}

// --- oracles ---

namespace {

OracleCheck single_check(const Family& f, int t) {
  OracleCheck c;
  c.name = "single t-intersecting, n >= 2k";
  const int n = f.ambient();
  const int q = f.field_order();
  if (f.empty()) {
    c.applicable = true;
    c.reason = "empty family";
    return c;
  }
  const int k = f.uniform_dimension();
  if (k < 0) throw Error(ErrorKind::Domain, "oracle needs a uniform family");
  if (n < 2 * k) {
    c.reason = "n < 2k";
    return c;
  }
  if (!is_t_intersecting(f, t)) {
    c.reason = "family is not t-intersecting";
    return c;
  }
  c.applicable = true;
  c.lhs = BigInt(f.size());
  c.bound = gaussian_count(n - t, k - t, q);
  return c;
}

OracleCheck cross_check(std::string name, const Family& u, const Family& w, int t) {
  OracleCheck c;
  c.name = std::move(name);
  const int n = u.ambient();
  const int q = u.field_order();
  if (u.empty() || w.empty()) {
    c.applicable = true;
    c.reason = "empty family";
    return c;
  }
  const int k = u.uniform_dimension();
  const int l = w.uniform_dimension();
  if (k < 0 || l < 0) throw Error(ErrorKind::Domain, "oracle needs uniform families");
  if (c.name.starts_with("cross equal-layer")) {
    if (k != l) {
      c.reason = "layers differ";
      return c;
    }
    if (n < 2 * k) {
      c.reason = "n < 2k";
      return c;
    }
  } else if (c.name.starts_with("cross 1-intersecting")) {
    if (t != 1) {
      c.reason = "t != 1";
      return c;
    }
    if (n < 2 * k || n < 2 * l) {
      c.reason = "n < 2k or n < 2l";
      return c;
    }
  } else if (n < k + l + t + 1) {
    c.reason = "n < k + l + t + 1";
    return c;
  }
  if (!is_cross_t_intersecting(u, w, t)) {
    c.reason = "families are not cross t-intersecting";
    return c;
  }
  c.applicable = true;
  c.lhs = BigInt(u.size()) * BigInt(w.size());
  c.bound = gaussian_count(n - t, k - t, q) * gaussian_count(n - t, l - t, q);
  return c;
}

}  // namespace

UniformBoundReport uniform_bound_oracle(const Family& u, const Family& w, int t) {
  if (t < 1) throw Error(ErrorKind::Domain, "t must be at least 1");
  if (u.ambient() != w.ambient() || u.field_order() != w.field_order()) {
    throw Error(ErrorKind::Domain, "families live in different ambient spaces");
  }
  UniformBoundReport report;
  auto su = single_check(u, t);
  su.name += " (U)";
  auto sw = single_check(w, t);
  sw.name += " (W)";
  report.checks.push_back(std::move(su));
  report.checks.push_back(std::move(sw));
  report.checks.push_back(cross_check("cross equal-layer, n >= 2k", u, w, t));
  report.checks.push_back(cross_check("cross 1-intersecting, n >= 2k, n >= 2l", u, w, t));
  report.checks.push_back(cross_check("cross t-intersecting, n >= k + l + t + 1", u, w, t));
  for (auto& c : report.checks) {
    if (!c.applicable) continue;
    if (c.lhs > c.bound) {
      throw Error(ErrorKind::Invariant, "uniform bound violated: " + c.name);
    }
    c.tight = c.lhs == c.bound && c.reason.empty();
  }
  return report;
}

Real g_lower_bound(const Scalar& theta1, const Scalar& theta2, int n, int q, int t, unsigned bits) {
  if (n < 1) throw Error(ErrorKind::Domain, "n must be positive");
  PrecisionScope scope(bits);
  Real m1 = measure_star_product_form(theta1, n, q, t, bits);
  Real m2 = measure_star_product_form(theta2, n, q, t, bits);
  return pow(m1 * m2, Real(1) / Real(n));
}

}  // namespace qekr
