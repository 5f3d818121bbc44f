// Acceptance driver: one PASS/FAIL line per criterion, followed by the first
// few failure notes. Exit status is 0 only when every criterion passes.

#include "qekr/certificate.hpp"
#include "qekr/families.hpp"
#include "qekr/measure.hpp"
#include "qekr/report.hpp"

#include "../support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qekr;

namespace {

struct Verdict {
  std::vector<std::string> failures;
  Json payload = Json::object();

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

std::vector<Rational> random_sigmas(int count, std::uint64_t seed, bool allow_negative) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(allow_negative ? -40 : 1, 40);
  std::uniform_int_distribution<long> den(1, 40);
  std::vector<Rational> out;
  while (static_cast<int>(out.size()) < count) {
    const long a = num(rng);
    if (a != 0) out.emplace_back(a, den(rng));
  }
  return out;
}

bool strictly_decreasing(const std::vector<Real>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<Real>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

Real as_real(const Scalar& s) { return is_exact(s) ? Real(std::get<Rational>(s)) : std::get<Real>(s); }

std::vector<int> even_grid() {
  std::vector<int> g;
  for (int n = 10; n <= 40; n += 2) g.push_back(n);
  return g;
}

// 1. q-binomial theorem and the technical identity, exact.
Verdict identities(unsigned) {
  Verdict v;
  for (const Rational& sigma : random_sigmas(20, 20240611, true)) {
    for (int q : {2, 3, 4}) {
      Rational product = 1;
      for (long n = 0; n <= 12; ++n) {
        if (n > 0) product *= 1 + sigma * oracle::big_pow(q, n - 1);
        const Rational sum = std::get<Rational>(q_binomial_sum(Scalar(sigma), q, n));
        v.expect(sum == product, cat("q-binomial theorem sigma=", to_string(sigma), " q=", q, " n=", n));
        v.expect(std::get<Rational>(q_pochhammer(Scalar(sigma), q, n)) == product,
                 cat("pochhammer sigma=", to_string(sigma), " q=", q, " n=", n));
      }
    }
  }
  for (int q : {2, 3}) {
    for (long a = 0; a <= 8; ++a) {
      for (long b = 0; b <= a; ++b) {
        for (long c = 0; c <= 8; ++c) {
          const Rational sum = technical_sum(a, b, c, Rational(q));
          v.expect(sum == technical_closed(a, b, c, Rational(q)), cat("technical identity ", a, ",", b, ",", c, " q=", q));
        }
      }
    }
  }
  return v;
}

// 2. Layer counts from enumeration against Gaussian binomials.
Verdict enumeration(unsigned) {
  Verdict v;
  const std::vector<std::pair<int, int>> grid{{5, 2}, {4, 3}, {3, 4}, {3, 5}};
  for (auto [nmax, q] : grid) {
    for (int n = 0; n <= nmax; ++n) {
      Json layers = Json::array();
      std::uint64_t total = 0;
      for (int k = 0; k <= n; ++k) {
        const std::size_t count = enumerate_grassmannian(n, k, q).size();
        v.expect(BigInt(count) == oracle::gaussian_pascal(n, k, q), cat("layer n=", n, " k=", k, " q=", q));
        layers.push_back(count);
        total += count;
      }
      v.payload[cat("q", q, "n", n)] = Json{{"layers", layers}, {"total", total}};
      if (n == nmax && q == 2) v.expect(total == 374, cat("|Omega_5(F_2)| = ", total));
      if (n == nmax && q == 3) v.expect(total == 212, cat("|Omega_4(F_3)| = ", total));
    }
  }
  return v;
}

// 3. Exhaustive search optima at desk scale.
Verdict search(unsigned threads) {
  Verdict v;
  struct Case {
    int n;
    Rational sigma;
    Rational optimum;
    bool stars_only;
  };
  const std::vector<Case> cases{{3, Rational(1, 16), Rational(1, 17), true},
                                {3, Rational(1, 8), Rational(1, 9), false},
                                {4, Rational(1, 8), Rational(1, 9), false},
                                {4, Rational(1, 16), Rational(1, 17), true}};
  SearchConfig cfg;
  cfg.threads = threads;
  for (const auto& c : cases) {
    const std::string tag = cat("(n=", c.n, ", sigma=", to_string(c.sigma), ")");
    const SearchResult r = max_measure_t_intersecting(make_context(2, c.n, c.sigma), 1, cfg);
    v.payload[tag] = search_json(r);
    v.expect(r.complete, tag + " incomplete");
    v.expect(r.optimum == c.optimum, tag + " optimum " + to_string(r.optimum));
    if (c.stars_only) {
      std::vector<Family> stars;
      for (const auto& line : enumerate_grassmannian(c.n, 1, 2)) stars.push_back(star_at(line));
      std::sort(stars.begin(), stars.end());
      v.expect(r.optima_count == stars.size() && r.optima == stars, tag + " optima are not exactly the point stars");
    }
  }
  return v;
}

// 4. Exact certificate layer.
Verdict certificate_exact(unsigned) {
  Verdict v;
  for (int q : {2, 3}) {
    std::vector<Rational> sigmas = random_sigmas(6, 77 + q, false);
    for (int n = 1; n <= 8; ++n) {
      for (const Rational& sigma : sigmas) {
        const std::string tag = cat("n=", n, " q=", q, " sigma=", to_string(sigma));
        const CertificateBundle b = certify(n, sigma, q);
        v.expect(b.f_formula_matches, tag + " F by similarity differs from the closed form");
        v.expect(b.f_checks.anti_triangular, tag + " anti-triangular");
        v.expect(b.f_checks.weighted_symmetry, tag + " weighted symmetry");
        v.expect(b.f_checks.eigenvalues, tag + " eigenvalues");
        v.expect(b.spectrum.shift_identity, tag + " shift identity");
        v.expect(b.spectrum.block_eigenvalues, tag + " block eigenvalues");
      }
    }
    for (int n = 3; n <= 8; ++n) {
      const Rational th = psd_threshold(n, q);
      const Rational expected = 1 / oracle::rat_pow(Rational(q), 2 * ((n - 1) / 2) + 1);
      v.expect(th == expected, cat("threshold n=", n, " q=", q));
      Json row = Json::array();
      for (const Rational f : {Rational(1, 10), Rational(1, 2), Rational(999, 1000), Rational(1), Rational(1001, 1000),
                               Rational(2), Rational(q), Rational(10)}) {
        const Rational sigma = th * f;
        const CertificateBundle b = certify(n, sigma, q);
        const bool below = sigma <= expected;
        v.expect(b.condition == below, cat("psd condition n=", n, " q=", q, " factor ", to_string(f)));
        v.expect(b.min_eigenvalue_nonnegative == below, cat("block spectrum sign n=", n, " q=", q, " factor ", to_string(f)));
        row.push_back(certificate_json(b));
      }
      v.payload[cat("q", q, "n", n)] = std::move(row);
    }
  }
  return v;
}

// 5. Full-matrix corroboration with floating point.
Verdict certificate_float(unsigned) {
  Verdict v;
  for (auto [n, q] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {3, 3}}) {
    const Rational th = psd_threshold(n, q);
    for (const Rational sigma : {th, th / 2}) {
      const std::string tag = cat("(n=", n, ", q=", q, ", sigma=", to_string(sigma), ")");
      const FullCertificate c = build_full_certificate(n, q, sigma);
      Json entry = full_certificate_json(c);
      v.expect(c.spectrum_deviation < 1e-9, cat(tag, " spectrum deviation ", c.spectrum_deviation));
      v.expect(c.min_eigenvalue >= -1e-9 * (1 + c.spectral_radius), cat(tag, " min eigenvalue ", c.min_eigenvalue));
      v.expect(c.support_violation == 0.0, cat(tag, " A' support violation ", c.support_violation));
      const DualityGap gap = weak_duality_check(c, star_family(n, q, 1));
      v.expect(std::abs(gap.gap) < 1e-9, cat(tag, " point star gap ", gap.gap));
      entry["point_star_duality"] = duality_json(gap);
      if (sigma < th) {
        const KernelReport k = kernel_analysis(c, {star_family(n, q, 1)});
        const long expected = static_cast<long>(oracle::gaussian_pascal(n, 1, q)) + 1;
        v.expect(k.kernel_dimension == expected, cat(tag, " kernel dimension ", k.kernel_dimension, " != ", expected));
        entry["kernel"] = kernel_json(k);
      }
      v.payload[tag] = std::move(entry);
    }
  }
  return v;
}

// 6. Measure formulas and moment limits.
Verdict measure_formulas(unsigned) {
  Verdict v;
  const std::vector<std::pair<int, int>> enumerable{{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {2, 3}, {3, 3},
                                                    {4, 3}, {2, 4}, {3, 4}, {2, 5}, {3, 5}};
  for (auto [n, q] : enumerable) {
    for (const Rational sigma : {Rational(1, 16), Rational(1, 3), Rational(5, 2)}) {
      const ExactContext ctx = make_context(q, n, sigma);
      for (int t = 0; t <= n; ++t) {
        v.expect(measure_star_closed(ctx, t) == measure_family(ctx, star_family(n, q, t)),
                 cat("star measure n=", n, " q=", q, " t=", t, " sigma=", to_string(sigma)));
      }
    }
  }
  PrecisionScope scope(kDefaultPrecisionBits);
  for (const Rational theta : {Rational(3, 10), Rational(3, 4)}) {
    for (int q : {2, 3}) {
      const std::string tag = cat("theta=", to_string(theta), " q=", q);
      std::vector<Real> dev_mean, dev_var, dev_var_inv;
      for (int n = 10; n <= 60; ++n) {
        const MomentReport r = moments(Scalar(theta), n, q);
        v.expect(r.closed_matches_direct, cat(tag, " n=", n, " closed form differs from direct sum"));
        dev_mean.push_back(abs(as_real(r.mean_x) - Real(1L)));
        dev_var.push_back(abs(as_real(r.var_x) - Real(static_cast<long>(q - 1))));
        dev_var_inv.push_back(abs(as_real(r.var_xinv) - Real(static_cast<long>(q * q * q - q * q))));
      }
      v.expect(strictly_decreasing(dev_mean), tag + " |E[X] - 1| not strictly decreasing on n = 10..60");
      v.expect(strictly_decreasing(dev_var), tag + " |V[X] - (q-1)| not strictly decreasing on n = 10..60");
      v.expect(strictly_decreasing(dev_var_inv), tag + " |V[1/X] - (q^3-q^2)| not strictly decreasing on n = 10..60");
    }
  }
  return v;
}

// 7. Finite-n behaviour of the asymptotic statements.
Verdict asymptotics(unsigned) {
  Verdict v;
  const unsigned bits = kTailPrecisionBits;
  PrecisionScope scope(bits);
  const std::vector<int> grid = even_grid();
  const auto tail_check = [&](const std::string& tag, const std::function<TailReport(int)>& run) {
    std::vector<Real> normalized;
    for (int n : grid) normalized.push_back(run(n).normalized);
    v.expect(strictly_decreasing(normalized), tag + " normalized tail not strictly decreasing");
    v.expect(normalized.back() < Real(Rational(1, 1000)) * normalized.front(), tag + " final >= 1e-3 * initial");
  };
  for (int t : {1, 2}) {
    for (int q : {2, 3}) {
      for (const Rational theta : {Rational(1, 5), Rational(3, 10), Rational(2, 5)}) {
        const Scalar th(theta);
        const std::string tag = cat("theta=", to_string(theta), " t=", t, " q=", q);
        tail_check("above-half " + tag, [&](int n) { return tail_above_half(th, n, q, t, bits); });
        tail_check("above-shifted " + tag, [&](int n) { return tail_above_shifted(th, n, q, t, bits); });

        const Real limit = pow(Real(static_cast<long>(q)), Real(-(1 - theta) * t));
        std::vector<Real> dev;
        for (int n : grid) {
          dev.push_back(abs(pow(measure_star_product_form(th, n, q, t, bits), Real(Rational(1, n))) - limit));
        }
        v.expect(strictly_decreasing(dev), "star limit " + tag + " deviation not strictly decreasing");
      }
      for (const Rational theta : {Rational(3, 5), Rational(7, 10), Rational(4, 5)}) {
        const Scalar th(theta);
        const Real delta = default_lower_tail_delta(th, bits);
        tail_check(cat("below-middle theta=", to_string(theta), " t=", t, " q=", q),
                   [&](int n) { return tail_below_middle(th, n, q, t, delta, bits); });
      }
      for (const auto& [a, b] : std::vector<std::pair<Rational, Rational>>{
               {Rational(3, 10), Rational(3, 10)}, {Rational(1, 5), Rational(2, 5)}, {Rational(2, 5), Rational(3, 10)}}) {
        const Real limit = pow(Real(static_cast<long>(q)), Real(-(2 - a - b) * t));
        std::vector<Real> dev;
        for (int n : grid) dev.push_back(abs(g_lower_bound(Scalar(a), Scalar(b), n, q, t, bits) - limit));
        v.expect(strictly_decreasing(dev), cat("g lower bound theta=(", to_string(a), ",", to_string(b), ") t=", t,
                                               " q=", q, " deviation not strictly decreasing"));
      }
    }
  }
  const Scalar theta(Rational(3, 4));
  std::vector<Real> roots;
  for (int n : grid) {
    const RealContext ctx = make_theta_context(theta, n, 2, bits);
    Real top(0L);
    for (int k = 0; k <= n; ++k) {
      if (2 * k >= n + 1) top += ctx.layer_mass[k];
    }
    roots.push_back(pow(top, Real(Rational(1, n))));
  }
  v.expect(strictly_increasing(roots), "mu(B_n)^{1/n} not strictly increasing at theta=3/4");
  v.expect(roots.back() < Real(1L), "mu(B_n)^{1/n} exceeds 1");
  return v;
}

// 8. The cross-intersecting counterexamples.
Verdict counterexamples(unsigned) {
  Verdict v;
  const SubspacePairReport p = subspace_pair_counterexample(3, 2);
  v.expect(p.size_u * p.size_w == 9 && p.ekr_product == 7 && p.product > p.ekr_product,
           cat("subspace pair ", p.product, " vs ", p.ekr_product));
  v.expect(p.cross_intersecting, "subspace pair is not cross-1-intersecting");
  v.expect(is_cross_t_intersecting(p.u, p.w, 1), "cross intersection recheck failed");
  const SubsetCheckReport s = subset_counterexample_check(2, 18, 34);
  v.expect(s.lhs == 2210 && s.rhs == 1089 && s.strict_inequality, cat("subset inequality ", s.lhs, " vs ", s.rhs));
  const BigInt size_u = oracle::binomial(34, 2) - oracle::binomial(32, 2);
  const BigInt size_w = oracle::binomial(32, 16);
  const BigInt product = size_u * size_w;
  const BigInt ekr = oracle::binomial(33, 1) * oracle::binomial(33, 17);
  v.expect(s.product == product && s.ekr_product == ekr, "subset products differ from the oracle");
  v.expect(product > ekr && s.product_exceeds, "subset product comparison");
  return v;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0 when no runtime bound applies
  std::function<Verdict(unsigned)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "identity suite", 10, identities},
      {2, "enumeration vs formula", 10, enumeration},
      {3, "exhaustive search optima", 120, search},
      {4, "certificate exactness", 30, certificate_exact},
      {5, "full-matrix corroboration", 60, certificate_float},
      {6, "measure formulas", 0, measure_formulas},
      {7, "asymptotics", 0, asymptotics},
      {8, "counterexamples", 5, counterexamples},
  };

  int failed = 0;
  std::vector<Json> single_thread(6);
  const auto report = [&](int id, const std::string& name, bool pass, double seconds, double limit,
                          const std::vector<std::string>& notes) {
    std::printf("criterion %d %-28s %s  %.2fs", id, name.c_str(), pass ? "PASS" : "FAIL", seconds);
    if (limit > 0) std::printf(" (limit %.0fs)", limit);
    std::printf("\n");
    const std::size_t shown = std::min<std::size_t>(notes.size(), 64);
    for (std::size_t i = 0; i < shown; ++i) std::printf("    %s\n", notes[i].c_str());
    if (notes.size() > shown) std::printf("    ... %zu more\n", notes.size() - shown);
    std::fflush(stdout);
    if (!pass) ++failed;
  };

  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run(1);
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<std::string> notes = v.failures;
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) notes.push_back(cat("runtime ", seconds, "s over the limit"));
    if (c.id >= 2 && c.id <= 5) single_thread[c.id] = std::move(v.payload);
    report(c.id, c.name, notes.empty(), seconds, c.limit_seconds, notes);
  }

  // 9. Criteria 2-5 again with eight threads; payloads must match byte for byte.
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> notes;
  for (const auto& c : criteria) {
    if (c.id < 2 || c.id > 5) continue;
    try {
      const Verdict v = c.run(8);
      if (v.payload.dump() != single_thread[c.id].dump()) notes.push_back(cat("criterion ", c.id, " payload differs"));
    } catch (const std::exception& e) {
      notes.push_back(std::string("exception: ") + e.what());
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(9, "determinism (1 vs 8 threads)", notes.empty(), seconds, 0, notes);

  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
