#include "qekr/families.hpp"
#include "qekr/report.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qekr;

namespace {

Family from_members(int n, int q, std::vector<Subspace> members) { return Family(n, q, std::move(members)); }

/// All point stars of dimension t: one per t-subspace y.
std::vector<Family> all_point_stars(int n, int q, int t) {
  std::vector<Family> out;
  for (const auto& y : enumerate_grassmannian(n, t, q)) out.push_back(star_at(y));
  std::sort(out.begin(), out.end());
  return out;
}

struct OracleOptimum {
  Rational best;
  std::vector<Family> optima;
};

OracleOptimum brute_force_optimum(int n, int q, const Rational& sigma, int t) {
  std::vector<Subspace> vertices;
  for (const auto& s : enumerate_all(n, q)) {
    if (s.dim() >= t) vertices.push_back(s);
  }
  std::vector<Rational> weight;
  for (const auto& v : vertices) weight.push_back(oracle::phi(sigma, q, n, v.dim()));
  const auto result = oracle::brute_force_max(
      weight, [&](std::size_t i, std::size_t j) { return intersection_dim(vertices[i], vertices[j]) >= t; });
  OracleOptimum out{result.best, {}};
  for (auto mask : result.optima) {
    std::vector<Subspace> members;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (mask >> i & 1) members.push_back(vertices[i]);
    }
    out.optima.push_back(from_members(n, q, members));
  }
  std::sort(out.optima.begin(), out.optima.end());
  return out;
}

}  // namespace

TEST_CASE("is_t_intersecting examples") {
  CHECK(is_t_intersecting(Family(3, 2), 1));
  Family with_zero(3, 2);
  with_zero.insert(Subspace::zero(3, 2));
  CHECK_FALSE(is_t_intersecting(with_zero, 1));
  CHECK(is_t_intersecting(star_family(4, 2, 2), 2));
  CHECK_FALSE(is_t_intersecting(Family(3, 2, enumerate_grassmannian(3, 1, 2)), 1));
  CHECK(is_t_intersecting(Family(3, 2, enumerate_grassmannian(3, 2, 2)), 1));
}

TEST_CASE("is_cross_t_intersecting examples") {
  const Family u = star_family(3, 2, 1);
  CHECK(is_cross_t_intersecting(u, Family(3, 2), 1));
  FieldMatrix e1(1, 2), e2(1, 2);
  e1.at(0, 0) = 1;
  e2.at(0, 1) = 1;
  Family a(2, 2), b(2, 2);
  a.insert(Subspace(2, e1));
  b.insert(Subspace(2, e2));
  CHECK_FALSE(is_cross_t_intersecting(a, b, 1));
  CHECK_THROWS_AS(is_cross_t_intersecting(a, Family(3, 2), 1), Error);
}

TEST_CASE("star_family examples") {
  const Family star = star_family(3, 2, 1);
  CHECK(star.size() == 5);
  for (const auto& x : star) CHECK(contains(x, Subspace::coordinate(3, 1, 2)));
  const Family full = star_family(3, 2, 3);
  REQUIRE(full.size() == 1);
  CHECK(*full.begin() == Subspace::whole(3, 2));
  CHECK(measure_family(make_context(2, 3, Rational(1, 8)), star) == Rational(1, 9));
  CHECK(star_family(4, 3, 2, 3).size() == 1 + 4);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 1; t <= n; ++t) {
      BigInt expected = 0;
      for (int k = t; k <= n; ++k) expected += oracle::gaussian_pascal(n - t, k - t, 2);
      CHECK(BigInt(star_family(n, 2, t).size()) == expected);
    }
  }
}

TEST_CASE("point_star_center recognises full stars only") {
  const auto center = point_star_center(star_family(4, 2, 2), 2);
  REQUIRE(center.has_value());
  CHECK(*center == Subspace::coordinate(4, 2, 2));
  CHECK_FALSE(point_star_center(top_family(3, 2, 1), 1).has_value());
  CHECK_FALSE(point_star_center(star_family(4, 2, 1, 3), 1).has_value());
  CHECK_FALSE(point_star_center(Family(3, 2), 1).has_value());
}

TEST_CASE("top_family examples") {
  const Family top = top_family(3, 2, 1);
  CHECK(top.size() == 8);
  CHECK(is_t_intersecting(top, 1));
  const Family single = top_family(4, 3, 4);
  REQUIRE(single.size() == 1);
  CHECK(*single.begin() == Subspace::whole(4, 3));
  for (int n = 1; n <= 5; ++n) {
    for (int t = 1; t <= n; ++t) CHECK(is_t_intersecting(top_family(n, 2, t), t));
  }
  for (int t = 1; t <= 3; ++t) CHECK(is_t_intersecting(top_family(3, 3, t), t));
}

TEST_CASE("exact search matches the brute-force oracle") {
  struct Case {
    int n, q, t;
    Rational sigma;
  };
  const std::vector<Case> cases{{3, 2, 1, Rational(1, 16)}, {3, 2, 1, Rational(1, 8)}, {3, 2, 1, Rational(1, 2)},
                                {3, 2, 2, Rational(1, 8)},  {2, 3, 1, Rational(1, 3)}, {2, 2, 1, Rational(2)},
                                {3, 2, 1, Rational(3)}};
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.t);
    const OracleOptimum truth = brute_force_optimum(c.n, c.q, c.sigma, c.t);
    SearchConfig cfg;
    cfg.max_optima_reported = 1000;
    const SearchResult r = max_measure_t_intersecting(make_context(c.q, c.n, c.sigma), c.t, cfg);
    CHECK(r.complete);
    CHECK(r.optimum == truth.best);
    CHECK(r.optima == truth.optima);
    CHECK(r.optima_count == truth.optima.size());
  }
}

TEST_CASE("search at (3, 2, 1/16) returns exactly the seven point stars") {
  const SearchResult r = max_measure_t_intersecting(make_context(2, 3, Rational(1, 16)), 1);
  CHECK(r.optimum == Rational(1, 17));
  CHECK(r.complete);
  CHECK(r.optima == all_point_stars(3, 2, 1));
}

TEST_CASE("search results are t-intersecting, reach the star, and shrink with t") {
  const ExactContext ctx = make_context(2, 4, Rational(1, 16));
  const SearchResult one = max_measure_t_intersecting(ctx, 1);
  const SearchResult two = max_measure_t_intersecting(ctx, 2);
  CHECK(two.optimum <= one.optimum);
  for (const auto* r : {&one, &two}) {
    CHECK(r->optimum >= measure_star_closed(ctx, r->t));
    for (const auto& f : r->optima) {
      CHECK(is_t_intersecting(f, r->t));
      CHECK(measure_family(ctx, f) == r->optimum);
    }
  }
  CHECK(one.optima == all_point_stars(4, 2, 1));
}

TEST_CASE("search is identical across thread counts") {
  const ExactContext ctx = make_context(2, 4, Rational(1, 8));
  SearchConfig one;
  SearchConfig many;
  many.threads = 8;
  const SearchResult a = max_measure_t_intersecting(ctx, 1, one);
  const SearchResult b = max_measure_t_intersecting(ctx, 1, many);
  CHECK(search_json(a).dump() == search_json(b).dump());
}

TEST_CASE("search caps and budgets") {
  const ExactContext ctx = make_context(2, 3, Rational(1, 16));
  SearchConfig small;
  small.max_vertices = 10;
  try {
    max_measure_t_intersecting(ctx, 1, small);
    FAIL("expected a cap error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapExceeded);
  }
  SearchConfig truncated;
  truncated.max_optima_reported = 2;
  const SearchResult r = max_measure_t_intersecting(ctx, 1, truncated);
  CHECK(r.optima.size() == 2);
  CHECK(r.optima_count == 7);
  CHECK(r.optima_truncated);

  SearchConfig budget;
  budget.time_budget = 0.0;
  const ExactContext big = make_context(2, 5, Rational(1, 32));
  const SearchResult partial = max_measure_t_intersecting(big, 1, budget);
  CHECK_FALSE(partial.complete);
  CHECK(partial.optimum >= measure_star_closed(big, 1));
}

TEST_CASE("subspace pair counterexample") {
  const SubspacePairReport r = subspace_pair_counterexample(3, 2);
  CHECK(r.n == 4);
  CHECK(r.size_u == 3);
  CHECK(r.size_w == 3);
  CHECK(r.product == 9);
  CHECK(r.ekr_product == 7);
  CHECK(r.formula_product == oracle::gaussian_pascal(2, 1, 2) * oracle::gaussian_pascal(2, 1, 2));
  CHECK(r.cross_intersecting);
  CHECK(r.exceeds);
  CHECK(is_cross_t_intersecting(r.u, r.w, 1));
  const SubspacePairReport r3 = subspace_pair_counterexample(3, 3);
  CHECK(r3.product == 16);
  CHECK(r3.ekr_product == 13);
  for (int l = 3; l <= 5; ++l) {
    const SubspacePairReport s = subspace_pair_counterexample(l, 2);
    CHECK(s.product == oracle::gaussian_pascal(2, 1, 2) * oracle::gaussian_pascal(l - 1, 1, 2));
    CHECK(s.ekr_product == oracle::gaussian_pascal(l, 1, 2));
    CHECK(s.exceeds);
  }
}

TEST_CASE("subset counterexample arithmetic") {
  auto binom = [](long n, long k) {
    BigInt r = 1;
    for (long j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
    return r;
  };
  const SubsetCheckReport r = subset_counterexample_check(2, 18, 34);
  CHECK(r.lhs == 2210);
  CHECK(r.rhs == 1089);
  CHECK(r.strict_inequality);
  CHECK(r.size_u == binom(34, 2) - binom(32, 2));
  CHECK(r.size_w == binom(32, 16));
  CHECK(r.ekr_product == binom(33, 1) * binom(33, 17));
  CHECK(r.product == r.size_u * r.size_w);
  CHECK(r.product_exceeds);
  CHECK(r.product > r.ekr_product);

  const SubsetCheckReport none = subset_counterexample_check(1, 1, 10);
  CHECK(none.lhs == 0);
  CHECK(none.rhs == 81);
  CHECK_FALSE(none.strict_inequality);

  const SubsetCheckReport big = subset_counterexample_check(3, 27, 51);
  CHECK(big.lhs == 7644);
  CHECK(big.rhs == 2500);
  CHECK(big.strict_inequality);
  CHECK_THROWS_AS(subset_counterexample_check(3, 27, 20), Error);
}

TEST_CASE("uniform bound oracle") {
  const Family layer = star_family(4, 2, 1).layer(2);
  CHECK(layer.size() == 7);
  const UniformBoundReport r = uniform_bound_oracle(layer, layer, 1);
  REQUIRE(r.checks.size() == 5);
  CHECK(r.checks[0].applicable);
  CHECK(r.checks[0].lhs == 7);
  CHECK(r.checks[0].bound == 7);
  CHECK(r.checks[0].tight);

  const UniformBoundReport empty = uniform_bound_oracle(Family(4, 2), Family(4, 2), 1);
  for (const auto& c : empty.checks) CHECK(c.applicable);

  const SubspacePairReport pair = subspace_pair_counterexample(3, 2);
  const UniformBoundReport cx = uniform_bound_oracle(pair.u, pair.w, 1);
  CHECK_FALSE(cx.checks[4].applicable);
  CHECK(cx.checks[4].reason == "n < k + l + t + 1");
  CHECK_FALSE(cx.checks[3].applicable);

  CHECK_THROWS_AS(uniform_bound_oracle(star_family(3, 2, 1), layer, 1), Error);
}

TEST_CASE("g_lower_bound") {
  PrecisionScope scope(256);
  const Scalar a(Rational(3, 10)), b(Rational(3, 5));
  CHECK(close_relative(g_lower_bound(a, b, 12, 2, 1), g_lower_bound(b, a, 12, 2, 1), real_tolerance(256)));
  CHECK(g_lower_bound(a, b, 12, 2, 0) == Real(1L));
  const Real limit = pow(Real(2L), Real(Rational(-7, 5)));
  Real previous(10L);
  for (int n = 10; n <= 60; n += 2) {
    const Real dev = abs(g_lower_bound(a, a, n, 2, 1) - limit);
    CHECK(dev < previous);
    previous = dev;
  }
}
