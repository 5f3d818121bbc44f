#pragma once

// Intersecting families: predicates, the canonical constructions (point
// stars and the top family), exact maximum-measure search by branch and
// bound, the counterexample arithmetic for cross-intersecting pairs, and
// inequality oracles for the classical uniform bounds.

#include "qekr/family.hpp"
#include "qekr/measure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qekr {

/// Every pair, including x with itself, meets in dimension >= t.
bool is_t_intersecting(const Family& family, int t);
/// Every pair (x in u, y in w) meets in dimension >= t. Throws on ambient mismatch.
bool is_cross_t_intersecting(const Family& u, const Family& w, int t);

/// All subspaces containing y, optionally only those of dimension <= upto.
Family star_at(const Subspace& y, std::optional<int> upto = std::nullopt,
               std::uint64_t cap = kDefaultEnumerationCap);
/// The star of the span of the first t standard basis vectors.
Family star_family(int n, int q, int t, std::optional<int> upto = std::nullopt,
                   std::uint64_t cap = kDefaultEnumerationCap);
/// The t-dimensional subspace y when `family` is exactly the full star at y.
std::optional<Subspace> point_star_center(const Family& family, int t);
/// All subspaces of dimension >= (n+t)/2.
Family top_family(int n, int q, int t, std::uint64_t cap = kDefaultEnumerationCap);

struct SearchConfig {
  std::size_t max_vertices = 400;
  std::size_t max_optima_reported = 64;
  unsigned threads = 1;
  /// Wall-clock budget in seconds; unlimited when empty.
  std::optional<double> time_budget;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct SearchResult {
  int n = 0;
  int q = 2;
  int t = 1;
  Rational sigma;
  /// Maximum of mu_sigma(U) over t-intersecting U (best found when incomplete).
  Rational optimum;
  /// Optimal families in canonical order, at most max_optima_reported of them.
  std::vector<Family> optima;
  /// Number of optimal families found in total.
  std::uint64_t optima_count = 0;
  bool optima_truncated = false;
  std::uint64_t explored_nodes = 0;
  std::size_t vertices = 0;
  /// True iff the search tree was exhausted.
  bool complete = false;
};

/// Maximum-weight independent sets of the conflict graph on subspaces of
/// dimension >= t (edges join pairs meeting in dimension < t). Throws
/// Error(CapExceeded) when the vertex count exceeds cfg.max_vertices.
SearchResult max_measure_t_intersecting(const ExactContext& ctx, int t, const SearchConfig& cfg = {});

struct SubspacePairReport {
  int ell = 3;
  int q = 2;
  int n = 4;
  Family u;
  Family w;
  BigInt size_u, size_w, product;
  /// [2,1][ell-1,1]
  BigInt formula_product;
  /// [n-1,k-1][n-1,ell-1] = [ell,1]
  BigInt ekr_product;
  bool cross_intersecting = false;
  bool exceeds = false;
};

/// k = 1, n = 1 + ell: lines inside a fixed plane z against ell-subspaces through z.
SubspacePairReport subspace_pair_counterexample(int ell, int q, std::uint64_t cap = kDefaultEnumerationCap);

struct SubsetCheckReport {
  int k = 0, ell = 0, n = 0;
  BigInt lhs;  // (2n-k-1) k (ell-1)
  BigInt rhs;  // (n-1)^2
  bool strict_inequality = false;
  BigInt size_u;  // C(n,k) - C(n-2,k)
  BigInt size_w;  // C(n-2,ell-2)
  BigInt product;
  BigInt ekr_product;  // C(n-1,k-1) C(n-1,ell-1)
  bool product_exceeds = false;
};

SubsetCheckReport subset_counterexample_check(int k, int ell, int n);

BigInt binomial(long n, long k);

struct OracleCheck {
  std::string name;
  bool applicable = false;
  std::string reason;
  BigInt lhs;
  BigInt bound;
  bool tight = false;
};

struct UniformBoundReport {
  std::vector<OracleCheck> checks;
};

/// Runs the uniform-family bounds that apply to (u, w): the single-family
/// bound on each side and the cross bounds for equal and unequal layers.
/// Checks whose hypotheses fail are reported as not applicable; a violated
/// bound throws Error(Invariant).
UniformBoundReport uniform_bound_oracle(const Family& u, const Family& w, int t);

/// (mu_1(A) mu_2(A))^{1/n} with mu_i the star measure under sigma_{theta_i,n}.
Real g_lower_bound(const Scalar& theta1, const Scalar& theta2, int n, int q, int t,
                   unsigned bits = kDefaultPrecisionBits);

}  // namespace qekr
