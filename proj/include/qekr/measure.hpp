#pragma once

// The sigma-biased measure on the subspace lattice: layer weights, measures
// of families and point stars, the layer distribution Phi(k) under
// sigma = q^{-(1-theta)n}, its moments, and its tails.

#include "qekr/family.hpp"
#include "qekr/numeric.hpp"
#include "qekr/qcombinat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qekr {

template <class T>
struct MeasureContext {
  int q = 2;
  int n = 0;
  T sigma;
  /// phi(k), k = 0..n: the measure of one k-dimensional subspace.
  std::vector<T> phi;
  /// Phi(k) = [n choose k] phi(k): the mass of layer k.
  std::vector<T> layer_mass;
};

using ExactContext = MeasureContext<Rational>;
using RealContext = MeasureContext<Real>;

/// Throws Error(Domain) unless sigma > 0 and n >= 0. Exact contexts verify
/// that the layer masses sum to one and throw Error(Invariant) otherwise.
template <class T>
MeasureContext<T> make_context(int q, int n, const T& sigma);

/// Context for sigma_{theta,n} evaluated in Real arithmetic at `bits`.
RealContext make_theta_context(const Scalar& theta, int n, int q, unsigned bits);

template <class T>
T measure_family(const MeasureContext<T>& ctx, const Family& family);

/// sigma^t q^C(t,2) / (-sigma; q)_t.
template <class T>
T measure_star_closed(const MeasureContext<T>& ctx, int t);

/// prod_{j<t} (1 + q^{(1-theta)n - j})^{-1}.
Real measure_star_product_form(const Scalar& theta, int n, int q, int t,
                               unsigned bits = kDefaultPrecisionBits);

struct MomentReport {
  int n = 0;
  int q = 2;
  Scalar theta;
  Scalar sigma;
  // Closed forms.
  Scalar mean_x, mean_x2, mean_xinv, mean_xinv2;
  // Direct sums over the layer distribution of q^{+-(k - theta n)} and squares.
  Scalar direct_mean_x, direct_mean_x2, direct_mean_xinv, direct_mean_xinv2;
  Scalar var_x, var_xinv;
  // Large-n limits: 1, q, q-1, q, q^3, q^3-q^2.
  long limit_mean_x = 1, limit_mean_x2 = 0, limit_var_x = 0;
  long limit_mean_xinv = 0, limit_mean_xinv2 = 0, limit_var_xinv = 0;
  /// Closed forms agree with the direct sums (exactly, or to 1e-12 relative).
  bool closed_matches_direct = false;
};

/// Exact when theta is rational and theta*n is an integer; Real otherwise.
MomentReport moments(const Scalar& theta, int n, int q, unsigned bits = kDefaultPrecisionBits);

struct TailReport {
  int n = 0;
  std::string description;
  Rational cutoff;
  bool above = true;
  Real tail;
  std::string normalizer_description;
  Real normalizer;
  Real normalized;
};

/// Sum of Phi(k) over integers cutoff < k <= n.
Real tail_above(const RealContext& ctx, const Rational& cutoff);
/// Sum of Phi(k) over integers 0 <= k < cutoff.
Real tail_below(const RealContext& ctx, const Rational& cutoff);

/// Mass above n/2, scaled by q^{(1-theta)tn}.
TailReport tail_above_half(const Scalar& theta, int n, int q, int t, unsigned bits = kTailPrecisionBits);
/// Mass below (n+t)/2, scaled by q^{delta n^2}.
TailReport tail_below_middle(const Scalar& theta, int n, int q, int t, const Real& delta,
                       unsigned bits = kTailPrecisionBits);
/// Mass above (n-t-1)/2, scaled by q^{2tn}.
TailReport tail_above_shifted(const Scalar& theta, int n, int q, int t, unsigned bits = kTailPrecisionBits);

/// (theta - 1/2)^2 / 4, strictly inside (0, (theta-1/2)^2/2).
Real default_lower_tail_delta(const Scalar& theta, unsigned bits = kTailPrecisionBits);

struct MonotoneProfile {
  std::string regime;  // "decreasing-above", "increasing-below", or "none"
  int first_k = 0;
  int last_k = -1;
  bool holds = true;
  std::optional<int> first_violation;
};

/// Checks Phi(k+1)/Phi(k) < 1 for k >= ceil(n/2) when theta < 1/2, and
/// Phi(k-1)/Phi(k) < 1 for 1 <= k <= ceil((n+t)/2) when theta > 1/2, using
/// the ratio ([n-k]/[k+1]) sigma q^k.
template <class T>
MonotoneProfile monotone_profile(const MeasureContext<T>& ctx, const Scalar& theta, int t);

}  // namespace qekr
