#include "qekr/measure.hpp"

#include <algorithm>

namespace qekr {

template <class T>
MeasureContext<T> make_context(int q, int n, const T& sigma) {
  if (sigma <= from_int<T>(0)) {
    throw Error(ErrorKind::Domain, "sigma must be positive");
  }
  if (n < 0) {
    throw Error(ErrorKind::Domain, "ambient dimension must be nonnegative");
  }
  if (q < 2) {
    throw Error(ErrorKind::Domain, "q must be at least 2");
  }
  MeasureContext<T> ctx;
  ctx.q = q;
  ctx.n = n;
  ctx.sigma = sigma;
  const T qt = from_int<T>(q);
  const T norm = q_pochhammer(sigma, qt, n);
  T total = from_int<T>(0);
  for (int k = 0; k <= n; ++k) {
    T w = pow_int(sigma, k) * pow_int(qt, binom2(k)) / norm;
    ctx.layer_mass.push_back(gaussian_binomial(n, k, qt) * w);
    ctx.phi.push_back(std::move(w));
    total += ctx.layer_mass.back();
  }
  if constexpr (std::is_same_v<T, Rational>) {
    if (total != 1) {
      throw Error(ErrorKind::Invariant, "layer masses do not sum to one");
    }
  }
  return ctx;
}

template ExactContext make_context<Rational>(int, int, const Rational&);
template RealContext make_context<Real>(int, int, const Real&);

RealContext make_theta_context(const Scalar& theta, int n, int q, unsigned bits) {
  PrecisionScope scope(bits);
  Real sigma = Real::with_precision(to_real(sigma_theta(theta, n, q, bits)), bits);
  return make_context<Real>(q, n, sigma);
}

template <class T>
T measure_family(const MeasureContext<T>& ctx, const Family& family) {
  if (family.ambient() != ctx.n || family.field_order() != ctx.q) {
    throw Error(ErrorKind::Domain, "family and measure context have different ambient spaces");
  }
  T total = from_int<T>(0);
  for (const auto& x : family) total += ctx.phi[x.dim()];
  return total;
}

template Rational measure_family<Rational>(const ExactContext&, const Family&);
template Real measure_family<Real>(const RealContext&, const Family&);

template <class T>
T measure_star_closed(const MeasureContext<T>& ctx, int t) {
  if (t < 0 || t > ctx.n) {
    throw Error(ErrorKind::Domain, "star dimension t must lie in [0, n]");
  }
  const T qt = from_int<T>(ctx.q);
  return pow_int(ctx.sigma, t) * pow_int(qt, binom2(t)) / q_pochhammer(ctx.sigma, qt, t);
}

template Rational measure_star_closed<Rational>(const ExactContext&, int);
template Real measure_star_closed<Real>(const RealContext&, int);

namespace {

Real theta_as_real(const Scalar& theta) {
  Real t = to_real(theta);
  if (t.sign() <= 0 || t >= Real(1)) {
    throw Error(ErrorKind::Domain, "theta must lie in (0, 1)");
  }
  return t;
}

}  // namespace

Real measure_star_product_form(const Scalar& theta, int n, int q, int t, unsigned bits) {
  PrecisionScope scope(bits);
  Real th = Real::with_precision(theta_as_real(theta), bits);
  Real qr(static_cast<long>(q));
  Real product(1);
  for (int j = 0; j < t; ++j) {
    product *= Real(1) + pow(qr, (Real(1) - th) * Real(n) - Real(j));
  }
  return Real(1) / product;
}

// --- moments ---

namespace {

template <class T>
void fill_moments(MomentReport& r, const T& sigma, const T& q_theta_n) {
  const int n = r.n;
  const T one = from_int<T>(1);
  const T qt = from_int<T>(r.q);
  const T qtn2 = q_theta_n * q_theta_n;
  const T mean_x = (one + sigma * pow_int(qt, n)) / (q_theta_n * (one + sigma));
  const T mean_x2 = (one + sigma * pow_int(qt, n)) * (one + sigma * pow_int(qt, n + 1)) /
                    (qtn2 * (one + sigma) * (one + sigma * qt));
  const T mean_xinv = q_theta_n * (one + sigma / qt) / (one + sigma * pow_int(qt, n - 1));
  const T mean_xinv2 = qtn2 * (one + sigma / (qt * qt)) * (one + sigma / qt) /
                       ((one + sigma * pow_int(qt, n - 2)) * (one + sigma * pow_int(qt, n - 1)));

  auto ctx = make_context<T>(r.q, n, sigma);
  T d1 = from_int<T>(0), d2 = from_int<T>(0), di1 = from_int<T>(0), di2 = from_int<T>(0);
  for (int k = 0; k <= n; ++k) {
    const T x = pow_int(qt, k) / q_theta_n;
    const T& mass = ctx.layer_mass[k];
    d1 += x * mass;
    d2 += x * x * mass;
    di1 += mass / x;
    di2 += mass / (x * x);
  }

  bool agree = false;
  if constexpr (std::is_same_v<T, Rational>) {
    agree = mean_x == d1 && mean_x2 == d2 && mean_xinv == di1 && mean_xinv2 == di2;
  } else {
    Real tol = Real::parse("1e-12", sigma.precision_bits());
    agree = close_relative(mean_x, d1, tol) && close_relative(mean_x2, d2, tol) &&
            close_relative(mean_xinv, di1, tol) && close_relative(mean_xinv2, di2, tol);
  }
  r.sigma = sigma;
  r.mean_x = mean_x;
  r.mean_x2 = mean_x2;
  r.mean_xinv = mean_xinv;
  r.mean_xinv2 = mean_xinv2;
  r.direct_mean_x = d1;
  r.direct_mean_x2 = d2;
  r.direct_mean_xinv = di1;
  r.direct_mean_xinv2 = di2;
  r.var_x = T(mean_x2 - mean_x * mean_x);
  r.var_xinv = T(mean_xinv2 - mean_xinv * mean_xinv);
  r.closed_matches_direct = agree;
}

}  // namespace

MomentReport moments(const Scalar& theta, int n, int q, unsigned bits) {
  if (n < 0) throw Error(ErrorKind::Domain, "n must be nonnegative");
  MomentReport r;
  r.n = n;
  r.q = q;
  r.theta = theta;
  r.limit_mean_x = 1;
  r.limit_mean_x2 = q;
  r.limit_var_x = q - 1;
  r.limit_mean_xinv = q;
  r.limit_mean_xinv2 = static_cast<long>(q) * q * q;
  r.limit_var_xinv = static_cast<long>(q) * q * q - static_cast<long>(q) * q;
  Scalar sigma = sigma_theta(theta, n, q, bits);
  if (const auto* th = std::get_if<Rational>(&theta)) {
    Rational theta_n = *th * n;
    if (is_integer(theta_n) && is_exact(sigma)) {
      fill_moments<Rational>(r, std::get<Rational>(sigma),
                             ipow(Rational(q), numerator(theta_n).convert_to<long>()));
      return r;
    }
  }
  PrecisionScope scope(bits);
  Real th = Real::with_precision(theta_as_real(theta), bits);
  Real s = Real::with_precision(to_real(sigma), bits);
  fill_moments<Real>(r, s, pow(Real(static_cast<long>(q)), th * Real(n)));
  return r;
}

// --- tails ---

Real tail_above(const RealContext& ctx, const Rational& cutoff) {
  PrecisionScope scope(ctx.sigma.precision_bits());
  Real total(0);
  for (int k = 0; k <= ctx.n; ++k) {
    if (Rational(k) > cutoff) total += ctx.layer_mass[k];
  }
  return total;
}

Real tail_below(const RealContext& ctx, const Rational& cutoff) {
  PrecisionScope scope(ctx.sigma.precision_bits());
  Real total(0);
  for (int k = 0; k <= ctx.n; ++k) {
    if (Rational(k) < cutoff) total += ctx.layer_mass[k];
  }
  return total;
}

namespace {

TailReport make_tail(const Scalar& theta, int n, int q, const Rational& cutoff, bool above,
                     const Real& log_q_normalizer, unsigned bits) {
  PrecisionScope scope(bits);
  auto ctx = make_theta_context(theta, n, q, bits);
  TailReport r;
  r.n = n;
  r.cutoff = cutoff;
  r.above = above;
  r.tail = above ? tail_above(ctx, cutoff) : tail_below(ctx, cutoff);
  r.normalizer = pow(Real(static_cast<long>(q)), log_q_normalizer);
  r.normalized = r.tail * r.normalizer;
  return r;
}

}  // namespace

TailReport tail_above_half(const Scalar& theta, int n, int q, int t, unsigned bits) {
  PrecisionScope scope(bits);
  Real th = Real::with_precision(theta_as_real(theta), bits);
  auto r = make_tail(theta, n, q, Rational(n, 2), true, (Real(1) - th) * Real(t) * Real(n), bits);
  r.description = "sum of Phi(k) over n/2 < k <= n";
  r.normalizer_description = "q^((1-theta) t n)";
  return r;
}

TailReport tail_below_middle(const Scalar& theta, int n, int q, int t, const Real& delta, unsigned bits) {
  PrecisionScope scope(bits);
  theta_as_real(theta);
  auto r = make_tail(theta, n, q, Rational(n + t, 2), false,
                     Real::with_precision(delta, bits) * Real(n) * Real(n), bits);
  r.description = "sum of Phi(k) over 0 <= k < (n+t)/2";
  r.normalizer_description = "q^(delta n^2)";
  return r;
}

TailReport tail_above_shifted(const Scalar& theta, int n, int q, int t, unsigned bits) {
  PrecisionScope scope(bits);
  theta_as_real(theta);
  auto r = make_tail(theta, n, q, Rational(n - t - 1, 2), true, Real(2L * t * n), bits);
  r.description = "sum of Phi(k) over (n-t-1)/2 < k <= n";
  r.normalizer_description = "q^(2 t n)";
  return r;
}

Real default_lower_tail_delta(const Scalar& theta, unsigned bits) {
  PrecisionScope scope(bits);
  Real d = Real::with_precision(theta_as_real(theta), bits) - Real(Rational(1, 2));
  return d * d / Real(4);
}

template <class T>
MonotoneProfile monotone_profile(const MeasureContext<T>& ctx, const Scalar& theta, int t) {
  MonotoneProfile p;
  const int n = ctx.n;
  const T qt = from_int<T>(ctx.q);
  const T one = from_int<T>(1);
  // Phi(k+1)/Phi(k)
  auto up_ratio = [&](int k) {
    return q_bracket(n - k, qt) / q_bracket(k + 1, qt) * ctx.sigma * pow_int(qt, k);
  };
  Real th = to_real(theta);
  Real half = Real(Rational(1, 2));
  if (n == 0 || th == half) {
    p.regime = "none";
    return p;
  }
  if (th < half) {
    p.regime = "decreasing-above";
    p.first_k = (n + 1) / 2;
    p.last_k = n - 1;
    for (int k = p.first_k; k <= p.last_k; ++k) {
      if (!(up_ratio(k) < one)) {
        p.holds = false;
        p.first_violation = k;
        break;
      }
    }
  } else {
    p.regime = "increasing-below";
    p.first_k = 1;
    p.last_k = std::min(n, (n + t + 1) / 2);
    for (int k = p.first_k; k <= p.last_k; ++k) {
      // Phi(k-1)/Phi(k) = 1 / up_ratio(k-1)
      if (!(up_ratio(k - 1) > one)) {
        p.holds = false;
        p.first_violation = k;
        break;
      }
    }
  }
  return p;
}

template MonotoneProfile monotone_profile<Rational>(const ExactContext&, const Scalar&, int);
template MonotoneProfile monotone_profile<Real>(const RealContext&, const Scalar&, int);

}  // namespace qekr
