#include "qekr/qcombinat.hpp"

#include <algorithm>

namespace qekr {

bool is_supported_order(int q) {
  return std::find(kSupportedOrders.begin(), kSupportedOrders.end(), q) != kSupportedOrders.end();
}

Rational q_int(long m, int q) { return q_bracket(m, Rational(q)); }

Real q_bracket_real(const Real& lambda, int q) {
  if (lambda.sign() < 0) {
    throw Error(ErrorKind::Domain, "q-bracket of a negative exponent");
  }
  PrecisionScope scope(lambda.precision_bits());
  Real qr(static_cast<long>(q));
  return (pow(qr, lambda) - Real(1)) / (qr - Real(1));
}

Rational gaussian_binomial(long n, long k, int q) { return gaussian_binomial(n, k, Rational(q)); }

BigInt gaussian_count(long n, long k, int q) {
  return numerator(gaussian_binomial(n, k, Rational(q)));
}

Scalar q_pochhammer(const Scalar& sigma, int q, long m) {
  return visit_scalar(sigma, [&]<class T>(const T& s) {
    return q_pochhammer(s, from_int<T>(q), m);
  });
}

Scalar q_binomial_sum(const Scalar& sigma, int q, long m) {
  return visit_scalar(sigma, [&]<class T>(const T& s) {
    return q_binomial_sum(s, from_int<T>(q), m);
  });
}

Scalar phi(const Scalar& sigma, int q, long n, long k) {
  if (sign(sigma) <= 0) {
    throw Error(ErrorKind::Domain, "sigma must be positive");
  }
  return visit_scalar(sigma, [&]<class T>(const T& s) { return phi(s, from_int<T>(q), n, k); });
}

namespace {

void check_technical_args(long a, long b, long c) {
  if (b < 0 || c < 0 || a < b) {
    throw Error(ErrorKind::Domain, "technical identity needs a >= b >= 0 and c >= 0");
  }
}

}  // namespace

Rational technical_sum(long a, long b, long c, const Rational& q) {
  check_technical_args(a, b, c);
  Rational total = 0;
  for (long j = 0; j <= b; ++j) {
    Rational term = gaussian_binomial(b, j, q) * gaussian_binomial(a - j, c, q) *
                    ipow(q, binom2(j));
    total += (j % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

Rational technical_closed(long a, long b, long c, const Rational& q) {
  check_technical_args(a, b, c);
  if (b > c || c > a) {
    return 0;
  }
  return ipow(q, b * (a - c)) * gaussian_binomial(a - b, c - b, q);
}

Scalar sigma_theta(const Scalar& theta, long n, int q, unsigned bits) {
  if (const auto* t = std::get_if<Rational>(&theta)) {
    if (*t <= 0 || *t >= 1) {
      throw Error(ErrorKind::Domain, "theta must lie in (0, 1)");
    }
    Rational exponent = (Rational(1) - *t) * n;
    if (is_integer(exponent)) {
      return ipow(Rational(q), -numerator(exponent).convert_to<long>());
    }
    PrecisionScope scope(bits);
    return pow(Real(static_cast<long>(q)), -Real(exponent));
  }
  const Real& t = std::get<Real>(theta);
  if (t.sign() <= 0 || t >= Real(1)) {
    throw Error(ErrorKind::Domain, "theta must lie in (0, 1)");
  }
  PrecisionScope scope(std::max(bits, t.precision_bits()));
  return pow(Real(static_cast<long>(q)), -((Real(1) - t) * Real(n)));
}

Scalar sigma_conjecture(const Scalar& p, long n, int q, unsigned bits) {
  if (sign(p) <= 0) {
    throw Error(ErrorKind::Domain, "p must be positive");
  }
  if (const auto* pr = std::get_if<Rational>(&p)) {
    Rational pn = *pr * n;
    if (pn >= n) {
      throw Error(ErrorKind::Domain, "sigma_conjecture needs pn < n");
    }
    if (is_integer(pn)) {
      Rational top = q_int(numerator(pn).convert_to<long>(), q);
      return top / (q_int(n, q) - top);
    }
    PrecisionScope scope(bits);
    Real top = q_bracket_real(Real(pn), q);
    return top / (Real(q_int(n, q)) - top);
  }
  const Real& pr = std::get<Real>(p);
  PrecisionScope scope(std::max(bits, pr.precision_bits()));
  Real pn = pr * Real(n);
  if (pn >= Real(n)) {
    throw Error(ErrorKind::Domain, "sigma_conjecture needs pn < n");
  }
  Real top = q_bracket_real(pn, q);
  return top / (Real(q_int(n, q)) - top);
}

}  // namespace qekr
