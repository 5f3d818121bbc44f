#pragma once

// Exact q-arithmetic: brackets, Gaussian binomials, q-Pochhammer products,
// the layer weight phi, and the alternating-sum identity used to simplify
// the certificate matrix F.
//
// Templates accept T = Rational (exact) or T = Real. The base q is also a T
// so the same code evaluates q -> 1 limits at rational q = 1 + 10^-d.

#include "qekr/numeric.hpp"

#include <array>

namespace qekr {

inline constexpr std::array<int, 10> kSupportedOrders = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16};

bool is_supported_order(int q);

inline long binom2(long k) { return k * (k - 1) / 2; }

template <class T>
T pow_int(const T& base, long exponent) {
  return ipow(base, exponent);
}

/// [m] = 1 + q + ... + q^(m-1); equals m at q = 1.
template <class T>
T q_bracket(long m, const T& q) {
  if (m < 0) {
    throw Error(ErrorKind::Domain, "q-bracket of a negative integer");
  }
  if (q == from_int<T>(1)) {
    return from_int<T>(m);
  }
  return (pow_int(q, m) - from_int<T>(1)) / (q - from_int<T>(1));
}

/// Gaussian binomial [n choose k]_q; zero when k < 0 or k > n.
template <class T>
T gaussian_binomial(long n, long k, const T& q) {
  if (k < 0 || n < 0 || k > n) {
    return from_int<T>(0);
  }
  if (k > n - k) {
    k = n - k;
  }
  T result = from_int<T>(1);
  for (long j = 0; j < k; ++j) {
    result *= q_bracket(n - j, q);
    result /= q_bracket(j + 1, q);
  }
  return result;
}

/// (-sigma; q)_m = prod_{j<m} (1 + sigma q^j).
template <class T>
T q_pochhammer(const T& sigma, const T& q, long m) {
  T result = from_int<T>(1);
  T qj = from_int<T>(1);
  for (long j = 0; j < m; ++j) {
    result *= from_int<T>(1) + sigma * qj;
    qj *= q;
  }
  return result;
}

/// (a; q)_m = prod_{j<m} (1 - a q^j); (q;q)_m is q_shifted_factorial(q, q, m).
template <class T>
T q_shifted_factorial(const T& a, const T& q, long m) {
  T result = from_int<T>(1);
  T aqj = a;
  for (long j = 0; j < m; ++j) {
    result *= from_int<T>(1) - aqj;
    aqj *= q;
  }
  return result;
}

/// Sum_k [m choose k] sigma^k q^C(k,2): the expanded side of the q-binomial theorem.
template <class T>
T q_binomial_sum(const T& sigma, const T& q, long m) {
  T total = from_int<T>(0);
  for (long k = 0; k <= m; ++k) {
    total += gaussian_binomial(m, k, q) * pow_int(sigma, k) * pow_int(q, binom2(k));
  }
  return total;
}

/// phi_{sigma,n}(k) = sigma^k q^C(k,2) / (-sigma; q)_n.
template <class T>
T phi(const T& sigma, const T& q, long n, long k) {
  if (k < 0 || k > n) {
    throw Error(ErrorKind::Domain, "phi: k must lie in [0, n]");
  }
  return pow_int(sigma, k) * pow_int(q, binom2(k)) / q_pochhammer(sigma, q, n);
}

/// Applies fn to the value held by s, as Rational or as Real at the value's precision.
template <class Fn>
Scalar visit_scalar(const Scalar& s, Fn&& fn) {
  if (const auto* r = std::get_if<Rational>(&s)) {
    return Scalar(fn(*r));
  }
  const Real& x = std::get<Real>(s);
  PrecisionScope scope(x.precision_bits());
  return Scalar(fn(x));
}

// Integer-q conveniences.
Rational q_int(long m, int q);
Real q_bracket_real(const Real& lambda, int q);
Rational gaussian_binomial(long n, long k, int q);
BigInt gaussian_count(long n, long k, int q);
Scalar q_pochhammer(const Scalar& sigma, int q, long m);
Scalar q_binomial_sum(const Scalar& sigma, int q, long m);
Scalar phi(const Scalar& sigma, int q, long n, long k);

/// Alternating sum  Sum_{j<=b} [b,j][a-j,c](-1)^j q^C(j,2).
Rational technical_sum(long a, long b, long c, const Rational& q);
/// Its closed form q^(b(a-c)) [a-b, c-b]; zero when b > c.
Rational technical_closed(long a, long b, long c, const Rational& q);

/// q^{-(1-theta) n}; exact when theta is rational and (1-theta)n is an integer.
Scalar sigma_theta(const Scalar& theta, long n, int q, unsigned bits = kDefaultPrecisionBits);
/// [pn] / ([n] - [pn]) with the real-extended bracket; rejects pn >= n.
Scalar sigma_conjecture(const Scalar& p, long n, int q, unsigned bits = kDefaultPrecisionBits);

}  // namespace qekr
