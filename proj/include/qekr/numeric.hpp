#pragma once

// Number types shared by every module: exact big rationals, MPFR-backed
// reals with per-value precision, and the Exact|Real scalar union.

#include <boost/multiprecision/gmp.hpp>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace qekr {

namespace bmp = boost::multiprecision;

using BigInt = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;

/// Error categories; the CLI maps them onto exit codes.
enum class ErrorKind { Domain, CapExceeded, Invariant, Budget };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kTailPrecisionBits = 512;

/// Working precision for Real values created from integers or rationals on
/// the current thread. Arithmetic results take the larger operand precision.
unsigned working_precision();

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Arbitrary-precision binary floating point (MPFR, round-to-nearest).
class Real {
 public:
  Real();
  Real(long v);  // NOLINT(google-explicit-constructor)
  Real(int v) : Real(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Real(double v);
  explicit Real(const Rational& v);
  explicit Real(const BigInt& v);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses a decimal string at the given precision.
  static Real parse(std::string_view text, unsigned bits);
  static Real with_precision(const Real& v, unsigned bits);

  unsigned precision_bits() const;
  double to_double() const;
  bool is_zero() const;
  int sign() const;
  /// Scientific notation with the given number of significant digits
  /// (0 = all digits the precision supports).
  std::string str(unsigned significant_digits = 0) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  Real operator-() const;

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real pow(const Real& base, const Real& exponent);
  friend Real log(const Real& x);
  friend Real exp(const Real& x);

  mpfr_srcptr raw() const { return value_; }

 private:
  explicit Real(unsigned bits, int);
  mpfr_t value_;
};

/// Exact when every input was exact; Real otherwise.
using Scalar = std::variant<Rational, Real>;

inline bool is_exact(const Scalar& s) { return std::holds_alternative<Rational>(s); }
Real to_real(const Scalar& s);
int sign(const Scalar& s);
/// The exact dyadic rational held by an MPFR value.
Rational to_rational(const Real& x);
/// "exact" or "real@<bits>".
std::string mode_tag(const Scalar& s);

/// Accepts "a/b", integers, and decimals ("0.3", "-1.5e-2"); all parse exactly.
Rational parse_rational(std::string_view text);
/// "numerator/denominator", always with an explicit denominator.
std::string to_string(const Rational& r);
std::string to_string(const Scalar& s);

/// Floor and ceiling of a rational.
BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);
bool is_integer(const Rational& r);

Rational ipow(const Rational& base, long exponent);
Real ipow(const Real& base, long exponent);
BigInt ipow(const BigInt& base, unsigned long exponent);

/// Converts an integer to either number type.
template <class T>
T from_int(long v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(v);
  } else {
    return Real(v);
  }
}

/// Relative closeness |a-b| <= tol*max(|a|,|b|,tiny).
bool close_relative(const Real& a, const Real& b, const Real& tol);
/// 2^-(bits/2): the comparison tolerance for Real contracts at a given precision.
Real real_tolerance(unsigned bits);

}  // namespace qekr
