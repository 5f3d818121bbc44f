#include "qekr/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>

namespace qekr {

namespace {

thread_local unsigned t_working_bits = kDefaultPrecisionBits;

mpfr_prec_t max_prec(mpfr_srcptr a, mpfr_srcptr b) {
  return std::max(mpfr_get_prec(a), mpfr_get_prec(b));
}

}  // namespace

unsigned working_precision() { return t_working_bits; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(t_working_bits) {
  if (bits < MPFR_PREC_MIN) {
    throw Error(ErrorKind::Domain, "precision must be at least 2 bits");
  }
  t_working_bits = bits;
}

PrecisionScope::~PrecisionScope() { t_working_bits = saved_; }

// --- Real ---

Real::Real(unsigned bits, int) { mpfr_init2(value_, static_cast<mpfr_prec_t>(bits)); }

Real::Real() : Real(working_precision(), 0) { mpfr_set_zero(value_, 1); }

Real::Real(long v) : Real(working_precision(), 0) { mpfr_set_si(value_, v, MPFR_RNDN); }

Real::Real(double v) : Real(working_precision(), 0) { mpfr_set_d(value_, v, MPFR_RNDN); }

Real::Real(const Rational& v) : Real(working_precision(), 0) {
  mpfr_set_q(value_, v.backend().data(), MPFR_RNDN);
}

Real::Real(const BigInt& v) : Real(working_precision(), 0) {
  mpfr_set_z(value_, v.backend().data(), MPFR_RNDN);
}

Real::Real(const Real& other) : Real(static_cast<unsigned>(mpfr_get_prec(other.value_)), 0) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : Real(static_cast<unsigned>(mpfr_get_prec(other.value_)), 0) {
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::parse(std::string_view text, unsigned bits) {
  Real r(bits, 0);
  std::string s(text);
  if (mpfr_set_str(r.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw Error(ErrorKind::Domain, "not a decimal number: " + s);
  }
  return r;
}

Real Real::with_precision(const Real& v, unsigned bits) {
  Real r(bits, 0);
  mpfr_set(r.value_, v.value_, MPFR_RNDN);
  return r;
}

unsigned Real::precision_bits() const { return static_cast<unsigned>(mpfr_get_prec(value_)); }

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

bool Real::is_zero() const { return mpfr_zero_p(value_) != 0; }

int Real::sign() const { return mpfr_sgn(value_); }

std::string Real::str(unsigned significant_digits) const {
  if (mpfr_zero_p(value_)) {
    return "0";
  }
  if (significant_digits == 0) {
    significant_digits = static_cast<unsigned>(std::floor(precision_bits() * 0.30102999566398120));
  }
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(significant_digits - 1) + "Re";
  if (mpfr_asprintf(&buf, fmt.c_str(), value_) < 0) {
    throw Error(ErrorKind::Domain, "mpfr formatting failed");
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

#define QEKR_REAL_BINOP(op, fn)                          \
  Real& Real::operator op(const Real& o) {               \
    mpfr_prec_t p = max_prec(value_, o.value_);          \
    if (p > mpfr_get_prec(value_)) {                     \
      mpfr_prec_round(value_, p, MPFR_RNDN);             \
    }                                                    \
    fn(value_, value_, o.value_, MPFR_RNDN);             \
    return *this;                                        \
  }

QEKR_REAL_BINOP(+=, mpfr_add)
QEKR_REAL_BINOP(-=, mpfr_sub)
QEKR_REAL_BINOP(*=, mpfr_mul)
QEKR_REAL_BINOP(/=, mpfr_div)

#undef QEKR_REAL_BINOP

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) {
    return std::partial_ordering::unordered;
  }
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x);
  mpfr_sqrt(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real pow(const Real& base, const Real& exponent) {
  Real r(static_cast<unsigned>(max_prec(base.value_, exponent.value_)), 0);
  mpfr_pow(r.value_, base.value_, exponent.value_, MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x);
  mpfr_log(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x);
  mpfr_exp(r.value_, r.value_, MPFR_RNDN);
  return r;
}

// --- Scalar ---

Real to_real(const Scalar& s) {
  if (const auto* r = std::get_if<Rational>(&s)) {
    return Real(*r);
  }
  return std::get<Real>(s);
}

int sign(const Scalar& s) {
  if (const auto* r = std::get_if<Rational>(&s)) {
    return r->sign();
  }
  return std::get<Real>(s).sign();
}

Rational to_rational(const Real& x) {
  if (mpfr_nan_p(x.raw()) || mpfr_inf_p(x.raw())) {
    throw Error(ErrorKind::Domain, "cannot convert a non-finite real to a rational");
  }
  if (x.is_zero()) return Rational(0);
  BigInt mantissa;
  mpfr_exp_t e = mpfr_get_z_2exp(mantissa.backend().data(), x.raw());
  if (e >= 0) {
    return Rational(mantissa << static_cast<unsigned>(e));
  }
  return Rational(mantissa, BigInt(1) << static_cast<unsigned>(-e));
}

std::string mode_tag(const Scalar& s) {
  if (is_exact(s)) {
    return "exact";
  }
  return "real@" + std::to_string(std::get<Real>(s).precision_bits());
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) {
    throw Error(ErrorKind::Domain, "empty number");
  }
  auto bad = [&] { return Error(ErrorKind::Domain, "not a rational number: " + std::string(text)); };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) {
      throw Error(ErrorKind::Domain, "zero denominator: " + std::string(text));
    }
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    char c = s[pos];
    if (c == '.') {
      if (seen_point) throw bad();
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  long exponent = 0;
  if (pos < s.size()) {
    std::string e = s.substr(pos + 1);
    if (e.empty()) throw bad();
    std::size_t used = 0;
    try {
      exponent = std::stol(e, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != e.size()) throw bad();
  }
  // A leading zero would make GMP read the digits as octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{BigInt(digits)};
  value *= ipow(Rational(10), exponent - frac_digits);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const Scalar& s) {
  if (const auto* r = std::get_if<Rational>(&s)) {
    return to_string(*r);
  }
  return std::get<Real>(s).str();
}

BigInt floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);  // truncates toward zero
  if (r.sign() < 0 && Rational(q) != r) {
    q -= 1;
  }
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt f = floor(r);
  return Rational(f) == r ? f : BigInt(f + 1);
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

BigInt ipow(const BigInt& base, unsigned long exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1UL) result *= b;
    exponent >>= 1;
    if (exponent != 0) b *= b;
  }
  return result;
}

Rational ipow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) {
      throw Error(ErrorKind::Domain, "zero to a negative power");
    }
    return Rational(1) / ipow(base, -exponent);
  }
  BigInt num = ipow(BigInt(numerator(base)), static_cast<unsigned long>(exponent));
  BigInt den = ipow(BigInt(denominator(base)), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

Real ipow(const Real& base, long exponent) {
  Real result = Real::with_precision(Real(1), base.precision_bits());
  Real b = base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  if (exponent < 0) {
    return Real::with_precision(Real(1), base.precision_bits()) / result;
  }
  return result;
}

bool close_relative(const Real& a, const Real& b, const Real& tol) {
  Real scale = abs(a) > abs(b) ? abs(a) : abs(b);
  Real tiny = Real::parse("1e-300", a.precision_bits());
  if (scale < tiny) scale = tiny;
  return abs(a - b) <= tol * scale;
}

Real real_tolerance(unsigned bits) {
  PrecisionScope scope(std::max(bits, 64U));
  return ipow(Real(2), -static_cast<long>(bits / 2));
}

}  // namespace qekr
