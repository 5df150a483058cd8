#pragma once

#include <mpfr.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace vacent {

/// Owning MPFR scalar. Each value carries its own significand width; binary
/// arithmetic produces a result at the wider of the two operand widths, so no
/// process-wide default precision is ever consulted.
class Real {
public:
  using Bits = mpfr_prec_t;

  Real() noexcept { init(kMinimalBits); }
  explicit Real(Bits bits) noexcept { init(bits); }
  Real(double x, Bits bits) noexcept {
    init(bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, Bits bits) noexcept {
    init(bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, Bits bits) noexcept : Real(static_cast<long>(x), bits) {}

  /// Parses a decimal literal exactly to the nearest representable value.
  static Real from_string(std::string_view text, Bits bits);

  Real(const Real& other) noexcept {
    init(other.bits());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    init(kMinimalBits);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) noexcept {
    if (this != &other) {
      if (bits() != other.bits()) mpfr_set_prec(v_, other.bits());
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Bits bits() const noexcept { return mpfr_get_prec(v_); }

  /// Rounds the stored value to a new width.
  void set_bits(Bits bits) noexcept { mpfr_prec_round(v_, bits, MPFR_RNDN); }
  Real with_bits(Bits bits) const noexcept {
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const noexcept { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Scientific notation with the given number of significant digits.
  std::string to_string(int digits = 20) const;

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  /// Binary exponent e with |x| in [2^(e-1), 2^e); very negative for zero.
  long exponent() const noexcept {
    return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_));
  }

  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }

  // In-place kernels used in hot loops; the destination keeps its own width.
  void assign(const Real& x) noexcept { mpfr_set(v_, x.v_, MPFR_RNDN); }
  void assign(long x) noexcept { mpfr_set_si(v_, x, MPFR_RNDN); }
  void set_mul(const Real& a, const Real& b) noexcept { mpfr_mul(v_, a.v_, b.v_, MPFR_RNDN); }
  void set_add(const Real& a, const Real& b) noexcept { mpfr_add(v_, a.v_, b.v_, MPFR_RNDN); }
  void set_sub(const Real& a, const Real& b) noexcept { mpfr_sub(v_, a.v_, b.v_, MPFR_RNDN); }
  /// this += a*b with a single rounding.
  void add_mul(const Real& a, const Real& b) noexcept {
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
  }
  /// this -= a*b with a single rounding.
  void sub_mul(const Real& a, const Real& b) noexcept {
    mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN);
    mpfr_neg(v_, v_, MPFR_RNDN);
  }
  void negate() noexcept { mpfr_neg(v_, v_, MPFR_RNDN); }

  Real& operator+=(const Real& x) noexcept {
    widen_to(x);
    mpfr_add(v_, v_, x.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& x) noexcept {
    widen_to(x);
    mpfr_sub(v_, v_, x.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& x) noexcept {
    widen_to(x);
    mpfr_mul(v_, v_, x.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& x) noexcept {
    widen_to(x);
    mpfr_div(v_, v_, x.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator+=(long x) noexcept {
    mpfr_add_si(v_, v_, x, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(long x) noexcept {
    mpfr_sub_si(v_, v_, x, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(long x) noexcept {
    mpfr_mul_si(v_, v_, x, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long x) noexcept {
    mpfr_div_si(v_, v_, x, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(double x) noexcept {
    mpfr_mul_d(v_, v_, x, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(double x) noexcept {
    mpfr_div_d(v_, v_, x, MPFR_RNDN);
    return *this;
  }

  Real operator-() const noexcept {
    Real r(bits());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) noexcept {
    Real r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) noexcept {
    Real r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) noexcept {
    Real r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) noexcept {
    Real r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator+(Real a, long b) noexcept { return a += b; }
  friend Real operator+(long b, Real a) noexcept { return a += b; }
  friend Real operator-(Real a, long b) noexcept { return a -= b; }
  friend Real operator-(long a, const Real& b) noexcept {
    Real r(b.bits());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(Real a, long b) noexcept { return a *= b; }
  friend Real operator*(long b, Real a) noexcept { return a *= b; }
  friend Real operator/(Real a, long b) noexcept { return a /= b; }
  friend Real operator/(long a, const Real& b) noexcept {
    Real r(b.bits());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(Real a, double b) noexcept { return a *= b; }
  friend Real operator*(double b, Real a) noexcept { return a *= b; }

  friend bool operator==(const Real& a, const Real& b) noexcept { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) noexcept { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) noexcept { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) noexcept { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) noexcept { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) == 0; }
  friend bool operator<(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator<=(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator>=(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) >= 0; }

  // A double would otherwise convert silently to long.
  friend bool operator==(const Real&, double) = delete;
  friend bool operator<(const Real&, double) = delete;
  friend bool operator<=(const Real&, double) = delete;
  friend bool operator>(const Real&, double) = delete;
  friend bool operator>=(const Real&, double) = delete;

  friend std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

private:
  static constexpr Bits kMinimalBits = 53;

  void init(Bits bits) noexcept {
    mpfr_init2(v_, bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits);
    mpfr_set_zero(v_, 1);
  }
  void widen_to(const Real& x) noexcept {
    if (x.bits() > bits()) mpfr_prec_round(v_, x.bits(), MPFR_RNDN);
  }
  static Bits wider(const Real& a, const Real& b) noexcept {
    return a.bits() > b.bits() ? a.bits() : b.bits();
  }

  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real exp(const Real& x);
Real cos(const Real& x);
Real sin(const Real& x);
Real pow(const Real& x, const Real& y);
Real ldexp(const Real& x, long e);
const Real& max(const Real& a, const Real& b);
const Real& min(const Real& a, const Real& b);

Real pi(Real::Bits bits);
Real ln2(Real::Bits bits);
Real euler_gamma(Real::Bits bits);
/// 2^e at the requested width.
Real pow2(long e, Real::Bits bits);

}  // namespace vacent
