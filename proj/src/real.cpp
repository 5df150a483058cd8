#include "vacent/real.hpp"
#include "vacent/errors.hpp"
#include "vacent/precision.hpp"

#include <charconv>
#include <cstdlib>
#include <memory>
#include <string>

namespace vacent {

Real Real::from_string(std::string_view text, Bits bits) {
  Real r(bits);
  std::string s(text);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("cannot parse number: '" + s + "'");
  }
  return r;
}

std::string Real::to_string(int digits) const {
  if (digits < 1) digits = 1;
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits - 1) + "Re";
  if (mpfr_asprintf(&buf, fmt.c_str(), v_) < 0) return "nan";
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {
template <class F>
Real unary(const Real& x, F f) {
  Real r(x.bits());
  f(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log2(const Real& x) { return unary(x, mpfr_log2); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }

Real pow(const Real& x, const Real& y) {
  Real r(x.bits() > y.bits() ? x.bits() : y.bits());
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(x.bits());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pi(Real::Bits bits) {
  Real r(bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real ln2(Real::Bits bits) {
  Real r(bits);
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

Real euler_gamma(Real::Bits bits) {
  Real r(bits);
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

Real pow2(long e, Real::Bits bits) {
  Real r(bits);
  mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN);
  return r;
}

PrecisionContext::PrecisionContext(long b)
    : bits(b), eig_tol(pow2(-(b / 2), b < 128 ? 128 : b)), quad_tol(pow2(-b + 16, b < 128 ? 128 : b)) {
  if (b < kMinBits) {
    throw ConfigError("precision must be at least " + std::to_string(kMinBits) + " bits, got " +
                      std::to_string(b));
  }
}

std::string shortest_decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Real decimal_real(double x, long bits) { return Real::from_string(shortest_decimal(x), bits); }

}  // namespace vacent
