#pragma once

#include "vacent/real.hpp"

namespace vacent {

/// Working precision plus the tolerances derived from it.
struct PrecisionContext {
  long bits = 512;
  Real eig_tol;   // 2^(-bits/2)
  Real quad_tol;  // 2^(-bits+16)

  PrecisionContext() : PrecisionContext(512) {}
  /// Throws ConfigError for bits < 128.
  explicit PrecisionContext(long bits);

  static constexpr long kMinBits = 128;
  static constexpr long kDefaultBits = 512;

  Real zero() const { return Real(bits); }
  Real one() const { return Real(1L, bits); }
  Real from(double x) const { return Real(x, bits); }
  Real from(long x) const { return Real(x, bits); }
  Real from(int x) const { return Real(static_cast<long>(x), bits); }
  /// Decimal literal, parsed directly at the working precision.
  Real parse(std::string_view text) const { return Real::from_string(text, bits); }
};

/// Shortest decimal string that round-trips to x, so 0.3 becomes "0.3"
/// rather than the binary expansion of the nearest double.
std::string shortest_decimal(double x);

/// Converts a double-valued physical parameter via its shortest decimal form.
Real decimal_real(double x, long bits);

}  // namespace vacent
