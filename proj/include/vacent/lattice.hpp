#pragma once

#include "vacent/matrix.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace vacent {

/// Mass parameter used for the massless regime.
inline constexpr double kMasslessMass = 1e-10;

/// Free scalar field on a periodic 1D lattice (finite_n set) or the infinite line.
struct LatticeSpec {
  double mass = kMasslessMass;
  std::optional<long> finite_n;

  static LatticeSpec infinite(double mass);
  static LatticeSpec finite(long n, double mass);
  bool is_infinite() const { return !finite_n.has_value(); }
  /// Throws GeometryError / DomainError for invalid values.
  void validate() const;
};

enum class KernelKind { K, Kinv };

/// How infinite-volume elements are evaluated.
enum class KernelMethod {
  Recurrence,  // AGM closed forms for r=0 plus three-term recurrence in r
  Quadrature,  // Brillouin-zone integral (periodic trapezoid or split tanh-sinh)
};

/// Correlation kernel elements K_r and (K^-1)_r, cached by |r|.
/// Thread-safe: lookups and lazy cache fills are serialized by a mutex.
class CorrelationKernel {
public:
  CorrelationKernel(LatticeSpec spec, PrecisionContext ctx, KernelMethod method = KernelMethod::Recurrence);

  const LatticeSpec& spec() const { return spec_; }
  const PrecisionContext& ctx() const { return ctx_; }
  KernelMethod method() const { return method_; }
  Real mass() const { return mass_; }

  /// Element at separation r (any sign; reduced modulo N on a finite lattice).
  Real element(KernelKind kind, long r) const;
  /// Fills the cache for all |r| <= r_max.
  void warm(long r_max) const;

private:
  void fill_recurrence(long r_max) const;
  Real finite_sum(KernelKind kind, long r) const;
  Real quadrature(KernelKind kind, long r) const;

  LatticeSpec spec_;
  PrecisionContext ctx_;
  KernelMethod method_;
  Real mass_;
  mutable std::mutex mu_;
  mutable std::vector<Real> k_cache_, kinv_cache_;  // recurrence route
  mutable std::map<std::pair<int, long>, Real> misc_cache_;
  mutable std::vector<Real> omega_;  // finite-N dispersion
};

/// Free-function form of CorrelationKernel::element.
Real kernel_element(const CorrelationKernel& kernel, KernelKind kind, long r);

/// Entry (a,b) = element(kind, rows[a] - cols[b]).
HPMatrix assemble_K_block(const CorrelationKernel& kernel, const std::vector<long>& rows,
                          const std::vector<long>& cols, KernelKind kind);

struct VacuumGH {
  HPMatrix G;  // (1/2) K^-1
  HPMatrix H;  // (1/2) K
};

/// Two-point functions of the full-lattice vacuum. UnsupportedOperation at infinite volume.
VacuumGH vacuum_GH(const CorrelationKernel& kernel, const std::vector<long>& sites);

/// All sites of a finite lattice, 0..N-1.
std::vector<long> all_sites(const LatticeSpec& spec);

/// Large-r envelope of K_r for massive fields: -sqrt(m / (2 pi r^3)) e^{-m r}.
double k_envelope_massive(double mass, double r);
/// Large-r envelope of K_r near the massless point: 4 / (pi - 4 pi r^2).
double k_envelope_massless(double r);
/// Large-r envelope of (K^-1)_r near the massless point: -(ln(m r) + gamma - ln 2) / pi.
double kinv_envelope_massless(double mass, double r);

}  // namespace vacent
