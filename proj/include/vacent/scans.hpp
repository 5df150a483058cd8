#pragma once

#include "vacent/patches.hpp"
#include "vacent/symplectic.hpp"

#include <optional>
#include <vector>

namespace vacent {

struct ScanGrid {
  long d = 16;
  double mass = kMasslessMass;
  std::vector<ObservationProtocol> protocols;
  std::vector<long> rts;  // nonnegative, strictly increasing
  void validate() const;
};

struct ScanRecord {
  long rt = 0;
  ObservationProtocol protocol = ObservationProtocol::Traced;
  Real negativity;
  Real pt_min;  // smallest PT symplectic eigenvalue
  double wall_time = 0.0;  // seconds
};

/// Negativity of every (rt, protocol) grid point, returned rt-major in grid
/// order. Points may be evaluated on up to `threads` workers.
std::vector<ScanRecord> negativity_scan(const ScanGrid& grid, const CorrelationKernel& kernel, unsigned threads = 1);

/// One grid point.
ScanRecord scan_point(const CorrelationKernel& kernel, long d, long rt, ObservationProtocol protocol);

/// Smallest gap at which the traced state has pt_min >= 1 and stays so for
/// the next 2d gaps. Exponential bracketing then bisection; a failed
/// look-ahead restarts the search above the entangled gap it found.
/// ContractError for measured protocols.
long separability_radius(const CorrelationKernel& kernel, long d,
                         ObservationProtocol protocol = ObservationProtocol::Traced);

/// Right eigenvector of G H^Gamma for the smallest eigenvalue, unit norm over
/// all 2d components. Sign: nonnegative component sum; when the sum vanishes
/// at working precision (parity-odd vectors), the first component of largest
/// magnitude is made positive. DegeneracyError on a degenerate ground value.
std::vector<Real> ghgamma_ground_wavefunction(const GHPair& gh, const PatchPair& pair, const PrecisionContext& ctx);

/// Accessible two-body entanglement at one gap: negativities of the measured
/// (phi) and traced states, and two-body sums in the local Williamson basis of
/// the measured state (applied to both) and in the negativity basis of the
/// traced state.
struct TwoBodyRow {
  long rt = 0;
  Real neg_m_phi;
  Real sw_m_phi;
  Real neg_traced;
  Real sw_traced;
  Real sn_traced;
  Real max_symplectic_residual;  // over both transforms
};

TwoBodyRow two_body_row(const CorrelationKernel& kernel, long d, long rt);

/// d = 1 closed forms:
///   phi basis: -log2 (K_0 + K_{r+1}) / sqrt(K_0^2 - K_{r+1}^2)
///   pi basis:  -log2 ((K^-1)_0 - (K^-1)_{r+1}) / sqrt((K^-1)_0^2 - (K^-1)_{r+1}^2)
Real d1_measured_negativity(const CorrelationKernel& kernel, long rt, MeasurementBasis basis);

struct PrecisionSweepRow {
  long rt = 0;
  ObservationProtocol protocol = ObservationProtocol::Traced;
  std::vector<long> bits;     // ascending
  std::vector<Real> values;   // negativity at each precision
  std::vector<double> drift;  // relative change between consecutive precisions
  /// Smallest precision from which every later consecutive drift is below
  /// the threshold; empty if the last step still drifts.
  std::optional<long> stable_bits;
};

/// Recomputes the negativity grid with a fresh kernel at each precision.
/// Drift is |v' - v| / |v'|, 0 when both vanish, infinite when only v' does.
std::vector<PrecisionSweepRow> precision_sweep(double mass, long d, const std::vector<long>& rts,
                                               const std::vector<ObservationProtocol>& protocols,
                                               const std::vector<long>& bits, double max_drift = 1e-3,
                                               unsigned threads = 1);

enum class EnvelopeModel {
  ExponentialInROverD,  // log N = c - beta (r/d); parameters {beta, c}
  Polynomial,           // log N = c + p log r;    parameters {p, c}
  Logarithmic,          // N = c + a log r;        parameters {a, c}
};

struct FitWindow {
  double lo = 0.0;  // in units of r/d
  double hi = 0.0;
};

struct EnvelopeFit {
  EnvelopeModel model = EnvelopeModel::ExponentialInROverD;
  std::vector<double> parameters;
  FitWindow window;
  std::size_t n_points = 0;
  double max_rel_residual = 0.0;  // max |fit - N| / N over the window
};

/// Least squares in the transformed domain of the model over records with
/// rt/d inside the window. ContractError with fewer than 4 points, DomainError
/// on nonpositive values in a log-domain fit.
EnvelopeFit envelope_fit(const std::vector<ScanRecord>& records, long d, EnvelopeModel model, FitWindow window);

}  // namespace vacent
