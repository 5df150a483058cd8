#pragma once

#include "vacent/gaussian.hpp"
#include "vacent/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vacent {

/// Two patches of d sites separated by `gap` empty sites, starting at `origin`.
/// A = {origin, ..., origin+d-1}, B = {origin+d+gap, ..., origin+2d+gap-1}.
/// Within patch states, modes 0..d-1 belong to A and d..2d-1 to B.
struct PatchPair {
  long d = 1;
  long gap = 0;
  long origin = 0;

  std::vector<long> a_sites() const;
  std::vector<long> b_sites() const;
  std::vector<long> sites() const;  // A then B
  std::vector<std::size_t> a_modes() const { return mode_range(0, static_cast<std::size_t>(d)); }
  std::vector<std::size_t> b_modes() const {
    return mode_range(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  }
  /// Sites outside both patches on a finite lattice, ascending.
  std::vector<long> volume_sites(const LatticeSpec& spec) const;
  /// GeometryError when d < 1, gap < 0, or the pair does not fit the lattice.
  void validate(const LatticeSpec& spec) const;
};

enum class ObservationProtocol { Traced, MeasuredPhi, MeasuredPi };
enum class MeasurementBasis { Phi, Pi };

std::string to_string(ObservationProtocol p);
/// Accepts "traced", "m-phi"/"measured-phi"/"phi", "m-pi"/"measured-pi"/"pi".
ObservationProtocol parse_protocol(const std::string& s);
std::string to_string(MeasurementBasis b);

/// Patch-pair state after tracing or measuring the external volume.
///   Traced:      G = (K^-1)_pp / 2,       H = K_pp / 2
///   MeasuredPhi: G = (K_pp)^-1 / 2,       H = K_pp / 2
///   MeasuredPi:  G = (K^-1)_pp / 2,       H = ((K^-1)_pp)^-1 / 2
GHPair patch_state(const CorrelationKernel& kernel, const PatchPair& pair, ObservationProtocol proto);

/// Classical noise separating the traced and measured states, in covariance
/// units: sigma^(t) = sigma^(m) + Y (Y_phi on the phi block, Y_pi on the pi block).
struct NoiseMatrix {
  HPMatrix Y_phi;
  HPMatrix Y_pi;
  /// max |difference form - closed form|, when the closed form is available (finite lattice).
  std::optional<Real> closed_form_deviation;
  Real min_eigenvalue;  // of the nonzero block
};

/// Difference form, cross-checked against the closed form
/// (I - Kbar)^-1 Kbar (K_pp)^-1, Kbar = (K_pp)^-1 K_pv (K_vv)^-1 K_vp
/// (and its K^-1 analog for the pi basis) on finite lattices.
/// PrecisionError if Y fails positive semidefiniteness by more than eig_tol.
NoiseMatrix noise_matrix(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis);

/// Closed form alone (finite lattices only).
HPMatrix noise_closed_form(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis);

/// Conditional patch mean given a volume configuration:
///   phi basis: <phi_p> = -(K_pp)^-1 K_pv phi_v
///   pi basis:  <pi_p>  = -((K^-1)_pp)^-1 (K^-1)_pv pi_v
std::vector<Real> displacement_from_volume(const CorrelationKernel& kernel, const PatchPair& pair,
                                           const std::vector<Real>& volume_values,
                                           MeasurementBasis basis = MeasurementBasis::Phi);

/// Linear map behind displacement_from_volume (2d x (N-2d)).
HPMatrix displacement_map(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis);

struct MixtureReport {
  std::size_t n_samples = 0;
  std::size_t dim = 0;
  std::vector<double> estimate;   // row-major Monte-Carlo estimate of Y
  std::vector<double> reference;  // row-major Y from noise_matrix
  std::vector<double> std_error;  // per entry
  double max_abs_deviation = 0.0;
  double max_z = 0.0;  // max |deviation| / std_error
};

/// Samples volume configurations from their vacuum marginal and averages
/// 2 <d_i d_j> of the induced patch displacements, which should reproduce Y.
/// Work is split into fixed chunks seeded from (seed, chunk index), so the
/// result does not depend on `threads`.
MixtureReport mixture_reconstruction_check(const CorrelationKernel& kernel, const PatchPair& pair,
                                           MeasurementBasis basis, std::size_t n_samples,
                                           std::uint64_t seed, unsigned threads = 1);

}  // namespace vacent
