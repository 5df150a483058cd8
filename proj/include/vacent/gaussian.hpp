#pragma once

#include "vacent/matrix.hpp"

#include <vector>

namespace vacent {

/// Field (G) and momentum (H) two-point blocks of a state with no <phi pi> correlations.
struct GHPair {
  HPMatrix G;
  HPMatrix H;
  std::size_t n_modes() const { return G.rows(); }
};

/// 2n x 2n covariance matrix in riffled ordering (phi_1, pi_1, ..., phi_n, pi_n).
struct CovarianceMatrix {
  HPMatrix sigma;
  std::vector<Real> first_moments;  // length 2n, zero unless set
  std::size_t n_modes() const { return sigma.rows() / 2; }
};

/// Riffled symplectic form: direct sum of [[0, 1], [-1, 0]].
HPMatrix symplectic_form(std::size_t n_modes, long bits);

/// sigma_{2i,2j} = 2 G_ij, sigma_{2i+1,2j+1} = 2 H_ij, cross terms zero.
CovarianceMatrix cm_from_GH(const GHPair& gh);

/// Flips H_ij when exactly one of i, j is in b_modes. Involutive.
GHPair partial_transpose(const GHPair& gh, const std::vector<std::size_t>& b_modes);

/// Momentum reflection on b_modes applied to a general covariance matrix.
CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, const std::vector<std::size_t>& b_modes);

struct PTSpectrum {
  std::vector<Real> values;  // ascending
  std::vector<std::size_t> a_modes;
  std::vector<std::size_t> b_modes;
  Real min() const { return values.front(); }
};

/// PT spectrum with the eigensystem it came from.
struct PTEigensystem {
  PTSpectrum spectrum;
  SimilarEigen eig;  // of G H^Gamma; eigenvalues are (nu/2)^2
};

/// nu = 2 sqrt(spec(G H^Gamma)). PrecisionError if a similarity eigenvalue is not positive.
PTSpectrum pt_symplectic_spectrum(const GHPair& gh, const std::vector<std::size_t>& b_modes,
                                  const PrecisionContext& ctx);
PTEigensystem pt_eigensystem(const GHPair& gh, const std::vector<std::size_t>& b_modes,
                             const PrecisionContext& ctx);

/// -sum log2 min(nu, 1).
Real log_negativity(const PTSpectrum& spec);
Real log_negativity(const std::vector<Real>& nus);

/// Symplectic eigenvalues of a general positive-definite CM, ascending.
std::vector<Real> symplectic_spectrum(const CovarianceMatrix& cm, const PrecisionContext& ctx);

/// Log-negativity of a general CM across (complement | b_modes).
Real log_negativity(const CovarianceMatrix& cm, const std::vector<std::size_t>& b_modes,
                    const PrecisionContext& ctx);

struct PhysicalReport {
  Real min_eigenvalue;  // of the Hermitian matrix sigma + i Omega
  Real purity;          // 1 / sqrt(det sigma)
  bool uncertainty_ok = false;
};

PhysicalReport check_physical(const CovarianceMatrix& cm, const PrecisionContext& ctx);

/// Modes {first, ..., first+count-1}.
std::vector<std::size_t> mode_range(std::size_t first, std::size_t count);

}  // namespace vacent
