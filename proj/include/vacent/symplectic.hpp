#pragma once

#include "vacent/gaussian.hpp"
#include "vacent/patches.hpp"

#include <utility>
#include <vector>

namespace vacent {

/// Real 2n x 2n matrix with S Omega S^T = Omega (riffled ordering).
struct SymplecticTransform {
  HPMatrix S;
  std::size_t n_modes() const { return S.rows() / 2; }
  /// max |S Omega S^T - Omega|.
  Real symplectic_residual() const;
  /// S sigma S^T.
  CovarianceMatrix apply(const CovarianceMatrix& cm) const;
};

/// Direct sum of two transforms (modes of `a` first).
SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b);

struct WilliamsonResult {
  SymplecticTransform S;
  std::vector<Real> d_values;    // ascending
  Real reconstruction_residual;  // max |S sigma S^T - diag(d_j I2)|
};

/// Williamson normal form through the eigenvectors of the Hermitian matrix
/// i sigma^{1/2} Omega sigma^{1/2}. For each +d_j eigenvector w the mode rows are
///   S_{2j}   =  sqrt(2 d_j) Re(sigma^{-1/2} w)
///   S_{2j+1} = -sqrt(2 d_j) Im(sigma^{-1/2} w)
/// with the phase fixed so the first nonzero phi component is real positive.
/// DegeneracyError when near-degenerate values spoil the reconstruction.
WilliamsonResult williamson(const CovarianceMatrix& cm, const PrecisionContext& ctx);

using ModePairs = std::vector<std::pair<std::size_t, std::size_t>>;

struct LocalTransform {
  SymplecticTransform S;       // acts on all 2d modes, block diagonal across A|B
  ModePairs pairs;             // (A mode, B mode) in the transformed basis
  std::vector<Real> a_values;  // local symplectic spectrum of A, or the contributing PT values
  std::vector<Real> b_values;
};

/// Williamson on each patch block separately; A mode j paired with B mode j
/// (both ascending). ContractError if the state is not pure.
LocalTransform local_williamson(const GHPair& gh_pure, const PatchPair& pair, const PrecisionContext& ctx);

/// Local transform built from the contributing (nu < 1) PT symplectic
/// eigenvectors of a traced patch state. The first n_- modes on each side
/// carry one contributing eigenvalue each; `pairs` lists those n_- pairs.
LocalTransform negativity_basis(const GHPair& gh_traced, const PatchPair& pair, const PrecisionContext& ctx);

struct TwoBodyResult {
  Real total;
  std::vector<Real> per_pair;
  std::vector<CovarianceMatrix> pair_states;  // 4x4 two-mode CMs in the transformed basis
};

/// Applies the local transform and sums the log-negativities of the listed
/// two-mode blocks; every other correlation is ignored.
TwoBodyResult two_body_negativity_sum(const GHPair& gh, const SymplecticTransform& transform,
                                      const ModePairs& pairs, const PrecisionContext& ctx);

/// Two-mode block (modes i, j) of a covariance matrix.
CovarianceMatrix two_mode_block(const CovarianceMatrix& cm, std::size_t i, std::size_t j);

}  // namespace vacent
