#include "vacent/gaussian.hpp"
#include "vacent/errors.hpp"

#include <algorithm>
#include <string>

namespace vacent {

HPMatrix symplectic_form(std::size_t n_modes, long bits) {
  HPMatrix om(2 * n_modes, 2 * n_modes, bits);
  for (std::size_t j = 0; j < n_modes; ++j) {
    om(2 * j, 2 * j + 1).assign(1L);
    om(2 * j + 1, 2 * j).assign(-1L);
  }
  return om;
}

CovarianceMatrix cm_from_GH(const GHPair& gh) {
  const std::size_t n = gh.G.rows();
  if (!gh.G.is_square() || !gh.H.is_square() || gh.H.rows() != n) {
    throw ContractError("cm_from_GH: G and H must be square with equal size");
  }
  const long bits = std::max(gh.G.bits(), gh.H.bits());
  CovarianceMatrix cm{HPMatrix(2 * n, 2 * n, bits), {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cm.sigma(2 * i, 2 * j) = 2L * gh.G(i, j);
      cm.sigma(2 * i + 1, 2 * j + 1) = 2L * gh.H(i, j);
    }
  cm.sigma.symmetrize();
  cm.first_moments.assign(2 * n, Real(bits));
  return cm;
}

namespace {
std::vector<bool> membership(std::size_t n, const std::vector<std::size_t>& modes) {
  std::vector<bool> in(n, false);
  for (std::size_t b : modes) {
    if (b >= n) throw ContractError("mode index " + std::to_string(b) + " out of range");
    in[b] = true;
  }
  return in;
}
}  // namespace

GHPair partial_transpose(const GHPair& gh, const std::vector<std::size_t>& b_modes) {
  const std::size_t n = gh.H.rows();
  auto in_b = membership(n, b_modes);
  GHPair out{gh.G, gh.H};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (in_b[i] != in_b[j]) out.H(i, j).negate();
  return out;
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, const std::vector<std::size_t>& b_modes) {
  const std::size_t n = cm.n_modes();
  auto in_b = membership(n, b_modes);
  CovarianceMatrix out = cm;
  auto flipped = [&](std::size_t q) { return (q % 2 == 1) && in_b[q / 2]; };
  for (std::size_t p = 0; p < 2 * n; ++p)
    for (std::size_t q = 0; q < 2 * n; ++q)
      if (flipped(p) != flipped(q)) out.sigma(p, q).negate();
  for (std::size_t q = 0; q < out.first_moments.size(); ++q)
    if (flipped(q)) out.first_moments[q].negate();
  return out;
}

std::vector<std::size_t> mode_range(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = first + i;
  return v;
}

PTEigensystem pt_eigensystem(const GHPair& gh, const std::vector<std::size_t>& b_modes,
                             const PrecisionContext& ctx) {
  const std::size_t n = gh.G.rows();
  GHPair pt = partial_transpose(gh, b_modes);
  PTEigensystem out;
  out.eig = nonsym_eigen_similar(gh.G, pt.H, ctx);
  auto in_b = membership(n, b_modes);
  for (std::size_t i = 0; i < n; ++i) (in_b[i] ? out.spectrum.b_modes : out.spectrum.a_modes).push_back(i);
  out.spectrum.values.reserve(n);
  for (const Real& lam : out.eig.values) {
    if (lam.sign() <= 0) {
      throw PrecisionError("PT spectrum: non-positive eigenvalue " + lam.to_string(6) +
                           " of G H^Gamma; increase precision");
    }
    out.spectrum.values.push_back(2L * sqrt(lam));
  }
  return out;
}

PTSpectrum pt_symplectic_spectrum(const GHPair& gh, const std::vector<std::size_t>& b_modes,
                                  const PrecisionContext& ctx) {
  return std::move(pt_eigensystem(gh, b_modes, ctx).spectrum);
}

Real log_negativity(const std::vector<Real>& nus) {
  Real total(nus.empty() ? PrecisionContext::kDefaultBits : nus.front().bits());
  for (const Real& nu : nus)
    if (nu < 1L) total -= log2(nu);
  return total;
}

Real log_negativity(const PTSpectrum& spec) { return log_negativity(spec.values); }

std::vector<Real> symplectic_spectrum(const CovarianceMatrix& cm, const PrecisionContext& ctx) {
  const std::size_t n = cm.n_modes();
  // Singular values of K = sigma^{1/2} Omega sigma^{1/2} are the symplectic
  // eigenvalues, each appearing twice among the eigenvalues of K^T K.
  HPMatrix s = sym_pd_sqrt(cm.sigma, ctx);
  HPMatrix k = s * symplectic_form(n, ctx.bits) * s;
  HPMatrix ktk = transpose_times(k, k);
  ktk.symmetrize();
  SymEigen e = sym_eigen(ktk, ctx, false);
  std::vector<Real> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Real mean = (e.values[2 * j] + e.values[2 * j + 1]) / 2L;
    if (mean.sign() <= 0) throw PrecisionError("symplectic_spectrum: non-positive value");
    out.push_back(sqrt(mean));
  }
  return out;
}

Real log_negativity(const CovarianceMatrix& cm, const std::vector<std::size_t>& b_modes,
                    const PrecisionContext& ctx) {
  return log_negativity(symplectic_spectrum(partial_transpose(cm, b_modes), ctx));
}

PhysicalReport check_physical(const CovarianceMatrix& cm, const PrecisionContext& ctx) {
  const std::size_t dim = cm.sigma.rows();
  const long bits = ctx.bits;
  HPMatrix om = symplectic_form(cm.n_modes(), bits);
  // Real embedding of the Hermitian matrix X + iY: [[X, -Y], [Y, X]].
  HPMatrix emb(2 * dim, 2 * dim, bits);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      emb(i, j) = cm.sigma(i, j);
      emb(i + dim, j + dim) = cm.sigma(i, j);
      emb(i, j + dim) = -om(i, j);
      emb(i + dim, j) = om(i, j);
    }
  SymEigen e = sym_eigen(emb, ctx, false);
  PhysicalReport rep;
  rep.min_eigenvalue = e.values.front();
  Real tol = ctx.eig_tol * max(Real(1L, bits), cm.sigma.max_abs());
  rep.uncertainty_ok = rep.min_eigenvalue >= -tol;
  Real det = determinant(cm.sigma, ctx);
  rep.purity = det.sign() > 0 ? 1L / sqrt(det) : Real(bits);
  return rep;
}

}  // namespace vacent
