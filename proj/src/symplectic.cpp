#include "vacent/symplectic.hpp"
#include "vacent/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace vacent {

Real SymplecticTransform::symplectic_residual() const {
  const long bits = S.bits();
  HPMatrix om = symplectic_form(n_modes(), bits);
  return max_abs_diff(S * om * S.transpose(), om);
}

CovarianceMatrix SymplecticTransform::apply(const CovarianceMatrix& cm) const {
  CovarianceMatrix out{congruence(S, cm.sigma), {}};
  if (!cm.first_moments.empty()) out.first_moments = S * cm.first_moments;
  return out;
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
  const std::size_t na = a.S.rows(), nb = b.S.rows();
  SymplecticTransform out{HPMatrix(na + nb, na + nb, std::max(a.S.bits(), b.S.bits()))};
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) out.S(i, j) = a.S(i, j);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) out.S(na + i, na + j) = b.S(i, j);
  return out;
}

namespace {

struct CVec {
  std::vector<Real> re, im;
};

// <x, y> = x^dagger y
std::pair<Real, Real> cdot(const CVec& x, const CVec& y) {
  Real r = dot(x.re, y.re) + dot(x.im, y.im);
  Real i = dot(x.re, y.im) - dot(x.im, y.re);
  return {std::move(r), std::move(i)};
}

// y -= (a + ib) x
void caxpy_sub(CVec& y, const Real& a, const Real& b, const CVec& x) {
  for (std::size_t k = 0; k < y.re.size(); ++k) {
    y.re[k].sub_mul(a, x.re[k]);
    y.re[k].add_mul(b, x.im[k]);
    y.im[k].sub_mul(a, x.im[k]);
    y.im[k].sub_mul(b, x.re[k]);
  }
}

Real cnorm2(const CVec& x) { return dot(x.re, x.re) + dot(x.im, x.im); }

void cscale(CVec& x, const Real& a, const Real& b) {
  for (std::size_t k = 0; k < x.re.size(); ++k) {
    Real r = a * x.re[k] - b * x.im[k];
    Real i = a * x.im[k] + b * x.re[k];
    x.re[k] = std::move(r);
    x.im[k] = std::move(i);
  }
}

}  // namespace

WilliamsonResult williamson(const CovarianceMatrix& cm, const PrecisionContext& ctx) {
  const std::size_t dim = cm.sigma.rows();
  const std::size_t n = dim / 2;
  const long bits = ctx.bits;
  if (dim % 2 != 0 || !cm.sigma.is_square()) throw ContractError("williamson: CM must be 2n x 2n");

  SqrtPair sq = sym_pd_sqrt_pair(cm.sigma, ctx);
  HPMatrix k = sq.sqrt * symplectic_form(n, bits) * sq.sqrt;
  // Enforce exact antisymmetry.
  for (std::size_t i = 0; i < dim; ++i) {
    k(i, i).assign(0L);
    for (std::size_t j = i + 1; j < dim; ++j) {
      Real a = (k(i, j) - k(j, i)) / 2L;
      k(i, j) = a;
      k(j, i) = -a;
    }
  }
  // Real embedding of the Hermitian matrix iK = 0 + iK: [[0, -K], [K, 0]].
  HPMatrix emb(2 * dim, 2 * dim, bits);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      emb(i, dim + j) = -k(i, j);
      emb(dim + i, j) = k(i, j);
    }
  SymEigen e = sym_eigen(emb, ctx, true);

  // The upper half of the spectrum holds each +d_j twice: the real vectors
  // (u; v) and (-v; u) of one complex eigenvector z = u + iv. Complex
  // Gram-Schmidt keeps one vector per d_j within a cluster of equal values.
  const Real scale = max(Real(1L, bits), abs(e.values.back()));
  const Real cluster_tol = ctx.eig_tol * scale;
  std::vector<CVec> modes;
  std::vector<Real> dvals;
  std::size_t i0 = dim;
  while (i0 < 2 * dim) {
    std::size_t i1 = i0 + 1;
    while (i1 < 2 * dim && e.values[i1] - e.values[i1 - 1] <= cluster_tol) ++i1;
    const std::size_t want = (i1 - i0) / 2;
    if ((i1 - i0) % 2 != 0) {
      throw DegeneracyError("williamson: unpaired eigenvalue cluster in i sigma^{1/2} Omega sigma^{1/2}",
                            (e.values[i0] - e.values[i0 - 1]).to_double());
    }
    std::vector<CVec> accepted;
    for (std::size_t c = i0; c < i1 && accepted.size() < want; ++c) {
      CVec z{std::vector<Real>(), std::vector<Real>()};
      for (std::size_t r = 0; r < dim; ++r) {
        z.re.push_back(e.vectors(r, c));
        z.im.push_back(e.vectors(dim + r, c));
      }
      // Earlier clusters too: when two values sit just outside each other's
      // cluster, the Jacobi vectors mix them at about eps / gap.
      for (const CVec& q : modes) {
        auto [a, b] = cdot(q, z);
        caxpy_sub(z, a, b, q);
      }
      for (const CVec& q : accepted) {
        auto [a, b] = cdot(q, z);
        caxpy_sub(z, a, b, q);
      }
      Real nz = cnorm2(z);
      if (nz < Real(0.25, bits)) continue;
      Real inv = 1L / sqrt(nz);
      cscale(z, inv, Real(bits));
      accepted.push_back(std::move(z));
    }
    if (accepted.size() != want) {
      throw DegeneracyError("williamson: could not separate conjugate eigenvector pairs",
                            (e.values[i1 - 1] - e.values[i0]).to_double());
    }
    for (CVec& z : accepted) {
      // Rayleigh quotient z^dagger (iK) z = i z^dagger K z, real.
      std::vector<Real> kre = k * z.re, kim = k * z.im;
      Real d = dot(z.im, kre) - dot(z.re, kim);
      dvals.push_back(std::move(d));
      modes.push_back(std::move(z));
    }
    i0 = i1;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dvals[a] < dvals[b]; });

  WilliamsonResult out;
  out.S.S = HPMatrix(dim, dim, bits);
  const Real phase_floor = pow2(-bits / 4, bits);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    CVec x{sq.inv_sqrt * modes[j].re, sq.inv_sqrt * modes[j].im};
    // Phase: first phi component of non-negligible size made real positive.
    Real xmax(bits);
    for (std::size_t r = 0; r < dim; r += 2) xmax = max(xmax, sqrt(x.re[r] * x.re[r] + x.im[r] * x.im[r]));
    for (std::size_t r = 0; r < dim; r += 2) {
      Real mag = sqrt(x.re[r] * x.re[r] + x.im[r] * x.im[r]);
      if (mag > phase_floor * xmax) {
        cscale(x, x.re[r] / mag, -(x.im[r] / mag));
        break;
      }
    }
    Real f = sqrt(2L * dvals[j]);
    for (std::size_t c = 0; c < dim; ++c) {
      out.S.S(2 * jj, c) = f * x.re[c];
      out.S.S(2 * jj + 1, c) = -(f * x.im[c]);
    }
    out.d_values.push_back(dvals[j]);
  }

  HPMatrix dmat(dim, dim, bits);
  for (std::size_t j = 0; j < n; ++j) {
    dmat(2 * j, 2 * j) = out.d_values[j];
    dmat(2 * j + 1, 2 * j + 1) = out.d_values[j];
  }
  out.reconstruction_residual = max_abs_diff(congruence(out.S.S, cm.sigma), dmat);
  Real symp = out.S.symplectic_residual();
  Real smax = out.S.S.max_abs();
  Real tol = ctx.eig_tol * max(Real(1L, bits), smax * smax) * scale;
  if (!(out.reconstruction_residual <= tol) || !(symp <= tol)) {
    Real gap(bits);
    bool have = false;
    for (std::size_t j = 1; j < n; ++j) {
      Real g = out.d_values[j] - out.d_values[j - 1];
      if (!have || g < gap) {
        gap = g;
        have = true;
      }
    }
    throw DegeneracyError("williamson: reconstruction residual " + out.reconstruction_residual.to_string(4) +
                              " / symplectic residual " + symp.to_string(4) +
                              " too large; smallest symplectic gap " + gap.to_string(4),
                          gap.to_double());
  }
  return out;
}

namespace {

CovarianceMatrix sub_cm(const CovarianceMatrix& cm, const std::vector<std::size_t>& modes) {
  std::vector<std::size_t> idx;
  for (std::size_t m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return CovarianceMatrix{cm.sigma.submatrix(idx, idx), {}};
}

void check_local_pairing(const std::vector<Real>& v, const PrecisionContext& ctx, const char* side) {
  // Ties are harmless between modes at the vacuum value 1 (no correlations to pair).
  const Real one(1L, ctx.bits);
  for (std::size_t j = 1; j < v.size(); ++j) {
    Real gap = v[j] - v[j - 1];
    Real tol = ctx.eig_tol * v[j];
    if (gap <= tol && v[j] - one > tol) {
      throw DegeneracyError(std::string("local_williamson: degenerate local symplectic spectrum on ") + side +
                                " near " + v[j].to_string(8),
                            gap.to_double());
    }
  }
}

}  // namespace

LocalTransform local_williamson(const GHPair& gh_pure, const PatchPair& pair, const PrecisionContext& ctx) {
  const std::size_t d = static_cast<std::size_t>(pair.d);
  if (gh_pure.n_modes() != 2 * d) throw ContractError("local_williamson: state size does not match the patch pair");
  // Purity: det sigma = det(2G) det(2H) = 1.
  Real det = determinant(gh_pure.G * Real(2L, ctx.bits), ctx) * determinant(gh_pure.H * Real(2L, ctx.bits), ctx);
  if (abs(det - 1L) > pow2(-ctx.bits / 4, ctx.bits)) {
    throw ContractError("local_williamson: state is not pure (det sigma = " + det.to_string(10) + ")");
  }
  CovarianceMatrix cm = cm_from_GH(gh_pure);
  WilliamsonResult wa = williamson(sub_cm(cm, pair.a_modes()), ctx);
  WilliamsonResult wb = williamson(sub_cm(cm, pair.b_modes()), ctx);
  check_local_pairing(wa.d_values, ctx, "A");
  check_local_pairing(wb.d_values, ctx, "B");
  LocalTransform out;
  out.S = direct_sum(wa.S, wb.S);
  for (std::size_t j = 0; j < d; ++j) out.pairs.emplace_back(j, d + j);
  out.a_values = std::move(wa.d_values);
  out.b_values = std::move(wb.d_values);
  return out;
}

namespace {

// Orthonormal basis of the complement of span(vs) in R^n.
std::vector<std::vector<Real>> orthogonal_complement(const std::vector<std::vector<Real>>& vs, std::size_t n,
                                                     long bits) {
  std::vector<std::vector<Real>> basis;
  for (const auto& v : vs) {
    std::vector<Real> u = v;
    for (const auto& q : basis) {
      Real c = dot(q, u);
      for (std::size_t k = 0; k < n; ++k) u[k].sub_mul(c, q[k]);
    }
    Real nu = norm2(u);
    for (auto& x : u) x /= nu;
    basis.push_back(std::move(u));
  }
  const std::size_t have = basis.size();
  const Real accept = Real(0.1, bits);
  for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
    std::vector<Real> u(n, Real(bits));
    u[e].assign(1L);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        Real c = dot(q, u);
        for (std::size_t k = 0; k < n; ++k) u[k].sub_mul(c, q[k]);
      }
    Real nu = norm2(u);
    if (nu < accept) continue;
    for (auto& x : u) x /= nu;
    basis.push_back(std::move(u));
  }
  return std::vector<std::vector<Real>>(basis.begin() + static_cast<std::ptrdiff_t>(have), basis.end());
}

// Completes biorthogonal families alpha_k . beta_l = delta_kl to full bases and
// returns the local block-form transform in riffled ordering.
SymplecticTransform complete_local(std::vector<std::vector<Real>> alpha, std::vector<std::vector<Real>> beta,
                                   std::size_t d, const PrecisionContext& ctx) {
  const long bits = ctx.bits;
  const std::size_t nm = alpha.size();
  if (nm < d) {
    auto an = orthogonal_complement(beta, d, bits);   // alpha_new . beta_old = 0
    auto bn = orthogonal_complement(alpha, d, bits);  // alpha_old . beta_new = 0
    const std::size_t r = d - nm;
    HPMatrix c(r, r, bits);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) c(i, j) = dot(an[i], bn[j]);
    // beta_new <- C^{-T} beta_new gives alpha_new . beta_new = I.
    HPMatrix cit = hp_inverse(c, ctx).transpose();
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Real> b(d, Real(bits));
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < d; ++k) b[k].add_mul(cit(i, j), bn[j][k]);
      alpha.push_back(an[i]);
      beta.push_back(std::move(b));
    }
  }
  SymplecticTransform s{HPMatrix(2 * d, 2 * d, bits)};
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      s.S(2 * k, 2 * i) = alpha[k][i];
      s.S(2 * k + 1, 2 * i + 1) = beta[k][i];
    }
  return s;
}

}  // namespace

LocalTransform negativity_basis(const GHPair& gh_traced, const PatchPair& pair, const PrecisionContext& ctx) {
  const std::size_t d = static_cast<std::size_t>(pair.d);
  const long bits = ctx.bits;
  if (gh_traced.n_modes() != 2 * d) throw ContractError("negativity_basis: state size does not match the patch pair");

  // PT normal modes in block form: X = 2G, P = 2H^Gamma, X^{1/2} P X^{1/2} = O diag(nu^2) O^T.
  // Mode j has phi-row a_j = nu_j^{1/2} X^{-1/2} o_j and pi-row b_j = nu_j^{-1/2} X^{1/2} o_j.
  GHPair pt = partial_transpose(gh_traced, pair.b_modes());
  HPMatrix x = gh_traced.G * Real(2L, bits);
  HPMatrix p = pt.H * Real(2L, bits);
  SqrtPair xs = sym_pd_sqrt_pair(x, ctx);
  HPMatrix m = xs.sqrt * p * xs.sqrt;
  m.symmetrize();
  SymEigen e = sym_eigen(m, ctx, true);

  std::vector<Real> nus;
  std::vector<std::vector<Real>> arows, brows;
  for (std::size_t j = 0; j < 2 * d; ++j) {
    if (e.values[j].sign() <= 0) throw PrecisionError("negativity_basis: non-positive PT eigenvalue");
    Real nu = sqrt(e.values[j]);
    if (!(nu < 1L)) break;
    if (!nus.empty() && nu - nus.back() <= ctx.eig_tol * nu) {
      throw DegeneracyError("negativity_basis: degenerate contributing PT eigenvalues", (nu - nus.back()).to_double());
    }
    std::vector<Real> o = e.vectors.column(j);
    Real snu = sqrt(nu);
    std::vector<Real> a = xs.inv_sqrt * o, b = xs.sqrt * o;
    for (auto& v : a) v *= snu;
    for (auto& v : b) v /= snu;
    nus.push_back(std::move(nu));
    arows.push_back(std::move(a));
    brows.push_back(std::move(b));
  }
  if (nus.empty()) throw ContractError("negativity_basis: traced state has no contributing PT eigenvalues");
  if (nus.size() > d) throw NumericError("negativity_basis: more contributing eigenvalues than modes per patch");

  auto side = [&](std::size_t offset) {
    std::vector<std::vector<Real>> alpha, beta;
    for (std::size_t j = 0; j < nus.size(); ++j) {
      std::vector<Real> xa(arows[j].begin() + static_cast<std::ptrdiff_t>(offset),
                           arows[j].begin() + static_cast<std::ptrdiff_t>(offset + d));
      std::vector<Real> yb(brows[j].begin() + static_cast<std::ptrdiff_t>(offset),
                           brows[j].begin() + static_cast<std::ptrdiff_t>(offset + d));
      // Biorthogonal Gram-Schmidt: keep alpha_k . beta_l = delta_kl.
      for (std::size_t k = 0; k < alpha.size(); ++k) {
        Real c1 = dot(xa, beta[k]);
        Real c2 = dot(alpha[k], yb);
        for (std::size_t i = 0; i < d; ++i) {
          xa[i].sub_mul(c1, alpha[k][i]);
          yb[i].sub_mul(c2, beta[k][i]);
        }
      }
      Real s = dot(xa, yb);
      if (abs(s) <= ctx.eig_tol) {
        throw DegeneracyError("negativity_basis: restricted PT mode has no local symplectic partner", s.to_double());
      }
      Real inv = 1L / sqrt(abs(s));
      for (auto& v : xa) v *= inv;
      for (auto& v : yb) v *= inv;
      if (s.sign() < 0)
        for (auto& v : yb) v.negate();
      alpha.push_back(std::move(xa));
      beta.push_back(std::move(yb));
    }
    return complete_local(std::move(alpha), std::move(beta), d, ctx);
  };

  LocalTransform out;
  out.S = direct_sum(side(0), side(d));
  Real symp = out.S.symplectic_residual();
  Real smax = out.S.S.max_abs();
  if (!(symp <= ctx.eig_tol * max(Real(1L, bits), smax * smax))) {
    throw PrecisionError("negativity_basis: transform not symplectic (residual " + symp.to_string(4) + ")");
  }
  for (std::size_t j = 0; j < nus.size(); ++j) out.pairs.emplace_back(j, d + j);
  out.a_values = nus;
  out.b_values = std::move(nus);
  return out;
}

CovarianceMatrix two_mode_block(const CovarianceMatrix& cm, std::size_t i, std::size_t j) {
  std::vector<std::size_t> idx{2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
  CovarianceMatrix out{cm.sigma.submatrix(idx, idx), {}};
  if (!cm.first_moments.empty()) {
    for (std::size_t q : idx) out.first_moments.push_back(cm.first_moments[q]);
  }
  return out;
}

TwoBodyResult two_body_negativity_sum(const GHPair& gh, const SymplecticTransform& transform,
                                      const ModePairs& pairs, const PrecisionContext& ctx) {
  CovarianceMatrix cm = transform.apply(cm_from_GH(gh));
  TwoBodyResult out;
  out.total = Real(ctx.bits);
  for (const auto& [a, b] : pairs) {
    CovarianceMatrix two = two_mode_block(cm, a, b);
    Real n = log_negativity(two, {1}, ctx);
    out.total += n;
    out.per_pair.push_back(std::move(n));
    out.pair_states.push_back(std::move(two));
  }
  return out;
}

}  // namespace vacent
