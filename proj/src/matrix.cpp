#include "vacent/matrix.hpp"
#include "vacent/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace vacent {

HPMatrix::HPMatrix(std::size_t rows, std::size_t cols, long bits) : rows_(rows), cols_(cols), bits_(bits) {
  a_.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) a_.emplace_back(bits);
}

HPMatrix HPMatrix::identity(std::size_t n, long bits) {
  HPMatrix m(n, n, bits);
  for (std::size_t i = 0; i < n; ++i) m(i, i).assign(1L);
  return m;
}

HPMatrix HPMatrix::diagonal(const std::vector<Real>& d) {
  long bits = d.empty() ? PrecisionContext::kDefaultBits : d.front().bits();
  HPMatrix m(d.size(), d.size(), bits);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i).assign(d[i]);
  return m;
}

HPMatrix HPMatrix::from_doubles(std::size_t rows, std::size_t cols, const std::vector<double>& v,
                                long bits) {
  if (v.size() != rows * cols) throw ContractError("from_doubles: size mismatch");
  HPMatrix m(rows, cols, bits);
  for (std::size_t k = 0; k < v.size(); ++k) mpfr_set_d(m.a_[k].raw(), v[k], MPFR_RNDN);
  return m;
}

HPMatrix& HPMatrix::symmetrize() {
  if (!is_square()) throw ContractError("symmetrize: matrix not square");
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      Real& x = (*this)(i, j);
      x += (*this)(j, i);
      mpfr_div_2ui(x.raw(), x.raw(), 1, MPFR_RNDN);
      (*this)(j, i).assign(x);
    }
  }
  return *this;
}

bool HPMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!((*this)(i, j) == (*this)(j, i))) return false;
  return true;
}

HPMatrix HPMatrix::transpose() const {
  HPMatrix t(cols_, rows_, bits_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i).assign((*this)(i, j));
  return t;
}

HPMatrix HPMatrix::submatrix(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const {
  HPMatrix s(ri.size(), ci.size(), bits_);
  for (std::size_t i = 0; i < ri.size(); ++i)
    for (std::size_t j = 0; j < ci.size(); ++j) s(i, j).assign((*this)(ri[i], ci[j]));
  return s;
}

std::vector<Real> HPMatrix::column(std::size_t j) const {
  std::vector<Real> v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

std::vector<Real> HPMatrix::row(std::size_t i) const {
  return std::vector<Real>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                           a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void HPMatrix::set_column(std::size_t j, const std::vector<Real>& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j).assign(v[i]);
}

void HPMatrix::set_row(std::size_t i, const std::vector<Real>& v) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j).assign(v[j]);
}

Real HPMatrix::max_abs() const {
  Real m(bits_);
  for (const Real& x : a_)
    if (mpfr_cmpabs(x.raw(), m.raw()) > 0) mpfr_abs(m.raw(), x.raw(), MPFR_RNDN);
  return m;
}

std::vector<double> HPMatrix::to_doubles() const {
  std::vector<double> out;
  out.reserve(a_.size());
  for (const Real& x : a_) out.push_back(x.to_double());
  return out;
}

HPMatrix& HPMatrix::operator+=(const HPMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ContractError("matrix add: shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k].set_add(a_[k], b.a_[k]);
  return *this;
}

HPMatrix& HPMatrix::operator-=(const HPMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ContractError("matrix subtract: shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k].set_sub(a_[k], b.a_[k]);
  return *this;
}

HPMatrix& HPMatrix::operator*=(const Real& s) {
  for (Real& x : a_) x.set_mul(x, s);
  return *this;
}

HPMatrix operator*(const HPMatrix& a, const HPMatrix& b) {
  if (a.cols_ != b.rows_) throw ContractError("matrix product: shape mismatch");
  HPMatrix c(a.rows_, b.cols_, std::max(a.bits_, b.bits_));
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Real& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j).add_mul(aik, b(k, j));
    }
  return c;
}

std::vector<Real> operator*(const HPMatrix& a, const std::vector<Real>& x) {
  if (a.cols_ != x.size()) throw ContractError("matrix-vector product: shape mismatch");
  std::vector<Real> y;
  y.reserve(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Real s(a.bits_);
    for (std::size_t j = 0; j < a.cols_; ++j) s.add_mul(a(i, j), x[j]);
    y.push_back(std::move(s));
  }
  return y;
}

HPMatrix transpose_times(const HPMatrix& a, const HPMatrix& b) {
  if (a.rows() != b.rows()) throw ContractError("transpose_times: shape mismatch");
  HPMatrix c(a.cols(), b.cols(), std::max(a.bits(), b.bits()));
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Real& aki = a(k, i);
      if (aki.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j).add_mul(aki, b(k, j));
    }
  return c;
}

HPMatrix congruence(const HPMatrix& a, const HPMatrix& b) {
  HPMatrix c = a * b * a.transpose();
  return c.symmetrize();
}

Real dot(const std::vector<Real>& x, const std::vector<Real>& y) {
  Real s(x.empty() ? PrecisionContext::kDefaultBits : x.front().bits());
  for (std::size_t i = 0; i < x.size(); ++i) s.add_mul(x[i], y[i]);
  return s;
}

Real norm2(const std::vector<Real>& x) { return sqrt(dot(x, x)); }

Real max_abs_diff(const HPMatrix& a, const HPMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractError("max_abs_diff: shape mismatch");
  Real m(std::max(a.bits(), b.bits()));
  Real t(m.bits());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t.set_sub(a(i, j), b(i, j));
      if (!t.is_finite()) return t;
      if (mpfr_cmpabs(t.raw(), m.raw()) > 0) mpfr_abs(m.raw(), t.raw(), MPFR_RNDN);
    }
  return m;
}

namespace {

constexpr int kMaxSweeps = 80;

void check_finite(const HPMatrix& a, const char* who) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_finite()) throw DomainError(std::string(who) + ": non-finite entry");
}

}  // namespace

SymEigen sym_eigen(const HPMatrix& a_in, const PrecisionContext& ctx, bool want_vectors) {
  if (!a_in.is_square()) throw ContractError("sym_eigen: matrix not square");
  check_finite(a_in, "sym_eigen");
  const std::size_t n = a_in.rows();
  const long bits = ctx.bits;

  HPMatrix a(n, n, bits);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j).assign(a_in(i, j));
  a.symmetrize();
  HPMatrix v = want_vectors ? HPMatrix::identity(n, bits) : HPMatrix();

  const Real anorm = a.max_abs();
  // A rotation is skipped once |a_pq| is below rounding level relative to the
  // geometric mean of the two diagonal entries (keeps small eigenvalues
  // relatively accurate), with an absolute floor far below eig_tol.
  const Real rel = pow2(-(bits + 4), bits);
  const Real floor_abs = anorm * pow2(-2 * bits, bits);

  Real theta(bits), t(bits), c(bits), s(bits), tau(bits), g(bits), h(bits), thr(bits), tmp(bits);
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Real& apq = a(p, q);
        if (apq.is_zero()) continue;
        tmp.set_mul(a(p, p), a(q, q));
        mpfr_abs(tmp.raw(), tmp.raw(), MPFR_RNDN);
        mpfr_sqrt(thr.raw(), tmp.raw(), MPFR_RNDN);
        thr.set_mul(thr, rel);
        thr += floor_abs;
        if (mpfr_cmpabs(apq.raw(), thr.raw()) <= 0) {
          apq.assign(0L);
          a(q, p).assign(0L);
          continue;
        }
        rotated = true;
        // theta = (a_qq - a_pp) / (2 a_pq); t = sgn(theta) / (|theta| + sqrt(theta^2 + 1))
        theta.set_sub(a(q, q), a(p, p));
        mpfr_div(theta.raw(), theta.raw(), apq.raw(), MPFR_RNDN);
        mpfr_div_2ui(theta.raw(), theta.raw(), 1, MPFR_RNDN);
        tmp.set_mul(theta, theta);
        tmp += 1L;
        mpfr_sqrt(tmp.raw(), tmp.raw(), MPFR_RNDN);
        mpfr_abs(t.raw(), theta.raw(), MPFR_RNDN);
        t += tmp;
        mpfr_ui_div(t.raw(), 1, t.raw(), MPFR_RNDN);
        if (theta.sign() < 0) t.negate();
        tmp.set_mul(t, t);
        tmp += 1L;
        mpfr_rec_sqrt(c.raw(), tmp.raw(), MPFR_RNDN);
        s.set_mul(t, c);
        h.set_mul(t, apq);
        a(p, p) -= h;
        a(q, q) += h;
        apq.assign(0L);
        a(q, p).assign(0L);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          Real& akp = a(k, p);
          Real& akq = a(k, q);
          g.set_mul(c, akp);
          g.sub_mul(s, akq);
          h.set_mul(c, akq);
          h.add_mul(s, akp);
          akp.assign(g);
          akq.assign(h);
          a(p, k).assign(g);
          a(q, k).assign(h);
        }
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            Real& vkp = v(k, p);
            Real& vkq = v(k, q);
            g.set_mul(c, vkp);
            g.sub_mul(s, vkq);
            h.set_mul(s, vkp);
            h.add_mul(c, vkq);
            vkp.assign(g);
            vkq.assign(h);
          }
        }
      }
    }
    if (!rotated) converged = true;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEigen out;
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(a(i, i));
  out.worst_residual = Real(bits);

  Real offmax(bits);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && mpfr_cmpabs(a(i, j).raw(), offmax.raw()) > 0) mpfr_abs(offmax.raw(), a(i, j).raw(), MPFR_RNDN);

  if (want_vectors) {
    out.vectors = HPMatrix(n, n, bits);
    for (std::size_t jj = 0; jj < n; ++jj)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, jj).assign(v(k, order[jj]));

    // Residual against the symmetrized input.
    HPMatrix a0(n, n, bits);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a0(i, j).assign(a_in(i, j));
    a0.symmetrize();
    HPMatrix av = a0 * out.vectors;
    for (std::size_t jj = 0; jj < n; ++jj)
      for (std::size_t k = 0; k < n; ++k) {
        tmp.assign(av(k, jj));
        tmp.sub_mul(out.values[jj], out.vectors(k, jj));
        if (mpfr_cmpabs(tmp.raw(), out.worst_residual.raw()) > 0)
          mpfr_abs(out.worst_residual.raw(), tmp.raw(), MPFR_RNDN);
      }
    if (!anorm.is_zero()) out.worst_residual /= anorm;
  } else if (!anorm.is_zero()) {
    out.worst_residual = offmax / anorm;
  }

  if (!converged || !(out.worst_residual <= ctx.eig_tol)) {
    throw NumericError("sym_eigen: no convergence after " + std::to_string(kMaxSweeps) +
                       " sweeps (n=" + std::to_string(n) + ", worst residual " +
                       out.worst_residual.to_string(6) + ")");
  }
  return out;
}

SqrtPair sym_pd_sqrt_pair(const HPMatrix& a, const PrecisionContext& ctx) {
  SymEigen e = sym_eigen(a, ctx, true);
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (e.values[i].sign() <= 0) {
      throw DomainError("sym_pd_sqrt: non-positive eigenvalue " + e.values[i].to_string(10) + " (index " +
                        std::to_string(i) + ")");
    }
  }
  std::vector<Real> rs, irs;
  for (const Real& l : e.values) {
    rs.push_back(sqrt(l));
    irs.push_back(1L / rs.back());
  }
  SqrtPair out{HPMatrix(n, n, ctx.bits), HPMatrix(n, n, ctx.bits)};
  const HPMatrix& v = e.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Real s(ctx.bits), si(ctx.bits), vv(ctx.bits);
      for (std::size_t k = 0; k < n; ++k) {
        vv.set_mul(v(i, k), v(j, k));
        s.add_mul(vv, rs[k]);
        si.add_mul(vv, irs[k]);
      }
      out.sqrt(i, j).assign(s);
      out.sqrt(j, i).assign(s);
      out.inv_sqrt(i, j).assign(si);
      out.inv_sqrt(j, i).assign(si);
    }
  return out;
}

HPMatrix sym_pd_sqrt(const HPMatrix& a, const PrecisionContext& ctx) {
  return std::move(sym_pd_sqrt_pair(a, ctx).sqrt);
}

HPMatrix hp_inverse(const HPMatrix& a_in, const PrecisionContext& ctx) {
  if (!a_in.is_square()) throw ContractError("hp_inverse: matrix not square");
  check_finite(a_in, "hp_inverse");
  const std::size_t n = a_in.rows();
  const long bits = ctx.bits;
  HPMatrix a(n, n, bits);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j).assign(a_in(i, j));
  HPMatrix inv = HPMatrix::identity(n, bits);
  const Real scale = a.max_abs();
  const Real pivot_floor = scale * pow2(-bits + 8, bits);
  Real f(bits), piv(bits);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (mpfr_cmpabs(a(r, col).raw(), a(best, col).raw()) > 0) best = r;
    if (scale.is_zero() || mpfr_cmpabs(a(best, col).raw(), pivot_floor.raw()) < 0) {
      throw SingularMatrixError("hp_inverse: pivot " + a(best, col).to_string(6) + " below 2^(" +
                                std::to_string(-bits + 8) + ") relative at column " + std::to_string(col));
    }
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(best, j), a(col, j));
        std::swap(inv(best, j), inv(col, j));
      }
    }
    piv.assign(a(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= piv;
      inv(col, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      f.assign(a(r, col));
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j).sub_mul(f, a(col, j));
        inv(r, j).sub_mul(f, inv(col, j));
      }
    }
  }

  HPMatrix check = a_in * inv;
  Real worst = max_abs_diff(check, HPMatrix::identity(n, bits));
  if (!(worst <= ctx.eig_tol)) {
    throw PrecisionError("hp_inverse: residual |A A^-1 - I| = " + worst.to_string(6) + " exceeds eig_tol");
  }
  return inv;
}

Real determinant(const HPMatrix& a_in, const PrecisionContext& ctx) {
  if (!a_in.is_square()) throw ContractError("determinant: matrix not square");
  const std::size_t n = a_in.rows();
  HPMatrix a(n, n, ctx.bits);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j).assign(a_in(i, j));
  Real det(1L, ctx.bits), f(ctx.bits);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (mpfr_cmpabs(a(r, col).raw(), a(best, col).raw()) > 0) best = r;
    if (a(best, col).is_zero()) return Real(ctx.bits);
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(best, j), a(col, j));
      det.negate();
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j).sub_mul(f, a(col, j));
    }
  }
  return det;
}

SimilarEigen nonsym_eigen_similar(const HPMatrix& g, const HPMatrix& hg, const PrecisionContext& ctx) {
  if (!g.is_square() || !hg.is_square() || g.rows() != hg.rows())
    throw ContractError("nonsym_eigen_similar: shape mismatch");
  const std::size_t n = g.rows();
  SimilarEigen out;
  out.g_sqrt = sym_pd_sqrt(g, ctx);
  HPMatrix m = out.g_sqrt * hg * out.g_sqrt;
  m.symmetrize();
  SymEigen e = sym_eigen(m, ctx, true);
  out.values = std::move(e.values);
  out.sym_vectors = std::move(e.vectors);
  out.right_vectors = out.g_sqrt * out.sym_vectors;
  for (std::size_t j = 0; j < n; ++j) {
    Real nrm(ctx.bits), sum(ctx.bits);
    for (std::size_t i = 0; i < n; ++i) {
      nrm.add_mul(out.right_vectors(i, j), out.right_vectors(i, j));
      sum += out.right_vectors(i, j);
    }
    nrm = sqrt(nrm);
    if (sum.sign() < 0) nrm.negate();
    for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, j) /= nrm;
  }
  return out;
}

}  // namespace vacent
