#pragma once

#include "vacent/precision.hpp"

#include <cstddef>
#include <vector>

namespace vacent {

/// Dense row-major matrix of extended-precision reals.
class HPMatrix {
public:
  HPMatrix() = default;
  HPMatrix(std::size_t rows, std::size_t cols, long bits);

  static HPMatrix identity(std::size_t n, long bits);
  static HPMatrix diagonal(const std::vector<Real>& d);
  /// Builds from doubles (row-major); values are taken exactly as stored.
  static HPMatrix from_doubles(std::size_t rows, std::size_t cols, const std::vector<double>& v,
                               long bits);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  long bits() const noexcept { return bits_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Real& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  /// Replaces A by (A + A^T)/2 so that A_ij == A_ji bit for bit.
  HPMatrix& symmetrize();
  bool is_symmetric() const;

  HPMatrix transpose() const;
  /// Rows ri, columns ci (index lists into this matrix).
  HPMatrix submatrix(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const;
  std::vector<Real> column(std::size_t j) const;
  std::vector<Real> row(std::size_t i) const;
  void set_column(std::size_t j, const std::vector<Real>& v);
  void set_row(std::size_t i, const std::vector<Real>& v);

  Real max_abs() const;
  std::vector<double> to_doubles() const;

  HPMatrix& operator+=(const HPMatrix& b);
  HPMatrix& operator-=(const HPMatrix& b);
  HPMatrix& operator*=(const Real& s);

  friend HPMatrix operator+(HPMatrix a, const HPMatrix& b) { return a += b; }
  friend HPMatrix operator-(HPMatrix a, const HPMatrix& b) { return a -= b; }
  friend HPMatrix operator*(HPMatrix a, const Real& s) { return a *= s; }
  friend HPMatrix operator*(const Real& s, HPMatrix a) { return a *= s; }
  friend HPMatrix operator*(const HPMatrix& a, const HPMatrix& b);
  friend std::vector<Real> operator*(const HPMatrix& a, const std::vector<Real>& x);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  long bits_ = PrecisionContext::kDefaultBits;
  std::vector<Real> a_;
};

/// A^T B without forming the transpose.
HPMatrix transpose_times(const HPMatrix& a, const HPMatrix& b);
/// A B A^T, symmetrized.
HPMatrix congruence(const HPMatrix& a, const HPMatrix& b);

Real dot(const std::vector<Real>& x, const std::vector<Real>& y);
Real norm2(const std::vector<Real>& x);

struct SymEigen {
  std::vector<Real> values;  // ascending
  HPMatrix vectors;          // column i pairs with values[i]; empty if not requested
  Real worst_residual;       // max_i |A v_i - l_i v_i| / |A|_max
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Throws NumericError if
/// the sweep cap is reached or the residual check against eig_tol fails.
SymEigen sym_eigen(const HPMatrix& a, const PrecisionContext& ctx, bool want_vectors = true);

/// Symmetric square root of an SPD matrix. DomainError on a non-positive eigenvalue.
HPMatrix sym_pd_sqrt(const HPMatrix& a, const PrecisionContext& ctx);

/// Symmetric square root and its inverse from a single eigendecomposition.
struct SqrtPair {
  HPMatrix sqrt;
  HPMatrix inv_sqrt;
};
SqrtPair sym_pd_sqrt_pair(const HPMatrix& a, const PrecisionContext& ctx);

/// Gauss-Jordan inverse with partial pivoting. SingularMatrixError when a pivot
/// falls below 2^(-bits+8) relative to max|A|.
HPMatrix hp_inverse(const HPMatrix& a, const PrecisionContext& ctx);

/// Determinant by LU with partial pivoting.
Real determinant(const HPMatrix& a, const PrecisionContext& ctx);

struct SimilarEigen {
  std::vector<Real> values;   // ascending eigenvalues of G*Hg
  HPMatrix right_vectors;     // columns v_i = G^{1/2} w_i, unit norm, nonnegative component sum
  HPMatrix sym_vectors;       // columns w_i, orthonormal eigenvectors of G^{1/2} Hg G^{1/2}
  HPMatrix g_sqrt;            // G^{1/2}
};

/// Eigenproblem of G*Hg through the symmetric similarity G^{1/2} Hg G^{1/2}.
SimilarEigen nonsym_eigen_similar(const HPMatrix& g, const HPMatrix& hg, const PrecisionContext& ctx);

/// Maximum entrywise |A - B|.
Real max_abs_diff(const HPMatrix& a, const HPMatrix& b);

}  // namespace vacent
