#pragma once

#include "vacent/lattice.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace vacent {

/// Density matrix of up to 6 qubits in double precision. Qubit 0 is the
/// leftmost tensor factor (most significant bit of the basis index).
struct DenseState {
  int n_qubits = 0;
  Eigen::MatrixXcd rho;

  static DenseState from_pure(int n_qubits, const Eigen::VectorXcd& psi);
  /// ContractError unless Hermitian, trace one and PSD to 1e-12.
  void validate() const;
};

/// Partial transpose on the listed qubits.
Eigen::MatrixXcd partial_transpose(const DenseState& s, const std::vector<int>& qubits);

/// Reduced state on `keep`, in the order given.
DenseState reduced_state(const DenseState& s, const std::vector<int>& keep);

/// log2 of the trace norm of the partial transpose on the complement of a_qubits.
double qubit_log_negativity(const DenseState& s, const std::vector<int>& a_qubits);

struct GhzReport {
  double traced_pair_negativity = 0.0;      // GHZ with one qubit traced out
  double outcome_probability[2] = {0, 0};   // third qubit after the Hadamard
  double conditioned_negativity[2] = {0, 0};
  double corrected_fidelity[2] = {0, 0};    // overlap with (|00> + |11>)/sqrt 2 after correction
  bool ok = false;
};

/// Three-qubit GHZ: trace one qubit, or rotate it with a Hadamard, measure it
/// and apply Z to the first qubit on outcome 1.
GhzReport ghz_extraction_check();

struct CorrelatedNoiseReport {
  double total = 0.0;          // N_{A|B} of the mixture
  double two_body_sum = 0.0;   // sum over the two Bell-pair reduced states
  std::vector<double> pair_negativities;
  int order = 0;
  std::size_t n_nodes = 0;
  std::vector<std::string> warnings;
};

/// Mixture of R_x(theta)|psi><psi|R_x(-theta), R_x(t) = exp(-i t sigma_x) on each
/// qubit, with theta Gaussian of precision matrix Sigma (covariance Sigma^-1).
/// Qubit i takes angle theta_i. |psi> holds Bell pairs on qubits (0,3) and
/// (1,2), each stretched across the A = {0,1} | B = {2,3} boundary.
/// Tensor-product Gauss-Hermite of the given order per angle. DomainError
/// unless Sigma is 4x4 SPD; order < 8 is allowed with a warning.
CorrelatedNoiseReport correlated_noise_negativity(const Eigen::Matrix4d& Sigma, int order, unsigned threads = 1);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2) (Golub-Welsch).
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Kernel block K_{ij} = K_{|i-j|}, i, j < n, rounded to double.
Eigen::MatrixXd kernel_precision_matrix(const CorrelationKernel& kernel, int n);

}  // namespace vacent
