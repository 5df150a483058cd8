#include "vacent/qubits.hpp"

#include "vacent/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

namespace vacent {

namespace {

using cd = std::complex<double>;

void check_qubits(const std::vector<int>& qs, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int q : qs) {
    if (q < 0 || q >= n) throw ContractError("qubit index out of range");
    if (seen[static_cast<std::size_t>(q)]) throw ContractError("repeated qubit index");
    seen[static_cast<std::size_t>(q)] = true;
  }
}

// exp(-i t sigma_x) on qubit q of an n-qubit vector, in place.
void apply_rx(Eigen::VectorXcd& psi, int q, double t, int n) {
  const double c = std::cos(t), s = std::sin(t);
  const int stride = 1 << (n - 1 - q);
  for (int i = 0; i < psi.size(); ++i) {
    if (i & stride) continue;
    cd a = psi[i], b = psi[i | stride];
    psi[i] = c * a - cd(0, s) * b;
    psi[i | stride] = c * b - cd(0, s) * a;
  }
}

}  // namespace

DenseState DenseState::from_pure(int n_qubits, const Eigen::VectorXcd& psi) {
  if (n_qubits < 1 || n_qubits > 6) throw ContractError("dense state: 1 to 6 qubits");
  if (psi.size() != (1 << n_qubits)) throw ContractError("dense state: vector size mismatch");
  Eigen::VectorXcd v = psi / psi.norm();
  return DenseState{n_qubits, v * v.adjoint()};
}

void DenseState::validate() const {
  if (n_qubits < 1 || n_qubits > 6) throw ContractError("dense state: 1 to 6 qubits");
  const long dim = 1L << n_qubits;
  if (rho.rows() != dim || rho.cols() != dim) throw ContractError("dense state: matrix size mismatch");
  constexpr double tol = 1e-12;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw ContractError("dense state: not Hermitian");
  if (std::abs(rho.trace() - cd(1, 0)) > tol) throw ContractError("dense state: trace is not one");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw ContractError("dense state: not positive semidefinite");
}

Eigen::MatrixXcd partial_transpose(const DenseState& s, const std::vector<int>& qubits) {
  check_qubits(qubits, s.n_qubits);
  int mask = 0;
  for (int q : qubits) mask |= 1 << (s.n_qubits - 1 - q);
  const long dim = s.rho.rows();
  Eigen::MatrixXcd out(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      long ii = (i & ~mask) | (j & mask);
      long jj = (j & ~mask) | (i & mask);
      out(ii, jj) = s.rho(i, j);
    }
  return out;
}

DenseState reduced_state(const DenseState& s, const std::vector<int>& keep) {
  check_qubits(keep, s.n_qubits);
  const int n = s.n_qubits;
  const int k = static_cast<int>(keep.size());
  if (k == 0) throw ContractError("reduced state: nothing kept");
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  auto compose = [&](int kept_index, int traced_index) {
    int full = 0;
    for (int a = 0; a < k; ++a)
      if ((kept_index >> (k - 1 - a)) & 1) full |= 1 << (n - 1 - keep[static_cast<std::size_t>(a)]);
    const int t = static_cast<int>(traced.size());
    for (int b = 0; b < t; ++b)
      if ((traced_index >> (t - 1 - b)) & 1) full |= 1 << (n - 1 - traced[static_cast<std::size_t>(b)]);
    return full;
  };

  const int dk = 1 << k, dt = 1 << (n - k);
  DenseState out{k, Eigen::MatrixXcd::Zero(dk, dk)};
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int t = 0; t < dt; ++t) out.rho(i, j) += s.rho(compose(i, t), compose(j, t));
  return out;
}

double qubit_log_negativity(const DenseState& s, const std::vector<int>& a_qubits) {
  check_qubits(a_qubits, s.n_qubits);
  std::vector<int> b;
  for (int q = 0; q < s.n_qubits; ++q)
    if (std::find(a_qubits.begin(), a_qubits.end(), q) == a_qubits.end()) b.push_back(q);
  if (a_qubits.empty() || b.empty()) throw ContractError("negativity: both sides must be nonempty");
  Eigen::MatrixXcd pt = partial_transpose(s, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  return std::log2(es.eigenvalues().cwiseAbs().sum());
}

GhzReport ghz_extraction_check() {
  GhzReport rep;
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
  ghz[0] = h;
  ghz[7] = h;
  DenseState g = DenseState::from_pure(3, ghz);
  rep.traced_pair_negativity = qubit_log_negativity(reduced_state(g, {0, 1}), {0});

  // Hadamard on qubit 2
  Eigen::VectorXcd rot = Eigen::VectorXcd::Zero(8);
  for (int i = 0; i < 8; i += 2) {
    rot[i] = h * (ghz[i] + ghz[i + 1]);
    rot[i + 1] = h * (ghz[i] - ghz[i + 1]);
  }
  Eigen::VectorXcd bell(4);
  bell << h, 0, 0, h;
  bool ok = rep.traced_pair_negativity < 1e-12;
  for (int outcome = 0; outcome < 2; ++outcome) {
    Eigen::VectorXcd pair(4);
    for (int i = 0; i < 4; ++i) pair[i] = rot[2 * i + outcome];
    const double p = pair.squaredNorm();
    rep.outcome_probability[outcome] = p;
    pair /= std::sqrt(p);
    DenseState ps = DenseState::from_pure(2, pair);
    rep.conditioned_negativity[outcome] = qubit_log_negativity(ps, {0});
    if (outcome == 1) pair.segment(2, 2) *= -1.0;  // Z on qubit 0
    rep.corrected_fidelity[outcome] = std::norm(bell.dot(pair));
    ok = ok && std::abs(p - 0.5) < 1e-12 && std::abs(rep.conditioned_negativity[outcome] - 1.0) < 1e-12 &&
         std::abs(rep.corrected_fidelity[outcome] - 1.0) < 1e-12;
  }
  rep.ok = ok;
  return rep;
}

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw ContractError("Gauss-Hermite: order must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(static_cast<std::size_t>(order));
  weights.resize(static_cast<std::size_t>(order));
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
}

CorrelatedNoiseReport correlated_noise_negativity(const Eigen::Matrix4d& Sigma, int order, unsigned threads) {
  if ((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * Sigma.cwiseAbs().maxCoeff())
    throw DomainError("noise precision matrix is not symmetric");
  Eigen::LLT<Eigen::Matrix4d> llt(Sigma);
  if (llt.info() != Eigen::Success) throw DomainError("noise precision matrix is not positive definite");
  if (order < 1) throw ContractError("quadrature order must be positive");

  CorrelatedNoiseReport rep;
  rep.order = order;
  if (order < 8) rep.warnings.push_back("Gauss-Hermite order below 8: results may be inaccurate");

  // theta = sqrt(2) L x with L L^T = Sigma^-1, x weighted by exp(-|x|^2) / pi^2.
  Eigen::Matrix4d cov = llt.solve(Eigen::Matrix4d::Identity());
  Eigen::Matrix4d L = Eigen::LLT<Eigen::Matrix4d>(cov).matrixL();
  L *= std::sqrt(2.0);
  std::vector<double> x, w;
  gauss_hermite(order, x, w);
  for (auto& wi : w) wi /= std::sqrt(M_PI);

  // Bell pairs (0,3) and (1,2): amplitude 1/2 on |q0 q1 q2 q3> with q0 = q3, q1 = q2.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) psi[(a << 3) | (b << 2) | (b << 1) | a] = 0.5;

  // One partial sum per first-axis node, added in node order afterwards.
  std::vector<Eigen::MatrixXcd> partial(static_cast<std::size_t>(order), Eigen::MatrixXcd::Zero(16, 16));
  std::atomic<int> next{0};
  auto worker = [&] {
    Eigen::VectorXcd v(16);
    Eigen::Vector4d xi, th;
    for (int i0 = next++; i0 < order; i0 = next++) {
      Eigen::MatrixXcd& acc = partial[static_cast<std::size_t>(i0)];
      xi[0] = x[static_cast<std::size_t>(i0)];
      for (int i1 = 0; i1 < order; ++i1)
        for (int i2 = 0; i2 < order; ++i2)
          for (int i3 = 0; i3 < order; ++i3) {
            xi[1] = x[static_cast<std::size_t>(i1)];
            xi[2] = x[static_cast<std::size_t>(i2)];
            xi[3] = x[static_cast<std::size_t>(i3)];
            const double wt = w[static_cast<std::size_t>(i0)] * w[static_cast<std::size_t>(i1)] *
                              w[static_cast<std::size_t>(i2)] * w[static_cast<std::size_t>(i3)];
            th = L * xi;
            v = psi;
            for (int q = 0; q < 4; ++q) apply_rx(v, q, th[q], 4);
            acc.noalias() += wt * (v * v.adjoint());
          }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(order)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  DenseState rho{4, Eigen::MatrixXcd::Zero(16, 16)};
  for (const auto& p : partial) rho.rho += p;
  rho.rho = 0.5 * (rho.rho + rho.rho.adjoint()).eval();
  rep.n_nodes = static_cast<std::size_t>(order) * order * order * order;

  rep.total = qubit_log_negativity(rho, {0, 1});
  for (auto pr : {std::vector<int>{0, 3}, std::vector<int>{1, 2}}) {
    double np = qubit_log_negativity(reduced_state(rho, pr), {0});
    rep.pair_negativities.push_back(np);
    rep.two_body_sum += np;
  }
  return rep;
}

Eigen::MatrixXd kernel_precision_matrix(const CorrelationKernel& kernel, int n) {
  if (n < 1) throw ContractError("kernel block: size must be positive");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = kernel.element(KernelKind::K, std::abs(i - j)).to_double();
  return m;
}

}  // namespace vacent
