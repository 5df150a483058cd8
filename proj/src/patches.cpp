#include "vacent/patches.hpp"
#include "vacent/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace vacent {

std::vector<long> PatchPair::a_sites() const {
  std::vector<long> s;
  for (long i = 0; i < d; ++i) s.push_back(origin + i);
  return s;
}

std::vector<long> PatchPair::b_sites() const {
  std::vector<long> s;
  for (long i = 0; i < d; ++i) s.push_back(origin + d + gap + i);
  return s;
}

std::vector<long> PatchPair::sites() const {
  std::vector<long> s = a_sites();
  for (long x : b_sites()) s.push_back(x);
  return s;
}

std::vector<long> PatchPair::volume_sites(const LatticeSpec& spec) const {
  validate(spec);
  if (spec.is_infinite()) throw UnsupportedOperation("volume sites are infinite at infinite volume");
  const long n = *spec.finite_n;
  std::vector<bool> in_patch(static_cast<std::size_t>(n), false);
  for (long x : sites()) in_patch[static_cast<std::size_t>(((x % n) + n) % n)] = true;
  std::vector<long> v;
  for (long i = 0; i < n; ++i)
    if (!in_patch[static_cast<std::size_t>(i)]) v.push_back(i);
  return v;
}

void PatchPair::validate(const LatticeSpec& spec) const {
  if (d < 1) throw GeometryError("patch size d must be >= 1");
  if (gap < 0) throw GeometryError("patch gap must be >= 0");
  if (spec.finite_n && 2 * d + gap >= *spec.finite_n) {
    throw GeometryError("patches of size " + std::to_string(d) + " with gap " + std::to_string(gap) +
                        " wrap around a lattice of " + std::to_string(*spec.finite_n) + " sites");
  }
}

std::string to_string(ObservationProtocol p) {
  switch (p) {
    case ObservationProtocol::Traced: return "traced";
    case ObservationProtocol::MeasuredPhi: return "m-phi";
    case ObservationProtocol::MeasuredPi: return "m-pi";
  }
  return "?";
}

ObservationProtocol parse_protocol(const std::string& s) {
  if (s == "traced" || s == "t") return ObservationProtocol::Traced;
  if (s == "m-phi" || s == "measured-phi" || s == "phi") return ObservationProtocol::MeasuredPhi;
  if (s == "m-pi" || s == "measured-pi" || s == "pi") return ObservationProtocol::MeasuredPi;
  throw ConfigError("unknown protocol '" + s + "' (expected traced, m-phi, m-pi)");
}

std::string to_string(MeasurementBasis b) { return b == MeasurementBasis::Phi ? "phi" : "pi"; }

GHPair patch_state(const CorrelationKernel& kernel, const PatchPair& pair, ObservationProtocol proto) {
  pair.validate(kernel.spec());
  const PrecisionContext& ctx = kernel.ctx();
  const auto p = pair.sites();
  const Real half = Real(1L, ctx.bits) / 2L;
  GHPair gh;
  switch (proto) {
    case ObservationProtocol::Traced:
      gh.G = assemble_K_block(kernel, p, p, KernelKind::Kinv) * half;
      gh.H = assemble_K_block(kernel, p, p, KernelKind::K) * half;
      break;
    case ObservationProtocol::MeasuredPhi: {
      HPMatrix kpp = assemble_K_block(kernel, p, p, KernelKind::K);
      gh.G = hp_inverse(kpp, ctx) * half;
      gh.H = kpp * half;
      break;
    }
    case ObservationProtocol::MeasuredPi: {
      HPMatrix kipp = assemble_K_block(kernel, p, p, KernelKind::Kinv);
      gh.H = hp_inverse(kipp, ctx) * half;
      gh.G = kipp * half;
      break;
    }
  }
  gh.G.symmetrize();
  gh.H.symmetrize();
  return gh;
}

namespace {

HPMatrix zeros_like(const HPMatrix& m) { return HPMatrix(m.rows(), m.cols(), m.bits()); }

}  // namespace

HPMatrix noise_closed_form(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis) {
  const PrecisionContext& ctx = kernel.ctx();
  const auto p = pair.sites();
  const auto v = pair.volume_sites(kernel.spec());
  // Same algebra for both bases with M = K (phi) or M = K^-1 (pi).
  const KernelKind kind = basis == MeasurementBasis::Phi ? KernelKind::K : KernelKind::Kinv;
  HPMatrix mpp = assemble_K_block(kernel, p, p, kind);
  HPMatrix mpv = assemble_K_block(kernel, p, v, kind);
  HPMatrix mvv = assemble_K_block(kernel, v, v, kind);
  HPMatrix mpp_inv = hp_inverse(mpp, ctx);
  HPMatrix kbar = mpp_inv * mpv * hp_inverse(mvv, ctx) * mpv.transpose();
  HPMatrix one_minus = HPMatrix::identity(p.size(), ctx.bits) - kbar;
  HPMatrix y = hp_inverse(one_minus, ctx) * kbar * mpp_inv;
  return y.symmetrize();
}

NoiseMatrix noise_matrix(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis) {
  const PrecisionContext& ctx = kernel.ctx();
  GHPair t = patch_state(kernel, pair, ObservationProtocol::Traced);
  NoiseMatrix out;
  if (basis == MeasurementBasis::Phi) {
    GHPair m = patch_state(kernel, pair, ObservationProtocol::MeasuredPhi);
    out.Y_phi = (t.G - m.G) * Real(2L, ctx.bits);
    out.Y_phi.symmetrize();
    out.Y_pi = zeros_like(t.H);
  } else {
    GHPair m = patch_state(kernel, pair, ObservationProtocol::MeasuredPi);
    out.Y_pi = (t.H - m.H) * Real(2L, ctx.bits);
    out.Y_pi.symmetrize();
    out.Y_phi = zeros_like(t.G);
  }
  const HPMatrix& y = basis == MeasurementBasis::Phi ? out.Y_phi : out.Y_pi;
  out.min_eigenvalue = sym_eigen(y, ctx, false).values.front();
  Real scale = max(Real(1L, ctx.bits), y.max_abs());
  if (out.min_eigenvalue < -(ctx.eig_tol * scale)) {
    throw PrecisionError("noise matrix not positive semidefinite: min eigenvalue " +
                         out.min_eigenvalue.to_string(6));
  }
  if (kernel.spec().finite_n) out.closed_form_deviation = max_abs_diff(y, noise_closed_form(kernel, pair, basis));
  return out;
}

HPMatrix displacement_map(const CorrelationKernel& kernel, const PatchPair& pair, MeasurementBasis basis) {
  const PrecisionContext& ctx = kernel.ctx();
  const auto p = pair.sites();
  const auto v = pair.volume_sites(kernel.spec());
  const KernelKind kind = basis == MeasurementBasis::Phi ? KernelKind::K : KernelKind::Kinv;
  HPMatrix map = hp_inverse(assemble_K_block(kernel, p, p, kind), ctx) * assemble_K_block(kernel, p, v, kind);
  return map * Real(-1L, ctx.bits);
}

std::vector<Real> displacement_from_volume(const CorrelationKernel& kernel, const PatchPair& pair,
                                           const std::vector<Real>& volume_values, MeasurementBasis basis) {
  HPMatrix map = displacement_map(kernel, pair, basis);
  if (volume_values.size() != map.cols()) {
    throw ContractError("displacement_from_volume: expected " + std::to_string(map.cols()) +
                        " volume values, got " + std::to_string(volume_values.size()));
  }
  return map * volume_values;
}

MixtureReport mixture_reconstruction_check(const CorrelationKernel& kernel, const PatchPair& pair,
                                           MeasurementBasis basis, std::size_t n_samples,
                                           std::uint64_t seed, unsigned threads) {
  MixtureReport rep;
  if (n_samples == 0) return rep;
  if (kernel.spec().is_infinite()) {
    throw UnsupportedOperation("mixture_reconstruction_check needs a finite lattice");
  }
  const auto v = pair.volume_sites(kernel.spec());
  const std::size_t np = pair.sites().size();
  const std::size_t nv = v.size();

  // Vacuum marginal of the volume: covariance (K^-1)_vv / 2 for phi_v,
  // K_vv / 2 for pi_v (|psi(phi)|^2 ~ exp(-phi^T K phi)).
  const KernelKind cov_kind = basis == MeasurementBasis::Phi ? KernelKind::Kinv : KernelKind::K;
  const auto to_eigen = [](const HPMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).to_double();
    return e;
  };
  Eigen::MatrixXd cov = 0.5 * to_eigen(assemble_K_block(kernel, v, v, cov_kind));
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("volume marginal covariance not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();
  const Eigen::MatrixXd dmap = to_eigen(displacement_map(kernel, pair, basis));

  NoiseMatrix y = noise_matrix(kernel, pair, basis);
  const HPMatrix& yref = basis == MeasurementBasis::Phi ? y.Y_phi : y.Y_pi;

  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  const std::size_t n2 = np * np;
  // Per chunk: sums of x and x^2 for x = 2 d_i d_j.
  std::vector<std::vector<double>> s1(n_chunks, std::vector<double>(n2, 0.0));
  std::vector<std::vector<double>> s2(n_chunks, std::vector<double>(n2, 0.0));

  auto run_chunk = [&](std::size_t c) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t count = std::min(kChunk, n_samples - c * kChunk);
    Eigen::VectorXd z(static_cast<Eigen::Index>(nv));
    for (std::size_t s = 0; s < count; ++s) {
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
      Eigen::VectorXd disp = dmap * (chol * z);
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) {
          double x = 2.0 * disp(static_cast<Eigen::Index>(i)) * disp(static_cast<Eigen::Index>(j));
          s1[c][i * np + j] += x;
          s2[c][i * np + j] += x * x;
        }
    }
  };

  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));
  if (nt == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < n_chunks; c += nt) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> sum1(n2, 0.0), sum2(n2, 0.0);
  for (std::size_t c = 0; c < n_chunks; ++c)
    for (std::size_t k = 0; k < n2; ++k) {
      sum1[k] += s1[c][k];
      sum2[k] += s2[c][k];
    }

  rep.n_samples = n_samples;
  rep.dim = np;
  const double n = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t k = i * np + j;
      double mean = sum1[k] / n;
      double var = std::max(0.0, sum2[k] / n - mean * mean);
      double se = std::sqrt(var / n);
      double ref = yref(i, j).to_double();
      rep.estimate.push_back(mean);
      rep.reference.push_back(ref);
      rep.std_error.push_back(se);
      double dev = std::abs(mean - ref);
      rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
      if (se > 0.0) rep.max_z = std::max(rep.max_z, dev / se);
    }
  return rep;
}

}  // namespace vacent
