#include "vacent/errors.hpp"
#include "vacent/gaussian.hpp"
#include "vacent/patches.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vacent;

namespace {

// Riffled two-mode helpers, built in double and then carried exactly.
std::vector<double> mul4(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(16, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return c;
}

std::vector<double> squeezer(int mode, double r) {
  std::vector<double> s{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  s[(2 * mode) * 4 + 2 * mode] = std::exp(-r);
  s[(2 * mode + 1) * 4 + 2 * mode + 1] = std::exp(r);
  return s;
}

std::vector<double> rotation(int mode, double t) {
  std::vector<double> s{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  int a = 2 * mode;
  s[a * 4 + a] = std::cos(t);
  s[a * 4 + a + 1] = std::sin(t);
  s[(a + 1) * 4 + a] = -std::sin(t);
  s[(a + 1) * 4 + a + 1] = std::cos(t);
  return s;
}

std::vector<double> beam_splitter(double t) {
  double c = std::cos(t), s = std::sin(t);
  return {c, 0, s, 0, 0, c, 0, s, -s, 0, c, 0, 0, -s, 0, c};
}

CovarianceMatrix random_two_mode(std::mt19937_64& rng, long bits) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto s = mul4(squeezer(0, u(rng)), rotation(1, 3 * u(rng)));
  s = mul4(s, beam_splitter(2 * u(rng)));
  s = mul4(s, squeezer(1, u(rng)));
  s = mul4(s, rotation(0, 3 * u(rng)));
  s = mul4(s, squeezer(0, 0.7 * u(rng)));
  double n1 = 1.0 + std::abs(u(rng)), n2 = 1.0 + 0.3 * std::abs(u(rng));
  HPMatrix S = HPMatrix::from_doubles(4, 4, s, bits);
  HPMatrix D = HPMatrix::from_doubles(4, 4, {n1, 0, 0, 0, 0, n1, 0, 0, 0, 0, n2, 0, 0, 0, 0, n2}, bits);
  return CovarianceMatrix{congruence(S, D), std::vector<Real>(4, Real(bits))};
}

// nu_-^2 = (Dt - sqrt(Dt^2 - 4 det sigma)) / 2 with Dt = det A + det B - 2 det C.
double delta_tilde_negativity(const CovarianceMatrix& cm) {
  auto s = cm.sigma.to_doubles();
  auto at = [&](int i, int j) { return s[static_cast<std::size_t>(i * 4 + j)]; };
  double detA = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  double detB = at(2, 2) * at(3, 3) - at(2, 3) * at(3, 2);
  double detC = at(0, 2) * at(1, 3) - at(0, 3) * at(1, 2);
  double det = 0.0;
  {
    // 4x4 determinant by cofactor expansion
    auto m3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
      return at(r0, c0) * (at(r1, c1) * at(r2, c2) - at(r1, c2) * at(r2, c1)) -
             at(r0, c1) * (at(r1, c0) * at(r2, c2) - at(r1, c2) * at(r2, c0)) +
             at(r0, c2) * (at(r1, c0) * at(r2, c1) - at(r1, c1) * at(r2, c0));
    };
    det = at(0, 0) * m3(1, 2, 3, 1, 2, 3) - at(0, 1) * m3(1, 2, 3, 0, 2, 3) + at(0, 2) * m3(1, 2, 3, 0, 1, 3) -
          at(0, 3) * m3(1, 2, 3, 0, 1, 2);
  }
  double dt = detA + detB - 2.0 * detC;
  double nu = std::sqrt(0.5 * (dt - std::sqrt(dt * dt - 4.0 * det)));
  return nu < 1.0 ? -std::log2(nu) : 0.0;
}

GHPair two_mode_squeezed_gh(double r, long bits) {
  double c = std::cosh(2 * r), s = std::sinh(2 * r);
  return GHPair{HPMatrix::from_doubles(2, 2, {c / 2, s / 2, s / 2, c / 2}, bits),
                HPMatrix::from_doubles(2, 2, {c / 2, -s / 2, -s / 2, c / 2}, bits)};
}

}  // namespace

TEST(CovarianceMatrix, FromGH) {
  const long bits = 128;
  Real half = Real(1L, bits) / 2L;
  GHPair vac{HPMatrix::identity(2, bits) * half, HPMatrix::identity(2, bits) * half};
  EXPECT_TRUE(max_abs_diff(cm_from_GH(vac).sigma, HPMatrix::identity(4, bits)).is_zero());
  GHPair one{HPMatrix::from_doubles(1, 1, {0.75}, bits), HPMatrix::from_doubles(1, 1, {0.5}, bits)};
  EXPECT_TRUE(max_abs_diff(cm_from_GH(one).sigma, HPMatrix::from_doubles(2, 2, {1.5, 0, 0, 1}, bits)).is_zero());
}

TEST(CovarianceMatrix, FullLatticeVacuumDeterminantOne) {
  PrecisionContext ctx(512);
  auto spec = LatticeSpec::finite(6, 0.3);
  CorrelationKernel k(spec, ctx);
  auto v = vacuum_GH(k, all_sites(spec));
  EXPECT_LE(abs(determinant(cm_from_GH(GHPair{v.G, v.H}).sigma, ctx) - 1L), pow2(-200, 512));
}

TEST(PartialTranspose, IdentityInvolutionAndSigns) {
  PrecisionContext ctx(128);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  PatchPair pair{2, 1, 0};
  GHPair gh = patch_state(k, pair, ObservationProtocol::Traced);
  GHPair none = partial_transpose(gh, {});
  EXPECT_TRUE(max_abs_diff(none.H, gh.H).is_zero());
  GHPair pt = partial_transpose(gh, pair.b_modes());
  GHPair back = partial_transpose(pt, pair.b_modes());
  EXPECT_TRUE(max_abs_diff(back.H, gh.H).is_zero());
  EXPECT_TRUE(max_abs_diff(pt.G, gh.G).is_zero());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      bool cross = (i < 2) != (j < 2);
      EXPECT_TRUE(pt.H(i, j) == (cross ? -gh.H(i, j) : gh.H(i, j)));
    }
}

TEST(PTSpectrum, SingleSiteMeasuredClosedForm) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  for (long rt : {0L, 2L, 9L}) {
    PatchPair pair{1, rt, 0};
    auto spec = pt_symplectic_spectrum(patch_state(k, pair, ObservationProtocol::MeasuredPhi), pair.b_modes(), ctx);
    Real k0 = k.element(KernelKind::K, 0), kr = k.element(KernelKind::K, rt + 1);
    Real den = sqrt(k0 * k0 - kr * kr);
    // K_{0,r+1} < 0, so the smaller value is (K0 + K0r)/den
    EXPECT_LE(abs(spec.values[0] - (k0 + kr) / den), ctx.eig_tol);
    EXPECT_LE(abs(spec.values[1] - (k0 - kr) / den), ctx.eig_tol);
  }
}

TEST(PTSpectrum, PureStatesWithoutTransposeAreOnes) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  for (auto proto : {ObservationProtocol::MeasuredPhi, ObservationProtocol::MeasuredPi}) {
    PatchPair pair{4, 2, 0};
    auto spec = pt_symplectic_spectrum(patch_state(k, pair, proto), {}, ctx);
    for (const auto& v : spec.values) EXPECT_LE(abs(v - 1L), ctx.eig_tol);
  }
  Real half = Real(1L, 256) / 2L;
  GHPair prod{HPMatrix::identity(2, 256) * half, HPMatrix::identity(2, 256) * half};
  auto spec = pt_symplectic_spectrum(prod, {1}, ctx);
  for (const auto& v : spec.values) EXPECT_LE(abs(v - 1L), ctx.eig_tol);
  EXPECT_LE(log_negativity(spec), ctx.eig_tol);
}

TEST(PTSpectrum, AgreesWithGeneralCovarianceRoute) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  PatchPair pair{2, 1, 0};
  for (auto proto : {ObservationProtocol::Traced, ObservationProtocol::MeasuredPi}) {
    GHPair gh = patch_state(k, pair, proto);
    auto a = pt_symplectic_spectrum(gh, pair.b_modes(), ctx);
    auto b = symplectic_spectrum(partial_transpose(cm_from_GH(gh), pair.b_modes()), ctx);
    ASSERT_EQ(a.values.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_LE(abs(a.values[i] - b[i]), ctx.eig_tol);
    EXPECT_LE(abs(log_negativity(a) - log_negativity(cm_from_GH(gh), pair.b_modes(), ctx)), ctx.eig_tol);
  }
}

TEST(LogNegativity, LabelExchangeInvariance) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  PatchPair pair{3, 2, 0};
  for (auto proto : {ObservationProtocol::Traced, ObservationProtocol::MeasuredPhi, ObservationProtocol::MeasuredPi}) {
    GHPair gh = patch_state(k, pair, proto);
    Real nb = log_negativity(pt_symplectic_spectrum(gh, pair.b_modes(), ctx));
    Real na = log_negativity(pt_symplectic_spectrum(gh, pair.a_modes(), ctx));
    EXPECT_LE(abs(na - nb), ctx.eig_tol);
    EXPECT_GT(nb, 0L);
  }
}

TEST(LogNegativity, ThresholdAtOne) {
  const long bits = 128;
  std::vector<Real> nus{Real(1L, bits), Real(2L, bits), Real(1.5, bits)};
  EXPECT_TRUE(log_negativity(nus).is_zero());
  nus.push_back(Real(0.25, bits));
  EXPECT_TRUE(log_negativity(nus) == 2L);
}

TEST(LogNegativity, TwoModeSqueezedClosedForm) {
  PrecisionContext ctx(256);
  for (double r : {0.1, 0.5, 1.2}) {
    GHPair gh = two_mode_squeezed_gh(r, 256);
    auto spec = pt_symplectic_spectrum(gh, {1}, ctx);
    EXPECT_NEAR(spec.values[0].to_double(), std::exp(-2 * r), 1e-14);
    EXPECT_NEAR(spec.values[1].to_double(), std::exp(2 * r), 1e-12);
    EXPECT_NEAR(log_negativity(spec).to_double(), 2 * r / std::log(2.0), 1e-13);
  }
}

TEST(LogNegativity, TwoModeDeltaTildeOracle) {
  PrecisionContext ctx(192);
  std::mt19937_64 rng(2024);
  int entangled = 0;
  for (int trial = 0; trial < 40; ++trial) {
    CovarianceMatrix cm = random_two_mode(rng, 192);
    double oracle = delta_tilde_negativity(cm);
    double got = log_negativity(cm, {1}, ctx).to_double();
    EXPECT_NEAR(got, oracle, 1e-9) << trial;
    entangled += oracle > 0;
  }
  EXPECT_GT(entangled, 5);
}

TEST(SymplecticSpectrum, ThermalState) {
  PrecisionContext ctx(192);
  CovarianceMatrix cm{HPMatrix::from_doubles(4, 4, {3, 0, 0, 0, 0, 3, 0, 0, 0, 0, 1.5, 0, 0, 0, 0, 1.5}, 192), {}};
  auto nu = symplectic_spectrum(cm, ctx);
  EXPECT_LE(abs(nu[0] - ctx.from(1.5)), ctx.eig_tol);
  EXPECT_LE(abs(nu[1] - 3L), ctx.eig_tol);
}

TEST(CheckPhysical, VacuumBelowVacuumAndTraced) {
  PrecisionContext ctx(256);
  auto vac = check_physical(CovarianceMatrix{HPMatrix::identity(4, 256), {}}, ctx);
  EXPECT_TRUE(vac.uncertainty_ok);
  EXPECT_LE(abs(vac.purity - 1L), ctx.eig_tol);
  Real half = Real(1L, 256) / 2L;
  auto bad = check_physical(CovarianceMatrix{HPMatrix::identity(4, 256) * half, {}}, ctx);
  EXPECT_FALSE(bad.uncertainty_ok);
  EXPECT_LT(bad.min_eigenvalue, 0L);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  PatchPair pair{16, 16, 0};
  auto t = check_physical(cm_from_GH(patch_state(k, pair, ObservationProtocol::Traced)), ctx);
  EXPECT_TRUE(t.uncertainty_ok);
  EXPECT_LT(t.purity, 1L);
}
