#include "vacent/errors.hpp"
#include "vacent/scans.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace vacent;

namespace {

int sign_changes(const std::vector<Real>& v, std::size_t first, std::size_t count, const Real& floor) {
  int changes = 0, prev = 0;
  for (std::size_t i = first; i < first + count; ++i) {
    if (abs(v[i]) <= floor) continue;
    int s = v[i].sign();
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

std::vector<ScanRecord> scan(const CorrelationKernel& k, long d, std::vector<long> rts,
                             std::vector<ObservationProtocol> protos, unsigned threads = 1) {
  ScanGrid g;
  g.d = d;
  g.mass = k.spec().mass;
  g.protocols = std::move(protos);
  g.rts = std::move(rts);
  return negativity_scan(g, k, threads);
}

}  // namespace

TEST(ScanGrid, Validation) {
  ScanGrid g;
  g.protocols = {ObservationProtocol::Traced};
  g.rts = {0, 1, 2};
  EXPECT_NO_THROW(g.validate());
  g.rts = {0, 2, 2};
  EXPECT_THROW(g.validate(), ContractError);
  g.rts = {-1, 2};
  EXPECT_THROW(g.validate(), GeometryError);
  g.rts = {1};
  g.d = 0;
  EXPECT_THROW(g.validate(), GeometryError);
  g.d = 2;
  g.mass = 0.0;
  EXPECT_THROW(g.validate(), DomainError);
  g.mass = 0.3;
  g.protocols.clear();
  EXPECT_THROW(g.validate(), ContractError);
}

TEST(Scan, SingleSiteClosedFormsMatchPipeline) {
  PrecisionContext ctx(256);
  for (double m : {kMasslessMass, 0.3, 1.0}) {
    CorrelationKernel k(LatticeSpec::infinite(m), ctx);
    std::vector<long> rts;
    for (long r = 0; r <= 40; ++r) rts.push_back(r);
    auto recs = scan(k, 1, rts, {ObservationProtocol::MeasuredPhi, ObservationProtocol::MeasuredPi});
    for (const auto& rec : recs) {
      auto basis = rec.protocol == ObservationProtocol::MeasuredPhi ? MeasurementBasis::Phi : MeasurementBasis::Pi;
      Real cf = d1_measured_negativity(k, rec.rt, basis);
      EXPECT_LE(abs(cf - rec.negativity), ctx.eig_tol * max(Real(1L, ctx.bits), cf)) << m << " rt=" << rec.rt;
    }
  }
}

TEST(Scan, RecordInvariantsAndMonotoneDecay) {
  PrecisionContext ctx(256);
  for (double m : {kMasslessMass, 0.3}) {
    CorrelationKernel k(LatticeSpec::infinite(m), ctx);
    std::vector<long> rts;
    for (long r = 0; r <= 60; r += 3) rts.push_back(r);
    const std::vector<ObservationProtocol> protos{ObservationProtocol::MeasuredPi, ObservationProtocol::MeasuredPhi,
                                                  ObservationProtocol::Traced};
    auto recs = scan(k, 4, rts, protos, 2);
    ASSERT_EQ(recs.size(), rts.size() * 3);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      EXPECT_EQ(r.rt, rts[i / 3]);
      EXPECT_EQ(r.protocol, protos[i % 3]);
      EXPECT_GE(r.negativity, 0L);
      EXPECT_EQ(r.negativity.is_zero(), r.pt_min >= 1L) << r.rt;
      if (r.protocol != ObservationProtocol::Traced) {
        EXPECT_GT(r.negativity, 0L);
      }
      if (i >= 3) {
        EXPECT_LE(r.negativity, recs[i - 3].negativity) << m << " rt=" << r.rt;
      }
    }
  }
}

TEST(Scan, ThreadCountDoesNotChangeResult) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  std::vector<long> rts{0, 1, 2, 3, 5, 8, 13};
  std::vector<ObservationProtocol> protos{ObservationProtocol::Traced, ObservationProtocol::MeasuredPhi};
  auto a = scan(k, 3, rts, protos, 1);
  auto b = scan(k, 3, rts, protos, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rt, b[i].rt);
    EXPECT_TRUE(a[i].negativity == b[i].negativity);
    EXPECT_TRUE(a[i].pt_min == b[i].pt_min);
  }
}

TEST(Separability, SingleSiteMassive) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  EXPECT_EQ(separability_radius(k, 1), 1);
  EXPECT_GT(scan_point(k, 1, 0, ObservationProtocol::Traced).negativity, 0L);
  for (long rt = 1; rt <= 12; ++rt) EXPECT_TRUE(scan_point(k, 1, rt, ObservationProtocol::Traced).negativity.is_zero());
  EXPECT_THROW(separability_radius(k, 1, ObservationProtocol::MeasuredPhi), ContractError);
  EXPECT_THROW(separability_radius(k, 0), GeometryError);
}

TEST(Separability, TracedCurveTerminates) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  const long d = 4;
  long r = separability_radius(k, d);
  EXPECT_GT(scan_point(k, d, r - 1, ObservationProtocol::Traced).negativity, 0L);
  for (long rt = r; rt <= r + 4 * d; ++rt)
    EXPECT_TRUE(scan_point(k, d, rt, ObservationProtocol::Traced).negativity.is_zero()) << rt;
  EXPECT_GT(scan_point(k, d, r + 4 * d, ObservationProtocol::MeasuredPhi).negativity, 0L);
}

TEST(Wavefunction, ParityMirrorAndNorm) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  for (auto proto : {ObservationProtocol::MeasuredPhi, ObservationProtocol::Traced})
    for (long rt : {0L, 3L, 20L}) {
      PatchPair pair{6, rt, 0};
      auto v = ghgamma_ground_wavefunction(patch_state(k, pair, proto), pair, ctx);
      ASSERT_EQ(v.size(), 12u);
      EXPECT_LE(abs(norm2(v) - 1L), ctx.eig_tol);
      Real sum = ctx.zero();
      for (const auto& x : v) sum += x;
      EXPECT_GE(sum, -ctx.eig_tol);
      // Right patch is the mirror image of the left up to one global sign.
      const long s = (v[0] * v[11]).sign() >= 0 ? 1 : -1;
      for (std::size_t i = 0; i < 6; ++i) EXPECT_LE(abs(v[11 - i] - s * v[i]), ctx.eig_tol) << rt << " " << i;
    }
}

TEST(Wavefunction, SignStructureAcrossGaps) {
  PrecisionContext ctx(256);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  const long d = 16;
  const Real floor = ctx.eig_tol;
  for (long rt : {0L, 5L, 50L, 150L, 300L}) {
    PatchPair pair{d, rt, 0};
    auto v = ghgamma_ground_wavefunction(patch_state(k, pair, ObservationProtocol::MeasuredPhi), pair, ctx);
    EXPECT_EQ(sign_changes(v, 0, 16, floor), 0) << rt;
    EXPECT_EQ(sign_changes(v, 16, 16, floor), 0) << rt;
  }
  PatchPair far{d, 300, 0};
  auto t = ghgamma_ground_wavefunction(patch_state(k, far, ObservationProtocol::Traced), far, ctx);
  EXPECT_GE(sign_changes(t, 0, 16, floor), 4);
  EXPECT_GE(sign_changes(t, 16, 16, floor), 4);
}

TEST(Wavefunction, DegenerateGroundThrows) {
  PrecisionContext ctx(192);
  Real half = ctx.one() / 2L;
  GHPair prod{HPMatrix::identity(2, ctx.bits) * half, HPMatrix::identity(2, ctx.bits) * half};
  EXPECT_THROW(ghgamma_ground_wavefunction(prod, PatchPair{1, 0, 0}, ctx), DegeneracyError);
  EXPECT_THROW(ghgamma_ground_wavefunction(prod, PatchPair{2, 0, 0}, ctx), ContractError);
}

TEST(Envelope, SingleSitePowerLawAndAsymptote) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  std::vector<long> rts;
  for (long r = 100; r <= 400; r += 20) rts.push_back(r);
  auto recs = scan(k, 1, rts, {ObservationProtocol::MeasuredPhi});
  EnvelopeFit f = envelope_fit(recs, 1, EnvelopeModel::Polynomial, {100.0, 400.0});
  EXPECT_EQ(f.n_points, rts.size());
  EXPECT_NEAR(f.parameters[0], -2.0, 0.1);

  // N -> -K_{0,r+1} / (ln 2 K_00) at large separation.
  auto at = [&](long rt) {
    Real n = scan_point(k, 1, rt, ObservationProtocol::MeasuredPhi).negativity;
    Real asym = -k.element(KernelKind::K, rt + 1) / (ln2(ctx.bits) * k.element(KernelKind::K, 0));
    return (n / asym).to_double();
  };
  EXPECT_NEAR(at(200), 1.0, 1e-3);
  EXPECT_LT(std::abs(at(200) - 1.0), std::abs(at(5) - 1.0));
}

TEST(Envelope, TracedPrefersExponentialOverLogarithmic) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(kMasslessMass), ctx);
  const long d = 16;
  std::vector<long> rts;
  for (long r = 16; r <= 128; r += 8) rts.push_back(r);
  auto recs = scan(k, d, rts, {ObservationProtocol::Traced});
  EnvelopeFit e = envelope_fit(recs, d, EnvelopeModel::ExponentialInROverD, {1.0, 8.0});
  EnvelopeFit l = envelope_fit(recs, d, EnvelopeModel::Logarithmic, {1.0, 8.0});
  EXPECT_GT(e.parameters[0], 0.0);
  EXPECT_LT(e.max_rel_residual, l.max_rel_residual);
}

TEST(Envelope, ErrorsOnBadWindows) {
  std::vector<ScanRecord> recs;
  for (long r = 0; r < 6; ++r) {
    ScanRecord s;
    s.rt = r;
    s.negativity = Real(std::exp(-0.5 * static_cast<double>(r)), 128);
    s.pt_min = Real(0.5, 128);
    recs.push_back(s);
  }
  EXPECT_THROW(envelope_fit(recs, 1, EnvelopeModel::ExponentialInROverD, {0.0, 2.0}), ContractError);
  EXPECT_THROW(envelope_fit(recs, 1, EnvelopeModel::Polynomial, {0.0, 5.0}), DomainError);
  auto ok = envelope_fit(recs, 1, EnvelopeModel::ExponentialInROverD, {0.0, 5.0});
  EXPECT_NEAR(ok.parameters[0], 0.5, 1e-12);
  EXPECT_LT(ok.max_rel_residual, 1e-12);
  recs[3].negativity = Real(128);
  EXPECT_THROW(envelope_fit(recs, 1, EnvelopeModel::ExponentialInROverD, {0.0, 5.0}), DomainError);
}

TEST(PrecisionSweep, DriftBookkeeping) {
  auto rows = precision_sweep(0.3, 2, {0, 1, 2}, {ObservationProtocol::MeasuredPhi}, {128, 192});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    ASSERT_EQ(r.values.size(), 2u);
    ASSERT_EQ(r.drift.size(), 1u);
    EXPECT_LT(r.drift[0], 1e-30);
    ASSERT_TRUE(r.stable_bits.has_value());
    EXPECT_EQ(*r.stable_bits, 128);
  }
  EXPECT_THROW(precision_sweep(0.3, 2, {0}, {ObservationProtocol::Traced}, {192, 128}), ContractError);
  EXPECT_THROW(precision_sweep(0.3, 2, {0}, {ObservationProtocol::Traced}, {}), ContractError);
}

TEST(TwoBodyRow, SingleSiteMeasuredAndTraced) {
  PrecisionContext ctx(192);
  CorrelationKernel k(LatticeSpec::infinite(0.3), ctx);
  TwoBodyRow r0 = two_body_row(k, 1, 0);
  EXPECT_LE(abs(r0.sw_m_phi - r0.neg_m_phi), ctx.eig_tol);
  EXPECT_LE(abs(r0.sn_traced - r0.neg_traced), ctx.eig_tol);
  TwoBodyRow r3 = two_body_row(k, 1, 3);
  EXPECT_TRUE(r3.neg_traced.is_zero());
  EXPECT_TRUE(r3.sn_traced.is_zero());
  EXPECT_GT(r3.neg_m_phi, 0L);
}
