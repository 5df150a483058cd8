#include "vacent/scans.hpp"

#include "vacent/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>

namespace vacent {

void ScanGrid::validate() const {
  if (d < 1) throw GeometryError("scan: patch size must be at least 1");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("scan: mass must be positive and finite");
  if (protocols.empty()) throw ContractError("scan: no protocols");
  for (std::size_t i = 0; i < rts.size(); ++i) {
    if (rts[i] < 0) throw GeometryError("scan: negative gap");
    if (i > 0 && rts[i] <= rts[i - 1]) throw ContractError("scan: gaps must be strictly increasing");
  }
}

ScanRecord scan_point(const CorrelationKernel& kernel, long d, long rt, ObservationProtocol protocol) {
  auto t0 = std::chrono::steady_clock::now();
  PatchPair pair{d, rt, 0};
  pair.validate(kernel.spec());
  PTSpectrum spec;
  try {
    GHPair gh = patch_state(kernel, pair, protocol);
    spec = pt_symplectic_spectrum(gh, pair.b_modes(), kernel.ctx());
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(std::string(e.what()) + " at rt=" + std::to_string(rt), e.gap());
  } catch (const PrecisionError& e) {
    throw PrecisionError(std::string(e.what()) + " at rt=" + std::to_string(rt));
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(std::string(e.what()) + " at rt=" + std::to_string(rt));
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at rt=" + std::to_string(rt));
  }
  ScanRecord rec;
  rec.rt = rt;
  rec.protocol = protocol;
  rec.negativity = log_negativity(spec);
  rec.pt_min = spec.min();
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<ScanRecord> negativity_scan(const ScanGrid& grid, const CorrelationKernel& kernel, unsigned threads) {
  grid.validate();
  if (grid.rts.empty()) return {};
  // Fill the kernel cache once so workers only read it.
  kernel.warm(2 * grid.d + grid.rts.back());

  const std::size_t np = grid.protocols.size();
  const std::size_t total = grid.rts.size() * np;
  std::vector<ScanRecord> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        out[i] = scan_point(kernel, grid.d, grid.rts[i / np], grid.protocols[i % np]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

long separability_radius(const CorrelationKernel& kernel, long d, ObservationProtocol protocol) {
  if (protocol != ObservationProtocol::Traced)
    throw ContractError("separability radius is defined for the traced protocol only");
  if (d < 1) throw GeometryError("separability radius: patch size must be at least 1");

  constexpr long kMaxGap = 1L << 20;
  std::map<long, bool> cache;
  auto separable = [&](long rt) {
    auto it = cache.find(rt);
    if (it != cache.end()) return it->second;
    if (rt > kMaxGap) throw NumericError("separability radius: no separable gap below 2^20");
    bool s = scan_point(kernel, d, rt, protocol).pt_min >= 1L;
    cache.emplace(rt, s);
    return s;
  };

  long entangled = -1;  // largest gap known to be entangled
  for (;;) {
    long hi = entangled + 1;
    long step = 1;
    while (!separable(hi)) {
      entangled = hi;
      hi = entangled + step;
      step *= 2;
    }
    // smallest separable gap in (entangled, hi]
    long lo = entangled;
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      if (separable(mid))
        hi = mid;
      else
        lo = mid;
    }
    long bad = -1;
    for (long r = hi + 1; r <= hi + 2 * d; ++r) {
      if (!separable(r)) bad = r;
    }
    if (bad < 0) return hi;
    entangled = bad;
  }
}

std::vector<Real> ghgamma_ground_wavefunction(const GHPair& gh, const PatchPair& pair, const PrecisionContext& ctx) {
  if (gh.n_modes() != static_cast<std::size_t>(2 * pair.d))
    throw ContractError("ground wavefunction: state size does not match the patch pair");
  PTEigensystem es = pt_eigensystem(gh, pair.b_modes(), ctx);
  const auto& vals = es.eig.values;
  if (vals.size() > 1) {
    Real gap = (vals[1] - vals[0]) / abs(vals[1]);
    if (gap <= ctx.eig_tol) throw DegeneracyError("ground value of G H^Gamma is degenerate", gap.to_double());
  }
  std::vector<Real> v = es.eig.right_vectors.column(0);
  Real nrm = norm2(v);
  Real l1 = ctx.zero();
  Real sum = ctx.zero();
  Real vmax = ctx.zero();
  for (auto& x : v) {
    x /= nrm;
    sum += x;
    l1 += abs(x);
    vmax = max(vmax, abs(x));
  }
  bool flip;
  if (abs(sum) > ctx.eig_tol * l1) {
    flip = sum.sign() < 0;
  } else {
    // Mirror entries of a parity-odd vector tie in magnitude; the first wins.
    Real cut = vmax * (ctx.one() - ctx.eig_tol);
    std::size_t k = 0;
    while (abs(v[k]) < cut) ++k;
    flip = v[k].sign() < 0;
  }
  if (flip)
    for (auto& x : v) x.negate();
  return v;
}

TwoBodyRow two_body_row(const CorrelationKernel& kernel, long d, long rt) {
  const PrecisionContext& ctx = kernel.ctx();
  PatchPair pair{d, rt, 0};
  pair.validate(kernel.spec());
  GHPair m = patch_state(kernel, pair, ObservationProtocol::MeasuredPhi);
  GHPair t = patch_state(kernel, pair, ObservationProtocol::Traced);
  TwoBodyRow row;
  row.rt = rt;
  row.neg_m_phi = log_negativity(pt_symplectic_spectrum(m, pair.b_modes(), ctx));
  row.neg_traced = log_negativity(pt_symplectic_spectrum(t, pair.b_modes(), ctx));
  LocalTransform sw = local_williamson(m, pair, ctx);
  row.sw_m_phi = two_body_negativity_sum(m, sw.S, sw.pairs, ctx).total;
  row.sw_traced = two_body_negativity_sum(t, sw.S, sw.pairs, ctx).total;
  if (row.neg_traced.is_zero()) {
    row.sn_traced = ctx.zero();
    row.max_symplectic_residual = sw.S.symplectic_residual();
  } else {
    LocalTransform sn = negativity_basis(t, pair, ctx);
    row.sn_traced = two_body_negativity_sum(t, sn.S, sn.pairs, ctx).total;
    row.max_symplectic_residual = max(sw.S.symplectic_residual(), sn.S.symplectic_residual());
  }
  return row;
}

Real d1_measured_negativity(const CorrelationKernel& kernel, long rt, MeasurementBasis basis) {
  if (rt < 0) throw GeometryError("closed form: negative gap");
  KernelKind kind = basis == MeasurementBasis::Phi ? KernelKind::K : KernelKind::Kinv;
  Real k0 = kernel.element(kind, 0);
  Real kr = kernel.element(kind, rt + 1);
  Real num = basis == MeasurementBasis::Phi ? k0 + kr : k0 - kr;
  Real den = sqrt(k0 * k0 - kr * kr);
  return -log2(num / den);
}

std::vector<PrecisionSweepRow> precision_sweep(double mass, long d, const std::vector<long>& rts,
                                               const std::vector<ObservationProtocol>& protocols,
                                               const std::vector<long>& bits, double max_drift, unsigned threads) {
  if (bits.empty()) throw ContractError("precision sweep: no precisions");
  for (std::size_t i = 1; i < bits.size(); ++i)
    if (bits[i] <= bits[i - 1]) throw ContractError("precision sweep: precisions must be increasing");
  ScanGrid grid{d, mass, protocols, rts};
  grid.validate();

  std::vector<PrecisionSweepRow> rows(rts.size() * protocols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rt = rts[i / protocols.size()];
    rows[i].protocol = protocols[i % protocols.size()];
    rows[i].bits = bits;
  }
  for (long b : bits) {
    CorrelationKernel kernel(LatticeSpec::infinite(mass), PrecisionContext(b));
    auto recs = negativity_scan(grid, kernel, threads);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].values.push_back(recs[i].negativity);
  }
  for (auto& row : rows) {
    for (std::size_t j = 1; j < row.values.size(); ++j) {
      const Real& a = row.values[j - 1];
      const Real& b = row.values[j];
      double dr;
      if (b.is_zero())
        dr = a.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
      else
        dr = (abs(b - a) / abs(b)).to_double();
      row.drift.push_back(dr);
    }
    std::size_t k = row.drift.size();
    while (k > 0 && row.drift[k - 1] < max_drift) --k;
    if (k < row.drift.size()) row.stable_bits = row.bits[k];
  }
  return rows;
}

EnvelopeFit envelope_fit(const std::vector<ScanRecord>& records, long d, EnvelopeModel model, FitWindow window) {
  if (d < 1) throw GeometryError("envelope fit: patch size must be at least 1");
  std::vector<double> xs, ys, ns;
  for (const auto& rec : records) {
    double x = static_cast<double>(rec.rt) / static_cast<double>(d);
    if (x < window.lo || x > window.hi) continue;
    double n = rec.negativity.to_double();
    double r = static_cast<double>(rec.rt);
    if (model != EnvelopeModel::Logarithmic && !(n > 0.0))
      throw DomainError("envelope fit: nonpositive negativity inside the window");
    if (model != EnvelopeModel::ExponentialInROverD && !(r > 0.0))
      throw DomainError("envelope fit: gap 0 inside a log-r window");
    switch (model) {
      case EnvelopeModel::ExponentialInROverD:
        xs.push_back(x);
        ys.push_back(std::log(n));
        break;
      case EnvelopeModel::Polynomial:
        xs.push_back(std::log(r));
        ys.push_back(std::log(n));
        break;
      case EnvelopeModel::Logarithmic:
        xs.push_back(std::log(r));
        ys.push_back(n);
        break;
    }
    ns.push_back(n);
  }
  if (xs.size() < 4) throw ContractError("envelope fit: fewer than 4 points in the window");

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ContractError("envelope fit: window holds a single abscissa");
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;

  EnvelopeFit fit;
  fit.model = model;
  fit.window = window;
  fit.n_points = xs.size();
  fit.parameters = model == EnvelopeModel::ExponentialInROverD ? std::vector<double>{-slope, icpt}
                                                               : std::vector<double>{slope, icpt};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = icpt + slope * xs[i];
    if (model != EnvelopeModel::Logarithmic) pred = std::exp(pred);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(pred - ns[i]) / std::abs(ns[i]));
  }
  return fit;
}

}  // namespace vacent
