#include "vacent/lattice.hpp"
#include "vacent/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vacent {

LatticeSpec LatticeSpec::infinite(double mass) {
  LatticeSpec s;
  s.mass = mass;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::finite(long n, double mass) {
  LatticeSpec s;
  s.mass = mass;
  s.finite_n = n;
  s.validate();
  return s;
}

void LatticeSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive and finite");
  if (finite_n && *finite_n < 2) throw GeometryError("finite lattice needs N >= 2 sites");
}

CorrelationKernel::CorrelationKernel(LatticeSpec spec, PrecisionContext ctx, KernelMethod method)
    : spec_(spec), ctx_(std::move(ctx)), method_(method), mass_(decimal_real(spec.mass, ctx_.bits)) {
  spec_.validate();
  if (spec_.finite_n) {
    const long n = *spec_.finite_n;
    const Real pi_over_n = pi(ctx_.bits) / n;
    Real m2 = mass_ * mass_;
    for (long k = 0; k < n; ++k) {
      Real s = sin(pi_over_n * k);
      Real w = m2 + 4L * (s * s);
      omega_.push_back(sqrt(w));
    }
  }
}

Real CorrelationKernel::element(KernelKind kind, long r) const {
  if (r < 0) r = -r;
  if (spec_.finite_n) {
    const long n = *spec_.finite_n;
    r %= n;
    if (r > n - r) r = n - r;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (spec_.finite_n || method_ == KernelMethod::Quadrature) {
    auto key = std::make_pair(kind == KernelKind::K ? 0 : 1, r);
    auto it = misc_cache_.find(key);
    if (it != misc_cache_.end()) return it->second;
    Real v = spec_.finite_n ? finite_sum(kind, r) : quadrature(kind, r);
    misc_cache_.emplace(key, v);
    return v;
  }
  if (static_cast<long>(k_cache_.size()) <= r) {
    long want = std::max<long>(r, 2 * static_cast<long>(k_cache_.size()));
    fill_recurrence(std::max<long>(want, 64));
  }
  return kind == KernelKind::K ? k_cache_[static_cast<std::size_t>(r)]
                               : kinv_cache_[static_cast<std::size_t>(r)];
}

void CorrelationKernel::warm(long r_max) const {
  if (r_max < 0) r_max = -r_max;
  if (spec_.finite_n) {
    r_max = std::min(r_max, *spec_.finite_n / 2);
    for (long r = 0; r <= r_max; ++r) {
      element(KernelKind::K, r);
      element(KernelKind::Kinv, r);
    }
    return;
  }
  if (method_ == KernelMethod::Quadrature) {
    for (long r = 0; r <= r_max; ++r) {
      element(KernelKind::K, r);
      element(KernelKind::Kinv, r);
    }
    return;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (static_cast<long>(k_cache_.size()) <= r_max) fill_recurrence(r_max);
}

Real CorrelationKernel::finite_sum(KernelKind kind, long r) const {
  const long n = *spec_.finite_n;
  const long bits = ctx_.bits;
  const Real two_pi_over_n = 2L * pi(bits) / n;
  Real acc(bits);
  for (long k = 0; k < n; ++k) {
    // cos(2 pi k r / N) with k r reduced mod N to keep the argument small
    long kr = (k * r) % n;
    Real c = cos(two_pi_over_n * kr);
    if (kind == KernelKind::K) {
      acc.add_mul(c, omega_[static_cast<std::size_t>(k)]);
    } else {
      acc += c / omega_[static_cast<std::size_t>(k)];
    }
  }
  return acc / n;
}

// With a = m^2 + 2, write g_r = (K^-1)_r and f_r = K_r. The moments of the
// dispersion obey
//   g_1 = (a g_0 - f_0) / 2,
//   (2r+1) g_{r+1} = 2 r a g_r - (2r-1) g_{r-1},
//   f_r = (g_{r+1} - g_{r-1}) / (2r)            (r >= 1),
// and the r = 0 elements are complete elliptic integrals, evaluated by the
// arithmetic-geometric mean of sqrt(m^2+4) and m. The forward recurrence
// amplifies rounding by about e^{2 m r}, so it runs with matching guard bits.
void CorrelationKernel::fill_recurrence(long r_max) const {
  const long out_bits = ctx_.bits;
  const double growth = 2.0 * spec_.mass * static_cast<double>(r_max + 1) / std::numbers::ln2;
  const long guard = static_cast<long>(std::ceil(growth)) +
                     2 * static_cast<long>(std::ceil(std::log2(static_cast<double>(r_max) + 2.0))) + 64;
  const long bits = out_bits + guard;

  const Real m = decimal_real(spec_.mass, bits);
  const Real m2 = m * m;
  const Real a = m2 + 2L;

  // AGM with the running sum of 2^{n-1} c_n^2 for the second-kind integral.
  Real an = sqrt(m2 + 4L);
  Real bn = m;
  Real csum(2L, bits);  // 2^{-1} c_0^2 with c_0^2 = a_0^2 - b_0^2 = 4
  const Real a0sq = m2 + 4L;
  const Real stop = pow2(-bits - 4, bits);
  Real pw(1L, bits);  // 2^{n-1} for n = 1
  bool done = false;
  for (int it = 0; it < 4096 && !done; ++it) {
    Real cn = (an - bn) / 2L;
    Real next_a = (an + bn) / 2L;
    Real next_b = sqrt(an * bn);
    Real term = pw * (cn * cn);
    csum += term;
    pw *= 2L;
    an = std::move(next_a);
    bn = std::move(next_b);
    // c_n shrinks quadratically; stop once its weighted square is negligible.
    done = term <= stop * csum;
  }
  if (!done) throw NumericError("AGM iteration did not converge");
  const Real& agm = an;
  Real g0 = 1L / agm;
  Real f0 = (a0sq - csum) / agm;

  std::vector<Real> g;
  g.reserve(static_cast<std::size_t>(r_max + 2));
  g.push_back(g0);
  g.push_back((a * g0 - f0) / 2L);
  for (long r = 1; r <= r_max; ++r) {
    Real next = 2L * r * (a * g[static_cast<std::size_t>(r)]);
    next.sub_mul(Real(2L * r - 1L, bits), g[static_cast<std::size_t>(r - 1)]);
    next /= (2L * r + 1L);
    g.push_back(std::move(next));
  }

  k_cache_.clear();
  kinv_cache_.clear();
  k_cache_.push_back(f0.with_bits(out_bits));
  kinv_cache_.push_back(g0.with_bits(out_bits));
  for (long r = 1; r <= r_max; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    Real f = (g[ur + 1] - g[ur - 1]) / (2L * r);
    k_cache_.push_back(f.with_bits(out_bits));
    kinv_cache_.push_back(g[ur].with_bits(out_bits));
  }
}

namespace {

// Integrand cos(k r) (m^2 + 4 sin^2(k/2))^{+-1/2}.
Real bz_integrand(const Real& k, long r, const Real& m2, KernelKind kind) {
  Real s = sin(k / 2L);
  Real w = sqrt(m2 + 4L * (s * s));
  Real c = r == 0 ? Real(1L, k.bits()) : cos(k * r);
  return kind == KernelKind::K ? c * w : c / w;
}

// Double-exponential rule on [lo, hi] with level doubling.
Real tanh_sinh(const Real& lo, const Real& hi, long r, const Real& m2, KernelKind kind, const Real& tol,
               long bits, int max_level, Real* achieved) {
  const Real half_pi = pi(bits) / 2L;
  const Real center = (lo + hi) / 2L;
  const Real half = (hi - lo) / 2L;
  // Truncate where the node-to-endpoint distance e^{-pi sinh t} drops below 2^-bits.
  const double tmax = std::asinh(static_cast<double>(bits) * std::numbers::ln2 / std::numbers::pi) + 0.25;

  Real total(bits), prev(bits);
  Real h(1L, bits);
  bool have_prev = false;
  for (int level = 0; level <= max_level; ++level) {
    Real sum(bits);
    const long steps = static_cast<long>(std::ceil(tmax / h.to_double()));
    for (long j = -steps; j <= steps; ++j) {
      if (level > 0 && j % 2 == 0) continue;  // reuse previous level's nodes
      Real t = h * j;
      Real e = exp(t);
      Real sh = (e - 1L / e) / 2L;
      Real ch = (e + 1L / e) / 2L;
      Real u = half_pi * sh;
      Real eu = exp(u);
      Real chu = (eu + 1L / eu) / 2L;
      Real th = (eu - 1L / eu) / (eu + 1L / eu);
      Real w = half_pi * ch / (chu * chu);
      Real x = center + half * th;
      if (x <= lo || x >= hi) continue;
      sum.add_mul(w, bz_integrand(x, r, m2, kind));
    }
    if (level == 0) {
      total = sum * h;
    } else {
      total = total / 2L + sum * h;
    }
    Real est = total * half;
    if (have_prev) {
      Real diff = abs(est - prev);
      if (diff <= tol * max(abs(est), Real(1L, bits))) {
        if (achieved) *achieved = diff;
        return est;
      }
      if (achieved) *achieved = diff;
    }
    prev = est;
    have_prev = true;
    h /= 2L;
  }
  throw NumericError("tanh-sinh quadrature did not reach tolerance; last change " +
                     (achieved ? achieved->to_string(4) : std::string("?")));
}

}  // namespace

Real CorrelationKernel::quadrature(KernelKind kind, long r) const {
  const long bits = ctx_.bits + 32;
  const Real m = decimal_real(spec_.mass, bits);
  const Real m2 = m * m;
  const Real tol = ctx_.quad_tol.with_bits(bits);
  const Real pi_b = pi(bits);

  if (spec_.mass >= 0.05) {
    // Periodic trapezoid on [0, 2 pi); geometric convergence for m > 0.
    long n = 64;
    Real prev(bits);
    bool have_prev = false;
    for (int level = 0; level < 20; ++level, n *= 2) {
      Real sum(bits);
      const Real step = 2L * pi_b / n;
      for (long j = 0; j < n; ++j) sum += bz_integrand(step * j, r, m2, kind);
      Real est = sum / n;
      if (have_prev && abs(est - prev) <= tol * max(abs(est), Real(1L, bits))) return est.with_bits(ctx_.bits);
      prev = std::move(est);
      have_prev = true;
    }
    throw NumericError("trapezoid quadrature did not converge for r=" + std::to_string(r));
  }

  // Near-massless: the integrand has a peak of width m at k = 0, so split
  // [0, pi] at m, 10 m, 100 m, ... and integrate each piece separately.
  std::vector<Real> cuts;
  cuts.push_back(Real(bits));
  Real c = m;
  while (c < Real(0.5, bits)) {
    cuts.push_back(c);
    c *= 10L;
  }
  cuts.push_back(pi_b);
  Real total(bits), achieved(bits);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += tanh_sinh(cuts[i], cuts[i + 1], r, m2, kind, tol, bits, 14, &achieved);
  }
  return (total / pi_b).with_bits(ctx_.bits);
}

Real kernel_element(const CorrelationKernel& kernel, KernelKind kind, long r) { return kernel.element(kind, r); }

HPMatrix assemble_K_block(const CorrelationKernel& kernel, const std::vector<long>& rows,
                          const std::vector<long>& cols, KernelKind kind) {
  HPMatrix out(rows.size(), cols.size(), kernel.ctx().bits);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = kernel.element(kind, rows[a] - cols[b]);
  return out;
}

std::vector<long> all_sites(const LatticeSpec& spec) {
  if (!spec.finite_n) throw UnsupportedOperation("infinite lattice has no finite site list");
  std::vector<long> s(static_cast<std::size_t>(*spec.finite_n));
  for (long i = 0; i < *spec.finite_n; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

VacuumGH vacuum_GH(const CorrelationKernel& kernel, const std::vector<long>& sites) {
  if (kernel.spec().is_infinite()) {
    throw UnsupportedOperation("vacuum_GH: full-lattice covariance is undefined at infinite volume");
  }
  const Real half = Real(1L, kernel.ctx().bits) / 2L;
  VacuumGH out{assemble_K_block(kernel, sites, sites, KernelKind::Kinv) * half,
               assemble_K_block(kernel, sites, sites, KernelKind::K) * half};
  out.G.symmetrize();
  out.H.symmetrize();
  return out;
}

double k_envelope_massive(double mass, double r) {
  return -std::sqrt(mass / (2.0 * std::numbers::pi * r * r * r)) * std::exp(-mass * r);
}

double k_envelope_massless(double r) { return 4.0 / (std::numbers::pi - 4.0 * std::numbers::pi * r * r); }

double kinv_envelope_massless(double mass, double r) {
  return -(std::log(mass * r) + std::numbers::egamma - std::numbers::ln2) / std::numbers::pi;
}

}  // namespace vacent
