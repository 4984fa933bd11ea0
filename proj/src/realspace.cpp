#include "rabi/realspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rabi/hermite.hpp"

namespace rabi {

Grid Grid::symmetric(double half_width, double step) {
  if (!(half_width > 0.0) || !(step > 0.0))
    throw std::invalid_argument("grid half-width and step must be positive");
  Grid g;
  const auto half = static_cast<long>(std::llround(half_width / step));
  g.dx = step;
  g.L = static_cast<double>(half) * step;
  g.x.resize(2 * half + 1);
  for (long k = -half; k <= half; ++k) g.x[k + half] = static_cast<double>(k) * step;
  return g;
}

double integrate(const std::vector<double>& f, double dx) {
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double v : f) s += v;
  s -= 0.5 * (f.front() + f.back());
  return s * dx;
}

double default_half_window(const ModelParams& params) {
  return std::abs(derive_couplings(params).gp_z) + 8.0;
}

std::vector<double> plus_component_coeffs(const SpectralResult& result) {
  const int N = result.cutoff_used;
  std::vector<double> c(N + 1);
  for (int n = 0; n <= N; ++n) c[n] = std::sqrt(2.0) * result.coeffs(basis_index(n, +1, N));
  return c;
}

namespace {

std::vector<double> minus_component_coeffs(const SpectralResult& result) {
  const int N = result.cutoff_used;
  std::vector<double> c(N + 1);
  for (int n = 0; n <= N; ++n) c[n] = std::sqrt(2.0) * result.coeffs(basis_index(n, -1, N));
  return c;
}

}  // namespace

WaveProfile wavefunction(const SpectralResult& result, double L, double dx) {
  if (result.coeffs.size() != 2 * (result.cutoff_used + 1))
    throw std::invalid_argument("coefficient vector does not match cutoff");
  WaveProfile prof;
  prof.grid = Grid::symmetric(L, dx);
  prof.parity = result.parity;
  const auto cp = plus_component_coeffs(result);
  const auto cm = minus_component_coeffs(result);
  const std::size_t n = prof.grid.size();
  prof.psi_plus.resize(n);
  prof.psi_minus.resize(n);
  prof.dpsi_plus.resize(n);
  prof.dpsi_minus.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto vp = hermite_series_with_derivative(cp, prof.grid.x[k]);
    const auto vm = hermite_series_with_derivative(cm, prof.grid.x[k]);
    prof.psi_plus[k] = vp.value;
    prof.dpsi_plus[k] = vp.derivative;
    prof.psi_minus[k] = vm.value;
    prof.dpsi_minus[k] = vm.derivative;
  }
  const auto nodes = count_nodes(prof);
  prof.n_Z = nodes.n_Z;
  prof.nodes = nodes.positions;
  return prof;
}

WaveProfile wavefunction(const SpectralResult& result, const ModelParams& params, double L,
                         double dx) {
  const double need = default_half_window(params);
  if (L < need - 1e-12)
    throw std::invalid_argument("half-window must be at least |g'_z| + 8 = " +
                                std::to_string(need));
  return wavefunction(result, L, dx);
}

WaveProfile wavefunction(const SpectralResult& result, const ModelParams& params) {
  return wavefunction(result, params, default_half_window(params), kDefaultGridStep);
}

int topological_node_count(const ModelParams& params, const WaveProfile& profile,
                           const ConvergenceOptions& opts) {
  if (params.lambda >= 0.0) return profile.n_Z;
  const ModelParams dual = dual_params(params);
  return wavefunction(converge_cutoff(dual, opts), dual).n_Z;
}

NodeCount count_nodes(const std::vector<double>& x, const std::vector<double>& samples,
                      double tau_rel) {
  if (x.size() != samples.size()) throw std::invalid_argument("grid/sample size mismatch");
  NodeCount out;
  if (samples.empty()) return out;
  double amax = 0.0;
  for (double v : samples) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) return out;
  const double thr = tau_rel * amax;

  // Split into runs of constant sign; zeros extend the current run.
  struct Lobe {
    int sign;
    std::size_t first;
    double peak;
  };
  std::vector<Lobe> lobes;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double v = samples[k];
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (lobes.empty() || lobes.back().sign != s) lobes.push_back({s, k, 0.0});
    lobes.back().peak = std::max(lobes.back().peak, std::abs(v));
  }

  // Sub-threshold lobes are tail noise; count sign changes among the rest.
  const Lobe* prev = nullptr;
  for (const auto& lobe : lobes) {
    if (lobe.peak <= thr) continue;
    if (prev && prev->sign != lobe.sign) {
      ++out.n_Z;
      // Crossing just before the first sample of this lobe.
      std::size_t k = lobe.first;
      std::size_t j = k;
      while (j > 0 && samples[j - 1] == 0.0) --j;
      if (j == 0) {
        out.positions.push_back(x[k]);
      } else {
        const double a = samples[j - 1];
        const double b = samples[k];
        const double t = a / (a - b);
        out.positions.push_back(x[j - 1] + t * (x[k] - x[j - 1]));
      }
    }
    prev = &lobe;
  }
  return out;
}

NodeCount count_nodes(const WaveProfile& profile, double tau_rel) {
  return count_nodes(profile.grid.x, profile.psi_plus, tau_rel);
}

QuadratureObservables observables(const SpectralResult& result, const ModelParams& params) {
  const int N = result.cutoff_used;
  const auto& c = result.coeffs;
  if (c.size() != 2 * (N + 1)) throw std::invalid_argument("coefficient vector does not match cutoff");

  // (a + a^dag) psi and (a^dag - a) psi on n = 0..N+1 so no matrix element is
  // lost to truncation.
  double x2 = 0.0, p2 = 0.0, sxz = 0.0;
  for (int spin : {+1, -1}) {
    auto cn = [&](int n) { return (n >= 0 && n <= N) ? c(basis_index(n, spin, N)) : 0.0; };
    for (int m = 0; m <= N + 1; ++m) {
      // <m|a|n> = sqrt(n) delta_{m,n-1};  <m|a^dag|n> = sqrt(n+1) delta_{m,n+1}
      const double lower = std::sqrt(static_cast<double>(m + 1)) * cn(m + 1);  // a psi
      const double raise = std::sqrt(static_cast<double>(m)) * cn(m - 1);      // a^dag psi
      const double xs = lower + raise;
      const double ps = raise - lower;
      x2 += xs * xs;
      p2 += ps * ps;
      sxz += spin * cn(m) * xs;
    }
  }
  QuadratureObservables o;
  o.x2 = x2 / 2.0;
  o.p2 = p2 / 2.0;
  o.sigma_z_x = sxz / std::sqrt(2.0);
  // <p> = i <psi|(a^dag - a)|psi>/sqrt(2). The bracket is a real antisymmetric
  // form and vanishes for real states; whatever survives is rounding.
  double anti = 0.0;
  for (int spin : {+1, -1}) {
    auto cn = [&](int n) { return (n >= 0 && n <= N) ? c(basis_index(n, spin, N)) : 0.0; };
    for (int m = 0; m <= N; ++m) {
      const double lower = std::sqrt(static_cast<double>(m + 1)) * cn(m + 1);
      const double raise = std::sqrt(static_cast<double>(m)) * cn(m - 1);
      anti += cn(m) * (raise - lower);
    }
  }
  o.p1 = anti / std::sqrt(2.0);
  o.delta_p = o.p2 - o.p1 * o.p1;
  o.adagger2 = (o.x2 - o.p2) / 2.0;
  const double a0 = (1.0 + std::abs(params.lambda)) * params.g / (2.0 * params.omega);
  o.A0 = a0 * a0;
  o.A = o.A0 > 0.0 ? o.adagger2 / o.A0 : 0.0;
  return o;
}

EnergyDecomposition energy_decomposition(const SpectralResult& result,
                                         const ModelParams& params,
                                         const WaveProfile& profile) {
  const auto d = derive_couplings(params);
  const auto& x = profile.grid.x;
  const double dx = profile.grid.dx;
  const std::size_t n = x.size();
  if (profile.psi_plus.size() != n || profile.dpsi_minus.size() != n)
    throw std::invalid_argument("profile arrays do not match the grid");

  std::vector<double> kin(n), pot(n), tun(n), ani(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pp = profile.psi_plus[k];
    const double pm = profile.psi_minus[k];
    const double mirror = profile.psi_plus[n - 1 - k];  // psi_+(-x)
    kin[k] = 0.5 * (profile.dpsi_plus[k] * profile.dpsi_plus[k] +
                    profile.dpsi_minus[k] * profile.dpsi_minus[k]);
    const double vp = 0.5 * params.omega * (x[k] + d.gp_z) * (x[k] + d.gp_z);
    const double vm = 0.5 * params.omega * (x[k] - d.gp_z) * (x[k] - d.gp_z);
    const double eps0 = -0.5 * (d.gp_z * d.gp_z + 1.0) * params.omega;
    pot[k] = 0.5 * (vp * pp * pp + vm * pm * pm) + eps0 * 0.5 * (pp * pp + pm * pm);
    tun[k] = pp * mirror;
    ani[k] = pp * profile.dpsi_minus[k];
  }
  EnergyDecomposition e;
  e.kinetic = 0.5 * params.omega * integrate(kin, dx);
  e.potential = integrate(pot, dx);
  const double P = static_cast<double>(to_int(profile.parity));
  const double overlap = integrate(tun, dx);
  if (profile.parity == Parity::crossing) {
    // No definite parity: fall back to the direct spin-flip overlap.
    std::vector<double> flip(n);
    for (std::size_t k = 0; k < n; ++k) flip[k] = profile.psi_plus[k] * profile.psi_minus[k];
    e.tunneling = 0.5 * params.Omega * integrate(flip, dx);
  } else {
    e.tunneling = P * 0.5 * params.Omega * overlap;
  }
  e.anisotropic = -std::sqrt(2.0) * d.g_y * integrate(ani, dx);
  e.completeness_error = std::abs(e.total() - result.E0);
  if (e.completeness_error > 1e-6)
    throw NumericalError("energy decomposition misses E0 by " +
                         std::to_string(e.completeness_error) + " (grid too coarse or narrow)");
  return e;
}

}  // namespace rabi
