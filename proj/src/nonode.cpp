#include "rabi/nonode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "rabi/hermite.hpp"
#include "rabi/model.hpp"
#include "rabi/realspace.hpp"

namespace rabi {

double delta_rho(std::span<const double> coeffs) {
  double total = 0.0, alternating = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const double w = coeffs[n] * coeffs[n];
    total += w;
    alternating += (n % 2 == 0) ? w : -w;
  }
  return std::abs(total) - std::abs(alternating);
}

namespace {

void require_symmetric(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("grid too short");
  const double dx = x[1] - x[0];
  for (std::size_t i = 0; i < n / 2; ++i)
    if (std::abs(x[i] + x[n - 1 - i]) > 1e-9 * dx)
      throw std::invalid_argument("tunneling integrals need a grid symmetric about the origin");
}

double mirror_overlap(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = f[i] * f[n - 1 - i];
  return integrate(prod, dx);
}

}  // namespace

double tunneling_energy(const std::vector<double>& x, const std::vector<double>& f, double Omega,
                        TunnelingConvention conv) {
  if (x.size() != f.size()) throw std::invalid_argument("size mismatch");
  require_symmetric(x);
  const double c = conv == TunnelingConvention::full ? 1.0 : 0.5;
  return -c * Omega * std::abs(mirror_overlap(f, x[1] - x[0]));
}

DeformationResult deform_round_off(const std::vector<double>& x, const std::vector<double>& psi,
                                   double x0, double epsilon, double Omega) {
  const std::size_t n = x.size();
  if (psi.size() != n) throw std::invalid_argument("size mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  require_symmetric(x);
  const double dx = x[1] - x[0];
  if (x0 <= x[2] || x0 >= x[n - 3]) throw std::invalid_argument("node too close to the grid edge");

  const double norm = std::sqrt(integrate([&] {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = psi[i] * psi[i];
    return sq;
  }(), dx));
  if (!(norm > 0.0)) throw std::invalid_argument("zero wavefunction");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = psi[i] / norm;

  const auto i0 = static_cast<std::size_t>(std::lround((x0 - x[0]) / dx));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = i0 - 2; i <= i0 + 2; ++i) {
    mx += x[i];
    my += u[i];
  }
  mx /= 5.0;
  my /= 5.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = i0 - 2; i <= i0 + 2; ++i) {
    sxy += (x[i] - mx) * (u[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  const double k = std::abs(slope);

  // The cut interval (plus one sample on each side) must see a single
  // monotone crossing.
  const double reach = epsilon + dx * (1.0 + 1e-9);
  std::size_t lo = i0, hi = i0;
  while (lo > 0 && x[lo - 1] >= x0 - reach) --lo;
  while (hi + 1 < n && x[hi + 1] <= x0 + reach) ++hi;
  if (lo == 0 || hi == n - 1) throw std::invalid_argument("epsilon too large: cut leaves the grid");
  int changes = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    if ((u[i + 1] - u[i]) * slope <= 0.0)
      throw std::invalid_argument("epsilon too large: cut interval reaches an extremum");
    if ((u[i] < 0.0) != (u[i + 1] < 0.0)) ++changes;
  }
  if (changes > 1) throw std::invalid_argument("epsilon too large: cut interval reaches another node");

  DeformationResult r;
  r.epsilon = epsilon;
  r.x0 = x0;
  r.k = k;
  r.N_renorm = 1.0 / std::sqrt(1.0 + 4.0 * k * k * epsilon * epsilon * epsilon / 3.0);
  r.phi.resize(n);
  const double tol = 1e-9 * dx;
  for (std::size_t i = 0; i < n; ++i)
    r.phi[i] = std::abs(x[i] - x0) <= epsilon + tol ? k * epsilon : std::abs(u[i]);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = r.phi[i] * r.phi[i];
  r.N_grid = 1.0 / std::sqrt(integrate(sq, dx));
  for (double& v : r.phi) v *= r.N_grid;

  r.E_psi = tunneling_energy(x, u, Omega);
  r.E_phi = tunneling_energy(x, r.phi, Omega);
  r.diff = r.E_phi - r.E_psi;
  return r;
}

double NodalState::value(double x) const { return hermite_series(coeffs, x); }

double NodalState::derivative(double x) const { return hermite_series_derivative(coeffs, x); }

namespace {

void normalize(std::vector<double>& c) {
  const double s = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
  for (double& v : c) v /= s;
}

}  // namespace

NodalState shifted_two_level_state(int nmax) {
  if (nmax < 2) throw std::invalid_argument("nmax too small");
  // The node of (phi_0 + phi_1)/sqrt(2) sits at -1/sqrt(2).
  const double shift = 1.0 / std::sqrt(2.0);
  const Grid g = Grid::symmetric(16.0, 0.004);
  std::vector<double> samples(g.size());
  const std::vector<double> c0{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  for (std::size_t i = 0; i < g.size(); ++i) samples[i] = hermite_series(c0, g.x[i] - shift);
  NodalState s{project_onto_hermite(g.x, samples, nmax)};
  normalize(s.coeffs);
  return s;
}

NodalState single_node_state(double q4, double q5) {
  const auto cofactor = [&](double x) { return 1.0 + 0.5 * x * x + q4 * x * x * x + q5 * x * x * x * x; };
  for (double x = -20.0; x <= 20.0; x += 1e-3)
    if (cofactor(x) <= 0.0) throw std::invalid_argument("polynomial cofactor changes sign");
  const Grid g = Grid::symmetric(16.0, 0.004);
  std::vector<double> samples(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x[i];
    samples[i] = x * cofactor(x) * std::exp(-0.5 * x * x);
  }
  NodalState s{project_onto_hermite(g.x, samples, 5)};
  normalize(s.coeffs);
  return s;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("bad log range");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
  double mx = 0.0, my = 0.0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(std::abs(y[i]));
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

using Quad = boost::math::quadrature::gauss<double, 30>;

// Integral of max(s * f, 0) over [a, b], splitting panels at sign changes.
double positive_part(const std::function<double(double)>& f, double s, double a, double b,
                     double panel) {
  double total = 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double l = a + p * h, r = l + h;
    const double fl = s * f(l), fr = s * f(r);
    if ((fl > 0.0) != (fr > 0.0)) {
      double lo = l, hi = r;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double m = 0.5 * (lo + hi);
        if ((s * f(m) > 0.0) == (fl > 0.0)) lo = m;
        else hi = m;
      }
      const double root = 0.5 * (lo + hi);
      if (fl > 0.0) r = root;
      else l = root;
    } else if (fl <= 0.0) {
      continue;
    }
    total += Quad::integrate([&](double t) { return std::max(s * f(t), 0.0); }, l, r);
  }
  return total;
}

}  // namespace

ScalingResult scaling_experiment(const NodalState& state, const std::vector<double>& eps_list,
                                 double Omega) {
  if (state.coeffs.empty()) throw std::invalid_argument("empty state");
  if (eps_list.size() < 3) throw std::invalid_argument("need at least three epsilons");
  const auto [emin_it, emax_it] = std::minmax_element(eps_list.begin(), eps_list.end());
  if (!(*emin_it > 0.0)) throw std::invalid_argument("epsilons must be positive");
  if (std::log10(*emax_it / *emin_it) < 1.5 - 1e-9)
    throw std::invalid_argument("eps_list must span at least 1.5 decades");

  std::vector<double> c = state.coeffs;
  normalize(c);
  const NodalState psi{c};
  const auto at0 = hermite_series_with_derivative(c, 0.0);
  const double k = std::abs(at0.derivative);
  if (!(k > 0.0)) throw std::invalid_argument("state has no linear node at the origin");
  if (std::abs(at0.value) > 1e-8 * k) throw std::invalid_argument("node is not at the origin");

  // Exact overlap I = int Psi(x) Psi(-x) dx = sum (-1)^n C_n^2.
  double I = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) I += (n % 2 == 0 ? 1.0 : -1.0) * c[n] * c[n];
  const double absI = std::abs(I);
  const auto mirror = [&](double x) { return psi.value(x) * psi.value(-x); };

  // int |f| - |int f| over the real line, which vanishes when f keeps one sign.
  const double L = std::sqrt(2.0 * static_cast<double>(c.size()) + 1.0) + 12.0;
  const double opposite = I <= 0.0 ? 1.0 : -1.0;
  const double D = 4.0 * positive_part(mirror, opposite, 0.0, L, 0.05);

  ScalingResult res;
  res.k = k;
  res.delta_rho = delta_rho(c);
  res.predicted_prefactor = 4.0 / 3.0 * k * k * res.delta_rho * Omega;

  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end());
  for (double e : eps) {
    // a = int_{-e}^{e} |f|, b = int_{-e}^{e} Psi^2, cut = 2 k^2 e^3.
    const double a = 2.0 * Quad::integrate([&](double x) { return std::abs(mirror(x)); }, 0.0, e);
    const double b = Quad::integrate([&](double x) { return psi.value(x) * psi.value(x); }, -e, e);
    const double cut = 2.0 * k * k * e * e * e;
    const double u = cut - a;
    const double v = cut - b;
    // E_phi - E_psi = -Omega [ (|I| + D + u) / (1 + v) - |I| ], arranged so no
    // O(1) quantities cancel.
    ScalingPoint p;
    p.epsilon = e;
    p.diff = -Omega * (D + u - absI * v) / (1.0 + v);
    if (std::abs(p.diff) < 1e-14)
      throw NumericalError("tunneling-energy change below 1e-14 at eps = " + std::to_string(e));
    p.predicted = -res.predicted_prefactor * e * e * e;
    p.residual = p.diff - p.predicted;
    res.points.push_back(p);
  }

  std::vector<double> xs, ds, rs;
  for (const auto& p : res.points) {
    xs.push_back(p.epsilon);
    ds.push_back(p.diff);
    rs.push_back(p.residual);
  }
  res.slope = log_log_slope(xs, ds);
  const auto& first = res.points.front();
  res.prefactor = std::abs(first.diff) / (first.epsilon * first.epsilon * first.epsilon);
  res.prefactor_ratio = first.predicted != 0.0 ? first.diff / first.predicted : 0.0;
  const bool resolvable = std::all_of(rs.begin(), rs.end(), [](double r) { return r != 0.0; });
  res.residual_slope = resolvable ? log_log_slope(xs, rs) : std::nan("");
  return res;
}

}  // namespace rabi
