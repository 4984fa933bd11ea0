#include "rabi/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rabi {
namespace {

constexpr double kRescaleAbove = 1e100;
const double kLogRescale = std::log(kRescaleAbove);

// Runs the recurrence for phi_0..phi_nmax at x, calling visit(n, scaled_phi)
// and rescale(factor) whenever the scaled values are renormalized. Returns the
// log of the scale that converts scaled values back to true values.
template <class Visit, class Rescale>
double run_recurrence(int nmax, double x, Visit&& visit, Rescale&& rescale) {
  double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  visit(0, cur);
  for (int n = 0; n < nmax; ++n) {
    const double next = std::sqrt(2.0 / (n + 1)) * x * cur -
                        std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      prev /= kRescaleAbove;
      cur /= kRescaleAbove;
      rescale(kRescaleAbove);
      log_scale += kLogRescale;
    }
    visit(n + 1, cur);
  }
  return log_scale;
}

}  // namespace

std::vector<double> hermite_functions(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("nmax must be >= 0");
  std::vector<double> out(nmax + 1);
  const double log_scale = run_recurrence(
      nmax, x, [&](int n, double v) { out[n] = v; },
      [&](double f) {
        for (auto& v : out) v /= f;
      });
  // Entries written before a rescale were divided along with the rest, so a
  // single factor restores all of them.
  const double s = std::exp(log_scale);
  for (auto& v : out) v *= s;
  return out;
}

SeriesValue hermite_series_with_derivative(std::span<const double> coeffs, double x) {
  const int n_c = static_cast<int>(coeffs.size());
  if (n_c == 0) return {};
  // sum_n c_n phi_n' = sum_m d_m phi_m with
  // d_m = c_{m+1} sqrt((m+1)/2) - c_{m-1} sqrt(m/2), m = 0..n_c.
  auto c = [&](int n) { return (n >= 0 && n < n_c) ? coeffs[n] : 0.0; };
  double sum_v = 0.0;
  double sum_d = 0.0;
  const double log_scale = run_recurrence(
      n_c, x,
      [&](int m, double phi) {
        sum_v += c(m) * phi;
        sum_d += (c(m + 1) * std::sqrt((m + 1) / 2.0) - c(m - 1) * std::sqrt(m / 2.0)) * phi;
      },
      [&](double f) {
        sum_v /= f;
        sum_d /= f;
      });
  const double s = std::exp(log_scale);
  return {sum_v * s, sum_d * s};
}

double hermite_series(std::span<const double> coeffs, double x) {
  const int n_c = static_cast<int>(coeffs.size());
  if (n_c == 0) return 0.0;
  double sum = 0.0;
  const double log_scale = run_recurrence(
      n_c - 1, x, [&](int n, double phi) { sum += coeffs[n] * phi; },
      [&](double f) { sum /= f; });
  return sum * std::exp(log_scale);
}

double hermite_series_derivative(std::span<const double> coeffs, double x) {
  return hermite_series_with_derivative(coeffs, x).derivative;
}

std::vector<double> project_onto_hermite(std::span<const double> xgrid,
                                         std::span<const double> samples, int nmax) {
  if (xgrid.size() != samples.size() || xgrid.size() < 2)
    throw std::invalid_argument("grid and samples must match and hold >= 2 points");
  const double dx = xgrid[1] - xgrid[0];
  std::vector<double> out(nmax + 1, 0.0);
  const std::size_t last = xgrid.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const double w = (k == 0 || k == last) ? 0.5 * dx : dx;
    const auto phi = hermite_functions(nmax, xgrid[k]);
    for (int n = 0; n <= nmax; ++n) out[n] += w * samples[k] * phi[n];
  }
  return out;
}

}  // namespace rabi
