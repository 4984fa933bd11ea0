#pragma once

#include <span>
#include <vector>

namespace rabi {

/// Harmonic-oscillator eigenfunctions phi_n(x) = (2^n n! sqrt(pi))^{-1/2}
/// H_n(x) e^{-x^2/2}, evaluated by the normalized two-term recurrence
///   phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}.
/// The running values are rescaled internally so that large |x| or large n
/// neither overflow nor flush to zero prematurely.

/// phi_0 .. phi_nmax at a single point.
std::vector<double> hermite_functions(int nmax, double x);

/// sum_n c_n phi_n(x).
double hermite_series(std::span<const double> coeffs, double x);

/// sum_n c_n phi_n'(x), using phi_n' = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}.
double hermite_series_derivative(std::span<const double> coeffs, double x);

/// Value and derivative together (one recurrence pass).
struct SeriesValue {
  double value = 0.0;
  double derivative = 0.0;
};
SeriesValue hermite_series_with_derivative(std::span<const double> coeffs, double x);

/// Projection coefficients <phi_n|f> for n = 0..nmax of a function sampled on
/// a uniform grid (trapezoid rule).
std::vector<double> project_onto_hermite(std::span<const double> xgrid,
                                         std::span<const double> samples, int nmax);

}  // namespace rabi
