#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabi/realspace.hpp"

namespace rabi {

/// Frequency-renormalized Gaussian e^{-xi (x - x_c)^2 / 2} (xi/pi)^{1/4}.
struct Polaron {
  double w = 1.0;    // signed weight
  double x_c = 0.0;  // center
  double xi = 1.0;   // frequency renormalization, > 0
};

double polaron_value(double xi, double x_c, double x);

/// <phi_i|phi_j> = (xi_i xi_j / xi_ij^2)^{1/4} exp[-(xi_i xi_j / xi_ij)((x_i - x_j)/2)^2],
/// xi_ij = (xi_i + xi_j)/2.
double polaron_overlap(const Polaron& a, const Polaron& b);

struct PolaronSet {
  std::vector<Polaron> polarons;  // ordered by x_c
  double N_p = 1.0;
  Eigen::MatrixXd S;
  double residual = 0.0;          // L2 misfit against the fitted profile

  /// Sorts by center and recomputes S and N_p. Throws NumericalError when the
  /// superposition has (numerically) zero norm.
  void finalize();
  static PolaronSet from(std::vector<Polaron> polarons);
};

/// N_p sum_i w_i phi_i sampled on xgrid.
std::vector<double> polaron_wavefunction(const PolaronSet& set, const std::vector<double>& xgrid);

struct FitOptions {
  int n_p = 0;              // 0 selects automatically
  int max_polarons = 4;
  double extremum_fraction = 0.02;
  double merge_distance = 0.05;
  int max_evaluations = 4000;
};

/// Least-squares fit of N_p sum_i w_i phi(xi_i, x_i) to psi_+ over
/// {w_i, x_i, xi_i}. Weights are reported relative to the leftmost polaron
/// (w_1 = 1), and the residual is taken against psi_+ in that sign gauge.
PolaronSet fit_polarons(const WaveProfile& profile, const FitOptions& opts = {});
PolaronSet fit_polarons(const std::vector<double>& x, const std::vector<double>& psi,
                        const FitOptions& opts = {});

/// Number of polarons the automatic rule picks for these samples.
int auto_polaron_count(const std::vector<double>& x, const std::vector<double>& psi,
                       const FitOptions& opts = {});

/// Sign changes along the ordered weight sequence.
int weight_sign_changes(const PolaronSet& set);

/// Reference polaron sets shipped in data/reference_polarons.json.
struct ReferencePolarons {
  std::string label;
  double lambda = 0.0;
  double g_over_gs = 0.0;
  int n_Z = 0;
  int parity = 0;
  PolaronSet set;
};
std::vector<ReferencePolarons> load_reference_polarons(const std::string& path);
std::string default_reference_polaron_path();

}  // namespace rabi
