#pragma once

#include <span>
#include <vector>

namespace rabi {

/// |sum |C_n|^2| - |sum (-1)^n |C_n|^2|. Zero for pure-parity vectors.
double delta_rho(std::span<const double> coeffs);

/// Prefactor of the tunneling integral int Psi_+(x) Psi_+(-x) dx.
enum class TunnelingConvention {
  full,  // Omega, used by the deformation experiment
  half,  // Omega / 2, the ground-state energy decomposition
};

/// P * c * Omega * int f(x) f(-x) dx on a grid symmetric about the origin, with
/// the parity P chosen so the energy is non-positive. For a node at the origin
/// this is P = +1 before the deformation and P = -1 after it.
double tunneling_energy(const std::vector<double>& x, const std::vector<double>& f,
                        double Omega, TunnelingConvention conv = TunnelingConvention::full);

struct DeformationResult {
  double epsilon = 0.0;
  double x0 = 0.0;
  double k = 0.0;          // |gradient| at the node
  double E_psi = 0.0;
  double E_phi = 0.0;
  double diff = 0.0;       // E_phi - E_psi
  double N_renorm = 1.0;   // 1/sqrt(1 + 4 k^2 eps^3 / 3)
  double N_grid = 1.0;     // normalization actually applied on the grid
  std::vector<double> phi; // deformed, nodeless profile
};

/// Replaces Psi by N|Psi| outside [x0 - eps, x0 + eps] and by N k eps inside,
/// with k from a 5-point linear fit around the node. Throws
/// std::invalid_argument when the interval reaches another node or extremum.
DeformationResult deform_round_off(const std::vector<double>& x, const std::vector<double>& psi,
                                   double x0, double epsilon, double Omega = 1.0);

/// Psi(x) = sum_n C_n phi_n(x), a synthetic state for the scaling law.
struct NodalState {
  std::vector<double> coeffs;

  double value(double x) const;
  double derivative(double x) const;
};

/// (phi_0 + phi_1)/sqrt(2) translated so its node sits at the origin,
/// re-expanded on the oscillator basis.
NodalState shifted_two_level_state(int nmax = 80);

/// (x + x^3/2 + q4 x^4 + q5 x^5) e^{-x^2/2}, normalized. The Gaussian factor
/// cancels the cubic term, so Psi = k x + O(x^4) at its node, and the
/// polynomial keeps a single sign change. q5 = 1/8 also removes the x^5 term.
/// Throws std::invalid_argument when the choice of q4 introduces extra nodes.
NodalState single_node_state(double q4, double q5 = 0.125);

struct ScalingPoint {
  double epsilon = 0.0;
  double diff = 0.0;
  double predicted = 0.0;  // -(4/3) k^2 delta_rho Omega eps^3
  double residual = 0.0;   // diff - predicted
};

struct ScalingResult {
  double k = 0.0;
  double delta_rho = 0.0;
  double slope = 0.0;             // d log|diff| / d log eps
  double prefactor = 0.0;         // fitted |diff| / eps^3 at the smallest eps
  double predicted_prefactor = 0.0;  // (4/3) k^2 delta_rho Omega
  double prefactor_ratio = 0.0;   // diff / predicted at the smallest eps
  double residual_slope = 0.0;    // d log|residual| / d log eps
  std::vector<ScalingPoint> points;
};

/// Tunneling-energy change under the constant-cut deformation of a state with
/// its node at the origin, integrated by Gauss-Legendre quadrature so the
/// eps^3 law is resolved far below grid accuracy. Throws std::invalid_argument
/// when the node is off the origin or eps_list spans less than one decade, and
/// NumericalError when |diff| falls under 1e-14.
ScalingResult scaling_experiment(const NodalState& state, const std::vector<double>& eps_list,
                                 double Omega = 1.0);

/// Log-spaced epsilons.
std::vector<double> log_spaced(double lo, double hi, int count);

/// Least-squares slope of log|y| against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rabi
