#pragma once

#include <vector>

#include "rabi/model.hpp"
#include "rabi/spectra.hpp"

namespace rabi {

/// Uniform grid over [-L, L].
struct Grid {
  double L = 0.0;
  double dx = 0.0;
  std::vector<double> x;

  static Grid symmetric(double half_width, double step);
  std::size_t size() const { return x.size(); }
};

/// Two-component real-space ground state. |psi> = (psi_+|+> + psi_-|->)/sqrt(2),
/// so each component integrates to one.
struct WaveProfile {
  Grid grid;
  std::vector<double> psi_plus;
  std::vector<double> psi_minus;
  std::vector<double> dpsi_plus;   // analytic x-derivatives of the same expansion
  std::vector<double> dpsi_minus;
  std::vector<double> nodes;       // zero crossings of psi_plus
  int n_Z = 0;
  Parity parity = Parity::crossing;
};

inline constexpr double kDefaultNodeThreshold = 1e-6;
inline constexpr double kDefaultGridStep = 0.01;

/// Default half-window |g'_z| + 8.
double default_half_window(const ModelParams& params);

/// Evaluates psi_pm(x) = sqrt(2) sum_n c_{n,pm} phi_n(x) on [-L, L] and counts
/// nodes with the default threshold. Requires L >= |g'_z| + 8 when params are
/// given (the overload without params skips that check).
WaveProfile wavefunction(const SpectralResult& result, const ModelParams& params,
                         double L, double dx = kDefaultGridStep);
WaveProfile wavefunction(const SpectralResult& result, double L, double dx = kDefaultGridStep);

/// Convenience: default window and step.
WaveProfile wavefunction(const SpectralResult& result, const ModelParams& params);

struct NodeCount {
  int n_Z = 0;
  std::vector<double> positions;
};

/// Sign changes of `samples` at which the local extrema on both sides exceed
/// tau_rel * max|samples|. Positions by linear interpolation.
NodeCount count_nodes(const std::vector<double>& x, const std::vector<double>& samples,
                      double tau_rel = kDefaultNodeThreshold);
NodeCount count_nodes(const WaveProfile& profile, double tau_rel = kDefaultNodeThreshold);

struct QuadratureObservables {
  double x2 = 0.0;
  double p2 = 0.0;
  double p1 = 0.0;
  double delta_p = 0.0;
  double adagger2 = 0.0;  // <a^dag a^dag> = (<x^2> - <p^2>)/2
  double A = 0.0;         // adagger2 / A0, zero when A0 = 0
  double A0 = 0.0;        // [(1 + |lambda|) g / (2 omega)]^2
  double sigma_z_x = 0.0; // <sigma_z x>, used by the potential energy
};

/// Operator expectations evaluated directly in the Fock basis.
QuadratureObservables observables(const SpectralResult& result, const ModelParams& params);

struct EnergyDecomposition {
  double kinetic = 0.0;    // (omega/2) <p^2>
  double potential = 0.0;  // <v_{sigma_z}>
  double tunneling = 0.0;  // P (Omega/2) int psi_+(x) psi_+(-x) dx
  double anisotropic = 0.0;// -sqrt(2) g_y int psi_+ d_x psi_- dx
  double total() const { return kinetic + potential + tunneling + anisotropic; }
  double completeness_error = 0.0;  // |total - E0|
};

/// Grid integrals of the four terms of the quadrature-form Hamiltonian.
/// Throws NumericalError when the sum misses E0 by more than 1e-6.
EnergyDecomposition energy_decomposition(const SpectralResult& result,
                                         const ModelParams& params,
                                         const WaveProfile& profile);

/// Topological node number of the ground state. For lambda >= 0 this is the
/// node count of psi_+(x) in `profile`. For lambda < 0 the model is solved at
/// -lambda and the dual profile is counted, which equals the node count of the
/// momentum-space wave function; n_Z(lambda) = n_Z(-lambda) follows.
int topological_node_count(const ModelParams& params, const WaveProfile& profile,
                           const ConvergenceOptions& opts = {});

/// Trapezoid rule on a uniform grid.
double integrate(const std::vector<double>& f, double dx);

/// Fock coefficients of psi_+ = sqrt(2) c_{n,+}.
std::vector<double> plus_component_coeffs(const SpectralResult& result);

}  // namespace rabi
