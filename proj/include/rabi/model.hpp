#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rabi {

/// Thrown when a computation cannot produce a trustworthy number
/// (eigensolver failure, cutoff ceiling, grid too small, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical inputs of the anisotropic Rabi model. Energies in units of
/// the qubit splitting, which defaults to 1.
struct ModelParams {
  double omega = 0.5;   // oscillator frequency
  double Omega = 1.0;   // qubit splitting (tunneling)
  double g = 0.0;       // coupling strength
  double lambda = 0.0;  // anisotropy, weight of the counter-rotating term

  /// Throws std::invalid_argument on omega <= 0, Omega <= 0 or g < 0.
  void validate() const;
};

/// Characteristic coupling sqrt(omega * Omega) / 2.
double coupling_scale(double omega, double Omega);

/// Builds params with g given in units of the characteristic coupling.
ModelParams params_from_scaled(double lambda, double g_over_gs,
                               double omega = 0.5, double Omega = 1.0);

struct DerivedCouplings {
  double g_y = 0.0;   // (1 - lambda) g / 2
  double g_z = 0.0;   // (1 + lambda) g / 2
  double gp_y = 0.0;  // sqrt(2) g_y / omega
  double gp_z = 0.0;  // sqrt(2) g_z / omega
  double g_s = 0.0;
  double g_c_lambda = 0.0;
  // Only defined for g >= 2 g_s.
  std::optional<double> lambda_T1;
  // Only defined for |lambda| < 1.
  std::optional<double> g_T1;
};

DerivedCouplings derive_couplings(const ModelParams& params);

/// Heuristic Fock-cutoff floor ceil(4 (g'_z^2 + g'_y^2)) + 40.
int cutoff_floor(const ModelParams& params);

/// Basis index of |n> (x) |sigma_z = s>, s = +1 or -1. The two spin blocks
/// are stored one after the other: [n = 0..N, +], [n = 0..N, -].
inline Eigen::Index basis_index(int n, int spin, int cutoff) {
  return spin > 0 ? n : (cutoff + 1) + n;
}

/// Real symmetric Hamiltonian in the sigma_z (x) Fock frame, where the
/// momentum-type coupling -g_y i sqrt(2) p becomes g_y (a^dag - a).
struct HamiltonianMatrix {
  int cutoff = 0;
  Eigen::MatrixXd H;

  Eigen::Index dim() const { return H.rows(); }
};

/// Representation of sigma_x (-1)^{a^dag a}: a signed permutation.
struct ParityMatrix {
  int cutoff = 0;
  Eigen::MatrixXd P;

  Eigen::Index dim() const { return P.rows(); }
};

/// Upper bound on the Fock cutoff accepted by build_hamiltonian.
inline constexpr int kMaxCutoff = 1500;

HamiltonianMatrix build_hamiltonian(const ModelParams& params, int cutoff);
ParityMatrix build_parity(int cutoff);

/// lambda -> -lambda. The spectrum is invariant and <x^2>, <p^2> swap.
ModelParams dual_params(const ModelParams& params);

}  // namespace rabi
