#pragma once

#include <Eigen/Dense>

#include "rabi/model.hpp"

namespace rabi {

/// Ground-state parity. `crossing` marks a degenerate lowest doublet where
/// parity is not a good label.
enum class Parity : int { negative = -1, crossing = 0, positive = 1 };

inline int to_int(Parity p) { return static_cast<int>(p); }
Parity parity_from_int(int v);

/// Gap below which the lowest doublet is treated as degenerate.
inline constexpr double kDegenerateGap = 1e-10;

struct SpectralResult {
  double E0 = 0.0;
  double E1 = 0.0;
  double gap = 0.0;
  Parity parity = Parity::crossing;
  double parity_expectation = 0.0;  // <psi0|P|psi0>
  /// Ground state in the basis of basis_index(n, spin, cutoff_used), unit
  /// norm, sign fixed so the largest-magnitude entry is positive.
  Eigen::VectorXd coeffs;
  int cutoff_used = 0;
  bool converged = false;
};

/// Lowest two eigenpairs of H. The parity sectors of P are diagonalized
/// separately so the returned ground state is an exact parity eigenvector
/// whenever the doublet is not degenerate.
SpectralResult solve_lowest_two(const HamiltonianMatrix& H, const ParityMatrix& P);

struct ConvergenceOptions {
  double tol = 1e-10;          // |E0(2N) - E0(N)|
  double tail_tol = 1e-12;     // weight in the top 10 Fock levels
  int max_cutoff = 1024;
};

/// Doubles the cutoff from cutoff_floor(params) until E0 is stable to tol and
/// the Fock tail weight is below tail_tol. Throws NumericalError when
/// max_cutoff is reached first.
SpectralResult converge_cutoff(const ModelParams& params,
                               const ConvergenceOptions& opts = {});

/// Sum of |c_{n,s}|^2 over n > cutoff - 10, both spins.
double tail_weight(const Eigen::VectorXd& coeffs, int cutoff);

}  // namespace rabi
