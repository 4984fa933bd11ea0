#include "rabi/model.hpp"

#include <cmath>

namespace rabi {

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("omega must be positive and finite");
  if (!(Omega > 0.0) || !std::isfinite(Omega))
    throw std::invalid_argument("Omega must be positive and finite");
  if (!(g >= 0.0) || !std::isfinite(g))
    throw std::invalid_argument("g must be non-negative and finite");
  if (!std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite");
}

double coupling_scale(double omega, double Omega) {
  return std::sqrt(omega * Omega) / 2.0;
}

ModelParams params_from_scaled(double lambda, double g_over_gs, double omega,
                               double Omega) {
  ModelParams p;
  p.omega = omega;
  p.Omega = Omega;
  p.lambda = lambda;
  p.g = g_over_gs * coupling_scale(omega, Omega);
  return p;
}

DerivedCouplings derive_couplings(const ModelParams& params) {
  DerivedCouplings d;
  const double g = params.g;
  const double lam = params.lambda;
  d.g_y = (1.0 - lam) * g / 2.0;
  d.g_z = (1.0 + lam) * g / 2.0;
  d.gp_y = std::sqrt(2.0) * d.g_y / params.omega;
  d.gp_z = std::sqrt(2.0) * d.g_z / params.omega;
  d.g_s = coupling_scale(params.omega, params.Omega);
  d.g_c_lambda = 2.0 * d.g_s / (1.0 + std::abs(lam));
  if (g > 0.0 && g >= 2.0 * d.g_s)
    d.lambda_T1 = std::sqrt(1.0 - 4.0 * d.g_s * d.g_s / (g * g));
  if (std::abs(lam) < 1.0)
    d.g_T1 = 2.0 * d.g_s / std::sqrt(1.0 - lam * lam);
  return d;
}

int cutoff_floor(const ModelParams& params) {
  const auto d = derive_couplings(params);
  return static_cast<int>(std::ceil(4.0 * (d.gp_z * d.gp_z + d.gp_y * d.gp_y))) + 40;
}

HamiltonianMatrix build_hamiltonian(const ModelParams& params, int cutoff) {
  params.validate();
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  if (cutoff > kMaxCutoff)
    throw NumericalError("cutoff " + std::to_string(cutoff) +
                         " exceeds the dense-matrix budget (" +
                         std::to_string(kMaxCutoff) + ")");

  const auto d = derive_couplings(params);
  const int N = cutoff;
  const Eigen::Index dim = 2 * (N + 1);
  HamiltonianMatrix out;
  out.cutoff = N;
  out.H = Eigen::MatrixXd::Zero(dim, dim);
  auto& H = out.H;

  for (int n = 0; n <= N; ++n) {
    const auto up = basis_index(n, +1, N);
    const auto dn = basis_index(n, -1, N);
    H(up, up) = params.omega * n;
    H(dn, dn) = params.omega * n;
    // Omega/2 sigma_x flips sigma_z at fixed n.
    H(up, dn) = params.Omega / 2.0;
    H(dn, up) = params.Omega / 2.0;
  }

  // <n+1| a^dag |n> = sqrt(n+1).
  for (int n = 0; n < N; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    // g_z sigma_z (a + a^dag)
    for (int spin : {+1, -1}) {
      const auto i = basis_index(n + 1, spin, N);
      const auto j = basis_index(n, spin, N);
      H(i, j) = spin * d.g_z * s;
      H(j, i) = spin * d.g_z * s;
    }
    // g_y (a^dag - a)(sigma^+ - sigma^-), sigma^+ = |+><-|.
    // <n+1,+| . |n,-> = g_y sqrt(n+1);  <n,+| . |n+1,-> = -g_y sqrt(n+1).
    const auto up_hi = basis_index(n + 1, +1, N);
    const auto dn_lo = basis_index(n, -1, N);
    const auto up_lo = basis_index(n, +1, N);
    const auto dn_hi = basis_index(n + 1, -1, N);
    H(up_hi, dn_lo) = d.g_y * s;
    H(dn_lo, up_hi) = d.g_y * s;
    H(up_lo, dn_hi) = -d.g_y * s;
    H(dn_hi, up_lo) = -d.g_y * s;
  }
  return out;
}

ParityMatrix build_parity(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const int N = cutoff;
  ParityMatrix out;
  out.cutoff = N;
  out.P = Eigen::MatrixXd::Zero(2 * (N + 1), 2 * (N + 1));
  for (int n = 0; n <= N; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const auto up = basis_index(n, +1, N);
    const auto dn = basis_index(n, -1, N);
    out.P(dn, up) = sign;
    out.P(up, dn) = sign;
  }
  return out;
}

ModelParams dual_params(const ModelParams& params) {
  ModelParams out = params;
  out.lambda = -params.lambda;
  return out;
}

}  // namespace rabi
