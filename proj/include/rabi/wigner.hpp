#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabi/polaron.hpp"
#include "rabi/realspace.hpp"

namespace rabi {

/// Which spinor components enter W. The spin-summed form traces over
/// sigma_z; `plus` is the Wigner function of the normalized psi_+ alone, the
/// object the polaron decomposition describes.
enum class WignerComponent { spin_summed, plus };

struct WignerTerm {
  int i = 0;
  int j = 0;  // i == j: inner-polaron term; i < j: inter-polaron term W_ij
  Eigen::MatrixXd W;
};

/// W(x_k, p_l) stored as W(k, l).
struct WignerGrid {
  std::vector<double> xgrid;
  std::vector<double> pgrid;
  Eigen::MatrixXd W;
  std::vector<WignerTerm> terms;  // analytic path only

  double dx() const { return xgrid.size() > 1 ? xgrid[1] - xgrid[0] : 0.0; }
  double dp() const { return pgrid.size() > 1 ? pgrid[1] - pgrid[0] : 0.0; }
  double mass() const;
  /// Index of p = 0; throws std::invalid_argument when absent.
  std::size_t zero_momentum_index() const;
};

inline constexpr double kDefaultPmax = 6.0;
inline constexpr double kDefaultDp = 0.02;

/// Discrete cosine transform over y at every x. y is sampled at 2 dx so the
/// integrand only needs on-grid values. The momentum step is the largest
/// pi / (2 M dx) not exceeding dp with M a power of two, and p = 0 is always
/// on the grid. Throws NumericalError when the mass misses 1 by more than
/// 1e-4 (aliasing or a clipped window).
WignerGrid wigner_numeric(const WaveProfile& profile, double pmax = kDefaultPmax,
                          double dp = kDefaultDp,
                          WignerComponent component = WignerComponent::spin_summed);

/// Closed form for a polaron superposition, with per-pair terms. The total is
/// sum_i W_ii + 2 sum_{i<j} W_ij.
WignerGrid wigner_polaron(const PolaronSet& set, const std::vector<double>& xgrid,
                          const std::vector<double>& pgrid);

struct FringeAnalytics {
  double T_p = 0.0;   // 2 pi / |x_j - x_i|
  double K = 0.0;     // 2 (xi_i - xi_j) / ((xi_i + xi_j)(x_j - x_i))
  double x_ij = 0.0;  // (x_i + x_j)/2
};

FringeAnalytics fringe_analytics(const Polaron& i, const Polaron& j);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Contiguous runs of the p = 0 slice below -tau_rel * max W.
std::vector<Interval> central_negative_scan(const WignerGrid& grid, double tau_rel = 1e-4);

/// CSV with header "x,p,W", one row per grid point, x outer.
void write_wigner_csv(const WignerGrid& grid, std::ostream& out);

/// One-line JSON header then nx*np little-endian float64 values, x outer.
void write_wigner_binary(const WignerGrid& grid, const std::string& params_json,
                         std::ostream& out);
WignerGrid read_wigner_binary(std::istream& in);

}  // namespace rabi
