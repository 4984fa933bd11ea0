#pragma once

#include <string_view>
#include <vector>

#include "rabi/realspace.hpp"

namespace rabi {

enum class SqueezeClass { amplitude, phase, neutral };

std::string_view to_string(SqueezeClass c);

/// Main-peak squeezing. xi = (r_G / r_psi)^2 with r_G = sqrt(2 ln 2) the
/// Gaussian half-peak radius and r_psi measured from the peak of |psi_+| to the
/// half-height crossing on the side away from the origin.
struct SqueezeReport {
  double xi = 1.0;
  double r_psi = 0.0;
  double peak_x = 0.0;
  double delta_p = 0.5;
  SqueezeClass class_xi = SqueezeClass::neutral;
  SqueezeClass class_dp = SqueezeClass::neutral;
};

inline constexpr double kNeutralXiBand = 1e-3;

/// Half-peak extraction on arbitrary samples; throws NumericalError when the
/// half-height crossing lies outside the grid.
struct MainPeak {
  double xi = 1.0;
  double r_psi = 0.0;
  double peak_x = 0.0;
};
MainPeak main_peak_xi(const std::vector<double>& x, const std::vector<double>& samples);

SqueezeReport squeeze_report(const WaveProfile& profile, const QuadratureObservables& obs);

SqueezeClass classify_xi(double xi);
SqueezeClass classify_delta_p(double delta_p);

}  // namespace rabi
