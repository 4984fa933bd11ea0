#include "rabi/squeezing.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi {

std::string_view to_string(SqueezeClass c) {
  switch (c) {
    case SqueezeClass::amplitude: return "AS";
    case SqueezeClass::phase: return "PS";
    case SqueezeClass::neutral: return "neutral";
  }
  return "neutral";
}

SqueezeClass classify_xi(double xi) {
  if (std::abs(xi - 1.0) < kNeutralXiBand) return SqueezeClass::neutral;
  return xi < 1.0 ? SqueezeClass::amplitude : SqueezeClass::phase;
}

SqueezeClass classify_delta_p(double delta_p) {
  if (delta_p == 0.5) return SqueezeClass::neutral;
  return delta_p < 0.5 ? SqueezeClass::amplitude : SqueezeClass::phase;
}

MainPeak main_peak_xi(const std::vector<double>& x, const std::vector<double>& samples) {
  if (x.size() != samples.size() || x.size() < 3)
    throw std::invalid_argument("need matching grid and samples with >= 3 points");
  // Global maximum of |psi|; ties go to the larger |x|.
  std::size_t ip = 0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double a = std::abs(samples[k]);
    const double b = std::abs(samples[ip]);
    if (a > b || (a == b && std::abs(x[k]) > std::abs(x[ip]))) ip = k;
  }
  const double peak = std::abs(samples[ip]);
  if (peak == 0.0) throw NumericalError("profile is identically zero");
  const double half = 0.5 * peak;

  // Walk away from the origin; a peak sitting exactly at x = 0 walks right.
  const int step = x[ip] < 0.0 ? -1 : +1;
  long k = static_cast<long>(ip);
  const long last = static_cast<long>(samples.size()) - 1;
  while (true) {
    const long next = k + step;
    if (next < 0 || next > last)
      throw NumericalError("half-height crossing lies outside the window");
    const double a = std::abs(samples[k]);
    const double b = std::abs(samples[next]);
    if (b <= half) {
      const double t = (a - half) / (a - b);
      const double xh = x[k] + t * (x[next] - x[k]);
      MainPeak out;
      out.peak_x = x[ip];
      out.r_psi = std::abs(xh - x[ip]);
      const double rg2 = 2.0 * std::log(2.0);
      out.xi = rg2 / (out.r_psi * out.r_psi);
      return out;
    }
    k = next;
  }
}

SqueezeReport squeeze_report(const WaveProfile& profile, const QuadratureObservables& obs) {
  const auto mp = main_peak_xi(profile.grid.x, profile.psi_plus);
  SqueezeReport r;
  r.xi = mp.xi;
  r.r_psi = mp.r_psi;
  r.peak_x = mp.peak_x;
  r.delta_p = obs.delta_p;
  r.class_xi = classify_xi(r.xi);
  r.class_dp = classify_delta_p(r.delta_p);
  return r;
}

}  // namespace rabi
