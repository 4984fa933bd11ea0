#include "rabi/wigner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fftw3.h>

#include "json.hpp"

namespace rabi {

double WignerGrid::mass() const {
  return W.sum() * dx() * dp();
}

std::size_t WignerGrid::zero_momentum_index() const {
  for (std::size_t l = 0; l < pgrid.size(); ++l)
    if (pgrid[l] == 0.0) return l;
  throw std::invalid_argument("momentum grid does not contain p = 0");
}

namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* data;
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_real(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct DctPlan {
  fftw_plan plan;
  DctPlan(int n, double* in, double* out) {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_1d(n, in, out, FFTW_REDFT00, FFTW_ESTIMATE);
    if (!plan) throw NumericalError("FFTW could not create a DCT-I plan");
  }
  ~DctPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  DctPlan(const DctPlan&) = delete;
  DctPlan& operator=(const DctPlan&) = delete;
};

}  // namespace

WignerGrid wigner_numeric(const WaveProfile& profile, double pmax, double dp,
                          WignerComponent component) {
  if (!(pmax > 0.0) || !(dp > 0.0)) throw std::invalid_argument("pmax and dp must be positive");
  const auto& x = profile.grid.x;
  const std::size_t nx = x.size();
  if (nx < 3 || profile.psi_plus.size() != nx || profile.psi_minus.size() != nx)
    throw std::invalid_argument("profile arrays do not match the grid");
  const double dx = profile.grid.dx;
  const long half = static_cast<long>(nx / 2);

  // y_m = 2 m dx. A DCT-I of length M + 1 evaluates
  // f_0 + (-1)^j f_M + 2 sum_{m=1}^{M-1} f_m cos(pi j m / M) at p_j = pi j / (2 M dx).
  const double need = std::max(static_cast<double>(2 * half),
                               std::numbers::pi / (2.0 * dx * dp));
  const auto M = std::bit_ceil(static_cast<std::size_t>(std::ceil(need)));
  const double dp_actual = std::numbers::pi / (2.0 * static_cast<double>(M) * dx);
  const auto jmax = static_cast<long>(std::floor(pmax / dp_actual + 1e-9));

  WignerGrid out;
  out.xgrid = x;
  out.pgrid.resize(2 * jmax + 1);
  for (long j = -jmax; j <= jmax; ++j) out.pgrid[j + jmax] = static_cast<double>(j) * dp_actual;
  out.W.resize(static_cast<Eigen::Index>(nx), 2 * jmax + 1);

  FftwBuffer in(M + 1), res(M + 1);
  DctPlan plan(static_cast<int>(M + 1), in.data, res.data);
  const bool both = component == WignerComponent::spin_summed;
  const auto& pp = profile.psi_plus;
  const auto& pm = profile.psi_minus;

  for (long k = 0; k < static_cast<long>(nx); ++k) {
    std::fill(in.data, in.data + M + 1, 0.0);
    const long reach = std::min(k, static_cast<long>(nx) - 1 - k);
    for (long m = 0; m <= reach; ++m) {
      double f = pp[k + m] * pp[k - m];
      if (both) f = 0.5 * (f + pm[k + m] * pm[k - m]);
      in.data[m] = f;
    }
    fftw_execute_r2r(plan.plan, in.data, res.data);
    // W = (1/2pi) * 2dx * [f_0 + 2 sum f_m cos(2 p m dx)]
    const double scale = dx / std::numbers::pi;
    for (long j = 0; j <= jmax; ++j) {
      const double w = scale * res.data[j];
      out.W(k, jmax + j) = w;
      out.W(k, jmax - j) = w;
    }
  }

  const double mass = out.mass();
  if (std::abs(mass - 1.0) > 1e-4)
    throw NumericalError("Wigner mass " + std::to_string(mass) +
                         " deviates from 1 (aliasing or clipped window)");
  return out;
}

WignerGrid wigner_polaron(const PolaronSet& set, const std::vector<double>& xgrid,
                          const std::vector<double>& pgrid) {
  WignerGrid out;
  out.xgrid = xgrid;
  out.pgrid = pgrid;
  const auto nx = static_cast<Eigen::Index>(xgrid.size());
  const auto np = static_cast<Eigen::Index>(pgrid.size());
  out.W = Eigen::MatrixXd::Zero(nx, np);
  const auto& ps = set.polarons;
  const double norm2 = set.N_p * set.N_p;
  const double inv_pi = 1.0 / std::numbers::pi;

  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i; j < ps.size(); ++j) {
      const Polaron& a = ps[i];
      const Polaron& b = ps[j];
      const double xij = 0.5 * (a.x_c + b.x_c);
      const double xi_ij = 0.5 * (a.xi + b.xi);
      const double prod = a.xi * b.xi;
      const double amp = a.w * b.w * norm2 * inv_pi * std::pow(prod / (xi_ij * xi_ij), 0.25);
      WignerTerm term{static_cast<int>(i), static_cast<int>(j), Eigen::MatrixXd(nx, np)};
      for (Eigen::Index k = 0; k < nx; ++k) {
        const double xv = xgrid[k];
        const double xenv = std::exp(-(prod / xi_ij) * (xv - xij) * (xv - xij));
        const double slope = ((xv - a.x_c) * a.xi - (xv - b.x_c) * b.xi) / xi_ij;
        for (Eigen::Index l = 0; l < np; ++l) {
          const double p = pgrid[l];
          term.W(k, l) = amp * xenv * std::exp(-p * p / xi_ij) * std::cos(p * slope);
        }
      }
      out.W += (i == j ? 1.0 : 2.0) * term.W;
      out.terms.push_back(std::move(term));
    }
  return out;
}

FringeAnalytics fringe_analytics(const Polaron& i, const Polaron& j) {
  const double sep = j.x_c - i.x_c;
  if (sep == 0.0) throw std::invalid_argument("fringe analytics need distinct polaron centers");
  FringeAnalytics f;
  f.T_p = 2.0 * std::numbers::pi / std::abs(sep);
  f.K = 2.0 * (i.xi - j.xi) / ((i.xi + j.xi) * sep);
  f.x_ij = 0.5 * (i.x_c + j.x_c);
  return f;
}

std::vector<Interval> central_negative_scan(const WignerGrid& grid, double tau_rel) {
  const auto l0 = static_cast<Eigen::Index>(grid.zero_momentum_index());
  const double tau = tau_rel * grid.W.maxCoeff();
  std::vector<Interval> out;
  bool open = false;
  for (std::size_t k = 0; k < grid.xgrid.size(); ++k) {
    const bool neg = grid.W(static_cast<Eigen::Index>(k), l0) < -tau;
    if (neg && !open) {
      out.push_back({grid.xgrid[k], grid.xgrid[k]});
      open = true;
    } else if (neg) {
      out.back().hi = grid.xgrid[k];
    } else {
      open = false;
    }
  }
  return out;
}

void write_wigner_csv(const WignerGrid& grid, std::ostream& out) {
  out << "x,p,W\n";
  char buf[96];
  for (std::size_t k = 0; k < grid.xgrid.size(); ++k)
    for (std::size_t l = 0; l < grid.pgrid.size(); ++l) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", grid.xgrid[k], grid.pgrid[l],
                    grid.W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
      out << buf;
    }
}

void write_wigner_binary(const WignerGrid& grid, const std::string& params_json,
                         std::ostream& out) {
  static_assert(std::endian::native == std::endian::little, "binary layout assumes little endian");
  nlohmann::json h;
  h["format"] = "rabi-atlas-wigner-f64";
  h["layout"] = "row-major, x outer, p inner";
  h["nx"] = grid.xgrid.size();
  h["np"] = grid.pgrid.size();
  h["x0"] = grid.xgrid.empty() ? 0.0 : grid.xgrid.front();
  h["dx"] = grid.dx();
  h["p0"] = grid.pgrid.empty() ? 0.0 : grid.pgrid.front();
  h["dp"] = grid.dp();
  h["params"] = params_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_json);
  out << h.dump() << '\n';
  for (std::size_t k = 0; k < grid.xgrid.size(); ++k)
    for (std::size_t l = 0; l < grid.pgrid.size(); ++l) {
      const double v = grid.W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

WignerGrid read_wigner_binary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing Wigner binary header");
  const auto h = nlohmann::json::parse(line);
  if (h.at("format") != "rabi-atlas-wigner-f64")
    throw std::runtime_error("unexpected Wigner binary format");
  const auto nx = h.at("nx").get<std::size_t>();
  const auto np = h.at("np").get<std::size_t>();
  const double x0 = h.at("x0"), dx = h.at("dx"), p0 = h.at("p0"), dp = h.at("dp");
  WignerGrid g;
  g.xgrid.resize(nx);
  g.pgrid.resize(np);
  for (std::size_t k = 0; k < nx; ++k) g.xgrid[k] = x0 + static_cast<double>(k) * dx;
  // Recover p = 0 exactly for symmetric axes.
  const long mid = static_cast<long>(np / 2);
  for (std::size_t l = 0; l < np; ++l)
    g.pgrid[l] = (np % 2 == 1 && std::abs(p0 + static_cast<double>(mid) * dp) < 0.5 * dp)
                     ? static_cast<double>(static_cast<long>(l) - mid) * dp
                     : p0 + static_cast<double>(l) * dp;
  g.W.resize(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(np));
  for (std::size_t k = 0; k < nx; ++k)
    for (std::size_t l = 0; l < np; ++l) {
      double v = 0.0;
      if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error("truncated Wigner binary payload");
      g.W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
    }
  return g;
}

}  // namespace rabi
