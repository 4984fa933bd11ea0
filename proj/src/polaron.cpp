#include "rabi/polaron.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include <unsupported/Eigen/LevenbergMarquardt>

namespace rabi {

double polaron_value(double xi, double x_c, double x) {
  const double d = x - x_c;
  return std::exp(-0.5 * xi * d * d) * std::pow(xi / std::numbers::pi, 0.25);
}

double polaron_overlap(const Polaron& a, const Polaron& b) {
  const double xij = 0.5 * (a.xi + b.xi);
  const double prod = a.xi * b.xi;
  const double half = 0.5 * (a.x_c - b.x_c);
  return std::pow(prod / (xij * xij), 0.25) * std::exp(-(prod / xij) * half * half);
}

void PolaronSet::finalize() {
  if (polarons.empty()) throw std::invalid_argument("polaron set is empty");
  for (const auto& p : polarons)
    if (!(p.xi > 0.0)) throw std::invalid_argument("polaron xi must be positive");
  std::stable_sort(polarons.begin(), polarons.end(),
                   [](const Polaron& a, const Polaron& b) { return a.x_c < b.x_c; });
  const auto n = static_cast<Eigen::Index>(polarons.size());
  S.resize(n, n);
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      S(i, j) = polaron_overlap(polarons[i], polarons[j]);
      norm2 += polarons[i].w * polarons[j].w * S(i, j);
    }
  double wscale = 0.0;
  for (const auto& p : polarons) wscale += p.w * p.w;
  if (!(norm2 > 1e-14 * std::max(wscale, 1e-300)))
    throw NumericalError("polaron superposition has zero norm; N_p undefined");
  N_p = 1.0 / std::sqrt(norm2);
}

PolaronSet PolaronSet::from(std::vector<Polaron> polarons) {
  PolaronSet s;
  s.polarons = std::move(polarons);
  s.finalize();
  return s;
}

std::vector<double> polaron_wavefunction(const PolaronSet& set, const std::vector<double>& xgrid) {
  std::vector<double> out(xgrid.size(), 0.0);
  for (std::size_t k = 0; k < xgrid.size(); ++k) {
    double v = 0.0;
    for (const auto& p : set.polarons) v += p.w * polaron_value(p.xi, p.x_c, xgrid[k]);
    out[k] = set.N_p * v;
  }
  return out;
}

int weight_sign_changes(const PolaronSet& set) {
  int changes = 0;
  for (std::size_t i = 1; i < set.polarons.size(); ++i)
    if ((set.polarons[i].w > 0.0) != (set.polarons[i - 1].w > 0.0)) ++changes;
  return changes;
}

namespace {

struct Seed {
  double x;
  double value;
};

// Local extrema above the fraction threshold, plus the largest sample of every
// significant node-delimited lobe that would otherwise go unseeded.
std::vector<Seed> find_seeds(const std::vector<double>& x, const std::vector<double>& psi,
                             const FitOptions& opts) {
  double amax = 0.0;
  for (double v : psi) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) throw NumericalError("cannot fit an identically zero profile");

  std::vector<Seed> seeds;
  for (std::size_t k = 1; k + 1 < psi.size(); ++k) {
    const double a = std::abs(psi[k]);
    if (a > std::abs(psi[k - 1]) && a >= std::abs(psi[k + 1]) &&
        a > opts.extremum_fraction * amax)
      seeds.push_back({x[k], psi[k]});
  }

  const double thr = kDefaultNodeThreshold * amax;
  std::size_t k = 0;
  while (k < psi.size()) {
    const int s = (psi[k] > 0.0) - (psi[k] < 0.0);
    std::size_t end = k;
    std::size_t best = k;
    while (end < psi.size() && ((psi[end] > 0.0) - (psi[end] < 0.0)) == s) {
      if (std::abs(psi[end]) > std::abs(psi[best])) best = end;
      ++end;
    }
    if (s != 0 && std::abs(psi[best]) > thr) {
      const double lo = x[k], hi = x[end - 1];
      const bool seeded = std::any_of(seeds.begin(), seeds.end(),
                                      [&](const Seed& sd) { return sd.x >= lo && sd.x <= hi; });
      if (!seeded) seeds.push_back({x[best], psi[best]});
    }
    k = std::max(end, k + 1);
  }

  if (static_cast<int>(seeds.size()) > opts.max_polarons) {
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
      return std::abs(a.value) > std::abs(b.value);
    });
    seeds.resize(opts.max_polarons);
  }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.x < b.x; });
  return seeds;
}

// Parameters per polaron: amplitude a, center x, s = ln xi.
struct GaussianSumFunctor : Eigen::DenseFunctor<double> {
  const std::vector<double>& xs;
  const std::vector<double>& ys;
  double weight;

  GaussianSumFunctor(int n_params, const std::vector<double>& x, const std::vector<double>& y,
                     double w)
      : Eigen::DenseFunctor<double>(n_params, static_cast<int>(x.size())), xs(x), ys(y), weight(w) {}

  int operator()(const InputType& p, ValueType& f) const {
    const int np = inputs() / 3;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      double m = 0.0;
      for (int i = 0; i < np; ++i)
        m += p(3 * i) * polaron_value(std::exp(p(3 * i + 2)), p(3 * i + 1), xs[k]);
      f(static_cast<Eigen::Index>(k)) = weight * (m - ys[k]);
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& J) const {
    const int np = inputs() / 3;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      for (int i = 0; i < np; ++i) {
        const double a = p(3 * i);
        const double xc = p(3 * i + 1);
        const double xi = std::exp(p(3 * i + 2));
        const double d = xs[k] - xc;
        const double phi = polaron_value(xi, xc, xs[k]);
        J(r, 3 * i) = weight * phi;
        J(r, 3 * i + 1) = weight * a * phi * xi * d;
        J(r, 3 * i + 2) = weight * a * phi * (0.25 - 0.5 * xi * d * d);
      }
    }
    return 0;
  }
};

Eigen::VectorXd run_lm(const std::vector<double>& xs, const std::vector<double>& ys, double w,
                       Eigen::VectorXd p0, int max_evals) {
  GaussianSumFunctor f(static_cast<int>(p0.size()), xs, ys, w);
  Eigen::LevenbergMarquardt<GaussianSumFunctor> lm(f);
  lm.setMaxfev(max_evals);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setGtol(1e-14);
  const auto status = lm.minimize(p0);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters)
    throw NumericalError("polaron fit: improper input parameters");
  if (status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation)
    throw NumericalError("polaron fit did not converge within the evaluation budget");
  for (Eigen::Index i = 0; i < p0.size(); ++i)
    if (!std::isfinite(p0(i))) throw NumericalError("polaron fit diverged");
  return p0;
}

}  // namespace

int auto_polaron_count(const std::vector<double>& x, const std::vector<double>& psi,
                       const FitOptions& opts) {
  return std::clamp(static_cast<int>(find_seeds(x, psi, opts).size()), 1, opts.max_polarons);
}

PolaronSet fit_polarons(const std::vector<double>& x, const std::vector<double>& psi,
                        const FitOptions& opts) {
  if (x.size() != psi.size() || x.size() < 8)
    throw std::invalid_argument("fit needs matching grid and samples");
  auto seeds = find_seeds(x, psi, opts);
  if (opts.n_p > 0) {
    const int want = std::min(opts.n_p, opts.max_polarons);
    if (static_cast<int>(seeds.size()) > want) {
      std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        return std::abs(a.value) > std::abs(b.value);
      });
      seeds.resize(want);
      std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.x < b.x; });
    }
    // Too few extrema: add seeds midway between the outermost ones.
    while (static_cast<int>(seeds.size()) < want) {
      const double xc = seeds.empty() ? 0.0 : seeds.back().x + 1.0;
      seeds.push_back({xc, 0.0});
    }
  }

  // Subsample to at most ~1500 residuals; the integrand is smooth at this scale.
  const std::size_t stride = std::max<std::size_t>(1, x.size() / 1500);
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < x.size(); k += stride) {
    xs.push_back(x[k]);
    ys.push_back(psi[k]);
  }
  const double dx_eff = (x[1] - x[0]) * static_cast<double>(stride);
  const double w = std::sqrt(dx_eff);

  std::vector<Polaron> fitted;
  while (true) {
    Eigen::VectorXd p(3 * seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      p(3 * i) = seeds[i].value * std::pow(std::numbers::pi, 0.25);
      p(3 * i + 1) = seeds[i].x;
      p(3 * i + 2) = 0.0;
    }
    p = run_lm(xs, ys, w, p, opts.max_evaluations);
    fitted.clear();
    for (std::size_t i = 0; i < seeds.size(); ++i)
      fitted.push_back({p(3 * i), p(3 * i + 1), std::exp(p(3 * i + 2))});
    std::sort(fitted.begin(), fitted.end(),
              [](const Polaron& a, const Polaron& b) { return a.x_c < b.x_c; });

    // Collapse polarons whose centers coincide and refit.
    bool merged = false;
    std::vector<Seed> next;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
      if (!next.empty() && std::abs(fitted[i].x_c - next.back().x) < opts.merge_distance) {
        next.back().value += fitted[i].w / std::pow(std::numbers::pi, 0.25);
        merged = true;
      } else {
        next.push_back({fitted[i].x_c, fitted[i].w / std::pow(std::numbers::pi, 0.25)});
      }
    }
    if (!merged) break;
    seeds = std::move(next);
  }

  // Gauge: leftmost weight is +1.
  const double w1 = fitted.front().w;
  if (w1 == 0.0) throw NumericalError("leftmost polaron has zero weight");
  const double sign = w1 > 0.0 ? 1.0 : -1.0;
  for (auto& pol : fitted) pol.w /= w1;
  PolaronSet set = PolaronSet::from(std::move(fitted));

  const auto model = polaron_wavefunction(set, x);
  std::vector<double> diff2(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = sign * psi[k] - model[k];
    diff2[k] = d * d;
  }
  set.residual = std::sqrt(integrate(diff2, x[1] - x[0]));
  return set;
}

PolaronSet fit_polarons(const WaveProfile& profile, const FitOptions& opts) {
  return fit_polarons(profile.grid.x, profile.psi_plus, opts);
}

std::string default_reference_polaron_path() {
  return std::string(RABI_ATLAS_DATA_DIR) + "/reference_polarons.json";
}

std::vector<ReferencePolarons> load_reference_polarons(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polaron reference file: " + path);
  const auto doc = nlohmann::json::parse(in);
  std::vector<ReferencePolarons> out;
  for (const auto& e : doc.at("sets")) {
    ReferencePolarons r;
    r.label = e.at("label").get<std::string>();
    r.lambda = e.at("lambda").get<double>();
    r.g_over_gs = e.at("g_over_gs").get<double>();
    r.n_Z = e.at("n_Z").get<int>();
    r.parity = e.at("parity").get<int>();
    std::vector<Polaron> ps;
    for (const auto& p : e.at("polarons"))
      ps.push_back({p.at("w").get<double>(), p.at("x").get<double>(), p.at("xi").get<double>()});
    r.set = PolaronSet::from(std::move(ps));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rabi
