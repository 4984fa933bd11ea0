#include "rabi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rabi/realspace.hpp"
#include "rabi/squeezing.hpp"

namespace rabi {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double AxisRange::at(int i) const {
  if (i == 0) return min;
  if (i == steps - 1) return max;
  // Weighted form keeps symmetric ranges exactly mirrored.
  const double n = steps - 1;
  return (min * (n - i) + max * i) / n;
}

std::vector<double> AxisRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) v[i] = at(i);
  return v;
}

void SweepSpec::validate() const {
  for (const AxisRange* r : {&lambda, &g_over_gs}) {
    if (r->steps < 2) throw std::invalid_argument("sweep axes need at least 2 steps");
    if (!std::isfinite(r->min) || !std::isfinite(r->max) || !(r->max > r->min))
      throw std::invalid_argument("sweep ranges must be finite with max > min");
  }
  if (g_over_gs.min < 0.0) throw std::invalid_argument("g must be non-negative");
  ModelParams{omega, Omega, 0.0, 0.0}.validate();
  if (!(convergence.tol > 0.0) || !(convergence.tail_tol > 0.0) || convergence.max_cutoff < 2)
    throw std::invalid_argument("invalid convergence options");
}

SweepRecord compute_point(const SweepSpec& spec, double lambda, double g_over_gs) {
  SweepRecord rec;
  rec.lambda = lambda;
  rec.g_over_gs = g_over_gs;
  rec.xi = rec.delta_p = rec.adagger2 = rec.AP = kNaN;
  try {
    const ModelParams mp = params_from_scaled(lambda, g_over_gs, spec.omega, spec.Omega);
    const SpectralResult r = converge_cutoff(mp, spec.convergence);
    rec.E0 = r.E0;
    rec.E1 = r.E1;
    rec.gap = r.gap;
    rec.parity = to_int(r.parity);
    rec.cutoff = r.cutoff_used;
    if (spec.nodes || spec.squeezing) {
      const WaveProfile prof = wavefunction(r, mp);
      if (spec.nodes) rec.n_Z = topological_node_count(mp, prof, spec.convergence);
      if (spec.observables || spec.squeezing) {
        const QuadratureObservables obs = observables(r, mp);
        if (spec.observables) {
          rec.adagger2 = obs.adagger2;
          rec.AP = obs.A * rec.parity;
        }
        if (spec.squeezing) {
          const SqueezeReport sq = squeeze_report(prof, obs);
          rec.xi = sq.xi;
          rec.delta_p = sq.delta_p;
        }
      }
    } else if (spec.observables) {
      const QuadratureObservables obs = observables(r, mp);
      rec.adagger2 = obs.adagger2;
      rec.AP = obs.A * rec.parity;
    }
  } catch (const std::exception& e) {
    SweepRecord failed;
    failed.lambda = lambda;
    failed.g_over_gs = g_over_gs;
    failed.E0 = failed.E1 = failed.gap = failed.xi = failed.delta_p = failed.adagger2 =
        failed.AP = kNaN;
    failed.error = e.what();
    if (failed.error.empty()) failed.error = "unknown failure";
    return failed;
  }
  return rec;
}

unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RABI_ATLAS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::size_t total = spec.size();
  const int ng = spec.g_over_gs.steps;
  std::vector<SweepRecord> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const int il = static_cast<int>(i / ng), ig = static_cast<int>(i % ng);
      out[i] = compute_point(spec, spec.lambda.at(il), spec.g_over_gs.at(ig));
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

GridIndex grid_index(const SweepSpec& spec, std::size_t flat) {
  const auto ng = static_cast<std::size_t>(spec.g_over_gs.steps);
  return {static_cast<int>(flat / ng), static_cast<int>(flat % ng)};
}

namespace {

SpectralResult solve_at(const SweepSpec& spec, double lambda, double g_over_gs, int cutoff) {
  const ModelParams mp = params_from_scaled(lambda, g_over_gs, spec.omega, spec.Omega);
  return solve_lowest_two(build_hamiltonian(mp, cutoff), build_parity(cutoff));
}

int xi_side(double xi) {
  if (!std::isfinite(xi)) return 0;
  return xi > 1.0 ? 1 : (xi < 1.0 ? -1 : 0);
}

}  // namespace

CrossingEstimate refine_parity_edge(const SweepSpec& spec, const SweepRecord& a,
                                    const SweepRecord& b, const BoundaryOptions& opts) {
  CrossingEstimate est;
  est.min_gap = std::min(a.gap, b.gap);
  est.lambda = 0.5 * (a.lambda + b.lambda);
  est.g_over_gs = 0.5 * (a.g_over_gs + b.g_over_gs);
  if (a.parity == 0 || b.parity == 0 || a.parity == b.parity) {
    const SweepRecord& at = a.gap <= b.gap ? a : b;
    est.lambda = at.lambda;
    est.g_over_gs = at.g_over_gs;
    return est;
  }
  const int cutoff = std::max({a.cutoff, b.cutoff, 2});
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < opts.refine_iterations; ++it) {
    const double t = 0.5 * (lo + hi);
    const double l = a.lambda + t * (b.lambda - a.lambda);
    const double g = a.g_over_gs + t * (b.g_over_gs - a.g_over_gs);
    const SpectralResult r = solve_at(spec, l, g, cutoff);
    est.lambda = l;
    est.g_over_gs = g;
    est.min_gap = std::min(est.min_gap, r.gap);
    const int p = to_int(r.parity);
    if (p == 0) break;
    if (p == a.parity) lo = t;
    else hi = t;
  }
  return est;
}

BoundarySet extract_boundaries(const std::vector<SweepRecord>& records, const SweepSpec& spec,
                               const BoundaryOptions& opts) {
  spec.validate();
  if (records.size() != spec.size())
    throw std::invalid_argument("incomplete grid: expected " + std::to_string(spec.size()) +
                                " records, got " + std::to_string(records.size()));
  const int nl = spec.lambda.steps, ng = spec.g_over_gs.steps;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto [il, ig] = grid_index(spec, i);
    const double tl = 1e-9 * std::max(1.0, std::abs(spec.lambda.cell()));
    const double tg = 1e-9 * std::max(1.0, std::abs(spec.g_over_gs.cell()));
    if (std::abs(records[i].lambda - spec.lambda.at(il)) > tl ||
        std::abs(records[i].g_over_gs - spec.g_over_gs.at(ig)) > tg)
      throw std::invalid_argument("record " + std::to_string(i) + " is off the spec grid");
  }

  std::vector<Edge> edges;
  edges.reserve(2 * records.size());
  for (int il = 0; il < nl; ++il)
    for (int ig = 0; ig < ng; ++ig) {
      const std::size_t i = static_cast<std::size_t>(il) * ng + ig;
      if (ig + 1 < ng) edges.push_back({i, i + 1});
      if (il + 1 < nl) edges.push_back({i, i + static_cast<std::size_t>(ng)});
    }

  BoundarySet out;
  for (const Edge& e : edges) {
    const SweepRecord& A = records[e.a];
    const SweepRecord& B = records[e.b];
    if (!A.ok() || !B.ok()) continue;
    double min_gap = std::min(A.gap, B.gap);

    if (A.parity != B.parity) {
      ParityFlip flip{e, min_gap, 0.5 * (A.lambda + B.lambda), 0.5 * (A.g_over_gs + B.g_over_gs)};
      if (opts.refine) {
        const CrossingEstimate c = refine_parity_edge(spec, A, B, opts);
        flip.min_gap = c.min_gap;
        flip.lambda_star = c.lambda;
        flip.g_star = c.g_over_gs;
      }
      min_gap = std::min(min_gap, flip.min_gap);
      out.parity_flips.push_back(flip);
    }
    const bool nz_known = A.n_Z >= 0 && B.n_Z >= 0;
    if (nz_known && A.n_Z != B.n_Z) {
      out.nz_jumps.push_back(e);
      if (A.parity == B.parity && A.parity != 0 && A.gap > opts.open_gap && B.gap > opts.open_gap)
        out.unconventional.push_back(e);
    }
    const int sa = xi_side(A.xi), sb = xi_side(B.xi);
    if (sa != 0 && sb != 0 && sa != sb) out.as_ps.push_back(e);
    if (min_gap < opts.gap_threshold) out.gap_minima.push_back(e);
  }
  return out;
}

std::vector<Edge> unexplained_parity_flips(const BoundarySet& set, const SweepSpec& spec) {
  auto near = [&](const Edge& x, const Edge& y) {
    for (std::size_t p : {x.a, x.b})
      for (std::size_t q : {y.a, y.b}) {
        const GridIndex u = grid_index(spec, p), v = grid_index(spec, q);
        if (std::abs(u.il - v.il) <= 1 && std::abs(u.ig - v.ig) <= 1) return true;
      }
    return false;
  };
  std::vector<Edge> out;
  for (const ParityFlip& f : set.parity_flips) {
    const bool explained =
        std::any_of(set.nz_jumps.begin(), set.nz_jumps.end(), [&](const Edge& e) { return near(f.edge, e); }) ||
        std::any_of(set.gap_minima.begin(), set.gap_minima.end(),
                    [&](const Edge& e) { return near(f.edge, e); });
    if (!explained) out.push_back(f.edge);
  }
  return out;
}

}  // namespace rabi
