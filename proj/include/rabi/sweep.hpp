#pragma once

#include <string>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/spectra.hpp"

namespace rabi {

/// steps values from min to max inclusive. Symmetric ranges produce exactly
/// mirrored values (and an exact zero for odd step counts).
struct AxisRange {
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  double at(int i) const;
  std::vector<double> values() const;
  double cell() const { return (max - min) / (steps - 1); }
};

struct SweepSpec {
  AxisRange lambda{-2.0, 2.0, 41};
  AxisRange g_over_gs{0.0, 3.0, 31};
  double omega = 0.5;
  double Omega = 1.0;
  bool nodes = true;
  bool squeezing = true;
  bool observables = true;
  ConvergenceOptions convergence{};

  /// Throws std::invalid_argument on steps < 2, non-finite or inverted
  /// ranges, or invalid model parameters.
  void validate() const;
  std::size_t size() const {
    return static_cast<std::size_t>(lambda.steps) * static_cast<std::size_t>(g_over_gs.steps);
  }
};

/// One grid point. Analyses that were switched off, and every field of a
/// failed point, hold NaN (n_Z = -1 for integers); `error` carries the message.
struct SweepRecord {
  double lambda = 0.0;
  double g_over_gs = 0.0;
  double E0 = 0.0;
  double E1 = 0.0;
  double gap = 0.0;
  int parity = 0;
  int n_Z = -1;
  double xi = 0.0;
  double delta_p = 0.0;
  double adagger2 = 0.0;
  double AP = 0.0;
  int cutoff = 0;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Full analysis of a single point with the toggles of `spec`.
SweepRecord compute_point(const SweepSpec& spec, double lambda, double g_over_gs);

/// Row-major records (lambda outer, g inner). Points run on up to `threads`
/// workers; 0 means min(hardware threads, RABI_ATLAS_THREADS when set).
/// The output does not depend on the thread count.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Worker count used when run_sweep is called with threads = 0.
unsigned default_thread_count();

/// Nearest-neighbour pair of grid points by flat record index, a < b.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  bool operator==(const Edge&) const = default;
};

struct ParityFlip {
  Edge edge;
  double min_gap = 0.0;      // smallest gap seen on the edge, endpoints included
  double lambda_star = 0.0;  // refined crossing location
  double g_star = 0.0;
};

struct BoundarySet {
  std::vector<ParityFlip> parity_flips;
  std::vector<Edge> nz_jumps;
  std::vector<Edge> unconventional;  // n_Z jump, same parity, gap open on both sides
  std::vector<Edge> as_ps;           // sign(xi - 1) changes
  std::vector<Edge> gap_minima;      // min gap on the edge below gap_threshold
};

struct BoundaryOptions {
  double gap_threshold = 1e-3;
  double open_gap = 1e-4;
  bool refine = true;       // locate parity crossings by bisection
  int refine_iterations = 48;
};

/// Edge-based boundary detection on a complete row-major grid. Refinement
/// re-solves the spectrum at the larger of the two endpoint cutoffs. Throws
/// std::invalid_argument when the records do not match the spec grid.
BoundarySet extract_boundaries(const std::vector<SweepRecord>& records, const SweepSpec& spec,
                               const BoundaryOptions& opts = {});

struct CrossingEstimate {
  double lambda = 0.0;
  double g_over_gs = 0.0;
  double min_gap = 0.0;
};

/// Bisects the segment between two points of opposite ground-state parity.
CrossingEstimate refine_parity_edge(const SweepSpec& spec, const SweepRecord& a,
                                    const SweepRecord& b, const BoundaryOptions& opts = {});

/// Grid coordinates (lambda index, g index) of a flat record index.
struct GridIndex {
  int il = 0;
  int ig = 0;
};
GridIndex grid_index(const SweepSpec& spec, std::size_t flat);

/// Parity flips not matched by an n_Z jump or gap-minimum edge within one cell.
std::vector<Edge> unexplained_parity_flips(const BoundarySet& set, const SweepSpec& spec);

}  // namespace rabi
