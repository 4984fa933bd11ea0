#include "rabi/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rabi {

Parity parity_from_int(int v) {
  switch (v) {
    case -1: return Parity::negative;
    case 0: return Parity::crossing;
    case 1: return Parity::positive;
    default: throw std::invalid_argument("parity must be -1, 0 or 1");
  }
}

namespace {

// One orthonormal eigenvector of P: up to two nonzero entries.
struct SectorVector {
  Eigen::Index i = 0;
  Eigen::Index j = -1;  // -1 when the vector is a single basis vector
  double ci = 1.0;
  double cj = 0.0;
};

// Splits a symmetric signed-permutation involution into its +1 and -1
// eigenspaces.
std::array<std::vector<SectorVector>, 2> parity_sectors(const Eigen::MatrixXd& P) {
  const Eigen::Index dim = P.rows();
  std::array<std::vector<SectorVector>, 2> sectors;  // [0]: +1, [1]: -1
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index j = 0;
    P.col(i).cwiseAbs().maxCoeff(&j);
    const double s = P(j, i);
    if (std::abs(std::abs(s) - 1.0) > 1e-12 || std::abs(P(i, j) - s) > 1e-12)
      throw std::invalid_argument("parity matrix is not a symmetric signed permutation");
    if (j == i) {
      sectors[s > 0 ? 0 : 1].push_back({i, -1, 1.0, 0.0});
    } else if (i < j) {
      const double r = 1.0 / std::sqrt(2.0);
      sectors[0].push_back({i, j, r, s * r});
      sectors[1].push_back({i, j, r, -s * r});
    }
  }
  return sectors;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& H, const std::vector<SectorVector>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd out(n, n);
  auto entry = [&](const SectorVector& a, const SectorVector& b) {
    double v = a.ci * b.ci * H(a.i, b.i);
    if (b.j >= 0) v += a.ci * b.cj * H(a.i, b.j);
    if (a.j >= 0) v += a.cj * b.ci * H(a.j, b.i);
    if (a.j >= 0 && b.j >= 0) v += a.cj * b.cj * H(a.j, b.j);
    return v;
  };
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = r; c < n; ++c) {
      const double v = entry(basis[r], basis[c]);
      out(r, c) = v;
      out(c, r) = v;
    }
  return out;
}

bool is_tridiagonal(const Eigen::MatrixXd& M) {
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    for (Eigen::Index r = c + 2; r < M.rows(); ++r)
      if (M(r, c) != 0.0) return false;
  return true;
}

struct SectorSolution {
  Eigen::VectorXd values;   // ascending, at most two
  Eigen::MatrixXd vectors;  // sector-basis columns
};

SectorSolution solve_sector(const Eigen::MatrixXd& Hs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (is_tridiagonal(Hs)) {
    Eigen::VectorXd diag = Hs.diagonal();
    Eigen::VectorXd sub = Hs.diagonal(-1);
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    es.compute(Hs, Eigen::ComputeEigenvectors);
  }
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const Eigen::Index k = std::min<Eigen::Index>(2, Hs.rows());
  return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

Eigen::VectorXd lift(const Eigen::VectorXd& v, const std::vector<SectorVector>& basis,
                     Eigen::Index dim) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out(basis[a].i) += basis[a].ci * v(a);
    if (basis[a].j >= 0) out(basis[a].j) += basis[a].cj * v(a);
  }
  return out;
}

}  // namespace

SpectralResult solve_lowest_two(const HamiltonianMatrix& H, const ParityMatrix& P) {
  if (H.dim() != P.dim() || H.H.rows() != H.H.cols())
    throw std::invalid_argument("Hamiltonian and parity dimensions disagree");
  if ((H.H - H.H.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("Hamiltonian is not symmetric");

  const auto sectors = parity_sectors(P.P);
  std::array<SectorSolution, 2> sol;
  for (int s = 0; s < 2; ++s) {
    if (sectors[s].empty()) continue;
    sol[s] = solve_sector(project(H.H, sectors[s]));
  }

  struct Level {
    double E;
    int sector;
    Eigen::Index col;
  };
  std::vector<Level> levels;
  for (int s = 0; s < 2; ++s)
    for (Eigen::Index c = 0; c < sol[s].values.size(); ++c)
      levels.push_back({sol[s].values(c), s, c});
  if (levels.size() < 2) throw NumericalError("fewer than two eigenvalues available");
  std::sort(levels.begin(), levels.end(),
            [](const Level& a, const Level& b) { return a.E < b.E; });

  SpectralResult r;
  r.cutoff_used = H.cutoff;
  r.E0 = levels[0].E;
  r.E1 = levels[1].E;
  r.gap = std::max(0.0, r.E1 - r.E0);

  const auto& g = levels[0];
  r.coeffs = lift(sol[g.sector].vectors.col(g.col), sectors[g.sector], H.dim());
  r.coeffs.normalize();
  Eigen::Index imax = 0;
  r.coeffs.cwiseAbs().maxCoeff(&imax);
  if (r.coeffs(imax) < 0.0) r.coeffs = -r.coeffs;

  r.parity_expectation = r.coeffs.dot(P.P * r.coeffs);
  if (r.gap < kDegenerateGap)
    r.parity = Parity::crossing;
  else
    r.parity = r.parity_expectation > 0.0 ? Parity::positive : Parity::negative;
  return r;
}

double tail_weight(const Eigen::VectorXd& coeffs, int cutoff) {
  double w = 0.0;
  for (int n = std::max(0, cutoff - 9); n <= cutoff; ++n)
    for (int spin : {+1, -1}) {
      const double c = coeffs(basis_index(n, spin, cutoff));
      w += c * c;
    }
  return w;
}

SpectralResult converge_cutoff(const ModelParams& params, const ConvergenceOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  params.validate();
  int N = std::min(cutoff_floor(params), opts.max_cutoff);
  const ParityMatrix P0 = build_parity(N);
  SpectralResult prev = solve_lowest_two(build_hamiltonian(params, N), P0);
  while (true) {
    const int N2 = 2 * N;
    if (N2 > opts.max_cutoff)
      throw NumericalError("cutoff ceiling " + std::to_string(opts.max_cutoff) +
                           " reached without convergence");
    SpectralResult cur = solve_lowest_two(build_hamiltonian(params, N2), build_parity(N2));
    if (std::abs(cur.E0 - prev.E0) < opts.tol &&
        tail_weight(cur.coeffs, N2) < opts.tail_tol) {
      cur.converged = true;
      return cur;
    }
    prev = std::move(cur);
    N = N2;
  }
}

}  // namespace rabi
