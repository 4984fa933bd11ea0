#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rabi/realspace.hpp"

using namespace rabi;

namespace {
double norm2(const std::vector<double>& f, double dx) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return integrate(sq, dx);
}
}  // namespace

TEST_SUITE("realspace") {
  TEST_CASE("symmetric grid") {
    const auto g = Grid::symmetric(2.0, 0.5);
    REQUIRE(g.size() == 9);
    CHECK(g.x.front() == -2.0);
    CHECK(g.x[4] == 0.0);
    CHECK(g.x.back() == 2.0);
  }

  TEST_CASE("components are normalized and mirror each other") {
    for (auto [lam, gg] : {std::pair{1.0, 2.5}, {0.5, 3.0}, {2.5, 1.8}, {-0.6, 1.4}}) {
      const auto mp = params_from_scaled(lam, gg);
      const auto r = converge_cutoff(mp);
      const auto prof = wavefunction(r, mp);
      const double dx = prof.grid.dx;
      CHECK(norm2(prof.psi_plus, dx) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(norm2(prof.psi_minus, dx) == doctest::Approx(1.0).epsilon(1e-8));
      const std::size_t n = prof.grid.size();
      const int P = to_int(r.parity);
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(prof.psi_minus[i] - P * prof.psi_plus[n - 1 - i]));
      CHECK(worst < 1e-10);
    }
  }

  TEST_CASE("decoupled ground state is a nodeless Gaussian") {
    const auto mp = params_from_scaled(0.0, 0.0);
    const auto prof = wavefunction(converge_cutoff(mp), mp);
    CHECK(prof.n_Z == 0);
    const std::size_t mid = prof.grid.size() / 2;
    CHECK(std::abs(prof.psi_plus[mid]) == doctest::Approx(std::pow(std::numbers::pi, -0.25)));
  }

  TEST_CASE("analytic derivative matches finite differences of the samples") {
    const auto mp = params_from_scaled(0.5, 3.0);
    const auto prof = wavefunction(converge_cutoff(mp), mp);
    const double dx = prof.grid.dx;
    for (std::size_t i = 100; i + 100 < prof.grid.size(); i += 97) {
      const double fd = (prof.psi_plus[i + 1] - prof.psi_plus[i - 1]) / (2 * dx);
      CHECK(prof.dpsi_plus[i] == doctest::Approx(fd).epsilon(1e-3).scale(1e-3));
    }
  }

  TEST_CASE("topological node number is mirror symmetric") {
    for (double lam : {0.5, 1.0, 2.5}) {
      const auto a = params_from_scaled(lam, 2.0);
      const auto b = params_from_scaled(-lam, 2.0);
      const auto pa = wavefunction(converge_cutoff(a), a);
      const auto pb = wavefunction(converge_cutoff(b), b);
      CHECK(topological_node_count(a, pa) == pa.n_Z);
      CHECK(topological_node_count(b, pb) == pa.n_Z);
    }
  }

  TEST_CASE("window shorter than the displacement scale is rejected") {
    const auto mp = params_from_scaled(1.0, 3.0);
    const auto r = converge_cutoff(mp);
    CHECK_THROWS_AS(wavefunction(r, mp, 4.0), std::invalid_argument);
  }

  TEST_CASE("node counting on Hermite functions") {
    const auto g = Grid::symmetric(10.0, 0.01);
    std::vector<double> f1, f2;
    for (double x : g.x) {
      f1.push_back(oracle::hermite_function(1, x));
      f2.push_back(oracle::hermite_function(2, x));
    }
    const auto n1 = count_nodes(g.x, f1);
    CHECK(n1.n_Z == 1);
    REQUIRE(n1.positions.size() == 1);
    CHECK(n1.positions[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    const auto n2 = count_nodes(g.x, f2);
    CHECK(n2.n_Z == 2);
    REQUIRE(n2.positions.size() == 2);
    CHECK(n2.positions[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(n2.positions[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
  }

  TEST_CASE("negligible lobes are not counted") {
    const auto g = Grid::symmetric(10.0, 0.01);
    std::vector<double> f;
    for (double x : g.x) f.push_back(oracle::gaussian_packet(1.0, -1.0, x) - 1e-9 * oracle::gaussian_packet(1.0, 5.0, x));
    CHECK(count_nodes(g.x, f).n_Z == 0);
    CHECK(count_nodes(g.x, f, 1e-12).n_Z == 1);
    std::vector<double> zero(g.size(), 0.0);
    CHECK(count_nodes(g.x, zero).n_Z == 0);
  }

  TEST_CASE("decoupled observables") {
    const auto mp = params_from_scaled(0.0, 0.0);
    const auto obs = observables(converge_cutoff(mp), mp);
    CHECK(obs.x2 == doctest::Approx(0.5));
    CHECK(obs.p2 == doctest::Approx(0.5));
    CHECK(obs.delta_p == doctest::Approx(0.5));
    CHECK(obs.adagger2 == doctest::Approx(0.0).scale(1.0));
    CHECK(obs.A == 0.0);
    CHECK(obs.A0 == 0.0);
  }

  TEST_CASE("observables obey their definitions") {
    const auto mp = params_from_scaled(1.0, 2.5);
    const auto obs = observables(converge_cutoff(mp), mp);
    CHECK(obs.adagger2 == doctest::Approx(0.5 * (obs.x2 - obs.p2)));
    const double A0 = std::pow((1.0 + 1.0) * mp.g / (2.0 * mp.omega), 2);
    CHECK(obs.A0 == doctest::Approx(A0));
    CHECK(obs.A == doctest::Approx(obs.adagger2 / A0));
    CHECK(std::abs(obs.p1) < 1e-12);
    CHECK(obs.delta_p == doctest::Approx(obs.p2 - obs.p1 * obs.p1));
  }

  TEST_CASE("energy decomposition sums to the ground-state energy") {
    for (auto [lam, gg] : {std::pair{1.0, 2.5}, {0.5, 3.0}, {2.5, 1.8}, {4.0, 1.2}, {-0.5, 1.5}, {0.0, 0.0}}) {
      const auto mp = params_from_scaled(lam, gg);
      const auto r = converge_cutoff(mp);
      const auto prof = wavefunction(r, mp);
      const auto e = energy_decomposition(r, mp, prof);
      CHECK(std::abs(e.total() - r.E0) < 1e-8);
      CHECK(e.kinetic > 0.0);
      CHECK(e.tunneling <= 0.0);
    }
  }

  TEST_CASE("plus-component coefficients reproduce psi_+") {
    const auto mp = params_from_scaled(0.5, 3.0);
    const auto r = converge_cutoff(mp);
    const auto prof = wavefunction(r, mp);
    const auto c = plus_component_coeffs(r);
    double s = 0.0;
    for (double v : c) s += v * v;
    CHECK(s == doctest::Approx(1.0));
  }

  TEST_CASE("trapezoid rule") {
    CHECK(integrate({1.0, 1.0, 1.0}, 0.5) == doctest::Approx(1.0));
    CHECK(integrate({0.0, 1.0, 2.0}, 1.0) == doctest::Approx(2.0));
  }
}
