#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rabi/hermite.hpp"
#include "rabi/nonode.hpp"
#include "rabi/realspace.hpp"

using namespace rabi;

namespace {

std::vector<double> sample(const NodalState& s, const Grid& g) {
  std::vector<double> f;
  for (double x : g.x) f.push_back(s.value(x));
  return f;
}

}  // namespace

TEST_SUITE("nonode") {
  TEST_CASE("delta_rho examples") {
    CHECK(delta_rho(std::vector<double>{1.0}) == 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(delta_rho(std::vector<double>{r, r}) == doctest::Approx(1.0));
    CHECK(delta_rho(std::vector<double>{0.0, 0.6, 0.0, 0.8}) == 0.0);
    CHECK(delta_rho(std::vector<double>{0.6, 0.0, 0.8}) == 0.0);
  }

  TEST_CASE("delta_rho of an exact ground state matches direct summation") {
    const auto mp = params_from_scaled(0.5, 3.0);
    const auto c = plus_component_coeffs(converge_cutoff(mp));
    const double d = delta_rho(c);
    CHECK(d > 0.0);
    CHECK(d == doctest::Approx(oracle::delta_rho(c)).epsilon(1e-12));
  }

  TEST_CASE("round-off of the first excited state") {
    const auto g = Grid::symmetric(10.0, 0.005);
    std::vector<double> f;
    for (double x : g.x) f.push_back(oracle::hermite_function(1, x));
    const auto r = deform_round_off(g.x, f, 0.0, 0.01);
    for (double v : r.phi) CHECK(v > 0.0);
    std::vector<double> sq;
    for (double v : r.phi) sq.push_back(v * v);
    CHECK(integrate(sq, g.dx) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.k - std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25)) < 1e-4);
    CHECK(r.N_renorm == doctest::Approx(1.0 / std::sqrt(1.0 + 4.0 * r.k * r.k * 1e-6 / 3.0)));
    CHECK(std::abs(r.N_grid - r.N_renorm) < 1e-4);
    // Pure odd state: the overlap magnitude is unchanged to leading order.
    CHECK(std::abs(r.diff) < 1e-6);
  }

  TEST_CASE("grid renormalization tracks the closed form") {
    const auto s = shifted_two_level_state();
    for (double dx : {0.01, 0.005}) {
      const auto g = Grid::symmetric(12.0, dx);
      const auto r = deform_round_off(g.x, sample(s, g), 0.0, 0.2);
      CHECK(std::abs(r.N_grid - r.N_renorm) < 10.0 * dx * dx);
    }
  }

  TEST_CASE("grid independence of the tunneling change") {
    const auto s = shifted_two_level_state();
    const auto g1 = Grid::symmetric(12.0, 0.01), g2 = Grid::symmetric(12.0, 0.005);
    const auto a = deform_round_off(g1.x, sample(s, g1), 0.0, 0.2);
    const auto b = deform_round_off(g2.x, sample(s, g2), 0.0, 0.2);
    CHECK(a.diff < 0.0);
    CHECK(std::abs(a.diff - b.diff) < 0.01 * std::abs(b.diff));
  }

  TEST_CASE("cut interval must not reach another feature") {
    const auto g = Grid::symmetric(10.0, 0.01);
    std::vector<double> f;
    for (double x : g.x) f.push_back(oracle::hermite_function(3, x));
    CHECK_NOTHROW(deform_round_off(g.x, f, 0.0, 0.1));
    CHECK_THROWS_AS(deform_round_off(g.x, f, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(deform_round_off(g.x, f, 0.0, -0.1), std::invalid_argument);
  }

  TEST_CASE("tunneling energy conventions") {
    const auto g = Grid::symmetric(10.0, 0.01);
    std::vector<double> f;
    for (double x : g.x) f.push_back(oracle::gaussian_packet(1.0, 1.0, x));
    const double overlap = std::exp(-1.0);
    CHECK(tunneling_energy(g.x, f, 1.0) == doctest::Approx(-overlap).epsilon(1e-8));
    CHECK(tunneling_energy(g.x, f, 2.0, TunnelingConvention::half) == doctest::Approx(-overlap).epsilon(1e-8));
  }

  TEST_CASE("single-node test states") {
    for (double q4 : {0.25, 0.5}) {
      const auto s = single_node_state(q4);
      CHECK(std::abs(s.value(0.0)) < 1e-12);
      const auto g = Grid::symmetric(12.0, 0.01);
      CHECK(count_nodes(g.x, sample(s, g)).n_Z == 1);
    }
    CHECK_THROWS_AS(single_node_state(2.0), std::invalid_argument);
  }

  TEST_CASE("cubic law for a generic state") {
    const auto s = shifted_two_level_state();
    const auto res = scaling_experiment(s, log_spaced(std::pow(10.0, -2.5), 0.1, 12));
    CHECK(res.slope == doctest::Approx(3.0).epsilon(0.05 / 3.0));
    CHECK(res.prefactor_ratio == doctest::Approx(1.0).epsilon(0.05));
    CHECK(res.delta_rho == doctest::Approx(oracle::delta_rho(s.coeffs)).epsilon(1e-10));
    // A generic node carries a quadratic term, so the next order is eps^5.
    CHECK(res.residual_slope == doctest::Approx(5.0).epsilon(0.1));
    for (const auto& p : res.points) CHECK(p.diff < 0.0);
  }

  TEST_CASE("eps^6 correction for states linear through third order") {
    for (double q4 : {0.25, 0.5}) {
      const auto res = scaling_experiment(single_node_state(q4), log_spaced(std::pow(10.0, -2.5), 0.1, 12));
      CHECK(res.slope == doctest::Approx(3.0).epsilon(0.05 / 3.0));
      CHECK(res.prefactor == doctest::Approx(res.predicted_prefactor).epsilon(0.05));
      CHECK(res.residual_slope == doctest::Approx(6.0).epsilon(0.5 / 6.0));
    }
  }

  TEST_CASE("scaling experiment preconditions") {
    const auto s = shifted_two_level_state();
    CHECK_THROWS_AS(scaling_experiment(s, log_spaced(1e-2, 1e-1, 8)), std::invalid_argument);
    NodalState off{{0.6, 0.8}};
    CHECK_THROWS_AS(scaling_experiment(off, log_spaced(1e-3, 1e-1, 8)), std::invalid_argument);
    CHECK_THROWS_AS(scaling_experiment(NodalState{{0.0, 1.0}}, log_spaced(1e-3, 1e-1, 8)), NumericalError);
  }

  TEST_CASE("log helpers") {
    const auto e = log_spaced(1e-3, 1e-1, 3);
    CHECK(e[1] == doctest::Approx(1e-2));
    CHECK(log_log_slope({1.0, 2.0, 4.0}, {3.0, 24.0, 192.0}) == doctest::Approx(3.0));
  }
}
