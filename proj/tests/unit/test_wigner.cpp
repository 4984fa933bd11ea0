#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rabi/wigner.hpp"

using namespace rabi;

namespace {

WaveProfile profile_from(const std::function<double(double)>& f, double L = 10.0, double dx = 0.01) {
  WaveProfile p;
  p.grid = Grid::symmetric(L, dx);
  for (double x : p.grid.x) p.psi_plus.push_back(f(x));
  p.psi_minus = p.psi_plus;
  return p;
}

}  // namespace

TEST_SUITE("wigner") {
  TEST_CASE("vacuum Wigner function") {
    const auto prof = profile_from([](double x) { return oracle::gaussian_packet(1.0, 0.0, x); });
    const auto W = wigner_numeric(prof);
    CHECK(W.mass() == doctest::Approx(1.0).epsilon(1e-6));
    const auto l0 = W.zero_momentum_index();
    CHECK(W.pgrid[l0] == 0.0);
    CHECK(W.dp() <= kDefaultDp);
    for (std::size_t k = 0; k < W.xgrid.size(); k += 111)
      for (std::size_t l = 0; l < W.pgrid.size(); l += 37) {
        const double x = W.xgrid[k], p = W.pgrid[l];
        CHECK(W.W(k, l) == doctest::Approx(std::exp(-x * x - p * p) / std::numbers::pi).scale(1.0).epsilon(1e-10));
      }
  }

  TEST_CASE("first excited state matches direct quadrature and is negative at the origin") {
    auto f = [](double x) { return oracle::hermite_function(1, x); };
    const auto W = wigner_numeric(profile_from(f));
    const auto l0 = W.zero_momentum_index();
    const std::size_t mid = W.xgrid.size() / 2;
    CHECK(W.W(mid, l0) == doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-8));
    for (std::size_t k : {mid - 150, mid + 40, mid + 220})
      for (std::size_t l : {l0, l0 + 20, l0 + 61}) CHECK(W.W(k, l) == doctest::Approx(oracle::wigner_point(f, W.xgrid[k], W.pgrid[l])).scale(1.0).epsilon(1e-8));
    const auto iv = central_negative_scan(W);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].lo == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(2e-2));
    CHECK(iv[0].hi == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(2e-2));
  }

  TEST_CASE("x marginal reproduces the density") {
    const auto set = PolaronSet::from({{1.0, -2.0, 0.9}, {-0.3, 1.5, 1.2}});
    const auto g = Grid::symmetric(10.0, 0.01);
    const auto psi = polaron_wavefunction(set, g.x);
    WaveProfile prof;
    prof.grid = g;
    prof.psi_plus = psi;
    prof.psi_minus = psi;
    const auto W = wigner_numeric(prof, 8.0);
    for (std::size_t k = 0; k < W.xgrid.size(); k += 53) {
      double m = 0.0;
      for (Eigen::Index l = 0; l < W.W.cols(); ++l) m += W.W(k, l) * W.dp();
      CHECK(m == doctest::Approx(psi[k] * psi[k]).scale(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("component selection") {
    WaveProfile prof = profile_from([](double x) { return oracle::gaussian_packet(1.0, -1.0, x); });
    for (std::size_t i = 0; i < prof.psi_minus.size(); ++i) prof.psi_minus[i] = prof.psi_plus[prof.psi_plus.size() - 1 - i];
    const auto Wp = wigner_numeric(prof, 6.0, 0.02, WignerComponent::plus);
    const auto Ws = wigner_numeric(prof, 6.0, 0.02, WignerComponent::spin_summed);
    const auto l0 = Wp.zero_momentum_index();
    const std::size_t k = Wp.xgrid.size() / 2 - 100;  // x = -1
    CHECK(Wp.W(k, l0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-8));
    CHECK(Ws.W(k, l0) == doctest::Approx(0.5 / std::numbers::pi * (1.0 + std::exp(-4.0))).epsilon(1e-6));
  }

  TEST_CASE("clipped window is reported") {
    const auto prof = profile_from([](double x) { return oracle::gaussian_packet(1.0, 3.5, x); }, 4.0);
    CHECK_THROWS_AS(wigner_numeric(prof), NumericalError);
    CHECK_THROWS_AS(wigner_numeric(prof, -1.0), std::invalid_argument);
  }

  TEST_CASE("analytic polaron terms") {
    const auto set = PolaronSet::from({{1.0, -2.0, 1.0}, {0.4, 2.0, 1.0}});
    std::vector<double> xs{-2.0, 0.0, 2.0}, ps{0.0, 0.5};
    const auto W = wigner_polaron(set, xs, ps);
    REQUIRE(W.terms.size() == 3);
    const double Np2 = set.N_p * set.N_p;
    CHECK(W.terms[0].W(0, 0) == doctest::Approx(Np2 / std::numbers::pi));
    // Equal widths: the cross term is a Gaussian at the midpoint with fringes cos(p (x_j - x_i)).
    CHECK(W.terms[1].W(1, 1) == doctest::Approx(Np2 * 0.4 / std::numbers::pi * std::exp(-0.25) * std::cos(0.5 * 4.0)));
  }

  TEST_CASE("fringe period and curvature") {
    const Polaron a{1.0, -2.0, 0.9}, b{0.2, 2.0, 1.3};
    const auto f = fringe_analytics(a, b);
    CHECK(f.T_p == doctest::Approx(2.0 * std::numbers::pi / 4.0));
    CHECK(f.K == doctest::Approx(2.0 * (0.9 - 1.3) / (2.2 * 4.0)));
    CHECK(f.x_ij == doctest::Approx(0.0).scale(1.0));
    CHECK(fringe_analytics({1.0, 0.0, 1.0}, {1.0, 3.0, 1.0}).K == 0.0);
    CHECK_THROWS_AS(fringe_analytics(a, a), std::invalid_argument);
  }

  TEST_CASE("analytic and numeric Wigner agree for a polaron state") {
    const auto set = PolaronSet::from({{1.0, -2.4, 0.95}, {0.1, 1.9, 0.8}, {-0.03, 3.6, 1.3}});
    const auto g = Grid::symmetric(11.0, 0.01);
    WaveProfile prof;
    prof.grid = g;
    prof.psi_plus = polaron_wavefunction(set, g.x);
    prof.psi_minus = prof.psi_plus;
    const auto Wn = wigner_numeric(prof, 6.0, 0.02, WignerComponent::plus);
    const auto Wa = wigner_polaron(set, Wn.xgrid, Wn.pgrid);
    const double rms = std::sqrt((Wn.W - Wa.W).squaredNorm() / static_cast<double>(Wn.W.size()));
    CHECK(rms < 1e-6);
  }

  TEST_CASE("CSV and binary output") {
    const auto prof = profile_from([](double x) { return oracle::gaussian_packet(1.0, 0.0, x); }, 6.0, 0.05);
    const auto W = wigner_numeric(prof, 6.0, 0.1);
    std::stringstream csv;
    write_wigner_csv(W, csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,p,W");
    std::stringstream bin;
    write_wigner_binary(W, R"({"lambda": 1.0})", bin);
    const auto back = read_wigner_binary(bin);
    CHECK(back.xgrid.size() == W.xgrid.size());
    CHECK(back.pgrid.size() == W.pgrid.size());
    CHECK((back.W - W.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.pgrid[back.zero_momentum_index()] == 0.0);
    std::stringstream bad("{\"format\": \"other\"}\n");
    CHECK_THROWS(read_wigner_binary(bad));
  }
}
