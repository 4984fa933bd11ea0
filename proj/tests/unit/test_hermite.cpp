#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rabi/hermite.hpp"

using namespace rabi;

TEST_SUITE("hermite") {
  TEST_CASE("values match the explicit polynomial recurrence") {
    for (double x : {-4.0, -1.3, 0.0, 0.2, 2.5, 6.0}) {
      const auto v = hermite_functions(30, x);
      for (int n = 0; n <= 30; ++n) CHECK(v[n] == doctest::Approx(oracle::hermite_function(n, x)).epsilon(1e-10).scale(1e-12));
    }
  }

  TEST_CASE("large argument and order stay finite") {
    const auto v = hermite_functions(1200, 45.0);
    for (double e : v) CHECK(std::isfinite(e));
    const auto w = hermite_functions(50, 60.0);
    CHECK(w[0] == 0.0);
    CHECK(w[50] >= 0.0);
  }

  TEST_CASE("orthonormality on a grid") {
    const double dx = 0.01;
    std::vector<std::vector<double>> cols;
    for (double x = -15.0; x <= 15.0 + 1e-9; x += dx) cols.push_back(hermite_functions(8, x));
    for (int m = 0; m <= 8; ++m)
      for (int n = 0; n <= 8; ++n) {
        double s = 0.0;
        for (const auto& c : cols) s += c[m] * c[n] * dx;
        CHECK(s == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
      }
  }

  TEST_CASE("series derivative agrees with finite differences") {
    const std::vector<double> c{0.3, -0.5, 0.2, 0.1, -0.05, 0.02};
    for (double x : {-2.0, -0.4, 0.0, 1.1, 3.0}) {
      const double h = 1e-5;
      const double fd = (hermite_series(c, x + h) - hermite_series(c, x - h)) / (2 * h);
      CHECK(hermite_series_derivative(c, x) == doctest::Approx(fd).epsilon(1e-8));
      const auto both = hermite_series_with_derivative(c, x);
      CHECK(both.value == doctest::Approx(hermite_series(c, x)));
      CHECK(both.derivative == doctest::Approx(hermite_series_derivative(c, x)));
    }
  }

  TEST_CASE("first Hermite function slope at the origin") {
    const std::vector<double> c{0.0, 1.0};
    CHECK(hermite_series_derivative(c, 0.0) == doctest::Approx(std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25)));
  }

  TEST_CASE("projection recovers coefficients") {
    const std::vector<double> c{0.6, 0.0, -0.48, 0.64};
    std::vector<double> x, f;
    for (int i = -1500; i <= 1500; ++i) {
      x.push_back(i * 0.01);
      f.push_back(hermite_series(c, x.back()));
    }
    const auto p = project_onto_hermite(x, f, 6);
    for (int n = 0; n <= 6; ++n) CHECK(p[n] == doctest::Approx(n < 4 ? c[n] : 0.0).scale(1.0).epsilon(1e-12));
  }
}
