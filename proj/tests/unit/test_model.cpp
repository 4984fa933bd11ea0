#include <cmath>

#include "doctest.h"
#include "rabi/model.hpp"

using namespace rabi;

TEST_SUITE("model") {
  TEST_CASE("derived couplings on the isotropic line") {
    const auto d = derive_couplings({0.5, 1.0, 0.5, 1.0});
    CHECK(d.g_y == 0.0);
    CHECK(d.g_z == doctest::Approx(0.5));
    CHECK(d.gp_z == doctest::Approx(std::sqrt(2.0) * 0.5 / 0.5));
  }

  TEST_CASE("characteristic coupling") {
    CHECK(coupling_scale(0.5, 1.0) == doctest::Approx(0.353553).epsilon(1e-6));
    CHECK(derive_couplings({0.5, 1.0, 0.0, 0.0}).g_s == doctest::Approx(std::sqrt(0.5) / 2.0));
  }

  TEST_CASE("critical anisotropy at g = 2.2 g_s") {
    const auto mp = params_from_scaled(0.0, 2.2);
    const auto d = derive_couplings(mp);
    REQUIRE(d.lambda_T1.has_value());
    CHECK(*d.lambda_T1 == doctest::Approx(std::sqrt(1.0 - 4.0 / (2.2 * 2.2))));
    CHECK(*d.lambda_T1 == doctest::Approx(0.4166).epsilon(1e-3));
  }

  TEST_CASE("boundary formulas are flagged outside their domains") {
    CHECK_FALSE(derive_couplings(params_from_scaled(0.3, 1.9)).lambda_T1.has_value());
    CHECK(derive_couplings(params_from_scaled(0.3, 2.0)).lambda_T1.has_value());
    CHECK_FALSE(derive_couplings(params_from_scaled(1.0, 1.0)).g_T1.has_value());
    CHECK_FALSE(derive_couplings(params_from_scaled(-1.5, 1.0)).g_T1.has_value());
    const auto d = derive_couplings(params_from_scaled(0.6, 1.0));
    REQUIRE(d.g_T1.has_value());
    CHECK(*d.g_T1 == doctest::Approx(2.0 * d.g_s / std::sqrt(1.0 - 0.36)));
    CHECK(d.g_c_lambda == doctest::Approx(2.0 * d.g_s / 1.6));
  }

  TEST_CASE("coupling invariants") {
    for (double lam : {-2.0, -1.0, -0.3, 0.0, 0.7, 1.0, 3.0}) {
      const auto d = derive_couplings({0.5, 1.0, 0.8, lam});
      CHECK(d.g_y + d.g_z == doctest::Approx(0.8));
      if (lam == 1.0) CHECK(d.g_y == 0.0);
      if (lam == -1.0) CHECK(d.g_z == 0.0);
      if (lam == 0.0) CHECK(d.g_y == d.g_z);
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams({0.0, 1.0, 0.1, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams({0.5, -1.0, 0.1, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams({0.5, 1.0, -0.1, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams({0.5, 1.0, 0.1, NAN}).validate(), std::invalid_argument);
    CHECK_NOTHROW(ModelParams({0.5, 1.0, 0.0, -7.0}).validate());
  }

  TEST_CASE("Hamiltonian is exactly symmetric and commutes with parity") {
    for (double lam : {-2.0, -0.5, 0.0, 0.5, 2.0})
      for (double gg : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const auto mp = params_from_scaled(lam, gg);
        const auto H = build_hamiltonian(mp, 40);
        const auto P = build_parity(40);
        CHECK(H.H.rows() == 82);
        CHECK((H.H - H.H.transpose()).cwiseAbs().maxCoeff() == 0.0);
        const double comm = (H.H * P.P - P.P * H.H).norm();
        CHECK(comm < 1e-12 * H.H.norm());
      }
  }

  TEST_CASE("parity operator is an involution with eigenvalues +-1") {
    const auto P = build_parity(15);
    CHECK((P.P * P.P - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P.P);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      CHECK(std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-12);
  }

  TEST_CASE("decoupled spectrum") {
    for (double omega : {0.5, 2.0}) {
      const auto H = build_hamiltonian({omega, 1.0, 0.0, 0.3}, 20);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.H);
      CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5));
      CHECK(es.eigenvalues()(1) == doctest::Approx(-0.5 + std::min(omega, 1.0)));
    }
  }

  TEST_CASE("basis layout") {
    CHECK(basis_index(3, +1, 10) == 3);
    CHECK(basis_index(3, -1, 10) == 14);
  }

  TEST_CASE("cutoff limits") {
    CHECK_THROWS_AS(build_hamiltonian({0.5, 1.0, 0.1, 0.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_hamiltonian({0.5, 1.0, 0.1, 0.0}, kMaxCutoff + 1), NumericalError);
    const auto mp = params_from_scaled(1.0, 3.0);
    const auto d = derive_couplings(mp);
    CHECK(cutoff_floor(mp) == static_cast<int>(std::ceil(4.0 * (d.gp_z * d.gp_z + d.gp_y * d.gp_y))) + 40);
  }

  TEST_CASE("duality map") {
    const ModelParams mp{0.5, 1.0, 0.4, 0.0};
    CHECK(dual_params(mp).lambda == 0.0);
    const ModelParams q{0.5, 1.0, 0.4, 0.7};
    const auto d = dual_params(q);
    CHECK(d.lambda == -0.7);
    CHECK(d.g == q.g);
    CHECK(d.omega == q.omega);
  }
}
