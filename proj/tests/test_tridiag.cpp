#include "doctest.h"

#include "boxlab/tridiag.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace boxlab;

TEST_CASE("dirichlet modes are eigenpairs of the path Laplacian") {
  for (int l : {1, 2, 5, 9}) {
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(l, l);
    for (int i = 0; i + 1 < l; ++i) lap(i, i + 1) = lap(i + 1, i) = 1.0;
    for (const auto& m : dirichlet_modes(l)) {
      CHECK((lap * m.vector - m.energy * m.vector).norm() <= 1e-12);
      CHECK(m.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.weight == doctest::Approx(m.vector(0) * m.vector(0)).epsilon(1e-12));
    }
  }
  CHECK(std::abs(dirichlet_modes(1)[0].energy) < 1e-15);
  const auto two = dirichlet_modes(2);
  CHECK(two[0].energy == doctest::Approx(1.0));
  CHECK(two[1].energy == doctest::Approx(-1.0));
}

TEST_CASE("c coefficient values") {
  CHECK(c_coefficient(2, 1) == 0.0);
  CHECK(c_coefficient(1, 1) == 0.0);
  CHECK(c_coefficient(3, 1) == doctest::Approx(-1.0 / (32.0 * std::sqrt(2.0))).epsilon(1e-12));
  for (int l = 1; l <= 12; ++l)
    for (int n = 1; n <= l; ++n) CHECK(std::abs(c_coefficient(l, n)) < 10.0 * (l + 1));
}

TEST_CASE("expansion order tokens") {
  CHECK(parse_expansion_order("r2") == ExpansionOrder::R2);
  CHECK(parse_expansion_order("c_over_r") == ExpansionOrder::COverR);
  CHECK(std::string(to_string(ExpansionOrder::Constant)) == "const");
  CHECK_THROWS_AS(parse_expansion_order("r3"), LabError);
}

TEST_CASE("QL solver agrees with Eigen on random tridiagonals") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 9;
    std::vector<double> d(n), e(n - 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i] = u(rng);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i] = u(rng);
    const auto ql = tridiagonal_ql<double>(d, e, true);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    for (int k = 0; k < n; ++k) CHECK(ql.values[k] == doctest::Approx(ref(k)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("exact spectrum small closed forms") {
  CHECK(exact_spectrum<double>({1, 0.3, -0.2, 7.0})[0] == doctest::Approx(0.1 + 14.0));
  const auto zero = exact_spectrum<double>({2, 0.0, 0.0, 5.0});
  CHECK(zero[0] == doctest::Approx(5.0 - 25.0));
  CHECK(zero[1] == doctest::Approx(5.0 + 25.0));
  const auto ten = exact_spectrum<double>({2, 1.0, 0.0, 10.0});
  CHECK(ten[0] == doctest::Approx(10.5 - std::sqrt(0.25 + 1e4)).epsilon(1e-12));
  CHECK(ten[1] == doctest::Approx(10.5 + std::sqrt(0.25 + 1e4)).epsilon(1e-12));
  // closed form gives -89.50125; the quoted 4-decimal value -89.5025 is off by 1.25e-3
  CHECK(ten[0] == doctest::Approx(-89.50125).epsilon(1e-9));
}

TEST_CASE("double-double spectrum matches double spectrum") {
  const TridiagSpec spec{6, 0.4, -0.9, 80.0};
  const auto d = exact_spectrum<double>(spec);
  const auto dd = exact_spectrum<DoubleDouble>(spec);
  for (int k = 0; k < 6; ++k) CHECK(to_double(dd[k]) == doctest::Approx(d[k]).epsilon(1e-12));
}

TEST_CASE("low orders are exact for l = 1 and l = 2") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ab(-1.0, 1.0), rr(2.0, 1e3);
  for (int i = 0; i < 100; ++i) {
    const TridiagSpec s{1, ab(rng), ab(rng), rr(rng)};
    const double exact = exact_spectrum<double>(s)[0];
    CHECK(predicted_eigenvalue<double>(s, 1, ExpansionOrder::Constant) == doctest::Approx(exact).epsilon(1e-12));
  }
  const TridiagSpec s{2, 0.0, 0.0, 300.0};
  const auto exact = exact_spectrum<double>(s);
  CHECK(predicted_eigenvalue<double>(s, 1, ExpansionOrder::Constant) == doctest::Approx(exact[1]).epsilon(1e-9));
  CHECK(predicted_eigenvalue<double>(s, 2, ExpansionOrder::Constant) == doctest::Approx(exact[0]).epsilon(1e-9));
}

TEST_CASE("residual decays like 1/r within the explicit bound") {
  const std::vector<double> rs{50, 100, 200, 400, 800, 1600, 3200};
  const double a = 0.3, b = -0.7;
  const int l = 5;
  const auto fit = residual_order(l, a, b, rs);
  REQUIRE(fit.slope.has_value());
  CHECK(*fit.slope >= -1.3);
  CHECK(*fit.slope <= -0.7);
  for (const auto& s : fit.samples)
    CHECK(s.residual <= (40.0 * (l + 1) * std::abs(a + b) + 16.0 * std::pow(l + 1, 3) + 1.0) / s.r);

  const auto four = residual_order(4, 0.0, 0.0, rs);
  REQUIRE(four.slope.has_value());
  CHECK(*four.slope <= -0.7);
  CHECK(residual_order(1, 0.5, 0.5, rs).exact_to_precision);
}

TEST_CASE("leading perturbation stays within 3r of the Dirichlet energy") {
  for (int l = 1; l <= 8; ++l)
    for (double r : {10.0, 40.0, 200.0}) {
      const TridiagSpec s{l, 1.0, -1.0, r};
      const auto exact = exact_spectrum<double>(s);
      for (int n = 1; n <= l; ++n) {
        double best = 1e300;
        for (double e : exact) best = std::min(best, std::abs(e - 2 * r * r * std::cos(M_PI * n / (l + 1))));
        CHECK(best <= 3 * r);
      }
    }
}

TEST_CASE("sorted matching error stays below half the predicted gap") {
  for (int l = 2; l <= 8; ++l)
    for (double a : {-1.0, 0.0, 1.0})
      for (double r : {50.0, 400.0}) {
        const TridiagSpec s{l, a, -a / 2, r};
        const auto exact = exact_spectrum<double>(s);
        std::vector<double> pred;
        for (int n = 1; n <= l; ++n) pred.push_back(predicted_eigenvalue<double>(s, n, ExpansionOrder::Constant));
        std::sort(pred.begin(), pred.end());
        double gap = 1e300;
        for (int k = 0; k + 1 < l; ++k) gap = std::min(gap, pred[k + 1] - pred[k]);
        for (int k = 0; k < l; ++k) CHECK(std::abs(exact[k] - pred[k]) < gap / 2);
      }
}
