#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "partition_flow/circle_model.hpp"
#include "partition_flow/errors.hpp"
#include "partition_flow/flow_analysis.hpp"

using namespace partition_flow;
using circle::make_config;

TEST_CASE("make_config") {
  const auto c = make_config<double>(5);
  CHECK(c.theta * 5 == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(c.energy == 6.25);
  CHECK(std::pow(std::numbers::pi / c.theta, 2) == doctest::Approx(c.energy));
  CHECK(c.antiperiodic());
  CHECK_FALSE(make_config<double>(4).antiperiodic());
  CHECK_THROWS_AS(make_config<double>(1), std::invalid_argument);
}

TEST_CASE("edge_dn at lambda = 1, theta = pi/2") {
  const auto e = circle::edge_dn(1.0, std::numbers::pi / 2);
  CHECK(std::abs(e.alpha) < 1e-15);
  CHECK(e.beta == doctest::Approx(-1.0));
}

TEST_CASE("edge_dn raises SpectralPole at arc Dirichlet eigenvalues") {
  const double theta = 2 * std::numbers::pi / 3;
  CHECK_THROWS_AS(circle::edge_dn(2.25, theta), SpectralPole);  // (pi/theta)^2
  CHECK_THROWS_AS(circle::edge_dn(9.0, theta), SpectralPole);
  CHECK_THROWS_AS(circle::edge_dn(-1.0, theta), std::invalid_argument);
  CHECK_NOTHROW(circle::edge_dn(2.2501, theta));
}

TEST_CASE("N = 3 just above the energy: alpha - beta < 0") {
  const auto c = make_config<double>(3);
  const double lambda = std::pow(1.5 + 1e-3, 2);
  const auto e = circle::edge_dn(lambda, c.theta);
  CHECK(e.alpha - e.beta < 0);
  const auto mu = circle::mu_spectrum(c, lambda);
  CHECK(std::count_if(mu.begin(), mu.end(), [](double v) { return v < 0; }) == 1);
  CHECK(mu[0] == doctest::Approx(e.alpha - e.beta));
}

TEST_CASE("build_M is exactly symmetric with the documented corners") {
  for (int n : {2, 3, 4, 5, 8}) {
    const auto c = make_config<double>(n);
    const Eigen::MatrixXd m = circle::build_M(c, 2.0);
    CHECK((m.array() == m.transpose().array()).all());
    const auto e = circle::edge_dn(2.0, c.theta);
    if (n > 2) {
      CHECK(m(0, n - 1) == (n % 2 ? -e.beta / 2 : e.beta / 2));
      CHECK(m(0, 1) == e.beta / 2);
    } else {
      CHECK(m(0, 1) == e.beta);  // both closures on one slot
    }
  }
}

TEST_CASE("build_M spectrum equals mu_k for N = 3, 5 and random lambdas at N = 7") {
  const auto c3 = make_config<double>(3);
  const double l3 = std::pow(1.5 + 1e-3, 2);
  const Eigen::VectorXd v3 = eig_dense(Eigen::MatrixXd(circle::build_M(c3, l3)), false).eigenvalues;
  const auto mu3 = circle::mu_spectrum(c3, l3);
  // Near the Dirichlet pole beta is large; compare against the spectral scale.
  const double s3 = v3.cwiseAbs().maxCoeff();
  for (int k = 0; k < 3; ++k) CHECK(std::abs(v3[k] - mu3[k]) < 1e-12 * s3);

  const auto c5 = make_config<double>(5);
  const Eigen::VectorXd v5 = eig_dense(Eigen::MatrixXd(circle::build_M(c5, 6.25001)), false).eigenvalues;
  const auto mu5 = circle::mu_spectrum(c5, 6.25001);
  const double s5 = v5.cwiseAbs().maxCoeff();
  for (int k = 0; k < 5; ++k) CHECK(std::abs(v5[k] - mu5[k]) < 1e-12 * s5);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 49.0);
  const auto c7 = make_config<double>(7);
  for (int t = 0; t < 20; ++t) {
    const double lambda = u(rng);
    if (std::abs(std::sin(std::sqrt(lambda) * c7.theta)) < 1e-3) continue;
    const Eigen::VectorXd v = eig_dense(Eigen::MatrixXd(circle::build_M(c7, lambda)), false).eigenvalues;
    const auto mu = circle::mu_spectrum(c7, lambda);
    const double scale = std::max(1.0, std::abs(mu.front()) + std::abs(mu.back()));
    for (int k = 0; k < 7; ++k) CHECK(std::abs(v[k] - mu[k]) < 1e-10 * scale);
  }
}

TEST_CASE("mu_spectrum when alpha = 0") {
  // sqrt(lambda) theta = pi/2 for N = 3.
  const auto c = make_config<double>(3);
  const double lambda = std::pow(std::numbers::pi / 2 / c.theta, 2);
  const auto e = circle::edge_dn(lambda, c.theta);
  const auto mu = circle::mu_spectrum(c, lambda);
  std::vector<double> expected;
  for (int k = 0; k < 3; ++k) expected.push_back(-e.beta * std::cos(2 * k * std::numbers::pi / 3));
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 3; ++k) CHECK(mu[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  CHECK_THROWS_AS(circle::mu_spectrum(make_config<double>(4), lambda), std::invalid_argument);
}

TEST_CASE("N = 5: mu_1 stays positive via delta_1 > 0") {
  const auto c = make_config<double>(5);
  const double eps = 1e-3;
  const auto mu = circle::mu_spectrum(c, std::pow(2.5 + eps, 2));
  CHECK(mu[0] < 0);
  CHECK(mu[1] > 0);
  CHECK(std::cos(2 * std::numbers::pi * eps / 5) - std::cos(2 * std::numbers::pi / 5) > 0);
}

TEST_CASE("build_M0") {
  const auto c3 = make_config<double>(3);
  const double l = std::pow(1.5 + 1e-3, 2);
  const Eigen::VectorXd v = eig_dense(Eigen::MatrixXd(circle::build_M0(c3, l)), false).eigenvalues;
  CHECK(v.minCoeff() > 0);
  const auto closed = circle::m0_spectrum(c3, l);
  for (int k = 0; k < 2; ++k) CHECK(v[k] == doctest::Approx(closed[k]).epsilon(1e-12));

  const auto c2 = make_config<double>(2);
  const Eigen::MatrixXd m2 = circle::build_M0(c2, 2.0);
  REQUIRE(m2.rows() == 1);
  CHECK(m2(0, 0) == circle::edge_dn(2.0, c2.theta).alpha);
}

TEST_CASE("spec(M0) is NOT spec(M) minus {alpha - beta}; only interlacing holds") {
  // Counterexample to the multiset claim, kept as a regression of the analysis.
  for (int n : {3, 5, 7}) {
    const auto c = make_config<double>(n);
    const double l = std::pow(n / 2.0 + 1e-3, 2);
    const Eigen::VectorXd full = eig_dense(Eigen::MatrixXd(circle::build_M(c, l)), false).eigenvalues;
    const Eigen::VectorXd sub = eig_dense(Eigen::MatrixXd(circle::build_M0(c, l)), false).eigenvalues;
    const auto report = flow::compare_spectra(circle::build_M(c, l), circle::build_M0(c, l), l);
    CHECK(report.interlaced);
    CHECK_FALSE(report.contained);
    // Positive part: M0 has no negative eigenvalue while M has exactly one.
    CHECK(sub.minCoeff() > 0);
    CHECK((full.array() < 0).count() == 1);
  }
}

TEST_CASE("epsilon_max") {
  for (int n : {3, 5, 7, 9, 21}) {
    const double e = circle::epsilon_max<double>(n);
    CHECK(e == 0.5);
    CHECK(std::cos(2 * std::numbers::pi * e / n) - std::cos(2 * std::numbers::pi / n) > 0);
    CHECK(std::cos(2 * std::numbers::pi * 1.0 / n) - std::cos(2 * std::numbers::pi / n) == doctest::Approx(0.0));
  }
}

TEST_CASE("operator_spectrum") {
  const auto odd = circle::operator_spectrum(true, 5);
  CHECK(odd == std::vector<double>{0.25, 0.25, 2.25, 2.25, 6.25});
  const auto even = circle::operator_spectrum(false, 5);
  CHECK(even == std::vector<double>{0.0, 1.0, 1.0, 4.0, 4.0});
}

TEST_CASE("circle_deficiency") {
  SUBCASE("N = 3 and N = 5 at eps = 1e-3: Def = 0 = 1 - 2 + 1") {
    for (int n : {3, 5}) {
      const auto r = circle::circle_deficiency(make_config<double>(n), 1e-3);
      CHECK(r.ell == n);
      CHECK(r.k == n);
      CHECK(r.m == 2);
      CHECK(r.mor == 1);
      CHECK(r.def == 0);
      CHECK(r.identity_residual == 0);
    }
  }
  SUBCASE("N = 9 at eps = 1e-4") {
    const auto r = circle::circle_deficiency(make_config<double>(9), 1e-4);
    CHECK(r.def == 1 - r.m + r.mor);
    CHECK(r.identity_residual == 0);
  }
  SUBCASE("even N is the nodal case with the same identity") {
    const auto r = circle::circle_deficiency(make_config<double>(4), 1e-3);
    CHECK(r.ell == 4);
    CHECK(r.mor == 1);
    CHECK(r.identity_residual == 0);
  }
  SUBCASE("epsilon guard") {
    CHECK_THROWS_AS(circle::circle_deficiency(make_config<double>(3), 0.5), EpsilonTooLarge);
    CHECK_THROWS_AS(circle::circle_deficiency(make_config<double>(3), 0.0), std::invalid_argument);
    CHECK_NOTHROW(circle::circle_deficiency(make_config<double>(3), 0.49));
  }
}

TEST_CASE("the circle template works in long double") {
  const auto c = make_config<long double>(5);
  const long double l = 6.26L;
  const auto mu = circle::mu_spectrum(c, l);
  const auto md = circle::mu_spectrum(make_config<double>(5), 6.26);
  for (int k = 0; k < 5; ++k) CHECK(static_cast<double>(mu[k]) == doctest::Approx(md[k]).epsilon(1e-12));
}

TEST_CASE("Robin circle chain matches -sigma_c/2 in spec(M_lambda) to O(h^2)") {
  // T_sigma on the fine antiperiodic chain with mass h at the partition points;
  // the continuum Robin parameter is sigma_c = sigma h^2 and the true circle DN
  // is 2 M_lambda.
  const int n = 3;
  const auto cfg = make_config<double>(n);
  const double sigma_c = 2.0;
  double previous = 0.0;
  for (int per_arc : {100, 200}) {
    const auto family = grid::circle_robin_family(n, per_arc, true, 2 * std::numbers::pi);
    const double sigma = sigma_c / (family.h * family.h);
    const Eigen::VectorXd values = eig_dense(family.at(sigma), false).eigenvalues;
    const double lambda = values[0];
    const Eigen::VectorXd mu = eig_dense(Eigen::MatrixXd(circle::build_M(cfg, lambda)), false).eigenvalues;
    const double err = (mu.array() + sigma_c / 2).abs().minCoeff();
    CHECK(err < 1e-3);
    if (previous > 0) CHECK(previous / err > 3.5);
    previous = err;
  }
}
