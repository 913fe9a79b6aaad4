#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "partition_flow/circle_model.hpp"
#include "partition_flow/errors.hpp"

using namespace partition_flow;

namespace {

SymmetricOperator dirichlet_chain(int n, double h) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2 / (h * h));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1 / (h * h));
      t.emplace_back(i + 1, i, -1 / (h * h));
    }
  }
  return make_operator(n, t);
}

SymmetricOperator random_sparse(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0 + u(rng));
    for (int k = 0; k < 3; ++k) {
      const int j = static_cast<int>(rng() % n);
      if (j == i) continue;
      const double v = u(rng);
      t.emplace_back(i, j, v);
      t.emplace_back(j, i, v);
    }
  }
  return make_operator(n, t);
}

}  // namespace

TEST_CASE("eig_dense returns the sorted diagonal of a diagonal matrix") {
  Eigen::MatrixXd d = Eigen::Vector4d(3.0, -1.0, 2.0, 0.5).asDiagonal();
  const Spectrum s = eig_dense(d);
  CHECK(s.eigenvalues.isApprox(Eigen::Vector4d(-1.0, 0.5, 2.0, 3.0)));
  CHECK(s.residual_norms.maxCoeff() < 1e-14);
}

TEST_CASE("eig_dense on a Dirichlet chain matches discrete sines") {
  const int n = 40;
  const double h = 1.0 / (n + 1);
  const Spectrum s = eig_dense(dirichlet_chain(n, h));
  for (int p = 1; p <= n; ++p) {
    const double sp = std::sin(p * std::numbers::pi / (2.0 * (n + 1)));
    CHECK(s.eigenvalues[p - 1] == doctest::Approx(4 / (h * h) * sp * sp).epsilon(1e-12));
  }
  const Eigen::MatrixXd& v = *s.eigenvectors;
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eig_dense on the circle matrix matches the closed form") {
  const auto cfg = circle::make_config<double>(7);
  const double lambda = 13.7;
  const auto mu = circle::mu_spectrum(cfg, lambda);
  const Eigen::VectorXd v = eig_dense(Eigen::MatrixXd(circle::build_M(cfg, lambda)), false).eigenvalues;
  for (int k = 0; k < 7; ++k) CHECK(std::abs(v[k] - mu[k]) < 1e-10);
}

TEST_CASE("eig_lowest agrees with eig_dense on random sparse matrices") {
  std::mt19937_64 rng(11);
  for (int n : {12, 60, 200}) {
    const SymmetricOperator a = random_sparse(rng, n);
    const Spectrum dense = eig_dense(a, false);
    const Spectrum low = eig_lowest(a, 8);
    CHECK(testing::max_diff(low.eigenvalues, dense.eigenvalues.head(8)) < 1e-9);
    CHECK(low.residual_norms.maxCoeff() < 1e-8 * a.norm_inf());
  }
}

TEST_CASE("eig_lowest resolves degenerate clusters on a square") {
  // Square grid: lambda_2 = lambda_3 exactly.
  const grid::GridPartition g = grid::build_grid(testing::rectangle(1.0, 1.0, 1.0 / 16));
  const SymmetricOperator a = grid::assemble_laplacian(g);
  const Spectrum low = eig_lowest(a, 6);
  const auto exact = testing::rectangle_spectrum(1.0, 1.0, 1.0 / 16);
  for (int i = 0; i < 6; ++i) CHECK(low.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-10));
}

TEST_CASE("eig_lowest on a 63 x 31 node rectangle matches the sine formula") {
  const double h = 1.0 / 32;
  const grid::GridPartition g = grid::build_grid(testing::rectangle(2.0, 1.0, h));
  const SymmetricOperator a = grid::assemble_laplacian(g);
  REQUIRE(a.dimension() == 63 * 31);
  const Spectrum low = eig_lowest(a, 10);
  const auto exact = testing::rectangle_spectrum(2.0, 1.0, h);
  for (int i = 0; i < 10; ++i) CHECK(low.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-10));
}

TEST_CASE("eig_lowest on the slit circle chain is close to 1/4") {
  const Spectrum s = eig_lowest(grid::circle_chain(400, true, 2 * std::numbers::pi), 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("eig_lowest rejects a shift on the spectrum") {
  const SymmetricOperator a = make_operator(2, {{0, 0, 1.0}, {1, 1, 2.0}});
  CHECK_THROWS_AS(eig_lowest(a, 1, 1.0), FactorizationError);
}

TEST_CASE("schur_dn on a hand-computable 2 x 2 toy") {
  // H = [[2, -1], [-1, 3]], interface = dof 0: S = (2 - l) - 1 / (3 - l).
  const SymmetricOperator h = make_operator(2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 3.0}});
  const DNMatrix s = schur_dn(h, 0.5, {0});
  CHECK(s.entries(0, 0) == doctest::Approx(1.5 - 1.0 / 2.5));
  CHECK(schur_dn(h, 0.5, {0}, 2.0).entries(0, 0) == doctest::Approx((1.5 - 1.0 / 2.5) / 2));
  CHECK_THROWS_AS(schur_dn(h, 3.0, {0}), InteriorResonance);
}

TEST_CASE("schur_dn below the decoupled spectrum is positive definite and symmetric") {
  grid::GridPartition g = grid::build_grid(testing::vertical_cuts(2.0, 1.0, 0.125, {1.0}));
  const auto family = grid::robin_family(g, grid::assemble_laplacian(g));
  const DNMatrix s = schur_dn(family.base, 5.0, family.interface_dofs, family.h);
  CHECK(s.asymmetry() < 1e-12 * s.entries.cwiseAbs().maxCoeff());
  CHECK(morse_index(s) == 0);
  CHECK(eig_dense(s.entries, false).eigenvalues[0] > 0);
}

TEST_CASE("one arc of a fine 1-D chain reproduces the arc DN data") {
  // Energy h (K - lambda W) with half weights at the endpoints; the Schur
  // complement onto the endpoints converges to [[alpha, beta], [beta, alpha]].
  const double theta = 2 * std::numbers::pi / 3, lambda = 1.0;  // well below the pole at 9/4
  const auto exact = circle::edge_dn(lambda, theta);
  double previous = 0.0;
  for (int m : {100, 200}) {
    const double h = theta / m;
    std::vector<Triplet> t;
    for (int i = 0; i <= m; ++i) {
      const bool end = i == 0 || i == m;
      t.emplace_back(i, i, h * ((end ? 1.0 : 2.0) / (h * h)));
      if (i < m) {
        t.emplace_back(i, i + 1, -1.0 / h);
        t.emplace_back(i + 1, i, -1.0 / h);
      }
    }
    // Mass: h on interior nodes, h/2 on the ends; fold it into the operator so
    // schur_dn(..., lambda) subtracts exactly lambda * mass.
    std::vector<Triplet> shifted = t;
    for (int i = 0; i <= m; ++i) {
      const bool end = i == 0 || i == m;
      shifted.emplace_back(i, i, lambda * (1.0 - (end ? h / 2 : h)));
    }
    const DNMatrix s = schur_dn(make_operator(m + 1, shifted), lambda, {0, m});
    const double err = std::max(std::abs(s.entries(0, 0) - exact.alpha), std::abs(s.entries(0, 1) - exact.beta));
    CHECK(err < 1e-3);
    if (previous > 0) CHECK(previous / err > 3.5);  // O(h^2)
    previous = err;
  }
}

TEST_CASE("morse_index") {
  CHECK(morse_index(Eigen::MatrixXd(Eigen::Vector3d(1, 2, 3).asDiagonal())) == 0);
  CHECK(morse_index(Eigen::MatrixXd(Eigen::Vector3d(-1, 2, -3).asDiagonal())) == 2);
  CHECK_THROWS_AS(morse_index(Eigen::MatrixXd(Eigen::Vector3d(1e-13, 2, 3).asDiagonal())), ToleranceAmbiguity);
  for (int n : {3, 5, 7, 9}) {
    const auto cfg = circle::make_config<double>(n);
    const double root = n / 2.0 + 1e-3;
    CHECK(morse_index(Eigen::MatrixXd(circle::build_M(cfg, root * root))) == 1);
    CHECK(morse_index(Eigen::MatrixXd(circle::build_M0(cfg, root * root))) == 0);
  }
}

TEST_CASE("sparse morse_index uses LDL inertia above the dense cutoff") {
  const grid::GridPartition g = grid::build_grid(testing::rectangle(2.0, 1.0, 1.0 / 48));
  SymmetricOperator a = grid::assemble_laplacian(g);
  REQUIRE(a.dimension() > kDenseCutoff);
  const auto exact = testing::rectangle_spectrum(2.0, 1.0, 1.0 / 48);
  // exact[4] == exact[5] (modes (4,1) and (2,2)), so shift between 3 and 4.
  const double shift = 0.5 * (exact[3] + exact[4]);
  for (Index i = 0; i < a.dimension(); ++i) a.matrix.coeffRef(i, i) -= shift;
  CHECK(morse_index(a) == 4);
}

TEST_CASE("cluster_eigenvalues groups near-equal values") {
  const auto c = cluster_eigenvalues(Eigen::Vector4d(1.0, 2.0, 2.0 + 1e-12, 3.0), 1e-9);
  REQUIRE(c.size() == 3);
  CHECK(c[1].multiplicity == 2);
  CHECK(c[1].first == 1);
}

TEST_CASE("eigenvalues_through covers the level plus extras") {
  const grid::GridPartition g = grid::build_grid(testing::rectangle(2.0, 1.0, 1.0 / 40));
  const SymmetricOperator a = grid::assemble_laplacian(g);
  const auto exact = testing::rectangle_spectrum(2.0, 1.0, 1.0 / 40);
  const double level = 0.5 * (exact[19] + exact[20]);
  const Eigen::VectorXd v = eigenvalues_through(a, level, 2);
  REQUIRE(v.size() >= 22);
  CHECK((v.array() > level).count() >= 2);
  for (Index i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(exact[i]).epsilon(1e-9));
}
