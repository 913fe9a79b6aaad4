#pragma once

// N-equipartitions of the unit circle: closed-form arc DN data, the cyclic
// DN matrices with antiperiodic (odd N) or periodic (even N) closure, and
// the deficiency identity on the circle.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition_flow/errors.hpp"
#include "partition_flow/report.hpp"

namespace partition_flow::circle {

template <typename Scalar = double>
struct CircleConfig {
  int n = 3;
  Scalar theta = 2 * std::numbers::pi_v<Scalar> / 3;
  Scalar energy = Scalar(9) / 4;

  bool antiperiodic() const { return n % 2 == 1; }
};

/// Equal arcs of length 2*pi/n; the energy (n/2)^2 is the first Dirichlet
/// eigenvalue (pi/theta)^2 of one arc.
template <typename Scalar = double>
CircleConfig<Scalar> make_config(int n) {
  if (n < 2) throw std::invalid_argument("circle: need n >= 2, got " + std::to_string(n));
  CircleConfig<Scalar> c;
  c.n = n;
  c.theta = 2 * std::numbers::pi_v<Scalar> / Scalar(n);
  c.energy = Scalar(n) * Scalar(n) / 4;
  return c;
}

template <typename Scalar = double>
struct EdgeDN {
  Scalar alpha;
  Scalar beta;
  Scalar lambda;
};

/// [[alpha, beta], [beta, alpha]] maps (u(0), u(theta)) to (-u'(0), u'(theta))
/// for solutions of -u'' = lambda u on one arc.
template <typename Scalar>
EdgeDN<Scalar> edge_dn(Scalar lambda, Scalar theta) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (!(lambda > 0)) throw std::invalid_argument("edge_dn: lambda must be positive");
  const Scalar k = sqrt(lambda);
  const Scalar s = sin(k * theta);
  if (abs(s) < Scalar(1e-12) * k) {
    throw SpectralPole("lambda = " + std::to_string(double(lambda)) +
                       " is a Dirichlet eigenvalue of an arc of length " +
                       std::to_string(double(theta)));
  }
  return {k * cos(k * theta) / s, -k / s, lambda};
}

/// Cyclic N x N DN matrix: alpha on the diagonal, beta/2 on the cyclic
/// neighbours, corners -beta/2 (odd N) or +beta/2 (even N).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> build_M(const CircleConfig<Scalar>& config,
                                                               Scalar lambda) {
  const auto dn = edge_dn(lambda, config.theta);
  const int n = config.n;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const Scalar half = dn.beta / 2;
  for (int i = 0; i < n; ++i) m(i, i) = dn.alpha;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = half;
    m(i + 1, i) = half;
  }
  const Scalar corner = config.antiperiodic() ? -half : half;
  if (n == 2) {
    // both closures land on the same off-diagonal slot
    m(0, 1) += corner;
    m(1, 0) += corner;
  } else {
    m(0, n - 1) = corner;
    m(n - 1, 0) = corner;
  }
  return m;
}

/// mu_k = alpha - beta cos(2 k pi / N), sorted ascending. Odd N only.
template <typename Scalar>
std::vector<Scalar> mu_spectrum(const CircleConfig<Scalar>& config, Scalar lambda) {
  if (!config.antiperiodic()) throw std::invalid_argument("mu_spectrum: N must be odd");
  const auto dn = edge_dn(lambda, config.theta);
  std::vector<Scalar> mu(config.n);
  for (int k = 0; k < config.n; ++k) {
    using std::cos;
    mu[k] = dn.alpha - dn.beta * cos(2 * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(config.n));
  }
  std::sort(mu.begin(), mu.end());
  return mu;
}

/// (N-1) x (N-1) matrix obtained by pinning u_0 = 0 and dropping v_0.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> build_M0(const CircleConfig<Scalar>& config,
                                                                Scalar lambda) {
  const auto dn = edge_dn(lambda, config.theta);
  const int n = config.n - 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = dn.alpha;
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = dn.beta / 2;
    m(i + 1, i) = dn.beta / 2;
  }
  return m;
}

/// Closed-form spectrum of build_M0: {alpha + beta cos(k pi / N)}, k = 1..N-1.
template <typename Scalar>
std::vector<Scalar> m0_spectrum(const CircleConfig<Scalar>& config, Scalar lambda) {
  const auto dn = edge_dn(lambda, config.theta);
  std::vector<Scalar> out;
  for (int k = 1; k < config.n; ++k) {
    using std::cos;
    out.push_back(dn.alpha + dn.beta * cos(std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(config.n)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Half of the largest epsilon keeping delta_1 = cos(2 pi eps / N) - cos(2 pi / N) > 0.
template <typename Scalar = double>
Scalar epsilon_max(int n) {
  // delta_1 > 0 exactly for 0 < eps < 1, independent of n.
  (void)n;
  return Scalar(1) / 2;
}

/// Lowest `count` eigenvalues of -(d/dtheta - i pi/2)^2 (odd N, antiperiodic:
/// ((2j-1)/2)^2 doubled) or of -d^2/dtheta^2 on the circle (even N: 0, then j^2 doubled).
std::vector<double> operator_spectrum(bool antiperiodic, int count);

/// Deficiency identity at lambda = (N/2 + epsilon)^2.
DeficiencyReport circle_deficiency(const CircleConfig<double>& config, double epsilon);

}  // namespace partition_flow::circle
