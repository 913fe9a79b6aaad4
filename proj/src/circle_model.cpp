#include "partition_flow/circle_model.hpp"

#include "partition_flow/eigen_core.hpp"

namespace partition_flow::circle {

std::vector<double> operator_spectrum(bool antiperiodic, int count) {
  std::vector<double> out;
  if (antiperiodic) {
    for (int j = 1; static_cast<int>(out.size()) < count; ++j) {
      const double v = (2.0 * j - 1.0) / 2.0;
      out.push_back(v * v);
      out.push_back(v * v);
    }
  } else {
    out.push_back(0.0);
    for (int j = 1; static_cast<int>(out.size()) < count; ++j) {
      out.push_back(double(j) * j);
      out.push_back(double(j) * j);
    }
  }
  out.resize(count);
  return out;
}

DeficiencyReport circle_deficiency(const CircleConfig<double>& config, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("circle_deficiency: epsilon must be positive");
  if (epsilon >= epsilon_max<double>(config.n)) {
    throw EpsilonTooLarge("epsilon = " + std::to_string(epsilon) + " >= " +
                          std::to_string(epsilon_max<double>(config.n)));
  }
  const double root = config.n / 2.0 + epsilon;
  const double lambda = root * root;

  DeficiencyReport r;
  r.source = "circle";
  r.k = config.n;
  r.energy = config.energy;
  r.epsilon = epsilon;
  // Every arc has ground energy (pi/theta)^2; the residual is pure rounding.
  const double arc = std::numbers::pi / config.theta;
  r.equipartition_residual = std::abs(arc * arc - config.energy);

  const auto spectrum = operator_spectrum(config.antiperiodic(), config.n + 3);
  const double tol = 1e-10 * std::max(1.0, config.energy);
  r.ell = 1;
  for (double v : spectrum) {
    if (v < config.energy - tol) ++r.ell;
    if (std::abs(v - config.energy) <= tol) ++r.m;
  }
  r.mor = morse_index(Eigen::MatrixXd(build_M(config, lambda)));
  if (config.antiperiodic()) {
    const auto mu = mu_spectrum(config, lambda);
    const int closed = static_cast<int>(std::count_if(mu.begin(), mu.end(), [](double v) { return v < 0; }));
    if (closed != r.mor) {
      throw EpsilonTooLarge("closed-form and numeric Morse index disagree (" + std::to_string(closed) + " vs " +
                            std::to_string(r.mor) + ")");
    }
  }
  r.def = r.ell - r.k;
  r.identity_residual = std::abs(r.def - (1 - r.m + r.mor));
  return r;
}

}  // namespace partition_flow::circle
