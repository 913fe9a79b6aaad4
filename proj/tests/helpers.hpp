#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "partition_flow/eigen_core.hpp"
#include "partition_flow/grid_model.hpp"

namespace testing {

// Closed-form Dirichlet spectrum of the 5-point Laplacian on an a x b rectangle.
inline std::vector<double> rectangle_spectrum(double a, double b, double h) {
  const int nx = static_cast<int>(std::lround(a / h)), ny = static_cast<int>(std::lround(b / h));
  std::vector<double> out;
  for (int p = 1; p < nx; ++p)
    for (int q = 1; q < ny; ++q) {
      const double sx = std::sin(p * std::numbers::pi * h / (2 * a));
      const double sy = std::sin(q * std::numbers::pi * h / (2 * b));
      out.push_back(4 / (h * h) * (sx * sx + sy * sy));
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline partition_flow::grid::DomainSpec rectangle(double lx, double ly, double h) {
  partition_flow::grid::DomainSpec s;
  s.lx = lx;
  s.ly = ly;
  s.h = h;
  return s;
}

inline partition_flow::grid::DomainSpec vertical_cuts(double lx, double ly, double h, std::vector<double> xs) {
  auto s = rectangle(lx, ly, h);
  int id = 0;
  for (double x : xs) s.interfaces.push_back({id++, {{x, 0.0}, {x, ly}}});
  return s;
}

inline partition_flow::grid::DomainSpec mercedes(int slit_arm = 2) {
  auto s = rectangle(3.0, 2.0, 0.25);
  s.interfaces = {{0, {{1.0, 0.0}, {1.0, 1.0}}}, {1, {{1.0, 1.0}, {1.0, 2.0}}}, {2, {{1.0, 1.0}, {3.0, 1.0}}}};
  s.poles = {{1.0, 1.0}};
  if (slit_arm >= 0) s.slit = std::vector<int>{slit_arm};
  return s;
}

inline double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
