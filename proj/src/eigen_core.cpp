#include "partition_flow/eigen_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "partition_flow/errors.hpp"

namespace partition_flow {

double SymmetricOperator::norm_inf() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(matrix.cols());
  for (Index col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) sums[col] += std::abs(it.value());
  }
  return sums.size() == 0 ? 0.0 : sums.maxCoeff();
}

bool SymmetricOperator::exactly_symmetric() const {
  const SparseMatrix t = matrix.transpose();
  if (t.nonZeros() != matrix.nonZeros()) return false;
  for (Index col = 0; col < matrix.outerSize(); ++col) {
    SparseMatrix::InnerIterator a(matrix, col);
    SparseMatrix::InnerIterator b(t, col);
    for (; a && b; ++a, ++b) {
      if (a.index() != b.index() || a.value() != b.value()) return false;
    }
    if (a || b) return false;
  }
  return true;
}

SymmetricOperator make_operator(Index n, const std::vector<Triplet>& triplets, std::vector<Index> nodes) {
  SymmetricOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  if (nodes.empty()) {
    nodes.resize(n);
    std::iota(nodes.begin(), nodes.end(), Index{0});
  }
  op.nodes = std::move(nodes);
  return op;
}

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& sorted, double tolerance) {
  std::vector<Cluster> out;
  Index i = 0;
  while (i < sorted.size()) {
    Index j = i + 1;
    while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tolerance) ++j;
    out.push_back({sorted.segment(i, j - i).mean(), static_cast<int>(j - i), i});
    i = j;
  }
  return out;
}

namespace {

Eigen::VectorXd residuals(const Eigen::MatrixXd& a, const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd r(values.size());
  for (Index i = 0; i < values.size(); ++i) r[i] = (a * vectors.col(i) - values[i] * vectors.col(i)).norm();
  return r;
}

Eigen::VectorXd residuals(const SparseMatrix& a, const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd r(values.size());
  for (Index i = 0; i < values.size(); ++i) r[i] = (a * vectors.col(i) - values[i] * vectors.col(i)).norm();
  return r;
}

double gershgorin_lower(const SymmetricOperator& a) {
  double lower = 0.0;
  bool first = true;
  for (Index col = 0; col < a.matrix.outerSize(); ++col) {
    double diag = 0.0, off = 0.0;
    for (SparseMatrix::InnerIterator it(a.matrix, col); it; ++it) {
      if (it.index() == col) diag = it.value();
      else off += std::abs(it.value());
    }
    const double bound = diag - off;
    lower = first ? bound : std::min(lower, bound);
    first = false;
  }
  return lower;
}

SparseMatrix identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

Spectrum eig_dense(const Eigen::MatrixXd& a, bool vectors) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_dense: matrix not square");
  Spectrum s;
  if (a.rows() == 0) {
    s.eigenvalues.resize(0);
    s.residual_norms.resize(0);
    if (vectors) s.eigenvectors = Eigen::MatrixXd(0, 0);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, vectors ? Eigen::ComputeEigenvectors
                                                                   : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("symmetric QR iteration did not converge");
  s.eigenvalues = solver.eigenvalues();
  if (vectors) {
    s.eigenvectors = solver.eigenvectors();
    s.residual_norms = residuals(a, s.eigenvalues, *s.eigenvectors);
  } else {
    s.residual_norms = Eigen::VectorXd::Zero(a.rows());
  }
  return s;
}

Spectrum eig_dense(const SymmetricOperator& a, bool vectors) {
  if (a.dimension() > kDenseCutoff) {
    throw std::invalid_argument("eig_dense: dimension " + std::to_string(a.dimension()) +
                                " exceeds the dense cutoff");
  }
  return eig_dense(Eigen::MatrixXd(a.matrix), vectors);
}

Spectrum eig_lowest(const SymmetricOperator& a, Index count) {
  return eig_lowest(a, count, gershgorin_lower(a) - 1.0);
}

Spectrum eig_lowest(const SymmetricOperator& a, Index count, double shift, const LanczosOptions& options) {
  const Index n = a.dimension();
  if (count <= 0 || count > n) {
    throw std::invalid_argument("eig_lowest: count " + std::to_string(count) + " outside [1, " +
                                std::to_string(n) + "]");
  }
  const SparseMatrix shifted = a.matrix - shift * identity(n);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw FactorizationError("LDL^T of A - shift I failed");
  const double scale = std::max(a.norm_inf(), std::abs(shift));
  if (ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * std::max(scale, 1.0)) {
    throw FactorizationError("shift " + std::to_string(shift) + " lies on the spectrum");
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd locked(n, 0);
  std::vector<double> locked_theta;

  auto project_locked = [&](Eigen::VectorXd& w) {
    if (locked.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) w -= locked * (locked.transpose() * w);
  };
  // |theta| of the count-th largest locked pair, or 0 when fewer are locked.
  auto threshold = [&]() {
    if (static_cast<Index>(locked_theta.size()) < count) return 0.0;
    std::vector<double> mags;
    for (double t : locked_theta) mags.push_back(std::abs(t));
    std::nth_element(mags.begin(), mags.begin() + (count - 1), mags.end(), std::greater<>());
    return mags[count - 1];
  };

  bool finished = false;
  for (int restart = 0; restart <= options.max_restarts && !finished; ++restart) {
    const Index available = n - locked.cols();
    if (available <= 0) break;

    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    project_locked(v);
    v.normalize();

    const Index kmax = available;
    Eigen::MatrixXd basis(n, std::min<Index>(kmax, 2 * count + 40));
    std::vector<double> alpha, beta;
    basis.col(0) = v;

    Eigen::VectorXd ritz_values;
    Eigen::MatrixXd ritz_vectors;
    Eigen::VectorXd ritz_residuals;
    Index steps = 0;
    for (Index j = 0; j < kmax; ++j) {
      Eigen::VectorXd w = ldlt.solve(basis.col(j));
      project_locked(w);
      const double a_j = basis.col(j).dot(w);
      w -= a_j * basis.col(j);
      if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        project_locked(w);
      }
      const double b_j = w.norm();
      alpha.push_back(a_j);
      beta.push_back(b_j);
      steps = j + 1;

      const bool exhausted = (b_j <= 1e-13 * std::abs(a_j)) || steps == kmax;
      if (steps >= std::min(count, kmax) || exhausted) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
        for (Index i = 0; i < steps; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
        ritz_values = tri.eigenvalues();
        ritz_vectors = tri.eigenvectors();
        ritz_residuals = (b_j * ritz_vectors.row(steps - 1).transpose()).cwiseAbs();
        if (exhausted) ritz_residuals.setZero();

        std::vector<Index> order(steps);
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(),
                  [&](Index x, Index y) { return std::abs(ritz_values[x]) > std::abs(ritz_values[y]); });
        const Index want = std::min(count, steps);
        bool converged = true;
        for (Index i = 0; i < want; ++i) {
          const Index r = order[i];
          if (ritz_residuals[r] > options.tolerance * std::abs(ritz_values[r])) converged = false;
        }
        if (converged || exhausted) {
          const double bar = threshold();
          Index added = 0;
          for (Index i = 0; i < want; ++i) {
            const Index r = order[i];
            if (ritz_residuals[r] > options.tolerance * std::abs(ritz_values[r])) continue;
            if (restart > 0 && std::abs(ritz_values[r]) <= bar * (1.0 + 1e-12)) continue;
            Eigen::VectorXd y = basis.leftCols(steps) * ritz_vectors.col(r);
            project_locked(y);
            const double norm = y.norm();
            if (norm < 0.5) continue;  // already represented by a locked vector
            locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
            locked.col(locked.cols() - 1) = y / norm;
            locked_theta.push_back(ritz_values[r]);
            ++added;
          }
          if (restart > 0 && added == 0) finished = true;
          break;
        }
      }
      if (j + 1 >= basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min<Index>(kmax, 2 * basis.cols()));
      basis.col(j + 1) = w / b_j;
    }
    if (restart == options.max_restarts && !finished) {
      throw ConvergenceFailure("shift-invert Lanczos: degenerate clusters unresolved after " +
                               std::to_string(options.max_restarts) + " restarts");
    }
    if (locked.cols() >= n) finished = true;
  }
  if (static_cast<Index>(locked_theta.size()) < count) {
    throw ConvergenceFailure("shift-invert Lanczos: found " + std::to_string(locked_theta.size()) + " of " +
                             std::to_string(count) + " eigenpairs");
  }

  std::vector<Index> order(locked_theta.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index x, Index y) { return std::abs(locked_theta[x]) > std::abs(locked_theta[y]); });
  order.resize(count);

  Spectrum s;
  s.eigenvalues.resize(count);
  Eigen::MatrixXd vecs(n, count);
  for (Index i = 0; i < count; ++i) {
    vecs.col(i) = locked.col(order[i]);
    s.eigenvalues[i] = vecs.col(i).dot(a.matrix * vecs.col(i));
  }
  std::vector<Index> asc(count);
  std::iota(asc.begin(), asc.end(), Index{0});
  std::sort(asc.begin(), asc.end(), [&](Index x, Index y) { return s.eigenvalues[x] < s.eigenvalues[y]; });
  Eigen::VectorXd values(count);
  Eigen::MatrixXd sorted(n, count);
  for (Index i = 0; i < count; ++i) {
    values[i] = s.eigenvalues[asc[i]];
    sorted.col(i) = vecs.col(asc[i]);
  }
  s.eigenvalues = values;
  s.residual_norms = residuals(a.matrix, values, sorted);
  s.eigenvectors = std::move(sorted);
  return s;
}

Eigen::VectorXd eigenvalues_through(const SymmetricOperator& a, double level, Index extra, Index dense_cutoff) {
  const Index n = a.dimension();
  auto take = [&](const Eigen::VectorXd& all) {
    Index below = 0;
    while (below < all.size() && all[below] <= level) ++below;
    return Eigen::VectorXd(all.head(std::min(all.size(), below + extra)));
  };
  if (n <= dense_cutoff) return take(eig_dense(a, false).eigenvalues);
  Index count = std::min<Index>(n, 16);
  for (;;) {
    const Spectrum s = eig_lowest(a, count);
    Index above = 0;
    for (Index i = 0; i < s.eigenvalues.size(); ++i) above += s.eigenvalues[i] > level ? 1 : 0;
    if (above >= extra || count == n) return take(s.eigenvalues);
    count = std::min(n, 2 * count);
  }
}

DNMatrix schur_dn(const SymmetricOperator& h, double lambda, const std::vector<Index>& interface_dofs,
                  double interface_weight) {
  const Index n = h.dimension();
  std::vector<Index> position(n, -1);
  for (std::size_t i = 0; i < interface_dofs.size(); ++i) {
    const Index d = interface_dofs[i];
    if (d < 0 || d >= n) throw std::out_of_range("schur_dn: interface dof out of range");
    if (position[d] != -1) throw std::invalid_argument("schur_dn: duplicate interface dof");
    position[d] = static_cast<Index>(i);
  }
  std::vector<Index> interior;
  for (Index i = 0; i < n; ++i) {
    if (position[i] == -1) {
      position[i] = -2 - static_cast<Index>(interior.size());
      interior.push_back(i);
    }
  }
  const Index nb = static_cast<Index>(interface_dofs.size());
  const Index ni = static_cast<Index>(interior.size());

  Eigen::MatrixXd bb = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd ib = Eigen::MatrixXd::Zero(ni, nb);
  std::vector<Triplet> ii;
  for (Index col = 0; col < h.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(h.matrix, col); it; ++it) {
      const Index pr = position[it.index()], pc = position[col];
      const bool rb = pr >= 0, cb = pc >= 0;
      if (rb && cb) bb(pr, pc) += it.value();
      else if (!rb && cb) ib(-2 - pr, pc) += it.value();
      else if (!rb && !cb) ii.emplace_back(-2 - pr, -2 - pc, it.value());
    }
  }
  for (Index i = 0; i < nb; ++i) bb(i, i) -= lambda;
  for (Index i = 0; i < ni; ++i) ii.emplace_back(i, i, -lambda);

  Eigen::MatrixXd s = bb;
  if (ni > 0) {
    SparseMatrix block(ni, ni);
    block.setFromTriplets(ii.begin(), ii.end());
    const double scale = std::max({h.norm_inf(), std::abs(lambda), 1.0});
    Eigen::MatrixXd x;
    if (ni <= 1500) {
      const Eigen::MatrixXd dense(block);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
      if (lu.rcond() < 1e-13) {
        throw InteriorResonance("lambda = " + std::to_string(lambda) +
                                " is an eigenvalue of the interior block (rcond " + std::to_string(lu.rcond()) + ")");
      }
      x = lu.solve(ib);
    } else {
      Eigen::SimplicialLDLT<SparseMatrix> ldlt(block);
      if (ldlt.info() != Eigen::Success || ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * scale) {
        throw InteriorResonance("lambda = " + std::to_string(lambda) + " is an eigenvalue of the interior block");
      }
      x = ldlt.solve(ib);
    }
    s -= ib.transpose() * x;
  }
  return {lambda, interface_dofs, s / interface_weight};
}

int morse_index(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return 0;
  const Eigen::VectorXd values = eig_dense(m, false).eigenvalues;
  double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;
  int negative = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) <= tol * scale) {
      throw ToleranceAmbiguity("eigenvalue " + std::to_string(values[i]) + " within " +
                               std::to_string(tol * scale) + " of zero");
    }
    negative += values[i] < 0 ? 1 : 0;
  }
  return negative;
}

int morse_index(const DNMatrix& m, double tol) { return morse_index(m.entries, tol); }

int morse_index(const SymmetricOperator& m, double tol) {
  if (m.dimension() <= kDenseCutoff) return morse_index(Eigen::MatrixXd(m.matrix), tol);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(m.matrix);
  if (ldlt.info() != Eigen::Success) throw FactorizationError("LDL^T failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double scale = std::max(m.norm_inf(), 1e-300);
  int negative = 0;
  for (Index i = 0; i < d.size(); ++i) {
    if (std::abs(d[i]) <= tol * scale) throw ToleranceAmbiguity("pivot within tolerance of zero");
    negative += d[i] < 0 ? 1 : 0;
  }
  return negative;
}

}  // namespace partition_flow
