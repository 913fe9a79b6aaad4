#pragma once

// Symmetric eigensolvers, Schur-complement DN matrices and Morse indices.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <vector>

namespace partition_flow {

using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Real sparse symmetric matrix with a map from rows back to grid nodes.
/// `sheets` is empty except for double-cover operators, where it tags each
/// row with its sheet (0 or 1).
struct SymmetricOperator {
  SparseMatrix matrix;
  std::vector<Index> nodes;
  std::vector<int> sheets;

  Index dimension() const { return matrix.rows(); }
  /// Max absolute row sum; an upper bound on the spectral radius.
  double norm_inf() const;
  bool exactly_symmetric() const;
};

SymmetricOperator make_operator(Index n, const std::vector<Triplet>& triplets,
                                std::vector<Index> nodes = {});

struct Spectrum {
  Eigen::VectorXd eigenvalues;                  // ascending
  std::optional<Eigen::MatrixXd> eigenvectors;  // orthonormal columns
  Eigen::VectorXd residual_norms;               // ||A v - lambda v|| per pair
};

/// Eigenvalue groups whose consecutive gaps are within `tolerance`.
struct Cluster {
  double value = 0.0;  // mean of the group
  int multiplicity = 0;
  Index first = 0;  // index into the sorted eigenvalue list
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& sorted, double tolerance);

inline constexpr Index kDenseCutoff = 4096;
/// Relative cluster tolerance, multiplied by the spectral scale.
inline constexpr double kClusterRelTol = 1e-8;

Spectrum eig_dense(const Eigen::MatrixXd& a, bool vectors = true);
Spectrum eig_dense(const SymmetricOperator& a, bool vectors = true);

struct LanczosOptions {
  double tolerance = 1e-12;  // relative Ritz residual
  int max_restarts = 64;
  std::uint64_t seed = 0x5eed;
};

/// `count` eigenpairs of `a` nearest to `shift` by shift-invert Lanczos with full
/// reorthogonalization. With the shift below the spectrum these are the lowest.
/// Degenerate clusters are resolved by locking converged vectors and
/// restarting in their orthogonal complement.
Spectrum eig_lowest(const SymmetricOperator& a, Index count, double shift,
                    const LanczosOptions& options = {});
/// Shift one unit below the Gershgorin lower bound.
Spectrum eig_lowest(const SymmetricOperator& a, Index count);

/// All eigenvalues up to `level`, plus at least `extra` further eigenvalues
/// above it (fewer only when the spectrum is exhausted). Dense below
/// `dense_cutoff`, Lanczos otherwise.
Eigen::VectorXd eigenvalues_through(const SymmetricOperator& a, double level, Index extra = 2,
                                    Index dense_cutoff = 1500);

struct DNMatrix {
  double lambda = 0.0;
  std::vector<Index> interface_dofs;
  Eigen::MatrixXd entries;

  double asymmetry() const { return (entries - entries.transpose()).cwiseAbs().maxCoeff(); }
};

/// Schur complement of H - lambda onto `interface_dofs`, divided by
/// `interface_weight`: S = (H-l)_BB - (H-l)_BI (H-l)_II^{-1} (H-l)_IB.
/// Throws InteriorResonance if (H-l)_II is singular to tolerance.
DNMatrix schur_dn(const SymmetricOperator& h, double lambda, const std::vector<Index>& interface_dofs,
                  double interface_weight = 1.0);

/// Number of eigenvalues below -tol * scale, scale = spectral radius (or 1 if zero).
/// Throws ToleranceAmbiguity if an eigenvalue lies in [-tol*scale, tol*scale].
int morse_index(const Eigen::MatrixXd& m, double tol = 1e-9);
int morse_index(const DNMatrix& m, double tol = 1e-9);
/// Dense below the cutoff; above it the inertia of a sparse LDL^T
/// factorization (Sylvester's law), with the same ambiguity rule on pivots.
int morse_index(const SymmetricOperator& m, double tol = 1e-9);

}  // namespace partition_flow
