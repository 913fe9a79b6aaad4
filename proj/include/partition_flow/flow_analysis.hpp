#pragma once

// Spectral flow of the Robin interface family: sigma sweeps, crossing
// counts, and the deficiency identity Def = 1 - m + Mor on grids.

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "partition_flow/eigen_core.hpp"
#include "partition_flow/grid_model.hpp"
#include "partition_flow/report.hpp"

namespace partition_flow::flow {

/// Worker cap from PARTITION_FLOW_THREADS (unset or 0 = hardware concurrency).
int worker_count();

struct Crossing {
  int level_index = 0;  // 0-based row n
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;  // the crossing lies in [sigma_lo, sigma_hi]
};

struct FlowBranch {
  std::vector<double> sigma_samples;  // ascending, first is 0
  Eigen::MatrixXd level_values;       // rows n, columns sigma samples
  Eigen::VectorXd limit;              // lambda_n(+inf), NaN past the decoupled spectrum
  double scale = 1.0;                 // spectral scale used for tolerances
  std::vector<Crossing> crossings;    // filled by crossing_count
  std::shared_ptr<const grid::RobinFamily> family;  // for bisection refinement

  int levels() const { return static_cast<int>(level_values.rows()); }
};

/// Default sigma_max = 1e4 / h^2.
double default_sigma_max(const grid::RobinFamily& family);

/// 0 followed by `samples - 1` log-spaced values ending at sigma_max.
std::vector<double> sigma_grid(double sigma_max, int samples);

/// Lowest `levels` eigenvalues of T_sigma at every sample, computed in parallel
/// and merged in sample order. Throws MonotonicityViolation if a row decreases
/// by more than 1e-10 * scale or exceeds its sigma = inf limit.
FlowBranch sigma_sweep(const grid::RobinFamily& family, double sigma_max, int samples, int levels);

/// Rows with lambda_n(0) < level < lambda_n(sigma_max). Each crossing is
/// bracketed by the samples and, when the branch keeps its family, refined
/// by bisection to width 1e-6 * sigma_max. Throws LevelOnSpectrum if the
/// level touches an endpoint eigenvalue.
int crossing_count(FlowBranch& branch, double level);

struct EpsilonPolicy {
  std::optional<double> fixed;  // use this epsilon instead of the gap rule
  double equipartition_tol = 1e-8;  // relative; 1e-3 for approximate geometry
};

/// Energy window shared by deficiency and compare_constructions.
struct EnergyWindow {
  double energy = 0.0;  // l_k
  double equipartition_residual = 0.0;
  double cluster_tol = 0.0;
  double gap0 = 0.0;
  double gap_inf = 0.0;
  double epsilon = 0.0;
  Eigen::VectorXd base_spectrum;  // T_0 eigenvalues through energy + a few
};

EnergyWindow energy_window(const grid::GridPartition& grid, const grid::RobinFamily& family,
                           const EpsilonPolicy& policy = {});

/// Operator used for a deficiency run: the slit operator (after prepare_slit)
/// or the plain Laplacian. The grid is updated in place when slitting.
grid::RobinFamily base_family(grid::GridPartition& grid, bool slit_flag);

DeficiencyReport deficiency(const grid::GridPartition& grid, bool slit_flag, const EpsilonPolicy& policy = {});

struct CountingCheck {
  double level = 0.0;
  int mor = 0;
  int below_base = 0;  // N_0(level)
  int below_inf = 0;   // N_inf(level)

  bool holds() const { return mor == below_base - below_inf; }
};

/// Mor(DN(level)) against N_0(level) - N_inf(level), all three computed separately.
CountingCheck counting_identity(const grid::RobinFamily& family, double level);

struct LemmaReport {
  int trials = 0;
  int checked = 0;  // correspondences tested in either direction
  int flagged = 0;  // kernel-trace or resonance cases, not counted
  int failures = 0;
  double max_mismatch = 0.0;

  bool passed() const { return failures == 0; }
};

/// Random (sigma, level) pairs: an eigenvalue lambda of T_sigma must give
/// -sigma in spec(DN(lambda)) with the same multiplicity, and a negative DN
/// eigenvalue -sigma must give lambda in spec(T_sigma). Tolerance 1e-8.
LemmaReport lemma_eigeig_check(const grid::GridPartition& grid, bool slit_flag, int trials, std::uint64_t seed);
LemmaReport lemma_eigeig_check(const grid::RobinFamily& family, int trials, std::uint64_t seed, int tracked = 8);

struct ConstructionReport {
  double lambda = 0.0;
  Eigen::VectorXd full;        // DN on the whole interface
  Eigen::VectorXd restricted;  // traces pinned to zero on the slit
  bool contained = false;      // restricted spectrum inside the full one
  double max_gap = 0.0;        // largest distance of a restricted value to the full spectrum
  bool interlaced = false;     // Cauchy interlacing full_i <= restricted_i <= full_{i+r}
};

/// The full and slit-restricted DN spectra at lambda (default l_k + epsilon).
ConstructionReport compare_constructions(const grid::GridPartition& grid, std::optional<double> lambda = {});
/// Same comparison for explicit matrices (restricted = principal submatrix or otherwise).
ConstructionReport compare_spectra(const Eigen::MatrixXd& full, const Eigen::MatrixXd& restricted, double lambda);

struct PairResidual {
  int first = 0;
  int second = 0;
  double residual = 0.0;  // smallest singular value of [(L-l) r_i, -(L-l) r_j], over l_k
};

/// Discrete pair compatibility: for each pair of adjacent subdomains, how far the
/// best combination of their ground states is from a Dirichlet eigenfunction
/// of the pair union at l_k.
std::vector<PairResidual> pcc_residual(const grid::GridPartition& grid);

}  // namespace partition_flow::flow
