#pragma once

// Finite-difference model of a partitioned rectangle: 5-point Laplacian,
// interface Robin family, decoupled Dirichlet operator and the slit
// (double-cover) operator that stands in for the Aharonov-Bohm Hamiltonian.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "partition_flow/eigen_core.hpp"
#include "partition_flow/partition_graph.hpp"

namespace partition_flow::grid {

enum class NodeLabel : std::uint8_t { Dirichlet, Subdomain, Interface, Pole };

struct InterfaceSpec {
  int id = 0;
  std::vector<std::array<double, 2>> points;  // oriented polyline
};

struct DomainSpec {
  double lx = 1.0;
  double ly = 1.0;
  double h = 0.125;
  std::vector<InterfaceSpec> interfaces;
  std::optional<std::vector<int>> slit;  // interface ids
  std::vector<std::array<double, 2>> poles;
};

/// Side of a slit-node neighbour relative to the oriented slit: +1 left, -1 right.
struct SideClass {
  Index slit_node = 0;
  Index neighbor = 0;
  int side = 0;
};

struct GridPartition {
  double h = 0.0;
  int nx = 0;  // intervals along x
  int ny = 0;
  std::vector<NodeLabel> labels;
  std::vector<int> subdomain;  // label index, -1 off subdomains
  std::vector<int> arms;       // interface unit edges incident to each node
  int domain_count = 0;
  std::set<std::pair<Index, Index>> interface_edges;  // unit edges, (min, max)
  std::vector<int> interface_ids;
  std::vector<std::vector<Index>> interface_paths;  // lattice nodes per polyline
  std::vector<std::vector<Index>> slit_chains;      // terminal, dofs..., terminal
  std::vector<SideClass> sides;

  Index node(int i, int j) const { return static_cast<Index>(j) * (nx + 1) + i; }
  int ix(Index n) const { return static_cast<int>(n % (nx + 1)); }
  int iy(Index n) const { return static_cast<int>(n / (nx + 1)); }
  Index node_count() const { return static_cast<Index>(nx + 1) * (ny + 1); }
  bool interior(Index n) const { return labels[n] != NodeLabel::Dirichlet; }
  bool on_interface(Index n) const { return labels[n] == NodeLabel::Interface || labels[n] == NodeLabel::Pole; }
  std::vector<Index> poles() const;
  /// Interface nodes with an odd number (>= 3) of arms.
  std::vector<Index> odd_critical_nodes() const;
  std::set<Index> slit_nodes() const;  // chain nodes carrying a DOF
  bool has_slit() const { return !slit_chains.empty(); }
};

/// Rasterizes a DomainSpec; throws SpecError naming the first violated invariant.
GridPartition build_grid(const DomainSpec& spec);

/// Replaces the slit by the given oriented lattice paths (consecutive nodes
/// adjacent). Throws SlitError on inconsistent geometry.
void apply_slit(GridPartition& grid, const std::vector<std::vector<Index>>& paths);

struct GridGraph {
  graph::PartitionGraph graph;
  std::vector<std::vector<Index>> edge_paths;  // indexed by edge id
};

/// Boundary set of the grid as a partition graph (one outer component, faces = subdomains).
GridGraph partition_graph(const GridPartition& grid);

/// Promotes odd critical nodes to poles and, if no slit is present, chooses
/// one with the cycle-destruction algorithm.
void prepare_slit(GridPartition& grid);

SymmetricOperator assemble_laplacian(const GridPartition& grid);
/// Laplacian on non-pole interior nodes with couplings across the slit negated.
SymmetricOperator assemble_slit(const GridPartition& grid);
/// Explicit two-sheet cover of the non-pole nodes; rows [0, n) sheet 0, [n, 2n) sheet 1.
SymmetricOperator assemble_double_cover(const GridPartition& grid);
/// Q^T C Q with Q u = (u, -u) / sqrt(2) (antisymmetric) or (u, u) / sqrt(2).
SymmetricOperator restrict_cover(const SymmetricOperator& cover, bool antisymmetric);

struct RobinFamily {
  SymmetricOperator base;
  Eigen::VectorXd interface_mass;  // h on interface rows, 0 elsewhere
  std::vector<Index> interface_dofs;
  double h = 0.0;

  /// base + sigma * diag(mass); sigma = +inf gives decoupled().
  SymmetricOperator at(double sigma) const;
  /// Interface rows and columns removed: direct sum of subdomain Dirichlet operators.
  SymmetricOperator decoupled() const;
};

RobinFamily robin_family(const GridPartition& grid, const SymmetricOperator& base);

/// Lowest eigenvalue of each subdomain block of the decoupled operator, by label.
std::vector<double> subdomain_ground_energies(const GridPartition& grid, const RobinFamily& family);

struct TransmissionResidual {
  double lambda = 0.0;
  /// Discrete identity: normal flux sum + sigma h^2 u = h (lambda u - tangential second difference).
  double discrete = 0.0;
  /// Continuum form: normal flux sum + sigma h^2 u, O(h) for smooth limits.
  double continuum = 0.0;
};

/// Residuals over interface nodes, with u scaled to unit max-norm.
/// Throws NotAnEigenvector if ||T u - lambda u|| > tol ||T|| ||u||.
TransmissionResidual transmission_residual(const GridPartition& grid, const RobinFamily& family,
                                           const Eigen::VectorXd& u, double sigma, double tol = 1e-8);

/// Periodic second-difference chain of n nodes on a circle of given length;
/// antiperiodic negates the single coupling between nodes n-1 and 0.
SymmetricOperator circle_chain(int n, bool antiperiodic, double length);

/// Circle chain with `arcs` partition points every `per_arc` nodes, as a Robin family.
RobinFamily circle_robin_family(int arcs, int per_arc, bool antiperiodic, double length);

}  // namespace partition_flow::grid
