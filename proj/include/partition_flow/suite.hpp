#pragma once

// Acceptance battery: one deterministic check per criterion, each with its
// own oracle computed independently of the code path under test.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "partition_flow/grid_model.hpp"
#include "partition_flow/partition_graph.hpp"

namespace partition_flow::suite {

enum class Scale { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;      // deterministic for a given seed
  double seconds = 0.0;    // wall time, excluded from the table
  double budget = 0.0;     // seconds; 0 = none
};

struct Summary {
  std::vector<CriterionResult> results;  // ordered by id

  bool all_passed() const;
  /// One "criterion N: PASS|FAIL name (detail)" line per result.
  std::string table() const;
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, std::uint64_t seed, Scale scale);
/// Runs the criteria on up to worker_count() threads; results ordered by id.
Summary run_suite(std::uint64_t seed, Scale scale, const std::vector<int>& ids = {});

/// Random axis-aligned partition of a rectangle of at most 12 x 12 cells
/// (h = 1/8). Kinds: 0 vertical line, 1 horizontal line, 2 cross, 3 T junction
/// (one pole, three arms as separate polylines), 4 two poles joined by a bridge,
/// 5 L-shaped interface. kind < 0 picks one at random.
grid::DomainSpec random_domain(std::mt19937_64& rng, int kind = -1);

/// Every slit choice (sets of interface ids) for a kind 3 or 4 domain that
/// gives each pole an odd number of arms; empty for other kinds.
std::vector<std::vector<int>> slit_choices(const grid::DomainSpec& spec);

/// Outerplanar multigraph on at most six vertices with loops and parallel
/// edges allowed.
graph::Multigraph random_planar_multigraph(std::mt19937_64& rng, int max_edges = 10);

/// Partition graph whose compactification is `m`: each compact vertex becomes
/// an interior vertex or a boundary component (component 0 is outer).
graph::PartitionGraph lift_multigraph(const graph::Multigraph& m, const std::vector<bool>& is_component);

/// All edge subsets of the compactified graph that keep every vertex parity and
/// contain no cycle, as bit masks. Independent of the library's verifier.
std::vector<std::uint32_t> brute_force_slits(const graph::Multigraph& m);

}  // namespace partition_flow::suite
