#pragma once

// JSON specs and reports, Matrix Market operators, atomic file output.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "partition_flow/eigen_core.hpp"
#include "partition_flow/flow_analysis.hpp"
#include "partition_flow/grid_model.hpp"
#include "partition_flow/partition_graph.hpp"
#include "partition_flow/report.hpp"

namespace partition_flow::io {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
/// Parses a JSON file; SpecError names the file on failure.
Json read_json(const std::filesystem::path& path);

Json to_json(const graph::PartitionGraph& g);
/// Throws SpecError naming the offending field.
graph::PartitionGraph graph_from_json(const Json& j);

Json to_json(const grid::DomainSpec& spec);
grid::DomainSpec domain_from_json(const Json& j);

Json to_json(const DeficiencyReport& r);
DeficiencyReport report_from_json(const Json& j);

/// Coordinate real symmetric, lower triangle, 1-based, %.17g values.
std::string matrix_market(const SymmetricOperator& op);
SymmetricOperator parse_matrix_market(const std::string& text);

/// Header sigma,lambda_1..lambda_M; one row per sample.
std::string branch_csv(const flow::FlowBranch& branch);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace partition_flow::io
