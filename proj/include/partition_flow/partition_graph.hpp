#pragma once

// Combinatorial boundary set of a partition: critical points, boundary
// points, arcs, boundary components, faces and the domain graph G(D), plus
// the cycle-destruction slitting algorithm.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace partition_flow::graph {

enum class VertexKind { InteriorCritical, BoundaryPoint };

struct Vertex {
  int id = 0;
  VertexKind kind = VertexKind::InteriorCritical;
  std::optional<int> component;  // boundary component, boundary points only
};

struct Edge {
  int id = 0;
  int a = 0;
  int b = 0;
  // Faces on the two sides; equal ids mean a crack inside one domain.
  std::optional<int> left_face;
  std::optional<int> right_face;
};

/// A connected component of the domain boundary; exactly one is outer.
struct Hole {
  int id = 0;
  bool outer = false;
};

struct PartitionGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Hole> holes;
  std::vector<int> faces;
  // Geometric regularity flags, user-supplied and never computed.
  bool equal_angle = false;
  bool transversal = false;

  const Vertex* vertex(int id) const;
  const Edge* edge(int id) const;
  int degree(int vertex_id) const;  // self-loops count twice
};

struct FaceAdjacency {
  int a = 0;
  int b = 0;
  int edge = 0;
};

/// Edges of G(D): one entry per arc separating two distinct faces.
std::vector<FaceAdjacency> face_adjacency(const PartitionGraph& g);

/// All violated combinatorial constraints; empty means weakly regular.
std::vector<std::string> validate(const PartitionGraph& g);

struct OddData {
  std::set<int> odd_vertices;
  std::set<int> odd_holes;
  bool operator==(const OddData&) const = default;
};

OddData odd_data(const PartitionGraph& g);
/// Same parity sets computed from the sub-boundary-set made of `edge_ids` only.
OddData odd_data(const PartitionGraph& g, const std::vector<int>& edge_ids);

struct Bipartition {
  bool bipartite = false;
  std::vector<std::pair<int, int>> coloring;  // (face, colour) when bipartite
  std::vector<int> odd_cycle;                 // face ids, closed implicitly
};

Bipartition is_bipartite(const PartitionGraph& g);

/// Undirected multigraph; self-loops and parallel edges allowed.
struct Multigraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Sphere compactification: each boundary component collapses to one vertex.
/// Vertex order: interior vertices by id, then components by id; edge order by id.
struct Compactified {
  Multigraph graph;
  std::vector<int> vertex_ids;     // compact vertex -> interior vertex id, or -1
  std::vector<int> component_ids;  // compact vertex -> component id, or -1
  std::vector<int> edge_ids;       // compact edge -> partition edge id
};

Compactified compactify(const PartitionGraph& g);

/// Deletes cycles until the multigraph is a forest. Depth-first search from
/// the lowest vertex, lowest edge first; the first cycle closed is removed.
/// Returns the indices of the surviving edges, ascending.
std::vector<int> slit_multigraph(const Multigraph& g);

/// Parity of every vertex preserved and `subset` acyclic.
bool slit_verify_multigraph(const Multigraph& g, const std::vector<int>& subset);

struct SlitSet {
  std::vector<int> edges;  // partition edge ids, ascending
  bool operator==(const SlitSet&) const = default;
};

SlitSet slit(const PartitionGraph& g);
bool slit_verify(const PartitionGraph& g, const SlitSet& candidate);

}  // namespace partition_flow::graph
