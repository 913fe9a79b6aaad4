#include <random>

#include "doctest.h"
#include "partition_flow/io.hpp"
#include "partition_flow/partition_graph.hpp"
#include "partition_flow/suite.hpp"

using namespace partition_flow;
using namespace partition_flow::graph;

namespace {

PartitionGraph load(const char* name) {
  return io::graph_from_json(io::read_json(std::string(PF_DATA_DIR) + "/" + name));
}

bool contains(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.find(needle) != std::string::npos; });
}

// a, b joined by two parallel arcs, each with a pendant arc to the outer boundary.
PartitionGraph theta_graph() {
  PartitionGraph g;
  g.vertices = {{0, VertexKind::InteriorCritical, std::nullopt},
                {1, VertexKind::InteriorCritical, std::nullopt},
                {2, VertexKind::BoundaryPoint, 0},
                {3, VertexKind::BoundaryPoint, 0}};
  g.edges = {{0, 0, 1, 1, 0}, {1, 0, 1, 0, 1}, {2, 0, 2, 0, 0}, {3, 1, 3, 0, 0}};
  g.holes = {{0, true}};
  g.faces = {0, 1};
  return g;
}

PartitionGraph checkerboard() {
  // Plus-shaped interface: centre of degree 4, four boundary points, four faces.
  PartitionGraph g;
  g.vertices.push_back({0, VertexKind::InteriorCritical, std::nullopt});
  for (int i = 1; i <= 4; ++i) g.vertices.push_back({i, VertexKind::BoundaryPoint, 0});
  for (int i = 0; i < 4; ++i) g.edges.push_back({i, 0, i + 1, i, (i + 3) % 4});
  g.holes = {{0, true}};
  g.faces = {0, 1, 2, 3};
  return g;
}

}  // namespace

TEST_CASE("validate accepts the Mercedes star and the two-hole example") {
  CHECK(validate(load("mercedes.json")).empty());
  const PartitionGraph fig = load("fig2a.json");
  CHECK(validate(fig).empty());
  CHECK(fig.degree(0) == 5);
  CHECK(fig.degree(2) == 3);
  for (int v : {1, 3, 4, 5}) CHECK(fig.degree(v) == 1);
}

TEST_CASE("validate reports violated constraints") {
  PartitionGraph g = load("mercedes.json");
  g.edges.pop_back();
  g.vertices.pop_back();
  CHECK(contains(validate(g), "ν_ℓ ≥ 3 violated"));

  PartitionGraph lonely = load("mercedes.json");
  lonely.vertices.push_back({9, VertexKind::BoundaryPoint, 0});
  CHECK(contains(validate(lonely), "ρ_m ≥ 1 violated"));

  PartitionGraph bad_face = load("mercedes.json");
  bad_face.faces.pop_back();
  CHECK(contains(validate(bad_face), "unknown face"));

  PartitionGraph euler = load("mercedes.json");
  euler.faces.push_back(7);
  CHECK(contains(validate(euler), "Euler"));
}

TEST_CASE("odd_data") {
  const auto m = odd_data(load("mercedes.json"));
  CHECK(m.odd_vertices == std::set<int>{0});
  CHECK(m.odd_holes.empty());
  CHECK(odd_data(checkerboard()).odd_vertices.empty());
  const auto f = odd_data(load("fig2a.json"));
  CHECK(f.odd_vertices == std::set<int>{0});
  CHECK(f.odd_holes == std::set<int>{2});
}

TEST_CASE("is_bipartite") {
  const auto m = is_bipartite(load("mercedes.json"));
  CHECK_FALSE(m.bipartite);
  CHECK(m.odd_cycle.size() == 3);
  const auto c = is_bipartite(checkerboard());
  REQUIRE(c.bipartite);
  std::map<int, int> colour(c.coloring.begin(), c.coloring.end());
  for (const auto& adj : face_adjacency(checkerboard())) CHECK(colour[adj.a] != colour[adj.b]);
  CHECK(is_bipartite(load("fig2a.json")).bipartite);
}

TEST_CASE("face_adjacency skips cracks") {
  const auto adj = face_adjacency(load("fig2a.json"));
  CHECK(adj.size() == 5);  // edge 4 has the same face on both sides
  for (const auto& a : adj) CHECK(a.edge != 4);
}

TEST_CASE("compactify collapses boundary components") {
  const auto c = compactify(load("fig2a.json"));
  CHECK(c.graph.vertex_count == 5);  // x1 and four components
  CHECK(c.vertex_ids[0] == 0);
  CHECK(c.component_ids[1] == 0);
  CHECK(c.graph.edges[5].first == c.graph.edges[5].second);  // the loop
}

TEST_CASE("slit on the Mercedes star keeps a single arm") {
  const PartitionGraph g = load("mercedes.json");
  const SlitSet s = slit(g);
  CHECK(s.edges == std::vector<int>{2});
  CHECK(slit_verify(g, s));
  CHECK(odd_data(g, s.edges) == odd_data(g));
}

TEST_CASE("slit_verify on all subsets of the Mercedes star") {
  const PartitionGraph g = load("mercedes.json");
  int accepted = 0;
  for (int mask = 0; mask < 8; ++mask) {
    SlitSet s;
    for (int e = 0; e < 3; ++e)
      if (mask >> e & 1) s.edges.push_back(e);
    const bool ok = slit_verify(g, s);
    accepted += ok;
    // Two arms flip the centre parity; three arms close a cycle through the outer point.
    if (s.edges.size() != 1) CHECK_FALSE(ok);
  }
  CHECK(accepted == 3);
  CHECK_FALSE(slit_verify(g, SlitSet{}));
}

TEST_CASE("slit leaves a forest unchanged") {
  PartitionGraph g;
  g.vertices = {{0, VertexKind::InteriorCritical, std::nullopt}, {1, VertexKind::BoundaryPoint, 0},
                {2, VertexKind::BoundaryPoint, 1}, {3, VertexKind::BoundaryPoint, 2}};
  g.edges = {{0, 0, 1, 0, 0}, {1, 0, 2, 0, 0}, {2, 0, 3, 0, 0}};
  g.holes = {{0, true}, {1, false}, {2, false}};
  g.faces = {0};
  CHECK(slit(g).edges == std::vector<int>{0, 1, 2});
}

TEST_CASE("theta graph: one two-edge cycle removed") {
  const PartitionGraph g = theta_graph();
  const SlitSet s = slit(g);
  CHECK(s.edges == std::vector<int>{2, 3});
  CHECK(slit_verify(g, s));
  const auto compact = compactify(g);
  const auto accepted = suite::brute_force_slits(compact.graph);
  CHECK(std::find(accepted.begin(), accepted.end(), 0b1100u) != accepted.end());
}

TEST_CASE("no odd vertices: the empty set is a slit") {
  CHECK(slit_verify(checkerboard(), SlitSet{}));
  CHECK(slit(checkerboard()).edges.empty());
}

TEST_CASE("slit_multigraph handles loops and parallel edges") {
  Multigraph m{2, {{0, 0}, {0, 1}, {0, 1}, {0, 1}}};
  const auto kept = slit_multigraph(m);
  CHECK(slit_verify_multigraph(m, kept));
  CHECK(kept.size() == 1);
}

TEST_CASE("property: slit output is among the brute-force accepted sets") {
  std::mt19937_64 rng(0xC0FFEE);
  for (int t = 0; t < 300; ++t) {
    const Multigraph m = suite::random_planar_multigraph(rng);
    const auto kept = slit_multigraph(m);
    std::uint32_t mask = 0;
    for (int e : kept) mask |= 1u << e;
    const auto accepted = suite::brute_force_slits(m);
    REQUIRE(std::find(accepted.begin(), accepted.end(), mask) != accepted.end());
    // The library verifier agrees with the oracle on every subset.
    for (std::uint32_t s = 0; s < (1u << m.edges.size()); ++s) {
      std::vector<int> subset;
      for (std::size_t e = 0; e < m.edges.size(); ++e)
        if (s >> e & 1u) subset.push_back(static_cast<int>(e));
      const bool oracle = std::find(accepted.begin(), accepted.end(), s) != accepted.end();
      REQUIRE(slit_verify_multigraph(m, subset) == oracle);
    }
  }
}

TEST_CASE("slit is deterministic") {
  const PartitionGraph g = load("fig2a.json");
  CHECK(slit(g) == slit(g));
  CHECK(slit(g).edges == std::vector<int>{4});
}
