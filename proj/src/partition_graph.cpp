#include "partition_flow/partition_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace partition_flow::graph {

const Vertex* PartitionGraph::vertex(int id) const {
  for (const auto& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const Edge* PartitionGraph::edge(int id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

int PartitionGraph::degree(int vertex_id) const {
  int d = 0;
  for (const auto& e : edges) d += (e.a == vertex_id) + (e.b == vertex_id);
  return d;
}

std::vector<FaceAdjacency> face_adjacency(const PartitionGraph& g) {
  std::vector<FaceAdjacency> out;
  for (const auto& e : g.edges) {
    if (e.left_face && e.right_face && *e.left_face != *e.right_face) {
      out.push_back({std::min(*e.left_face, *e.right_face), std::max(*e.left_face, *e.right_face), e.id});
    }
  }
  return out;
}

namespace {

int count_components(const Multigraph& g) {
  std::vector<int> parent(g.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int components = g.vertex_count;
  for (auto [a, b] : g.edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

}  // namespace

std::vector<std::string> validate(const PartitionGraph& g) {
  std::vector<std::string> errors;
  std::set<int> vertex_ids, edge_ids, hole_ids, face_ids(g.faces.begin(), g.faces.end());
  for (const auto& v : g.vertices) {
    if (!vertex_ids.insert(v.id).second) errors.push_back("duplicate vertex id " + std::to_string(v.id));
  }
  for (const auto& e : g.edges) {
    if (!edge_ids.insert(e.id).second) errors.push_back("duplicate edge id " + std::to_string(e.id));
    if (!vertex_ids.count(e.a) || !vertex_ids.count(e.b)) {
      errors.push_back("edge " + std::to_string(e.id) + " has an unknown endpoint");
    }
    for (const auto& f : {e.left_face, e.right_face}) {
      if (f && !face_ids.count(*f)) {
        errors.push_back("edge " + std::to_string(e.id) + " references unknown face " + std::to_string(*f));
      }
    }
  }
  int outer = 0;
  for (const auto& h : g.holes) {
    if (!hole_ids.insert(h.id).second) errors.push_back("duplicate boundary component id " + std::to_string(h.id));
    outer += h.outer ? 1 : 0;
  }
  if (outer != 1) errors.push_back("expected exactly one outer boundary component, found " + std::to_string(outer));
  if (face_ids.size() != g.faces.size()) errors.push_back("duplicate face id");

  for (const auto& v : g.vertices) {
    const int d = g.degree(v.id);
    if (v.kind == VertexKind::InteriorCritical) {
      if (v.component) errors.push_back("interior vertex " + std::to_string(v.id) + " lies on a boundary component");
      if (d < 3) {
        errors.push_back("ν_ℓ ≥ 3 violated at vertex " + std::to_string(v.id) + " (degree " + std::to_string(d) + ")");
      }
    } else {
      if (!v.component || !hole_ids.count(*v.component)) {
        errors.push_back("boundary point " + std::to_string(v.id) + " has no valid boundary component");
      }
      if (d < 1) errors.push_back("ρ_m ≥ 1 violated at boundary point " + std::to_string(v.id));
    }
  }
  if (!errors.empty()) return errors;

  // Euler on the sphere compactification: V - E + F = 1 + C.
  const Compactified c = compactify(g);
  const int v = c.graph.vertex_count;
  const int e = static_cast<int>(c.graph.edges.size());
  const int f = static_cast<int>(g.faces.size());
  const int comps = count_components(c.graph);
  if (v - e + f != 1 + comps) {
    errors.push_back("Euler formula violated: V - E + F = " + std::to_string(v - e + f) + ", expected " +
                     std::to_string(1 + comps));
  }
  return errors;
}

OddData odd_data(const PartitionGraph& g, const std::vector<int>& edge_ids) {
  std::set<int> chosen(edge_ids.begin(), edge_ids.end());
  std::map<int, int> degree;
  for (const auto& e : g.edges) {
    if (!chosen.count(e.id)) continue;
    ++degree[e.a];
    ++degree[e.b];
  }
  OddData out;
  std::map<int, int> hole_incidence;
  for (const auto& v : g.vertices) {
    const int d = degree[v.id];
    if (v.kind == VertexKind::InteriorCritical) {
      if (d % 2 == 1) out.odd_vertices.insert(v.id);
    } else if (v.component) {
      hole_incidence[*v.component] += d;
    }
  }
  for (const auto& h : g.holes) {
    if (!h.outer && hole_incidence[h.id] % 2 == 1) out.odd_holes.insert(h.id);
  }
  return out;
}

OddData odd_data(const PartitionGraph& g) {
  std::vector<int> all;
  for (const auto& e : g.edges) all.push_back(e.id);
  return odd_data(g, all);
}

Bipartition is_bipartite(const PartitionGraph& g) {
  std::map<int, std::vector<int>> adj;
  for (int f : g.faces) adj[f];
  for (const auto& fa : face_adjacency(g)) {
    adj[fa.a].push_back(fa.b);
    adj[fa.b].push_back(fa.a);
  }
  for (auto& [f, list] : adj) std::sort(list.begin(), list.end());

  std::map<int, int> colour, parent, depth;
  Bipartition out;
  for (const auto& [start, unused] : adj) {
    (void)unused;
    if (colour.count(start)) continue;
    colour[start] = 0;
    parent[start] = start;
    depth[start] = 0;
    std::queue<int> queue;
    queue.push(start);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int w : adj[u]) {
        if (!colour.count(w)) {
          colour[w] = 1 - colour[u];
          parent[w] = u;
          depth[w] = depth[u] + 1;
          queue.push(w);
        } else if (colour[w] == colour[u]) {
          // Walk both BFS branches up to their common ancestor.
          std::vector<int> left{u}, right{w};
          int x = u, y = w;
          while (depth[x] > depth[y]) left.push_back(x = parent[x]);
          while (depth[y] > depth[x]) right.push_back(y = parent[y]);
          while (x != y) {
            left.push_back(x = parent[x]);
            right.push_back(y = parent[y]);
          }
          right.pop_back();
          out.odd_cycle = left;
          out.odd_cycle.insert(out.odd_cycle.end(), right.rbegin(), right.rend());
          out.bipartite = false;
          return out;
        }
      }
    }
  }
  out.bipartite = true;
  for (const auto& [f, c] : colour) out.coloring.emplace_back(f, c);
  return out;
}

Compactified compactify(const PartitionGraph& g) {
  Compactified out;
  std::map<int, int> interior_index, component_index;
  std::vector<int> interior;
  for (const auto& v : g.vertices)
    if (v.kind == VertexKind::InteriorCritical) interior.push_back(v.id);
  std::sort(interior.begin(), interior.end());
  for (int id : interior) {
    interior_index[id] = static_cast<int>(out.vertex_ids.size());
    out.vertex_ids.push_back(id);
    out.component_ids.push_back(-1);
  }
  std::vector<int> components;
  for (const auto& h : g.holes) components.push_back(h.id);
  std::sort(components.begin(), components.end());
  for (int id : components) {
    component_index[id] = static_cast<int>(out.vertex_ids.size());
    out.vertex_ids.push_back(-1);
    out.component_ids.push_back(id);
  }
  out.graph.vertex_count = static_cast<int>(out.vertex_ids.size());

  auto map_vertex = [&](int id) {
    const Vertex* v = g.vertex(id);
    if (!v) throw std::invalid_argument("compactify: unknown vertex " + std::to_string(id));
    if (v->kind == VertexKind::InteriorCritical) return interior_index.at(id);
    if (!v->component || !component_index.count(*v->component)) {
      throw std::invalid_argument("compactify: boundary point " + std::to_string(id) + " without component");
    }
    return component_index.at(*v->component);
  };
  std::vector<const Edge*> sorted;
  for (const auto& e : g.edges) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Edge* x, const Edge* y) { return x->id < y->id; });
  for (const Edge* e : sorted) {
    out.graph.edges.emplace_back(map_vertex(e->a), map_vertex(e->b));
    out.edge_ids.push_back(e->id);
  }
  return out;
}

namespace {

// First cycle closed by the ordered DFS over alive edges, as edge indices.
std::vector<int> find_cycle(const Multigraph& g, const std::vector<bool>& alive) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.vertex_count);  // (edge, other end)
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (!alive[e]) continue;
    auto [a, b] = g.edges[e];
    adj[a].emplace_back(e, b);
    if (a != b) adj[b].emplace_back(e, a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  std::vector<int> state(g.vertex_count, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> stack_edges;               // tree edges along the current path
  std::vector<int> stack_vertices;
  std::vector<int> cycle;

  std::function<bool(int, int)> dfs = [&](int u, int parent_edge) {
    state[u] = 1;
    stack_vertices.push_back(u);
    for (auto [e, w] : adj[u]) {
      if (e == parent_edge) continue;
      if (state[w] == 1) {
        // Back edge to an ancestor (or a self-loop when w == u).
        cycle.push_back(e);
        for (int i = static_cast<int>(stack_vertices.size()) - 1; stack_vertices[i] != w; --i) {
          cycle.push_back(stack_edges[i - 1]);
        }
        return true;
      }
      if (state[w] == 0) {
        stack_edges.push_back(e);
        if (dfs(w, e)) return true;
        stack_edges.pop_back();
      }
    }
    state[u] = 2;
    stack_vertices.pop_back();
    return false;
  };
  for (int s = 0; s < g.vertex_count; ++s) {
    if (state[s] == 0 && dfs(s, -1)) {
      std::sort(cycle.begin(), cycle.end());
      return cycle;
    }
  }
  return {};
}

}  // namespace

std::vector<int> slit_multigraph(const Multigraph& g) {
  std::vector<bool> alive(g.edges.size(), true);
  for (;;) {
    const auto cycle = find_cycle(g, alive);
    if (cycle.empty()) break;
    for (int e : cycle) alive[e] = false;
  }
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(alive.size()); ++e)
    if (alive[e]) out.push_back(e);
  return out;
}

bool slit_verify_multigraph(const Multigraph& g, const std::vector<int>& subset) {
  std::vector<int> full(g.vertex_count, 0), sub(g.vertex_count, 0);
  for (auto [a, b] : g.edges) {
    ++full[a];
    ++full[b];
  }
  std::vector<int> parent(g.vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::set<int> seen;
  for (int e : subset) {
    if (e < 0 || e >= static_cast<int>(g.edges.size()) || !seen.insert(e).second) return false;
    auto [a, b] = g.edges[e];
    ++sub[a];
    ++sub[b];
    const int ra = find(a), rb = find(b);
    if (ra == rb) return false;  // closes a cycle (self-loops included)
    parent[ra] = rb;
  }
  for (int v = 0; v < g.vertex_count; ++v)
    if ((full[v] - sub[v]) % 2 != 0) return false;
  return true;
}

SlitSet slit(const PartitionGraph& g) {
  const Compactified c = compactify(g);
  SlitSet out;
  for (int e : slit_multigraph(c.graph)) out.edges.push_back(c.edge_ids[e]);
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

bool slit_verify(const PartitionGraph& g, const SlitSet& candidate) {
  const Compactified c = compactify(g);
  std::map<int, int> index;
  for (int i = 0; i < static_cast<int>(c.edge_ids.size()); ++i) index[c.edge_ids[i]] = i;
  std::vector<int> subset;
  for (int id : candidate.edges) {
    auto it = index.find(id);
    if (it == index.end()) return false;
    subset.push_back(it->second);
  }
  return slit_verify_multigraph(c.graph, subset);
}

}  // namespace partition_flow::graph
