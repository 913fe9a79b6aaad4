#include "partition_flow/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

#include "partition_flow/errors.hpp"

namespace partition_flow::grid {

namespace {

// Lattice directions in counter-clockwise order.
constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

int direction_index(int dx, int dy) {
  for (int d = 0; d < 4; ++d)
    if (kDirections[d][0] == dx && kDirections[d][1] == dy) return d;
  return -1;
}

std::string where(const GridPartition& g, Index n) {
  std::ostringstream os;
  os << "(" << g.ix(n) * g.h << ", " << g.iy(n) * g.h << ")";
  return os.str();
}

int to_lattice(double coordinate, double h, int limit, const char* what) {
  const double scaled = coordinate / h;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled))) {
    throw SpecError(std::string(what) + " coordinate " + std::to_string(coordinate) + " is not a multiple of h");
  }
  const int v = static_cast<int>(rounded);
  if (v < 0 || v > limit) throw SpecError(std::string(what) + " coordinate " + std::to_string(coordinate) + " outside the rectangle");
  return v;
}

std::optional<Index> neighbour(const GridPartition& g, Index n, int d) {
  const int i = g.ix(n) + kDirections[d][0];
  const int j = g.iy(n) + kDirections[d][1];
  if (i < 0 || i > g.nx || j < 0 || j > g.ny) return std::nullopt;
  return g.node(i, j);
}

std::pair<Index, Index> ordered(Index a, Index b) { return {std::min(a, b), std::max(a, b)}; }

// Row/column numbering of an operator over nodes accepted by `keep`.
std::vector<Index> numbering(const GridPartition& g, const std::vector<bool>& keep, std::vector<Index>& nodes) {
  std::vector<Index> row(g.node_count(), -1);
  for (Index n = 0; n < g.node_count(); ++n) {
    if (keep[n]) {
      row[n] = static_cast<Index>(nodes.size());
      nodes.push_back(n);
    }
  }
  return row;
}

std::set<std::pair<Index, Index>> cut_set(const GridPartition& g) {
  std::set<std::pair<Index, Index>> cuts;
  for (const auto& s : g.sides)
    if (s.side < 0) cuts.insert(ordered(s.slit_node, s.neighbor));
  return cuts;
}

}  // namespace

std::vector<Index> GridPartition::poles() const {
  std::vector<Index> out;
  for (Index n = 0; n < node_count(); ++n)
    if (labels[n] == NodeLabel::Pole) out.push_back(n);
  return out;
}

std::vector<Index> GridPartition::odd_critical_nodes() const {
  std::vector<Index> out;
  for (Index n = 0; n < node_count(); ++n)
    if (on_interface(n) && arms[n] >= 3 && arms[n] % 2 == 1) out.push_back(n);
  return out;
}

std::set<Index> GridPartition::slit_nodes() const {
  std::set<Index> out;
  for (const auto& chain : slit_chains)
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) out.insert(chain[i]);
  return out;
}

GridPartition build_grid(const DomainSpec& spec) {
  if (!(spec.h > 0)) throw SpecError("mesh width h must be positive");
  GridPartition g;
  g.h = spec.h;
  g.nx = to_lattice(spec.lx, spec.h, std::numeric_limits<int>::max() / 4, "rect");
  g.ny = to_lattice(spec.ly, spec.h, std::numeric_limits<int>::max() / 4, "rect");
  if (g.nx < 2 || g.ny < 2) throw SpecError("rectangle must span at least two cells in each direction");

  const Index count = g.node_count();
  g.labels.assign(count, NodeLabel::Subdomain);
  g.subdomain.assign(count, -1);
  g.arms.assign(count, 0);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (i == 0 || j == 0 || i == g.nx || j == g.ny) g.labels[g.node(i, j)] = NodeLabel::Dirichlet;

  std::set<int> seen_ids;
  for (const auto& iface : spec.interfaces) {
    if (!seen_ids.insert(iface.id).second) throw SpecError("duplicate interface id " + std::to_string(iface.id));
    if (iface.points.size() < 2) throw SpecError("interface " + std::to_string(iface.id) + " needs at least two points");
    std::vector<Index> path;
    for (std::size_t p = 0; p + 1 < iface.points.size(); ++p) {
      const int i0 = to_lattice(iface.points[p][0], g.h, g.nx, "interface");
      const int j0 = to_lattice(iface.points[p][1], g.h, g.ny, "interface");
      const int i1 = to_lattice(iface.points[p + 1][0], g.h, g.nx, "interface");
      const int j1 = to_lattice(iface.points[p + 1][1], g.h, g.ny, "interface");
      if ((i0 != i1) == (j0 != j1)) {
        throw SpecError("interface " + std::to_string(iface.id) + " segment is not axis-aligned or has zero length");
      }
      const int di = (i1 > i0) - (i1 < i0), dj = (j1 > j0) - (j1 < j0);
      if (path.empty()) path.push_back(g.node(i0, j0));
      for (int i = i0, j = j0; i != i1 || j != j1;) {
        const Index a = g.node(i, j);
        i += di;
        j += dj;
        const Index b = g.node(i, j);
        if (!g.interior(a) && !g.interior(b)) {
          throw SpecError("interface " + std::to_string(iface.id) + " runs along the boundary at " + where(g, a));
        }
        if (!g.interface_edges.insert(ordered(a, b)).second) {
          throw SpecError("interface " + std::to_string(iface.id) + " overlaps another interface at " + where(g, a));
        }
        ++g.arms[a];
        ++g.arms[b];
        path.push_back(b);
      }
    }
    g.interface_ids.push_back(iface.id);
    g.interface_paths.push_back(std::move(path));
  }
  for (Index n = 0; n < count; ++n) {
    if (g.interior(n) && g.arms[n] > 0) g.labels[n] = NodeLabel::Interface;
  }
  for (Index n = 0; n < count; ++n) {
    if (g.labels[n] == NodeLabel::Interface && g.arms[n] == 1) {
      throw SpecError("interface ends inside the domain at " + where(g, n) + " (not separating)");
    }
  }
  for (const auto& p : spec.poles) {
    const Index n = g.node(to_lattice(p[0], g.h, g.nx, "pole"), to_lattice(p[1], g.h, g.ny, "pole"));
    if (g.labels[n] != NodeLabel::Interface || g.arms[n] < 3 || g.arms[n] % 2 == 0) {
      throw SpecError("pole at " + where(g, n) + " is not an odd critical interface node");
    }
    g.labels[n] = NodeLabel::Pole;
  }

  // Subdomains: 4-connected components of the remaining interior nodes.
  for (Index start = 0; start < count; ++start) {
    if (g.labels[start] != NodeLabel::Subdomain || g.subdomain[start] != -1) continue;
    const int label = g.domain_count++;
    std::queue<Index> queue;
    queue.push(start);
    g.subdomain[start] = label;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop();
      for (int d = 0; d < 4; ++d) {
        const auto w = neighbour(g, u, d);
        if (w && g.labels[*w] == NodeLabel::Subdomain && g.subdomain[*w] == -1) {
          g.subdomain[*w] = label;
          queue.push(*w);
        }
      }
    }
  }
  if (g.domain_count == 0) throw SpecError("partition leaves no subdomain nodes");

  if (spec.slit) {
    std::vector<std::vector<Index>> paths;
    for (int id : *spec.slit) {
      auto it = std::find(g.interface_ids.begin(), g.interface_ids.end(), id);
      if (it == g.interface_ids.end()) throw SpecError("slit references unknown interface " + std::to_string(id));
      paths.push_back(g.interface_paths[it - g.interface_ids.begin()]);
    }
    apply_slit(g, paths);
  }
  return g;
}

void apply_slit(GridPartition& g, const std::vector<std::vector<Index>>& paths) {
  g.slit_chains.clear();
  g.sides.clear();
  // Oriented unit edges as given.
  std::map<std::pair<Index, Index>, std::pair<Index, Index>> oriented;
  std::map<Index, std::vector<Index>> adjacency;
  for (const auto& path : paths) {
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const Index a = path[p], b = path[p + 1];
      if (!g.interface_edges.count(ordered(a, b))) {
        throw SlitError("slit leaves the interface at " + where(g, a));
      }
      if (!oriented.emplace(ordered(a, b), std::make_pair(a, b)).second) {
        throw SlitError("slit traverses the edge at " + where(g, a) + " twice");
      }
      adjacency[a].push_back(b);
      adjacency[b].push_back(a);
    }
  }
  auto terminal = [&](Index n) { return !g.interior(n) || g.labels[n] == NodeLabel::Pole; };
  for (const auto& [n, list] : adjacency) {
    if (g.labels[n] == NodeLabel::Pole && list.size() % 2 == 0) {
      throw SlitError("pole at " + where(g, n) + " receives an even number of slit arms");
    }
    if (!terminal(n) && list.size() != 2) {
      throw SlitError("slit branches or ends at the non-pole node " + where(g, n));
    }
  }

  std::set<std::pair<Index, Index>> used;
  for (const auto& [start, list] : adjacency) {
    if (!terminal(start)) continue;
    for (Index first : list) {
      if (used.count(ordered(start, first))) continue;
      std::vector<Index> chain{start};
      Index prev = start, cur = first;
      used.insert(ordered(prev, cur));
      chain.push_back(cur);
      while (!terminal(cur)) {
        const auto& next = adjacency[cur];
        const Index nxt = next[0] == prev ? next[1] : next[0];
        used.insert(ordered(cur, nxt));
        prev = cur;
        cur = nxt;
        chain.push_back(cur);
      }
      // Keep the orientation of the chain's first unit edge.
      if (oriented.at(ordered(chain[0], chain[1])).first != chain[0]) std::reverse(chain.begin(), chain.end());
      g.slit_chains.push_back(std::move(chain));
    }
  }
  if (used.size() != oriented.size()) throw SlitError("slit contains a closed loop without poles or boundary ends");

  const std::set<Index> on_slit = g.slit_nodes();
  for (const auto& chain : g.slit_chains) {
    std::map<Index, int> classified;
    for (std::size_t c = 1; c + 1 < chain.size(); ++c) {
      const Index node = chain[c];
      const int din = direction_index(g.ix(node) - g.ix(chain[c - 1]), g.iy(node) - g.iy(chain[c - 1]));
      const int dout = direction_index(g.ix(chain[c + 1]) - g.ix(node), g.iy(chain[c + 1]) - g.iy(node));
      const int back = (din + 2) % 4;
      const int left_span = (back - dout + 4) % 4;
      for (int e = 0; e < 4; ++e) {
        if (e == back || e == dout) continue;
        const auto n = neighbour(g, node, e);
        if (!n || terminal(*n)) continue;
        if (on_slit.count(*n)) throw SlitError("slit touches itself at " + where(g, node));
        const int side = ((e - dout + 4) % 4) < left_span ? +1 : -1;
        auto [it, inserted] = classified.emplace(*n, side);
        if (!inserted && it->second != side) {
          throw SlitError("neighbour " + where(g, *n) + " classified on both sides of the slit");
        }
        g.sides.push_back({node, *n, side});
      }
    }
  }
}

GridGraph partition_graph(const GridPartition& g) {
  GridGraph out;
  std::map<Index, int> vertex_of;
  auto add_vertex = [&](Index n) {
    auto it = vertex_of.find(n);
    if (it != vertex_of.end()) return it->second;
    graph::Vertex v;
    v.id = static_cast<int>(out.graph.vertices.size());
    if (g.interior(n)) {
      v.kind = graph::VertexKind::InteriorCritical;
    } else {
      v.kind = graph::VertexKind::BoundaryPoint;
      v.component = 0;
    }
    out.graph.vertices.push_back(v);
    vertex_of[n] = v.id;
    return v.id;
  };
  std::map<Index, std::vector<Index>> adjacency;
  for (auto [a, b] : g.interface_edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& [n, list] : adjacency) std::sort(list.begin(), list.end());
  auto is_vertex = [&](Index n) { return !g.interior(n) || g.arms[n] != 2; };
  for (const auto& [n, list] : adjacency)
    if (is_vertex(n)) add_vertex(n);

  auto face_on_side = [&](const std::vector<Index>& path, int turn) -> std::optional<int> {
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const int d = direction_index(g.ix(path[p + 1]) - g.ix(path[p]), g.iy(path[p + 1]) - g.iy(path[p]));
      for (Index base : {path[p], path[p + 1]}) {
        const auto n = neighbour(g, base, (d + turn) % 4);
        if (n && g.subdomain[*n] >= 0) return g.subdomain[*n];
      }
    }
    return std::nullopt;
  };

  std::set<std::pair<Index, Index>> used;
  auto trace = [&](Index start, Index first) {
    std::vector<Index> path{start, first};
    used.insert(ordered(start, first));
    Index prev = start, cur = first;
    while (!is_vertex(cur) && cur != start) {
      const auto& next = adjacency[cur];
      const Index nxt = next[0] == prev ? next[1] : next[0];
      used.insert(ordered(cur, nxt));
      prev = cur;
      cur = nxt;
      path.push_back(cur);
    }
    return path;
  };
  auto emit = [&](std::vector<Index> path) {
    graph::Edge e;
    e.id = static_cast<int>(out.graph.edges.size());
    e.a = add_vertex(path.front());
    e.b = add_vertex(path.back());
    e.left_face = face_on_side(path, 1);
    e.right_face = face_on_side(path, 3);
    out.graph.edges.push_back(e);
    out.edge_paths.push_back(std::move(path));
  };
  for (const auto& [n, list] : adjacency) {
    if (!is_vertex(n)) continue;
    for (Index first : list)
      if (!used.count(ordered(n, first))) emit(trace(n, first));
  }
  // Closed interface loops without junctions get a degree-2 vertex.
  for (const auto& [n, list] : adjacency) {
    for (Index first : list) {
      if (used.count(ordered(n, first))) continue;
      add_vertex(n);
      emit(trace(n, first));
    }
  }
  out.graph.holes.push_back({0, true});
  for (int f = 0; f < g.domain_count; ++f) out.graph.faces.push_back(f);
  return out;
}

void prepare_slit(GridPartition& g) {
  for (Index n : g.odd_critical_nodes()) g.labels[n] = NodeLabel::Pole;
  if (g.has_slit()) return;
  const GridGraph gg = partition_graph(g);
  const graph::SlitSet chosen = graph::slit(gg.graph);
  std::vector<std::vector<Index>> paths;
  for (int id : chosen.edges) paths.push_back(gg.edge_paths[id]);
  apply_slit(g, paths);
}

namespace {

SymmetricOperator assemble(const GridPartition& g, bool eliminate_poles, const std::set<std::pair<Index, Index>>& cuts) {
  std::vector<bool> keep(g.node_count());
  for (Index n = 0; n < g.node_count(); ++n) {
    keep[n] = g.interior(n) && !(eliminate_poles && g.labels[n] == NodeLabel::Pole);
  }
  std::vector<Index> nodes;
  const auto row = numbering(g, keep, nodes);
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<Triplet> t;
  for (Index n : nodes) {
    t.emplace_back(row[n], row[n], 4.0 * inv_h2);
    for (int d = 0; d < 4; ++d) {
      const auto w = neighbour(g, n, d);
      if (!w || row[*w] < 0) continue;
      const double sign = cuts.count(ordered(n, *w)) ? -1.0 : 1.0;
      t.emplace_back(row[n], row[*w], -sign * inv_h2);
    }
  }
  return make_operator(static_cast<Index>(nodes.size()), t, nodes);
}

void check_poles_slit(const GridPartition& g) {
  std::map<Index, int> arms;
  for (const auto& chain : g.slit_chains) {
    ++arms[chain.front()];
    ++arms[chain.back()];
  }
  for (Index p : g.poles()) {
    if (arms[p] % 2 == 0) throw SlitError("pole at " + where(g, p) + " is not an endpoint of an odd number of slit arms");
  }
}

}  // namespace

SymmetricOperator assemble_laplacian(const GridPartition& g) { return assemble(g, false, {}); }

SymmetricOperator assemble_slit(const GridPartition& g) {
  check_poles_slit(g);
  return assemble(g, true, cut_set(g));
}

SymmetricOperator assemble_double_cover(const GridPartition& g) {
  check_poles_slit(g);
  const auto cuts = cut_set(g);
  std::vector<bool> keep(g.node_count());
  for (Index n = 0; n < g.node_count(); ++n) keep[n] = g.interior(n) && g.labels[n] != NodeLabel::Pole;
  std::vector<Index> nodes;
  const auto row = numbering(g, keep, nodes);
  const Index size = static_cast<Index>(nodes.size());
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<Triplet> t;
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (Index n : nodes) {
      const Index r = row[n] + sheet * size;
      t.emplace_back(r, r, 4.0 * inv_h2);
      for (int d = 0; d < 4; ++d) {
        const auto w = neighbour(g, n, d);
        if (!w || row[*w] < 0) continue;
        const int target = cuts.count(ordered(n, *w)) ? 1 - sheet : sheet;
        t.emplace_back(r, row[*w] + target * size, -inv_h2);
      }
    }
  }
  std::vector<Index> all_nodes = nodes;
  all_nodes.insert(all_nodes.end(), nodes.begin(), nodes.end());
  SymmetricOperator op = make_operator(2 * size, t, all_nodes);
  op.sheets.assign(2 * size, 0);
  std::fill(op.sheets.begin() + size, op.sheets.end(), 1);
  return op;
}

SymmetricOperator restrict_cover(const SymmetricOperator& cover, bool antisymmetric) {
  const Index size = cover.dimension() / 2;
  if (cover.sheets.size() != static_cast<std::size_t>(cover.dimension()) || 2 * size != cover.dimension()) {
    throw std::invalid_argument("restrict_cover: not a two-sheet operator");
  }
  auto base = [&](Index r) { return r < size ? r : r - size; };
  auto weight = [&](Index r) { return (antisymmetric && cover.sheets[r] == 1) ? -1.0 : 1.0; };
  std::vector<Triplet> t;
  for (Index col = 0; col < cover.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(cover.matrix, col); it; ++it) {
      t.emplace_back(base(it.index()), base(col), 0.5 * weight(it.index()) * weight(col) * it.value());
    }
  }
  return make_operator(size, t, std::vector<Index>(cover.nodes.begin(), cover.nodes.begin() + size));
}

SymmetricOperator RobinFamily::at(double sigma) const {
  if (std::isinf(sigma)) return decoupled();
  SymmetricOperator op = base;
  for (Index d : interface_dofs) op.matrix.coeffRef(d, d) += sigma * interface_mass[d];
  return op;
}

SymmetricOperator RobinFamily::decoupled() const {
  std::vector<Index> row(base.dimension(), -1);
  std::vector<Index> nodes;
  for (Index r = 0; r < base.dimension(); ++r) {
    if (interface_mass[r] == 0.0) {
      row[r] = static_cast<Index>(nodes.size());
      nodes.push_back(base.nodes[r]);
    }
  }
  std::vector<Triplet> t;
  for (Index col = 0; col < base.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(base.matrix, col); it; ++it) {
      if (row[it.index()] >= 0 && row[col] >= 0) t.emplace_back(row[it.index()], row[col], it.value());
    }
  }
  return make_operator(static_cast<Index>(nodes.size()), t, nodes);
}

RobinFamily robin_family(const GridPartition& g, const SymmetricOperator& base) {
  RobinFamily f;
  f.base = base;
  f.h = g.h;
  f.interface_mass = Eigen::VectorXd::Zero(base.dimension());
  for (Index r = 0; r < base.dimension(); ++r) {
    if (g.on_interface(base.nodes[r])) {
      f.interface_mass[r] = g.h;
      f.interface_dofs.push_back(r);
    }
  }
  return f;
}

std::vector<double> subdomain_ground_energies(const GridPartition& g, const RobinFamily& family) {
  const SymmetricOperator dec = family.decoupled();
  std::vector<double> out;
  for (int label = 0; label < g.domain_count; ++label) {
    std::vector<Index> rows;
    for (Index r = 0; r < dec.dimension(); ++r)
      if (g.subdomain[dec.nodes[r]] == label) rows.push_back(r);
    std::vector<Index> local(dec.dimension(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) local[rows[i]] = static_cast<Index>(i);
    std::vector<Triplet> t;
    for (Index col = 0; col < dec.matrix.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(dec.matrix, col); it; ++it) {
        if (local[it.index()] >= 0 && local[col] >= 0) t.emplace_back(local[it.index()], local[col], it.value());
      }
    }
    const SymmetricOperator block = make_operator(static_cast<Index>(rows.size()), t);
    const Spectrum s = block.dimension() <= 400 ? eig_dense(block, false) : eig_lowest(block, 1);
    out.push_back(s.eigenvalues[0]);
  }
  return out;
}

TransmissionResidual transmission_residual(const GridPartition& g, const RobinFamily& family, const Eigen::VectorXd& u,
                                           double sigma, double tol) {
  const SymmetricOperator t = family.at(sigma);
  if (u.size() != t.dimension()) throw std::invalid_argument("transmission_residual: vector size mismatch");
  const double lambda = u.dot(t.matrix * u) / u.squaredNorm();
  if ((t.matrix * u - lambda * u).norm() > tol * t.norm_inf() * u.norm()) {
    throw NotAnEigenvector("||T u - lambda u|| exceeds tolerance");
  }
  const Eigen::VectorXd v = u / u.cwiseAbs().maxCoeff();
  std::vector<Index> row(g.node_count(), -1);
  for (Index r = 0; r < t.dimension(); ++r) row[t.nodes[r]] = r;

  TransmissionResidual out;
  out.lambda = lambda;
  const double h = g.h;
  for (Index r : family.interface_dofs) {
    const Index n = t.nodes[r];
    double normal = 0.0, tangential = 0.0;
    for (int d = 0; d < 4; ++d) {
      const auto w = neighbour(g, n, d);
      double seen = 0.0;  // neighbour value as seen from this sheet
      if (w && row[*w] >= 0) seen = -t.matrix.coeff(r, row[*w]) * h * h * v[row[*w]];
      const double diff = (v[r] - seen) / h;
      if (w && g.interface_edges.count(ordered(n, *w))) tangential += diff;
      else normal += diff;
    }
    const double robin = sigma * h * h * v[r];
    out.discrete = std::max(out.discrete, std::abs(normal + robin - (lambda * h * v[r] - tangential)));
    out.continuum = std::max(out.continuum, std::abs(normal + robin));
  }
  return out;
}

SymmetricOperator circle_chain(int n, bool antiperiodic, double length) {
  if (n < 3) throw std::invalid_argument("circle_chain: need at least 3 nodes");
  const double h = length / n;
  const double inv_h2 = 1.0 / (h * h);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 * inv_h2);
    const int j = (i + 1) % n;
    const double c = (antiperiodic && j == 0) ? inv_h2 : -inv_h2;
    t.emplace_back(i, j, c);
    t.emplace_back(j, i, c);
  }
  return make_operator(n, t);
}

RobinFamily circle_robin_family(int arcs, int per_arc, bool antiperiodic, double length) {
  RobinFamily f;
  const int n = arcs * per_arc;
  f.base = circle_chain(n, antiperiodic, length);
  f.h = length / n;
  f.interface_mass = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < arcs; ++a) {
    f.interface_dofs.push_back(a * per_arc);
    f.interface_mass[a * per_arc] = f.h;
  }
  return f;
}

}  // namespace partition_flow::grid
