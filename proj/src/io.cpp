#include "partition_flow/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "partition_flow/errors.hpp"

namespace partition_flow::io {

namespace {

template <typename T>
T field(const Json& j, const char* name, const char* context) {
  if (!j.is_object() || !j.contains(name)) throw SpecError(std::string(context) + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError(std::string(context) + ": field '" + name + "' has the wrong type");
  }
}

std::array<double, 2> point(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SpecError(context + ": expected a point [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::optional<int> optional_int(const Json& j, const char* name, const char* context) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return field<int>(j, name, context);
}

}  // namespace

std::string format_double(double v) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

Json to_json(const graph::PartitionGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : g.vertices) {
    Json jv{{"id", v.id}, {"kind", v.kind == graph::VertexKind::InteriorCritical ? "interior" : "boundary"}};
    if (v.component) jv["component"] = *v.component;
    j["vertices"].push_back(jv);
  }
  j["edges"] = Json::array();
  for (const auto& e : g.edges) {
    Json je{{"id", e.id}, {"ends", {e.a, e.b}}};
    if (e.left_face || e.right_face) {
      je["faces"] = {e.left_face ? Json(*e.left_face) : Json(), e.right_face ? Json(*e.right_face) : Json()};
    }
    j["edges"].push_back(je);
  }
  j["holes"] = Json::array();
  for (const auto& h : g.holes) j["holes"].push_back({{"id", h.id}, {"outer", h.outer}});
  j["faces"] = g.faces;
  j["equal_angle"] = g.equal_angle;
  j["transversal"] = g.transversal;
  return j;
}

graph::PartitionGraph graph_from_json(const Json& j) {
  graph::PartitionGraph g;
  for (const auto& jv : field<Json>(j, "vertices", "graph")) {
    graph::Vertex v;
    v.id = field<int>(jv, "id", "graph.vertices[]");
    const auto kind = field<std::string>(jv, "kind", "graph.vertices[]");
    if (kind == "interior") v.kind = graph::VertexKind::InteriorCritical;
    else if (kind == "boundary") v.kind = graph::VertexKind::BoundaryPoint;
    else throw SpecError("graph.vertices[].kind: expected 'interior' or 'boundary', got '" + kind + "'");
    v.component = optional_int(jv, "component", "graph.vertices[]");
    g.vertices.push_back(v);
  }
  for (const auto& je : field<Json>(j, "edges", "graph")) {
    graph::Edge e;
    e.id = field<int>(je, "id", "graph.edges[]");
    const auto ends = field<std::vector<int>>(je, "ends", "graph.edges[]");
    if (ends.size() != 2) throw SpecError("graph.edges[].ends: expected two vertex ids");
    e.a = ends[0];
    e.b = ends[1];
    if (je.contains("faces")) {
      const Json& f = je.at("faces");
      if (!f.is_array() || f.size() != 2) throw SpecError("graph.edges[].faces: expected [left, right]");
      if (!f[0].is_null()) e.left_face = f[0].get<int>();
      if (!f[1].is_null()) e.right_face = f[1].get<int>();
    }
    g.edges.push_back(e);
  }
  for (const auto& jh : field<Json>(j, "holes", "graph")) {
    g.holes.push_back({field<int>(jh, "id", "graph.holes[]"), jh.value("outer", false)});
  }
  if (j.contains("faces")) g.faces = field<std::vector<int>>(j, "faces", "graph");
  g.equal_angle = j.value("equal_angle", false);
  g.transversal = j.value("transversal", false);
  return g;
}

Json to_json(const grid::DomainSpec& spec) {
  Json j;
  j["rect"] = {spec.lx, spec.ly};
  j["h"] = spec.h;
  j["interfaces"] = Json::array();
  for (const auto& i : spec.interfaces) {
    Json pts = Json::array();
    for (const auto& p : i.points) pts.push_back({p[0], p[1]});
    j["interfaces"].push_back({{"id", i.id}, {"points", pts}});
  }
  if (spec.slit) j["slit"] = *spec.slit;
  j["poles"] = Json::array();
  for (const auto& p : spec.poles) j["poles"].push_back({p[0], p[1]});
  return j;
}

grid::DomainSpec domain_from_json(const Json& j) {
  grid::DomainSpec spec;
  const auto rect = field<Json>(j, "rect", "domain");
  const auto size = point(rect, "domain.rect");
  spec.lx = size[0];
  spec.ly = size[1];
  spec.h = field<double>(j, "h", "domain");
  if (j.contains("interfaces")) {
    for (const auto& ji : field<Json>(j, "interfaces", "domain")) {
      grid::InterfaceSpec i;
      i.id = field<int>(ji, "id", "domain.interfaces[]");
      for (const auto& p : field<Json>(ji, "points", "domain.interfaces[]")) {
        i.points.push_back(point(p, "domain.interfaces[].points"));
      }
      spec.interfaces.push_back(std::move(i));
    }
  }
  if (j.contains("slit") && !j.at("slit").is_null()) spec.slit = field<std::vector<int>>(j, "slit", "domain");
  if (j.contains("poles")) {
    for (const auto& p : field<Json>(j, "poles", "domain")) spec.poles.push_back(point(p, "domain.poles[]"));
  }
  return spec;
}

Json to_json(const DeficiencyReport& r) {
  return {{"source", r.source},
          {"k", r.k},
          {"ell", r.ell},
          {"m", r.m},
          {"mor", r.mor},
          {"def", r.def},
          {"epsilon", r.epsilon},
          {"identity_residual", r.identity_residual},
          {"energy", r.energy},
          {"equipartition_residual", r.equipartition_residual}};
}

DeficiencyReport report_from_json(const Json& j) {
  constexpr const char* ctx = "report";
  DeficiencyReport r;
  r.source = field<std::string>(j, "source", ctx);
  r.k = field<int>(j, "k", ctx);
  r.ell = field<int>(j, "ell", ctx);
  r.m = field<int>(j, "m", ctx);
  r.mor = field<int>(j, "mor", ctx);
  r.def = field<int>(j, "def", ctx);
  r.epsilon = field<double>(j, "epsilon", ctx);
  r.identity_residual = field<int>(j, "identity_residual", ctx);
  r.energy = field<double>(j, "energy", ctx);
  r.equipartition_residual = field<double>(j, "equipartition_residual", ctx);
  return r;
}

std::string matrix_market(const SymmetricOperator& op) {
  std::vector<std::tuple<Index, Index, double>> lower;
  for (Index col = 0; col < op.matrix.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(op.matrix, col); it; ++it)
      if (it.index() >= col) lower.emplace_back(it.index(), col, it.value());
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << op.dimension() << " " << op.dimension() << " " << lower.size() << "\n";
  char buffer[64];
  for (const auto& [r, c, v] : lower) {
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    os << r + 1 << " " << c + 1 << " " << buffer << "\n";
  }
  return os.str();
}

SymmetricOperator parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real symmetric", 0) != 0) {
    throw SpecError("matrix market: expected a coordinate real symmetric header");
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream dims(line);
  Index rows = 0, cols = 0, entries = 0;
  if (!(dims >> rows >> cols >> entries) || rows != cols) throw SpecError("matrix market: bad size line");
  std::vector<Triplet> t;
  for (Index k = 0; k < entries; ++k) {
    Index r, c;
    double v;
    if (!(in >> r >> c >> v) || r < 1 || c < 1 || r > rows || c > cols) {
      throw SpecError("matrix market: bad entry " + std::to_string(k + 1));
    }
    t.emplace_back(r - 1, c - 1, v);
    if (r != c) t.emplace_back(c - 1, r - 1, v);
  }
  return make_operator(rows, t);
}

std::string branch_csv(const flow::FlowBranch& branch) {
  std::ostringstream os;
  os << "sigma";
  for (int n = 0; n < branch.levels(); ++n) os << ",lambda_" << n + 1;
  os << "\n";
  for (std::size_t j = 0; j < branch.sigma_samples.size(); ++j) {
    os << format_double(branch.sigma_samples[j]);
    for (int n = 0; n < branch.levels(); ++n) os << "," << format_double(branch.level_values(n, j));
    os << "\n";
  }
  return os.str();
}

}  // namespace partition_flow::io
