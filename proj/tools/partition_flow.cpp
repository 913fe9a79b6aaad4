// Command-line driver. Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "partition_flow/circle_model.hpp"
#include "partition_flow/errors.hpp"
#include "partition_flow/flow_analysis.hpp"
#include "partition_flow/io.hpp"
#include "partition_flow/suite.hpp"

namespace pf = partition_flow;
using pf::io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to `path` atomically, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) std::cout << content;
  else pf::io::write_atomic(path, content);
}

pf::grid::GridPartition load_grid(const std::string& path) {
  return pf::grid::build_grid(pf::io::domain_from_json(pf::io::read_json(path)));
}

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("--verify: '" + item + "' is not an edge id");
    }
  }
  return ids;
}

struct CircleArgs {
  int n = 3;
  double eps = 1e-3;
  double lambda = 0.0;
  std::string out, csv;
};

int run_circle(const CircleArgs& a) {
  const auto cfg = pf::circle::make_config<double>(a.n);
  const pf::DeficiencyReport r = pf::circle::circle_deficiency(cfg, a.eps);
  double lambda = a.lambda;
  if (lambda <= 0) {
    const double root = a.n / 2.0 + a.eps;
    lambda = root * root;
  }
  std::vector<double> mu;
  if (cfg.antiperiodic()) {
    mu = pf::circle::mu_spectrum(cfg, lambda);
  } else {
    const Eigen::VectorXd v = pf::eig_dense(Eigen::MatrixXd(pf::circle::build_M(cfg, lambda)), false).eigenvalues;
    mu.assign(v.data(), v.data() + v.size());
  }
  Json j = pf::io::to_json(r);
  j["lambda"] = lambda;
  emit(a.out, j.dump(2) + "\n");
  if (!a.csv.empty()) {
    std::string csv = "k,mu\n";
    for (std::size_t k = 0; k < mu.size(); ++k) csv += std::to_string(k) + "," + pf::io::format_double(mu[k]) + "\n";
    pf::io::write_atomic(a.csv, csv);
  }
  return r.identity_residual == 0 ? kOk : kVerificationFailure;
}

struct SlitArgs {
  std::string graph, verify, out;
};

int run_slit(const SlitArgs& a) {
  const pf::graph::PartitionGraph g = pf::io::graph_from_json(pf::io::read_json(a.graph));
  const auto problems = pf::graph::validate(g);
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += "\n  " + p;
    throw InputError(a.graph + ": invalid partition graph:" + all);
  }
  Json j;
  const pf::graph::SlitSet s = pf::graph::slit(g);
  j["slit"] = s.edges;
  const auto odd = pf::graph::odd_data(g);
  j["odd_vertices"] = odd.odd_vertices;
  j["odd_holes"] = odd.odd_holes;
  j["bipartite"] = pf::graph::is_bipartite(g).bipartite;
  bool ok = pf::graph::slit_verify(g, s);
  if (!a.verify.empty()) {
    pf::graph::SlitSet candidate{parse_ids(a.verify)};
    for (int id : candidate.edges)
      if (!g.edge(id)) throw InputError("--verify: unknown edge id " + std::to_string(id));
    std::sort(candidate.edges.begin(), candidate.edges.end());
    const bool accepted = pf::graph::slit_verify(g, candidate);
    j["candidate"] = candidate.edges;
    j["candidate_accepted"] = accepted;
    ok = ok && accepted;
  }
  emit(a.out, j.dump(2) + "\n");
  return ok ? kOk : kVerificationFailure;
}

struct AssembleArgs {
  std::string domain, out;
  bool slit = false, cover = false;
  double sigma = 0.0;
};

int run_assemble(const AssembleArgs& a) {
  pf::grid::GridPartition g = load_grid(a.domain);
  pf::SymmetricOperator op;
  if (a.cover) {
    pf::grid::prepare_slit(g);
    op = pf::grid::assemble_double_cover(g);
  } else {
    pf::grid::RobinFamily family = pf::flow::base_family(g, a.slit);
    op = family.at(a.sigma);
  }
  emit(a.out, pf::io::matrix_market(op));
  return kOk;
}

struct DnArgs {
  std::string domain, out;
  double lambda = 0.0;
  bool slit = false;
};

int run_dn(const DnArgs& a) {
  pf::grid::GridPartition g = load_grid(a.domain);
  const pf::grid::RobinFamily family = pf::flow::base_family(g, a.slit);
  const pf::DNMatrix dn = pf::schur_dn(family.base, a.lambda, family.interface_dofs, family.h);
  const Eigen::VectorXd values = pf::eig_dense(dn.entries, false).eigenvalues;
  std::string csv = "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < values.size(); ++i)
    csv += std::to_string(i + 1) + "," + pf::io::format_double(values[i]) + "\n";
  Json j;
  j["lambda"] = a.lambda;
  j["dimension"] = values.size();
  j["morse_index"] = pf::morse_index(dn);
  if (a.out.empty()) {
    j["spectrum"] = std::vector<double>(values.data(), values.data() + values.size());
  } else {
    pf::io::write_atomic(a.out, csv);
    j["spectrum_csv"] = a.out;
  }
  std::cout << j.dump(2) << "\n";
  return kOk;
}

struct FlowArgs {
  std::string domain, out;
  double sigma_max = 0.0;
  int samples = 64, levels = 0;
  bool slit = false;
  std::optional<double> level;
};

int run_flow(const FlowArgs& a) {
  pf::grid::GridPartition g = load_grid(a.domain);
  const pf::grid::RobinFamily family = pf::flow::base_family(g, a.slit);
  const double sigma_max = a.sigma_max > 0 ? a.sigma_max : pf::flow::default_sigma_max(family);
  const int levels = a.levels > 0 ? a.levels : g.domain_count + 3;
  if (levels < g.domain_count + 1) {
    throw InputError("--levels must be at least k + 1 = " + std::to_string(g.domain_count + 1));
  }
  pf::flow::FlowBranch b = pf::flow::sigma_sweep(family, sigma_max, a.samples, levels);
  emit(a.out, pf::io::branch_csv(b));
  if (a.level) {
    Json j;
    j["level"] = *a.level;
    j["crossings"] = pf::flow::crossing_count(b, *a.level);
    j["intervals"] = Json::array();
    for (const auto& c : b.crossings) j["intervals"].push_back({{"n", c.level_index + 1}, {"sigma", {c.sigma_lo, c.sigma_hi}}});
    (a.out.empty() ? std::cerr : std::cout) << j.dump(2) << "\n";
  }
  return kOk;
}

struct VerifyArgs {
  std::string domain, out;
  bool slit = false;
  double eps = 0.0;
  double equipartition_tol = 1e-8;
};

int run_verify(const VerifyArgs& a) {
  const pf::grid::GridPartition g = load_grid(a.domain);
  pf::flow::EpsilonPolicy policy;
  if (a.eps > 0) policy.fixed = a.eps;
  policy.equipartition_tol = a.equipartition_tol;
  const pf::DeficiencyReport r = pf::flow::deficiency(g, a.slit, policy);
  emit(a.out, pf::io::to_json(r).dump(2) + "\n");
  return r.identity_residual == 0 ? kOk : kVerificationFailure;
}

struct SuiteArgs {
  std::uint64_t seed = 20240601;
  std::string scale = "quick";
  std::vector<int> only;
  bool timings = false;
};

int run_suite(const SuiteArgs& a) {
  const auto scale = a.scale == "full" ? pf::suite::Scale::Full : pf::suite::Scale::Quick;
  const pf::suite::Summary s = pf::suite::run_suite(a.seed, scale, a.only);
  std::cout << s.table();
  if (a.timings)
    for (const auto& r : s.results) std::cerr << "criterion " << r.id << ": " << r.seconds << " s\n";
  return s.all_passed() ? kOk : kVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral flow and nodal deficiency of partitions (circle model, grid partitions)"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  CircleArgs circle;
  auto* c = app.add_subcommand("circle", "deficiency identity for the N-equipartition of the circle");
  c->add_option("--n", circle.n, "number of arcs")->check(CLI::Range(2, 100000));
  c->add_option("--eps", circle.eps, "lambda = (N/2 + eps)^2, 0 < eps < 1/2");
  c->add_option("--lambda", circle.lambda, "evaluate mu_k here instead (0 = use eps)");
  c->add_option("--out", circle.out, "report JSON path (default stdout)");
  c->add_option("--csv", circle.csv, "write (k, mu_k) CSV here");

  SlitArgs slit;
  auto* s = app.add_subcommand("slit", "slitting set of a partition graph");
  s->add_option("--graph", slit.graph, "partition graph JSON")->required();
  s->add_option("--verify", slit.verify, "comma-separated candidate edge ids to check");
  s->add_option("--out", slit.out, "output JSON path (default stdout)");

  AssembleArgs assemble;
  auto* as = app.add_subcommand("assemble", "write T_sigma (or the double cover) in Matrix Market format");
  as->add_option("--domain", assemble.domain, "domain JSON")->required();
  as->add_option("--out", assemble.out, "output .mtx path (default stdout)");
  as->add_flag("--slit", assemble.slit, "use the slit operator");
  as->add_flag("--cover", assemble.cover, "write the two-sheet double cover instead");
  as->add_option("--sigma", assemble.sigma, "Robin parameter")->check(CLI::NonNegativeNumber);

  DnArgs dn;
  auto* d = app.add_subcommand("dn", "DN spectrum and Morse index at lambda");
  d->add_option("--domain", dn.domain, "domain JSON")->required();
  d->add_option("--lambda", dn.lambda, "spectral parameter")->required();
  d->add_flag("--slit", dn.slit, "use the slit operator");
  d->add_option("--out", dn.out, "spectrum CSV path (default: inline in the JSON)");

  FlowArgs flow;
  auto* f = app.add_subcommand("flow", "sigma sweep of the Robin family");
  f->add_option("--domain", flow.domain, "domain JSON")->required();
  f->add_option("--sigma-max", flow.sigma_max, "largest sigma (0 = 1e4/h^2)")->check(CLI::NonNegativeNumber);
  f->add_option("--samples", flow.samples, "sigma samples including 0")->check(CLI::Range(2, 100000));
  f->add_option("--levels", flow.levels, "tracked eigenvalues (0 = k + 3)")->check(CLI::NonNegativeNumber);
  f->add_option("--level", flow.level, "count crossings of this level");
  f->add_flag("--slit", flow.slit, "use the slit operator");
  f->add_option("--out", flow.out, "branch CSV path (default stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "deficiency identity Def = 1 - m + Mor on a grid partition");
  v->add_option("--domain", verify.domain, "domain JSON")->required();
  v->add_flag("--slit", verify.slit, "use the slit operator");
  v->add_option("--eps", verify.eps, "fixed epsilon (0 = quarter of the spectral gap)")->check(CLI::NonNegativeNumber);
  v->add_option("--equipartition-tol", verify.equipartition_tol, "relative spread allowed in ground energies");
  v->add_option("--out", verify.out, "report JSON path (default stdout)");

  SuiteArgs suite;
  auto* su = app.add_subcommand("suite", "acceptance battery, one line per criterion");
  su->add_option("--seed", suite.seed, "seed for the randomized checks (mt19937_64)");
  su->add_option("--scale", suite.scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  su->add_option("--only", suite.only, "comma-separated criterion ids to run")->delimiter(',')->check(CLI::Range(1, pf::suite::kCriterionCount));
  su->add_flag("--timings", suite.timings, "print wall times to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*c) return run_circle(circle);
    if (*s) return run_slit(slit);
    if (*as) return run_assemble(assemble);
    if (*d) return run_dn(dn);
    if (*f) return run_flow(flow);
    if (*v) return run_verify(verify);
    return run_suite(suite);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const pf::SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const pf::SlitError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const pf::EpsilonTooLarge& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerificationFailure;
  }
}
