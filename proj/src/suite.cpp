#include "partition_flow/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "partition_flow/circle_model.hpp"
#include "partition_flow/errors.hpp"
#include "partition_flow/flow_analysis.hpp"

namespace partition_flow::suite {

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Distinct stream per criterion so criteria can run in any order.
Rng stream(std::uint64_t seed, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return Rng(seq);
}

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

CriterionResult result(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

grid::RobinFamily family_for(grid::GridPartition& g) { return flow::base_family(g, !g.poles().empty()); }

// ---- criterion 1: circle identity ------------------------------------------------

CriterionResult circle_identity(Rng&, Scale) {
  CriterionResult r = result(1, "circle deficiency identity, N = 3,5,7,9");
  r.budget = 1.0;
  bool ok = true;
  double worst = 0.0;
  constexpr double eps = 1e-3;
  for (int n : {3, 5, 7, 9}) {
    const auto cfg = circle::make_config<double>(n);
    const DeficiencyReport rep = circle::circle_deficiency(cfg, eps);
    ok = ok && rep.mor == 1 && rep.def == 0 && rep.m == 2 && rep.def == 1 - rep.m + rep.mor &&
         rep.identity_residual == 0;
    const double root = n / 2.0 + eps;
    const auto mu = circle::mu_spectrum(cfg, root * root);
    const Eigen::VectorXd numeric = eig_dense(Eigen::MatrixXd(circle::build_M(cfg, root * root)), false).eigenvalues;
    const Eigen::VectorXd closed = Eigen::Map<const Eigen::VectorXd>(mu.data(), mu.size());
    const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
    worst = std::max(worst, max_abs_diff(numeric, closed) / scale);
  }
  r.passed = ok && worst <= 1e-10;
  r.detail = std::string(ok ? "Mor=1 Def=0 m=2 for all N" : "identity mismatch") + ", mu closed vs numeric " + fmt(worst);
  return r;
}

// ---- criterion 2: slit restriction on the circle --------------------------------

CriterionResult circle_restriction(Rng& rng, Scale) {
  CriterionResult r = result(2, "spec(M0) = spec(M) minus {alpha - beta}");
  double worst = 0.0;
  for (int n : {3, 5, 7}) {
    const auto cfg = circle::make_config<double>(n);
    for (int t = 0; t < 5; ++t) {
      double lambda;
      do {
        lambda = uniform(rng, 0.25, double(n) * n);
      } while (std::abs(std::sin(std::sqrt(lambda) * cfg.theta)) < 1e-3);
      const auto dn = circle::edge_dn(lambda, cfg.theta);
      Eigen::VectorXd full = eig_dense(Eigen::MatrixXd(circle::build_M(cfg, lambda)), false).eigenvalues;
      const Eigen::VectorXd restricted =
          eig_dense(Eigen::MatrixXd(circle::build_M0(cfg, lambda)), false).eigenvalues;
      // Remove one copy of alpha - beta, then compare as sorted multisets.
      Index drop = 0;
      (full.array() - (dn.alpha - dn.beta)).abs().minCoeff(&drop);
      std::vector<double> rest;
      for (Index i = 0; i < full.size(); ++i)
        if (i != drop) rest.push_back(full[i]);
      const Eigen::VectorXd expected = Eigen::Map<Eigen::VectorXd>(rest.data(), rest.size());
      worst = std::max(worst, max_abs_diff(restricted, expected) / std::max(1.0, full.cwiseAbs().maxCoeff()));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max multiset mismatch " + fmt(worst) + " (tolerance 1e-10)";
  return r;
}

// ---- criterion 3: slitting ---------------------------------------------------------

graph::PartitionGraph mercedes_star() {
  graph::PartitionGraph g;
  g.vertices = {{0, graph::VertexKind::InteriorCritical, std::nullopt},
                {1, graph::VertexKind::BoundaryPoint, 0},
                {2, graph::VertexKind::BoundaryPoint, 0},
                {3, graph::VertexKind::BoundaryPoint, 0}};
  g.edges = {{0, 0, 1, 0, 1}, {1, 0, 2, 1, 2}, {2, 0, 3, 2, 0}};
  g.holes = {{0, true}};
  g.faces = {0, 1, 2};
  return g;
}

CriterionResult slitting(Rng& rng, Scale scale) {
  CriterionResult r = result(3, "slitting vs brute-force oracle");
  r.budget = 10.0;
  const int count = scale == Scale::Full ? 200 : 50;
  int bad = 0;
  for (int t = 0; t < count; ++t) {
    const graph::Multigraph m = random_planar_multigraph(rng);
    std::vector<bool> is_component(m.vertex_count);
    for (auto&& c : is_component) c = uniform_int(rng, 0, 1) == 1;
    const graph::PartitionGraph g = lift_multigraph(m, is_component);
    const graph::SlitSet s = graph::slit(g);
    std::uint32_t mask = 0;
    for (int e : s.edges) mask |= 1u << e;  // edge ids equal multigraph edge indices
    const auto accepted = brute_force_slits(m);
    const bool member = std::find(accepted.begin(), accepted.end(), mask) != accepted.end();
    if (!member || !graph::slit_verify(g, s)) ++bad;
  }
  const graph::PartitionGraph star = mercedes_star();
  const graph::SlitSet arm = graph::slit(star);
  const bool star_ok = arm.edges.size() == 1 && graph::slit_verify(star, arm);
  r.passed = bad == 0 && star_ok;
  r.detail = std::to_string(count - bad) + "/" + std::to_string(count) + " graphs accepted, Mercedes slit " +
             std::to_string(arm.edges.size()) + " edge";
  return r;
}

// ---- criterion 4: Schur-Robin correspondence ------------------------------------

CriterionResult correspondence(Rng& rng, Scale scale) {
  CriterionResult r = result(4, "T_sigma eigenvalue <=> -sigma in spec DN on random grids");
  r.budget = 60.0;
  const int count = scale == Scale::Full ? 50 : 10;
  int checked = 0, failures = 0, flagged = 0;
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    grid::GridPartition g = grid::build_grid(random_domain(rng));
    const auto rep = flow::lemma_eigeig_check(family_for(g), 10, rng());
    checked += rep.checked;
    failures += rep.failures;
    flagged += rep.flagged;
    worst = std::max(worst, rep.max_mismatch);
  }
  r.passed = failures == 0 && checked > 0;
  r.detail = std::to_string(checked) + " correspondences, " + std::to_string(failures) + " failures, " +
             std::to_string(flagged) + " resonant skipped, max mismatch " + fmt(worst);
  return r;
}

// ---- criterion 5: counting identity -------------------------------------------------

CriterionResult counting(Rng& rng, Scale scale) {
  CriterionResult r = result(5, "Mor DN = N_0 - N_inf at random levels");
  const int count = scale == Scale::Full ? 50 : 10;
  int checked = 0, bad = 0;
  for (int t = 0; t < count; ++t) {
    grid::GridPartition g = grid::build_grid(random_domain(rng));
    const grid::RobinFamily family = family_for(g);
    const Eigen::VectorXd t0 = eig_dense(family.base, false).eigenvalues;
    const Eigen::VectorXd tinf = eig_dense(family.decoupled(), false).eigenvalues;
    const double top = tinf[std::min<Index>(tinf.size() - 1, 9)];
    int levels = 0;
    for (int attempt = 0; levels < 10 && attempt < 200; ++attempt) {
      const double level = uniform(rng, 0.5 * t0[0], top);
      const double window = 1e-6 * std::max(1.0, level);
      if ((t0.array() - level).abs().minCoeff() <= window || (tinf.array() - level).abs().minCoeff() <= window) {
        continue;
      }
      int mor;
      try {
        mor = morse_index(schur_dn(family.base, level, family.interface_dofs, family.h));
      } catch (const ToleranceAmbiguity&) {
        continue;
      }
      const int n0 = static_cast<int>((t0.array() < level).count());
      const int ninf = static_cast<int>((tinf.array() < level).count());
      ++levels;
      ++checked;
      if (mor != n0 - ninf) ++bad;
    }
    if (levels < 10) ++bad;
  }
  r.passed = bad == 0;
  r.detail = std::to_string(checked) + " levels, " + std::to_string(bad) + " mismatches";
  return r;
}

// ---- criterion 6: monotonicity and convergence ------------------------------------

grid::DomainSpec unit_square(int variant) {
  grid::DomainSpec s;
  s.lx = s.ly = 1.0;
  s.h = 0.125;
  switch (variant) {
    case 0:
      s.interfaces = {{0, {{0.5, 0.0}, {0.5, 1.0}}}};
      break;
    case 1:
      s.interfaces = {{0, {{0.5, 0.0}, {0.5, 1.0}}}, {1, {{0.0, 0.5}, {1.0, 0.5}}}};
      break;
    case 2:
      s.interfaces = {{0, {{0.5, 0.0}, {0.5, 0.5}}}, {1, {{0.5, 0.5}, {0.5, 1.0}}}, {2, {{0.5, 0.5}, {1.0, 0.5}}}};
      s.poles = {{0.5, 0.5}};
      break;
    default:
      s.interfaces = {{0, {{0.375, 0.0}, {0.375, 0.625}, {1.0, 0.625}}}};
      break;
  }
  return s;
}

CriterionResult monotonicity(Rng& rng, Scale scale) {
  CriterionResult r = result(6, "monotone sweeps, lambda_n(1e4/h^2) within 2% of lambda_n(inf)");
  const int count = scale == Scale::Full ? 20 : 5;
  int violations = 0;
  for (int t = 0; t < count; ++t) {
    grid::GridPartition g = grid::build_grid(random_domain(rng));
    const grid::RobinFamily family = family_for(g);
    try {
      flow::sigma_sweep(family, flow::default_sigma_max(family), 24, g.domain_count + 3);
    } catch (const MonotonicityViolation&) {
      ++violations;
    }
  }
  double worst = 0.0;
  for (int variant = 0; variant < 4; ++variant) {
    grid::GridPartition g = grid::build_grid(unit_square(variant));
    const grid::RobinFamily family = family_for(g);
    try {
      const flow::FlowBranch b = flow::sigma_sweep(family, flow::default_sigma_max(family), 64, 6);
      const Eigen::VectorXd exact = eig_dense(family.decoupled(), false).eigenvalues;
      for (int n = 0; n < b.levels() && n < exact.size(); ++n) {
        worst = std::max(worst, std::abs(exact[n] - b.level_values(n, b.level_values.cols() - 1)) / exact[n]);
      }
    } catch (const MonotonicityViolation&) {
      ++violations;
    }
  }
  r.passed = violations == 0 && worst <= 0.02;
  r.detail = std::to_string(violations) + " monotonicity violations, worst relative gap at sigma_max " + fmt(worst);
  return r;
}

// ---- criterion 7: nodal deficiency on rectangles -----------------------------------

// Closed-form Dirichlet spectrum of the 5-point Laplacian on an a x b rectangle.
std::vector<double> rectangle_spectrum(double a, double b, double h) {
  const int nx = static_cast<int>(std::lround(a / h)), ny = static_cast<int>(std::lround(b / h));
  std::vector<double> out;
  for (int p = 1; p < nx; ++p) {
    for (int q = 1; q < ny; ++q) {
      const double sx = std::sin(p * std::numbers::pi * h / (2 * a));
      const double sy = std::sin(q * std::numbers::pi * h / (2 * b));
      out.push_back(4 / (h * h) * (sx * sx + sy * sy));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct NodalCase {
  double lx;
  int k;
  int ell, m, mor;  // expected
};

CriterionResult nodal(Rng&, Scale) {
  CriterionResult r = result(7, "nodal deficiency on rectangles");
  constexpr double h = 0.125;
  bool ok = true;
  std::ostringstream detail;
  for (const NodalCase& c : {NodalCase{2.0, 2, 2, 1, 0}, NodalCase{3.0, 3, 3, 1, 0}, NodalCase{1.5, 3, 4, 1, 1}}) {
    grid::DomainSpec spec;
    spec.lx = c.lx;
    spec.ly = 1.0;
    spec.h = h;
    for (int i = 1; i < c.k; ++i) {
      const double x = c.lx * i / c.k;
      spec.interfaces.push_back({i - 1, {{x, 0.0}, {x, 1.0}}});
    }
    const grid::GridPartition g = grid::build_grid(spec);
    const DeficiencyReport rep = flow::deficiency(g, false);

    // Oracles: closed-form spectra for ell and m, sweep crossings for Mor.
    const double energy = rectangle_spectrum(c.lx / c.k, 1.0, h).front();
    const auto whole = rectangle_spectrum(c.lx, 1.0, h);
    const double tol = 1e-8 * energy;
    const int ell = 1 + static_cast<int>(std::count_if(whole.begin(), whole.end(), [&](double v) { return v < energy - tol; }));
    const int m = static_cast<int>(std::count_if(whole.begin(), whole.end(), [&](double v) { return std::abs(v - energy) <= tol; }));
    grid::GridPartition gg = g;
    const grid::RobinFamily family = flow::base_family(gg, false);
    flow::FlowBranch branch = flow::sigma_sweep(family, flow::default_sigma_max(family), 64, ell + m + 2);
    const int mor = flow::crossing_count(branch, rep.energy + rep.epsilon);

    const bool case_ok = ell == c.ell && m == c.m && mor == c.mor && ell - c.k == 1 - m + mor && rep.ell == ell &&
                         rep.m == m && rep.mor == mor && rep.identity_residual == 0;
    ok = ok && case_ok;
    detail << c.lx << "x1/" << c.k << ": ell=" << ell << " m=" << m << " Mor=" << mor << " Def=" << ell - c.k
           << (case_ok ? "" : " MISMATCH") << (c.lx == 1.5 ? "" : "; ");
  }
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

// ---- criterion 8: double cover and gauge invariance --------------------------------

CriterionResult double_cover(Rng& rng, Scale scale) {
  CriterionResult r = result(8, "slit operator = antisymmetric part of the double cover; gauge invariance");
  const int count = scale == Scale::Full ? 20 : 5;
  double cover_gap = 0.0, gauge_gap = 0.0;
  int choices_tested = 0;
  auto slit_spectrum = [](const grid::DomainSpec& spec) {
    grid::GridPartition g = grid::build_grid(spec);
    grid::prepare_slit(g);
    const SymmetricOperator op = grid::assemble_slit(g);
    return std::make_pair(eig_dense(op, false).eigenvalues, std::max(1.0, op.norm_inf()));
  };
  std::vector<grid::DomainSpec> specs;
  for (int t = 0; t < count; ++t) specs.push_back(random_domain(rng, t % 2 == 0 ? 3 : 4));
  specs.push_back(unit_square(2));
  for (const auto& spec : specs) {
    grid::GridPartition g = grid::build_grid(spec);
    grid::prepare_slit(g);
    const SymmetricOperator slit_op = grid::assemble_slit(g);
    const SymmetricOperator cover = grid::assemble_double_cover(g);
    const double scale_norm = std::max(1.0, cover.norm_inf());
    const Eigen::VectorXd s = eig_dense(slit_op, false).eigenvalues;
    const Eigen::VectorXd anti = eig_dense(grid::restrict_cover(cover, true), false).eigenvalues;
    const Eigen::VectorXd sym = eig_dense(grid::restrict_cover(cover, false), false).eigenvalues;
    Eigen::VectorXd both(s.size() + sym.size());
    both << s, sym;
    const Eigen::VectorXd whole = eig_dense(cover, false).eigenvalues;
    cover_gap = std::max({cover_gap, max_abs_diff(s, anti) / scale_norm, max_abs_diff(sorted(both), whole) / scale_norm});

    const auto choices = slit_choices(spec);
    std::optional<Eigen::VectorXd> reference;
    for (const auto& choice : choices) {
      grid::DomainSpec moved = spec;
      moved.slit = choice;
      const auto [values, norm] = slit_spectrum(moved);
      ++choices_tested;
      if (!reference) reference = values;
      else gauge_gap = std::max(gauge_gap, max_abs_diff(values, *reference) / norm);
    }
  }
  r.passed = cover_gap <= 1e-10 && gauge_gap <= 1e-10 && choices_tested > 0;
  r.detail = std::to_string(specs.size()) + " configurations, cover mismatch " + fmt(cover_gap) + ", " +
             std::to_string(choices_tested) + " slit choices, gauge mismatch " + fmt(gauge_gap);
  return r;
}

// ---- criterion 9: 1-D continuum limit ---------------------------------------------

CriterionResult continuum(Rng&, Scale) {
  CriterionResult r = result(9, "antiperiodic chain -> ((2n-1)/2)^2, order >= 1.9");
  const double length = 2 * std::numbers::pi;
  std::vector<std::array<double, 3>> errors;
  for (int n = 32; n <= 512; n *= 2) {
    const Eigen::VectorXd v = eig_dense(grid::circle_chain(n, true, length), false).eigenvalues;
    std::array<double, 3> e{};
    for (int j = 1; j <= 3; ++j) {
      const double exact = std::pow((2.0 * j - 1) / 2, 2);
      e[j - 1] = std::max(std::abs(v[2 * j - 2] - exact), std::abs(v[2 * j - 1] - exact));
    }
    errors.push_back(e);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    for (int j = 0; j < 3; ++j) worst = std::min(worst, std::log2(errors[i][j] / errors[i + 1][j]));
  r.passed = worst >= 1.9;
  r.detail = "minimum observed order " + fmt(worst) + " over 4 halvings from 32 nodes";
  return r;
}

using CriterionFn = CriterionResult (*)(Rng&, Scale);
constexpr std::array<CriterionFn, kCriterionCount> kCriteria{
    circle_identity, circle_restriction, slitting, correspondence, counting, monotonicity, nodal, double_cover,
    continuum};

}  // namespace

bool Summary::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

std::string Summary::table() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << " (" << r.detail << ")\n";
  }
  return os.str();
}

CriterionResult run_criterion(int id, std::uint64_t seed, Scale scale) {
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("no criterion " + std::to_string(id));
  Rng rng = stream(seed, id);
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = kCriteria[id - 1](rng, scale);
  } catch (const std::exception& e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.budget > 0 && r.seconds > r.budget) {
    r.passed = false;
    r.detail += ", over the time budget";
  }
  return r;
}

Summary run_suite(std::uint64_t seed, Scale scale, const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    todo.resize(kCriterionCount);
    std::iota(todo.begin(), todo.end(), 1);
  }
  Summary s;
  s.results.resize(todo.size());
  const int workers = std::min<int>(flow::worker_count(), static_cast<int>(todo.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) s.results[i] = run_criterion(todo[i], seed, scale);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::sort(s.results.begin(), s.results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return s;
}

grid::DomainSpec random_domain(std::mt19937_64& rng, int kind) {
  if (kind < 0) kind = uniform_int(rng, 0, 5);
  grid::DomainSpec s;
  s.h = 0.125;
  const int nx = uniform_int(rng, 6, 12), ny = uniform_int(rng, 6, 12);
  s.lx = nx * s.h;
  s.ly = ny * s.h;
  auto pt = [&](int i, int j) { return std::array<double, 2>{i * s.h, j * s.h}; };
  const int c = uniform_int(rng, 2, nx - 2), r = uniform_int(rng, 2, ny - 2);
  switch (kind) {
    case 0:
      s.interfaces = {{0, {pt(c, 0), pt(c, ny)}}};
      break;
    case 1:
      s.interfaces = {{0, {pt(0, r), pt(nx, r)}}};
      break;
    case 2:
      s.interfaces = {{0, {pt(c, 0), pt(c, ny)}}, {1, {pt(0, r), pt(nx, r)}}};
      break;
    case 3: {
      const int end = uniform_int(rng, 0, 1) ? nx : 0;
      s.interfaces = {{0, {pt(c, 0), pt(c, r)}}, {1, {pt(c, r), pt(c, ny)}}, {2, {pt(c, r), pt(end, r)}}};
      s.poles = {pt(c, r)};
      break;
    }
    case 4: {
      const int c1 = uniform_int(rng, 2, nx - 4), c2 = uniform_int(rng, c1 + 2, nx - 2);
      s.interfaces = {{0, {pt(c1, 0), pt(c1, r)}}, {1, {pt(c1, r), pt(c1, ny)}}, {2, {pt(c2, 0), pt(c2, r)}},
                      {3, {pt(c2, r), pt(c2, ny)}}, {4, {pt(c1, r), pt(c2, r)}}};
      s.poles = {pt(c1, r), pt(c2, r)};
      break;
    }
    default:
      s.interfaces = {{0, {pt(c, 0), pt(c, r), pt(nx, r)}}};
      break;
  }
  return s;
}

std::vector<std::vector<int>> slit_choices(const grid::DomainSpec& spec) {
  std::vector<std::vector<int>> out;
  if (spec.poles.empty()) return out;
  const std::size_t n = spec.interfaces.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool odd_everywhere = true;
    for (const auto& pole : spec.poles) {
      int arms = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1u)) continue;
        const auto& pts = spec.interfaces[i].points;
        arms += (pts.front() == pole) + (pts.back() == pole);
      }
      odd_everywhere = odd_everywhere && arms % 2 == 1;
    }
    if (!odd_everywhere) continue;
    std::vector<int> ids;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) ids.push_back(spec.interfaces[i].id);
    out.push_back(ids);
  }
  return out;
}

graph::Multigraph random_planar_multigraph(std::mt19937_64& rng, int max_edges) {
  graph::Multigraph m;
  m.vertex_count = uniform_int(rng, 2, 6);
  const int target = uniform_int(rng, 1, max_edges);
  // Vertices sit on a circle; chords that do not interleave keep the drawing planar.
  auto interleave = [](std::pair<int, int> a, std::pair<int, int> b) {
    auto inside = [](int x, std::pair<int, int> e) { return e.first < x && x < e.second; };
    const bool shared = a.first == b.first || a.first == b.second || a.second == b.first || a.second == b.second;
    return !shared && inside(b.first, a) != inside(b.second, a);
  };
  for (int attempt = 0; static_cast<int>(m.edges.size()) < target && attempt < 100; ++attempt) {
    if (uniform_int(rng, 0, 6) == 0) {
      const int v = uniform_int(rng, 0, m.vertex_count - 1);
      m.edges.emplace_back(v, v);
      continue;
    }
    int a = uniform_int(rng, 0, m.vertex_count - 1), b = uniform_int(rng, 0, m.vertex_count - 1);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const bool crosses = std::any_of(m.edges.begin(), m.edges.end(), [&](const auto& e) {
      return e.first != e.second && interleave({a, b}, e);
    });
    if (!crosses) m.edges.emplace_back(a, b);
  }
  return m;
}

graph::PartitionGraph lift_multigraph(const graph::Multigraph& m, const std::vector<bool>& is_component) {
  graph::PartitionGraph g;
  std::vector<int> component(m.vertex_count, -1);
  int next_component = 0;
  for (int v = 0; v < m.vertex_count; ++v) {
    if (is_component[v]) component[v] = next_component++;
    else g.vertices.push_back({v, graph::VertexKind::InteriorCritical, std::nullopt});
  }
  for (int c = 0; c < std::max(1, next_component); ++c) g.holes.push_back({c, c == 0});
  int next_vertex = m.vertex_count;
  auto end_vertex = [&](int v) {
    if (component[v] < 0) return v;
    g.vertices.push_back({next_vertex, graph::VertexKind::BoundaryPoint, component[v]});
    return next_vertex++;
  };
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const auto [a, b] = m.edges[e];
    const int va = end_vertex(a);
    // A loop at a component is an arc between two points of that component.
    const int vb = (a == b && component[a] < 0) ? va : end_vertex(b);
    g.edges.push_back({static_cast<int>(e), va, vb, std::nullopt, std::nullopt});
  }
  return g;
}

std::vector<std::uint32_t> brute_force_slits(const graph::Multigraph& m) {
  const int e = static_cast<int>(m.edges.size());
  std::vector<int> parity(m.vertex_count, 0);
  for (const auto& [a, b] : m.edges) {
    parity[a] ^= 1;
    parity[b] ^= 1;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
    std::vector<int> sub(m.vertex_count, 0);
    std::vector<std::vector<int>> adj(m.vertex_count);
    int size = 0;
    for (int i = 0; i < e; ++i) {
      if (!(mask >> i & 1u)) continue;
      const auto [a, b] = m.edges[i];
      sub[a] ^= 1;
      sub[b] ^= 1;
      adj[a].push_back(b);
      adj[b].push_back(a);
      ++size;
    }
    if (sub != parity) continue;
    // A multigraph is a forest iff edges = vertices - components.
    std::vector<bool> seen(m.vertex_count, false);
    int components = 0;
    for (int s = 0; s < m.vertex_count; ++s) {
      if (seen[s]) continue;
      ++components;
      std::vector<int> stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int w : adj[u])
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
      }
    }
    if (size == m.vertex_count - components) out.push_back(mask);
  }
  return out;
}

}  // namespace partition_flow::suite
