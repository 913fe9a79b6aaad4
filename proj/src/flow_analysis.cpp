#include "partition_flow/flow_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "partition_flow/errors.hpp"

namespace partition_flow::flow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd lowest_values(const SymmetricOperator& op, int count) {
  const Index n = std::min<Index>(count, op.dimension());
  if (n == 0) return {};
  if (op.dimension() <= 1500) return eig_dense(op, false).eigenvalues.head(n);
  return eig_lowest(op, n).eigenvalues;
}

int count_below(const Eigen::VectorXd& values, double level) {
  return static_cast<int>((values.array() < level).count());
}

// Runs body(i) for i in [0, count) on up to worker_count() threads.
template <typename Body>
void parallel_for(int count, Body body) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SymmetricOperator principal(const SymmetricOperator& op, const std::vector<bool>& drop) {
  std::vector<Index> row(op.dimension(), -1), nodes;
  for (Index r = 0; r < op.dimension(); ++r) {
    if (!drop[r]) {
      row[r] = static_cast<Index>(nodes.size());
      nodes.push_back(op.nodes[r]);
    }
  }
  std::vector<Triplet> t;
  for (Index col = 0; col < op.matrix.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(op.matrix, col); it; ++it)
      if (row[it.index()] >= 0 && row[col] >= 0) t.emplace_back(row[it.index()], row[col], it.value());
  return make_operator(static_cast<Index>(nodes.size()), t, nodes);
}

double gap_above(const Eigen::VectorXd& values, double energy, double tol) {
  for (Index i = 0; i < values.size(); ++i)
    if (values[i] > energy + tol) return values[i] - energy;
  return kInf;
}

}  // namespace

int worker_count() {
  int requested = 0;
  if (const char* env = std::getenv("PARTITION_FLOW_THREADS")) requested = std::atoi(env);
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

double default_sigma_max(const grid::RobinFamily& family) { return 1e4 / (family.h * family.h); }

std::vector<double> sigma_grid(double sigma_max, int samples) {
  if (!(sigma_max > 0)) throw std::invalid_argument("sigma_max must be positive");
  if (samples < 2) throw std::invalid_argument("need at least two sigma samples");
  std::vector<double> out{0.0};
  if (samples == 2) {
    out.push_back(sigma_max);
    return out;
  }
  // Log-spaced over eight decades below sigma_max.
  const double lo = std::log(sigma_max * 1e-8), hi = std::log(sigma_max);
  for (int j = 0; j < samples - 1; ++j) out.push_back(std::exp(lo + (hi - lo) * j / (samples - 2)));
  out.back() = sigma_max;
  return out;
}

FlowBranch sigma_sweep(const grid::RobinFamily& family, double sigma_max, int samples, int levels) {
  if (levels < 1) throw std::invalid_argument("need at least one level");
  levels = static_cast<int>(std::min<Index>(levels, family.base.dimension()));
  FlowBranch b;
  b.sigma_samples = sigma_grid(sigma_max, samples);
  b.family = std::make_shared<const grid::RobinFamily>(family);
  b.scale = std::max(1.0, family.base.norm_inf());
  b.level_values.resize(levels, samples);
  std::vector<double> norms(samples);
  parallel_for(samples, [&](int j) {
    const SymmetricOperator t = family.at(b.sigma_samples[j]);
    norms[j] = t.norm_inf();
    b.level_values.col(j) = lowest_values(t, levels);
  });
  const Eigen::VectorXd limit = lowest_values(family.decoupled(), levels);
  b.limit = Eigen::VectorXd::Constant(levels, std::numeric_limits<double>::quiet_NaN());
  b.limit.head(limit.size()) = limit;

  for (int n = 0; n < levels; ++n) {
    for (int j = 0; j + 1 < samples; ++j) {
      const double slack = 1e-10 * std::max(b.scale, norms[j + 1]);
      if (b.level_values(n, j) > b.level_values(n, j + 1) + slack) {
        throw MonotonicityViolation("level " + std::to_string(n + 1) + " decreases between sigma = " +
                                    std::to_string(b.sigma_samples[j]) + " and " +
                                    std::to_string(b.sigma_samples[j + 1]));
      }
      if (n < limit.size() && b.level_values(n, j + 1) > limit[n] + slack) {
        throw MonotonicityViolation("level " + std::to_string(n + 1) + " exceeds its sigma = inf limit");
      }
    }
  }
  return b;
}

int crossing_count(FlowBranch& branch, double level) {
  const int last = static_cast<int>(branch.sigma_samples.size()) - 1;
  const double tol = kClusterRelTol * branch.scale;
  branch.crossings.clear();
  for (int n = 0; n < branch.levels(); ++n) {
    const double start = branch.level_values(n, 0), end = branch.level_values(n, last);
    if (std::abs(start - level) <= tol || std::abs(end - level) <= tol) {
      throw LevelOnSpectrum("level " + std::to_string(level) + " coincides with lambda_" + std::to_string(n + 1) +
                            " at an end of the sweep");
    }
    if (!(start < level && end > level)) continue;
    int j = 0;
    while (branch.level_values(n, j + 1) <= level) ++j;
    Crossing c{n, branch.sigma_samples[j], branch.sigma_samples[j + 1]};
    if (branch.family) {
      const double width = 1e-6 * branch.sigma_samples[last];
      while (c.sigma_hi - c.sigma_lo > width) {
        const double mid = 0.5 * (c.sigma_lo + c.sigma_hi);
        const Eigen::VectorXd v = lowest_values(branch.family->at(mid), n + 1);
        (v[n] <= level ? c.sigma_lo : c.sigma_hi) = mid;
      }
    }
    branch.crossings.push_back(c);
  }
  return static_cast<int>(branch.crossings.size());
}

grid::RobinFamily base_family(grid::GridPartition& g, bool slit_flag) {
  if (slit_flag) {
    grid::prepare_slit(g);
    return grid::robin_family(g, grid::assemble_slit(g));
  }
  return grid::robin_family(g, grid::assemble_laplacian(g));
}

EnergyWindow energy_window(const grid::GridPartition& g, const grid::RobinFamily& family,
                           const EpsilonPolicy& policy) {
  EnergyWindow w;
  const auto energies = grid::subdomain_ground_energies(g, family);
  w.energy = *std::min_element(energies.begin(), energies.end());
  for (double e : energies) w.equipartition_residual = std::max(w.equipartition_residual, std::abs(e - w.energy));
  if (w.equipartition_residual > policy.equipartition_tol * w.energy) {
    throw NotEquipartition("subdomain ground energies spread by " + std::to_string(w.equipartition_residual) +
                           " around l_k = " + std::to_string(w.energy));
  }
  w.cluster_tol = kClusterRelTol * std::max(1.0, family.base.norm_inf()) + w.equipartition_residual;
  w.base_spectrum = eigenvalues_through(family.base, w.energy + w.cluster_tol);
  const Eigen::VectorXd limit = eigenvalues_through(family.decoupled(), w.energy + w.cluster_tol);
  w.gap0 = gap_above(w.base_spectrum, w.energy, w.cluster_tol);
  w.gap_inf = gap_above(limit, w.energy, w.cluster_tol);
  const double gap = std::min(w.gap0, w.gap_inf);
  if (policy.fixed) {
    w.epsilon = *policy.fixed;
    if (!(w.epsilon > w.cluster_tol) || w.epsilon >= gap) {
      throw EpsilonWindowEmpty("epsilon " + std::to_string(w.epsilon) + " outside the window (" +
                               std::to_string(w.cluster_tol) + ", " + std::to_string(gap) + ")");
    }
  } else {
    w.epsilon = std::isinf(gap) ? 0.25 * std::max(1.0, w.energy) : gap / 4;
    if (w.epsilon <= 2 * w.cluster_tol) {
      throw EpsilonWindowEmpty("next eigenvalue lies within " + std::to_string(gap) + " of l_k");
    }
  }
  return w;
}

DeficiencyReport deficiency(const grid::GridPartition& grid, bool slit_flag, const EpsilonPolicy& policy) {
  grid::GridPartition g = grid;
  const grid::RobinFamily family = base_family(g, slit_flag);
  const EnergyWindow w = energy_window(g, family, policy);

  DeficiencyReport r;
  r.source = slit_flag ? "grid+slit" : "grid";
  r.k = g.domain_count;
  r.energy = w.energy;
  r.epsilon = w.epsilon;
  r.equipartition_residual = w.equipartition_residual;
  r.ell = 1 + count_below(w.base_spectrum, w.energy - w.cluster_tol);
  r.m = static_cast<int>(((w.base_spectrum.array() - w.energy).abs() <= w.cluster_tol).count());
  r.mor = morse_index(schur_dn(family.base, w.energy + w.epsilon, family.interface_dofs, family.h));
  r.def = r.ell - r.k;
  r.identity_residual = std::abs(r.def - (1 - r.m + r.mor));
  return r;
}

CountingCheck counting_identity(const grid::RobinFamily& family, double level) {
  CountingCheck c;
  c.level = level;
  c.mor = morse_index(schur_dn(family.base, level, family.interface_dofs, family.h));
  c.below_base = count_below(eigenvalues_through(family.base, level), level);
  c.below_inf = count_below(eigenvalues_through(family.decoupled(), level), level);
  return c;
}

LemmaReport lemma_eigeig_check(const grid::GridPartition& grid, bool slit_flag, int trials, std::uint64_t seed) {
  grid::GridPartition g = grid;
  return lemma_eigeig_check(base_family(g, slit_flag), trials, seed);
}

LemmaReport lemma_eigeig_check(const grid::RobinFamily& family, int trials, std::uint64_t seed, int tracked) {
  constexpr double tol = 1e-8;
  LemmaReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h2 = family.h * family.h;
  const Eigen::VectorXd limit = eig_dense(family.decoupled(), false).eigenvalues;
  tracked = static_cast<int>(std::min<Index>(tracked, family.base.dimension()));

  auto resonant = [&](double lambda) {
    return limit.size() > 0 && (limit.array() - lambda).abs().minCoeff() <= 1e-6 * std::max(1.0, lambda);
  };
  auto within = [](const Eigen::VectorXd& values, double target, double window) {
    return static_cast<int>(((values.array() - target).abs() <= window).count());
  };
  auto nearest = [](const Eigen::VectorXd& values, double target) {
    return values.size() ? (values.array() - target).abs().minCoeff() : kInf;
  };
  auto record = [&](double mismatch, bool ok) {
    ++rep.checked;
    rep.max_mismatch = std::max(rep.max_mismatch, mismatch);
    if (!ok) ++rep.failures;
  };

  for (int t = 0; t < trials; ++t) {
    // Eigenvalue of T_sigma to DN eigenvalue -sigma.
    const double sigma = unit(rng) < 0.1 ? 0.0 : std::pow(10.0, -1.0 + 4.0 * unit(rng)) / h2;
    const Eigen::VectorXd values = eig_dense(family.at(sigma), false).eigenvalues;
    const int n = std::min(tracked - 1, static_cast<int>(unit(rng) * tracked));
    const double lambda = values[n];
    if (resonant(lambda)) {
      ++rep.flagged;
    } else {
      const Eigen::VectorXd mu = eig_dense(schur_dn(family.base, lambda, family.interface_dofs, family.h).entries,
                                           false).eigenvalues;
      const double lambda_window = tol * std::max(1.0, std::abs(lambda));
      const double sigma_window = tol * std::max(1.0, sigma);
      const double mismatch = nearest(mu, -sigma) / std::max(1.0, sigma);
      record(mismatch, mismatch <= tol && within(values, lambda, lambda_window) == within(mu, -sigma, sigma_window));
    }

    // Negative DN eigenvalue -sigma to eigenvalue lambda of T_sigma.
    const double top = limit.size() ? limit[std::min<Index>(tracked, limit.size()) - 1] : values[tracked - 1];
    const double level = values[0] * 0.5 + unit(rng) * (top - values[0] * 0.5);
    if (resonant(level)) {
      ++rep.flagged;
      continue;
    }
    const Eigen::VectorXd mu =
        eig_dense(schur_dn(family.base, level, family.interface_dofs, family.h).entries, false).eigenvalues;
    int tested = 0;
    for (Index i = 0; i < mu.size() && tested < 3; ++i) {
      if (mu[i] >= 0) break;
      if (i > 0 && mu[i] - mu[i - 1] <= tol * std::max(1.0, -mu[i])) continue;  // same cluster
      ++tested;
      const double s = -mu[i];
      const Eigen::VectorXd tv = eig_dense(family.at(s), false).eigenvalues;
      const double lambda_window = tol * std::max(1.0, std::abs(level));
      const double mismatch = nearest(tv, level) / std::max(1.0, std::abs(level));
      record(mismatch,
             mismatch <= tol && within(tv, level, lambda_window) == within(mu, mu[i], tol * std::max(1.0, s)));
    }
  }
  return rep;
}

ConstructionReport compare_spectra(const Eigen::MatrixXd& full, const Eigen::MatrixXd& restricted, double lambda) {
  ConstructionReport r;
  r.lambda = lambda;
  r.full = eig_dense(full, false).eigenvalues;
  r.restricted = eig_dense(restricted, false).eigenvalues;
  const double scale = std::max(1.0, r.full.size() ? r.full.cwiseAbs().maxCoeff() : 0.0);
  const double tol = kClusterRelTol * scale;
  r.contained = true;
  for (const auto& c : cluster_eigenvalues(r.restricted, tol)) {
    const double gap = r.full.size() ? (r.full.array() - c.value).abs().minCoeff() : kInf;
    r.max_gap = std::max(r.max_gap, gap);
    const auto hits = ((r.full.array() - c.value).abs() <= tol + 0.5 * c.multiplicity * tol).count();
    if (hits < c.multiplicity) r.contained = false;
  }
  const Index p = r.full.size() - r.restricted.size();
  r.interlaced = p >= 0;
  for (Index i = 0; r.interlaced && i < r.restricted.size(); ++i) {
    r.interlaced = r.full[i] <= r.restricted[i] + tol && r.restricted[i] <= r.full[i + p] + tol;
  }
  return r;
}

ConstructionReport compare_constructions(const grid::GridPartition& grid, std::optional<double> lambda) {
  grid::GridPartition g = grid;
  if (!g.has_slit()) grid::prepare_slit(g);
  const grid::RobinFamily family = grid::robin_family(g, grid::assemble_slit(g));
  if (!lambda) {
    const EnergyWindow w = energy_window(g, family);
    lambda = w.energy + w.epsilon;
  }
  const DNMatrix full = schur_dn(family.base, *lambda, family.interface_dofs, family.h);

  const std::set<Index> pinned = g.slit_nodes();
  std::vector<bool> drop(family.base.dimension(), false);
  for (Index r = 0; r < family.base.dimension(); ++r) drop[r] = pinned.count(family.base.nodes[r]) > 0;
  const SymmetricOperator reduced = principal(family.base, drop);
  std::vector<Index> dofs;
  for (Index r = 0; r < reduced.dimension(); ++r)
    if (g.on_interface(reduced.nodes[r])) dofs.push_back(r);
  const DNMatrix restricted = schur_dn(reduced, *lambda, dofs, family.h);
  return compare_spectra(full.entries, restricted.entries, *lambda);
}

std::vector<PairResidual> pcc_residual(const grid::GridPartition& g) {
  const grid::RobinFamily family = grid::robin_family(g, grid::assemble_laplacian(g));
  const SymmetricOperator& base = family.base;
  std::vector<Index> row(g.node_count(), -1);
  for (Index r = 0; r < base.dimension(); ++r) row[base.nodes[r]] = r;

  // Ground state of every subdomain, extended by zero.
  std::vector<Eigen::VectorXd> ground;
  double energy = kInf;
  for (int label = 0; label < g.domain_count; ++label) {
    std::vector<bool> drop(base.dimension());
    for (Index r = 0; r < base.dimension(); ++r) drop[r] = g.subdomain[base.nodes[r]] != label;
    const SymmetricOperator block = principal(base, drop);
    const Spectrum s = eig_dense(block, true);
    energy = std::min(energy, s.eigenvalues[0]);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(base.dimension());
    for (Index r = 0; r < block.dimension(); ++r) u[row[block.nodes[r]]] = (*s.eigenvectors)(r, 0);
    ground.push_back(u);
  }

  // Interface nodes separating exactly two subdomains.
  std::map<std::pair<int, int>, std::vector<Index>> shared;
  for (Index r : family.interface_dofs) {
    const Index n = base.nodes[r];
    std::set<int> labels;
    const int i = g.ix(n), j = g.iy(n);
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int s = g.subdomain[g.node(i + di, j + dj)];
      if (s >= 0) labels.insert(s);
    }
    if (labels.size() == 2) shared[{*labels.begin(), *labels.rbegin()}].push_back(r);
  }

  std::vector<PairResidual> out;
  for (const auto& [pair, rows] : shared) {
    std::vector<Index> keep(rows.begin(), rows.end());
    for (Index r = 0; r < base.dimension(); ++r) {
      const int s = g.subdomain[base.nodes[r]];
      if (s == pair.first || s == pair.second) keep.push_back(r);
    }
    const Eigen::VectorXd ci = base.matrix * ground[pair.first] - energy * ground[pair.first];
    const Eigen::VectorXd cj = base.matrix * ground[pair.second] - energy * ground[pair.second];
    Eigen::MatrixXd a(keep.size(), 2);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      a(k, 0) = ci[keep[k]];
      a(k, 1) = -cj[keep[k]];
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    out.push_back({pair.first, pair.second, svd.singularValues().minCoeff() / energy});
  }
  return out;
}

}  // namespace partition_flow::flow
