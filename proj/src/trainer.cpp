#include "dkr/trainer.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "dkr/rng.hpp"

namespace dkr {

double product_distance_sq(const ProductPoint& a, const ProductPoint& b,
                           const std::vector<double>& lambdas, const Kernel& kernel,
                           const std::vector<Point>& store) {
  if (a.z.size() != b.z.size())
    throw std::invalid_argument("product_distance_sq: board length mismatch");
  if (a.fs.size() != b.fs.size() || a.fs.size() != lambdas.size())
    throw std::invalid_argument("product_distance_sq: agent count mismatch");
  double d = (a.z - b.z).squaredNorm();
  for (std::size_t i = 0; i < a.fs.size(); ++i)
    d += lambdas[i] * rkhs_diff_norm_sq(a.fs[i], b.fs[i], kernel, store);
  return d;
}

namespace {

bool intersects(const std::vector<std::size_t>& a,
                const std::vector<std::size_t>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return false;
}

// Scatters an expansion's coefficients into slots given by an id -> position map.
void scatter(const KernelExpansion& f,
             const std::unordered_map<std::size_t, Eigen::Index>& pos,
             Eigen::VectorXd& out) {
  for (std::size_t j = 0; j < f.center_ids.size(); ++j)
    out(pos.at(f.center_ids[j])) += f.coefficients(static_cast<Eigen::Index>(j));
}

// Per-agent machinery for fast distance-to-reference telemetry: the Gram over
// the union of the agent's example set and the reference centers.
struct AgentRefCache {
  std::vector<std::size_t> union_ids;
  std::unordered_map<std::size_t, Eigen::Index> pos;
  Eigen::MatrixXd gram_union;
  Eigen::VectorXd ref_coeffs;  // reference expansion on union slots
};

}  // namespace

TrainState train(const TrainingSet& training, const Ensemble& ensemble,
                 const Kernel& kernel, const TrainConfig& config,
                 const ProductPoint* reference, const CycleObserver& observer) {
  const std::size_t m = ensemble.agent_count();
  const std::size_t n = ensemble.example_count();
  if (training.size() != n)
    throw std::invalid_argument("train: ensemble/training size mismatch");
  if (config.lambdas.size() != m)
    throw std::invalid_argument("train: lambdas length != agent count");
  for (double l : config.lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("train: lambdas must be > 0");
  if (config.max_cycles < 1)
    throw std::invalid_argument("train: max_cycles must be >= 1");
  if (config.stop_tol < 0.0)
    throw std::invalid_argument("train: stop_tol must be >= 0");
  if (reference &&
      (reference->fs.size() != m ||
       reference->z.size() != static_cast<Eigen::Index>(n)))
    throw std::invalid_argument("train: reference dimensions mismatch");

  // Per-agent Gram over its example set, reused every cycle.
  std::vector<Eigen::MatrixXd> grams(m);
  std::vector<Eigen::VectorXd> y_local(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& ids = ensemble.agent_ids(i);
    grams[i] = gram(kernel, training.points, ids).entries;
    y_local[i].resize(static_cast<Eigen::Index>(ids.size()));
    for (std::size_t j = 0; j < ids.size(); ++j)
      y_local[i](static_cast<Eigen::Index>(j)) =
          training.labels(static_cast<Eigen::Index>(ids[j]));
  }

  // Caches for distance to the reference point, maintained incrementally.
  std::vector<AgentRefCache> ref_cache;
  std::vector<double> ref_terms;  // lambda_i * ||f_i - f*_i||^2
  if (reference) {
    ref_cache.resize(m);
    ref_terms.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      auto& rc = ref_cache[i];
      rc.union_ids = ensemble.agent_ids(i);
      for (std::size_t id : reference->fs[i].center_ids)
        if (!std::binary_search(ensemble.agent_ids(i).begin(),
                                ensemble.agent_ids(i).end(), id))
          rc.union_ids.push_back(id);
      for (std::size_t j = 0; j < rc.union_ids.size(); ++j)
        rc.pos[rc.union_ids[j]] = static_cast<Eigen::Index>(j);
      rc.gram_union = gram(kernel, training.points, rc.union_ids).entries;
      rc.ref_coeffs = Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(rc.union_ids.size()));
      scatter(reference->fs[i], rc.pos, rc.ref_coeffs);
      // Initial functions are zero, so the term is the reference's own norm.
      ref_terms[i] = config.lambdas[i] *
                     rc.ref_coeffs.dot(rc.gram_union * rc.ref_coeffs);
    }
  }
  auto ref_term = [&](std::size_t i, const KernelExpansion& f) {
    const auto& rc = ref_cache[i];
    Eigen::VectorXd c = -rc.ref_coeffs;
    scatter(f, rc.pos, c);
    const double v = c.dot(rc.gram_union * c);
    return config.lambdas[i] * (v < 0.0 ? 0.0 : v);
  };
  auto dist_to_ref = [&](const Eigen::VectorXd& z) {
    double d = (z - reference->z).squaredNorm();
    for (double t : ref_terms) d += t;
    return d;
  };

  // Visit order: a list of groups per cycle. Serial and random permutation
  // use singleton groups; the colored schedule batches non-conflicting agents.
  std::vector<std::vector<std::size_t>> colored_groups;
  if (config.schedule == Schedule::ColoredParallel)
    colored_groups = conflict_coloring(ensemble);
  Rng perm_rng(config.seed);

  TrainState state;
  state.functions.assign(m, KernelExpansion{});
  state.board = init_board(training);

  std::vector<KernelExpansion> prev_functions = state.functions;
  Eigen::VectorXd prev_z = state.board.z;

  for (int t = 1; t <= config.max_cycles; ++t) {
    std::vector<std::vector<std::size_t>> groups;
    switch (config.schedule) {
      case Schedule::Serial:
        for (std::size_t i = 0; i < m; ++i) groups.push_back({i});
        break;
      case Schedule::RandomPermutation: {
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        for (std::size_t i = m; i > 1; --i)
          std::swap(order[i - 1], order[perm_rng.index(i)]);
        for (std::size_t i : order) groups.push_back({i});
        break;
      }
      case Schedule::ColoredParallel:
        groups = colored_groups;
        break;
    }

    CycleRecord rec;
    rec.cycle = t;
    for (const auto& group : groups) {
      // All updates in a group read the same board snapshot; the groups'
      // example sets are pairwise disjoint, so applying them serially is
      // identical to any other order.
      std::vector<LocalUpdateResult> results;
      results.reserve(group.size());
      for (std::size_t i : group)
        results.push_back(local_update(state.functions[i],
                                       ensemble.agent_ids(i), state.board,
                                       training, kernel, config.lambdas[i],
                                       grams[i]));
      for (std::size_t g = 0; g < group.size(); ++g) {
        const std::size_t i = group[g];
        state.functions[i] = results[g].new_f;
        apply_update(state.board, results[g]);

        ProjectionRecord pr;
        pr.agent = i;
        Eigen::VectorXd fitted(results[g].new_z_values.size());
        for (std::size_t j = 0; j < results[g].new_z_values.size(); ++j)
          fitted(static_cast<Eigen::Index>(j)) = results[g].new_z_values[j].second;
        pr.resid_sq = (fitted - y_local[i]).squaredNorm();
        if (reference) {
          ref_terms[i] = ref_term(i, state.functions[i]);
          pr.dist_to_ref_sq = dist_to_ref(state.board.z);
        }
        rec.projections.push_back(std::move(pr));
      }
    }

    // Cycle-end telemetry.
    double step = (state.board.z - prev_z).squaredNorm();
    for (std::size_t i = 0; i < m; ++i)
      step += config.lambdas[i] * rkhs_diff_norm_sq(state.functions[i],
                                                    prev_functions[i], kernel,
                                                    training.points);
    rec.step_sq = step;
    if (reference) rec.dist_to_ref_sq = dist_to_ref(state.board.z);
    state.cycle = t;
    if (observer) observer(rec);
    state.history.push_back(std::move(rec));

    prev_functions = state.functions;
    prev_z = state.board.z;
    if (step < config.stop_tol * config.stop_tol) break;
  }
  return state;
}

std::vector<std::vector<std::size_t>> conflict_coloring(const Ensemble& ensemble) {
  const std::size_t m = ensemble.agent_count();
  std::vector<int> color(m, -1);
  int max_color = -1;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<bool> used(static_cast<std::size_t>(max_color) + 2, false);
    for (std::size_t k = 0; k < i; ++k)
      if (intersects(ensemble.agent_ids(i), ensemble.agent_ids(k)))
        used[static_cast<std::size_t>(color[k])] = true;
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[i] = c;
    max_color = std::max(max_color, c);
  }
  std::vector<std::vector<std::size_t>> groups(
      static_cast<std::size_t>(max_color) + 1);
  for (std::size_t i = 0; i < m; ++i)
    groups[static_cast<std::size_t>(color[i])].push_back(i);
  return groups;
}

}  // namespace dkr
