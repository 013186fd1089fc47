#include "dkr/oracle.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dkr/rng.hpp"

namespace dkr {

KernelExpansion solve_centralized(const TrainingSet& training,
                                  const Kernel& kernel, double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("solve_centralized: lambda must be > 0");
  training.validate();
  const auto n = static_cast<Eigen::Index>(training.size());
  Eigen::MatrixXd a = gram_all(kernel, training.points).entries;
  a.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  Eigen::VectorXd c = ldlt.solve(training.labels);
  c += ldlt.solve(training.labels - a * c);
  if ((a * c - training.labels).norm() >
      1e-10 * (1.0 + training.labels.norm()))
    throw std::runtime_error("solve_centralized: linear solve residual too large");
  std::vector<std::size_t> ids(training.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  (void)n;
  return KernelExpansion(ids, c, kernel);
}

namespace {

struct StackLayout {
  Eigen::Index n;
  std::vector<Eigen::Index> k;        // per-agent block size
  std::vector<Eigen::Index> a_off;    // offsets of a_i in the variable vector
  std::vector<Eigen::Index> mu_off;   // offsets of mu_i
  Eigen::Index vars;

  explicit StackLayout(const Ensemble& ensemble) {
    n = static_cast<Eigen::Index>(ensemble.example_count());
    Eigen::Index total = 0;
    for (std::size_t i = 0; i < ensemble.agent_count(); ++i) {
      k.push_back(static_cast<Eigen::Index>(ensemble.agent_ids(i).size()));
      total += k.back();
    }
    Eigen::Index off = n;
    for (auto ki : k) { a_off.push_back(off); off += ki; }
    for (auto ki : k) { mu_off.push_back(off); off += ki; }
    vars = off;
  }
};

}  // namespace

RelaxedSolution solve_relaxed(const TrainingSet& training,
                              const Ensemble& ensemble, const Kernel& kernel,
                              const std::vector<double>& lambdas,
                              std::uint64_t shuffle_seed) {
  const std::size_t m = ensemble.agent_count();
  if (lambdas.size() != m)
    throw std::invalid_argument("solve_relaxed: lambdas length != agent count");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("solve_relaxed: lambdas must be > 0");
  if (training.size() != ensemble.example_count())
    throw std::invalid_argument("solve_relaxed: ensemble/training size mismatch");

  const StackLayout layout(ensemble);
  const Eigen::Index rows = layout.vars;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(rows, layout.vars);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);

  // Stationarity in z: 2(z - y) - sum_i E_i^T mu_i = 0.
  for (Eigen::Index j = 0; j < layout.n; ++j) {
    sys(j, j) = 2.0;
    rhs(j) = 2.0 * training.labels(j);
  }
  Eigen::Index row = layout.n;
  std::vector<Eigen::MatrixXd> grams(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& ids = ensemble.agent_ids(i);
    grams[i] = gram(kernel, training.points, ids).entries;
    const Eigen::Index ki = layout.k[i];
    for (Eigen::Index r = 0; r < ki; ++r) {
      const auto zj = static_cast<Eigen::Index>(ids[static_cast<std::size_t>(r)]);
      sys(zj, layout.mu_off[i] + r) -= 1.0;
    }
    // Stationarity in a_i: 2 lambda_i G_i a_i + G_i mu_i = 0.
    sys.block(row, layout.a_off[i], ki, ki) = 2.0 * lambdas[i] * grams[i];
    sys.block(row, layout.mu_off[i], ki, ki) = grams[i];
    row += ki;
    // Constraints: G_i a_i - E_i z = 0.
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& ids = ensemble.agent_ids(i);
    const Eigen::Index ki = layout.k[i];
    sys.block(row, layout.a_off[i], ki, ki) = grams[i];
    for (Eigen::Index r = 0; r < ki; ++r) {
      const auto zj = static_cast<Eigen::Index>(ids[static_cast<std::size_t>(r)]);
      sys(row + r, zj) = -1.0;
    }
    row += ki;
  }

  if (shuffle_seed != 0) {
    Rng rng(shuffle_seed);
    for (Eigen::Index i = rows; i > 1; --i) {
      const auto j = static_cast<Eigen::Index>(
          rng.index(static_cast<std::size_t>(i)));
      sys.row(i - 1).swap(sys.row(j));
      std::swap(rhs(i - 1), rhs(j));
    }
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys);
  const Eigen::VectorXd u = cod.solve(rhs);

  RelaxedSolution sol;
  sol.kkt_residual = (sys * u - rhs).norm();
  if (sol.kkt_residual > 1e-8)
    throw std::runtime_error("solve_relaxed: stacked system residual " +
                             std::to_string(sol.kkt_residual) + " exceeds 1e-8");
  sol.z_star = u.head(layout.n);
  sol.f_stars.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    sol.f_stars.emplace_back(ensemble.agent_ids(i),
                             u.segment(layout.a_off[i], layout.k[i]), kernel);
  return sol;
}

double relaxed_objective(const TrainingSet& training, const Kernel& kernel,
                         const std::vector<double>& lambdas,
                         const Eigen::VectorXd& z,
                         const std::vector<KernelExpansion>& fs) {
  double obj = (z - training.labels).squaredNorm();
  for (std::size_t i = 0; i < fs.size(); ++i)
    obj += lambdas[i] * rkhs_norm_sq(fs[i], training.points);
  (void)kernel;
  return obj;
}

FeasibilityProjector::FeasibilityProjector(const TrainingSet& training,
                                           const Ensemble& ensemble,
                                           const Kernel& kernel) {
  n_ = static_cast<Eigen::Index>(ensemble.example_count());
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < ensemble.agent_count(); ++i) {
    block_sizes_.push_back(
        static_cast<Eigen::Index>(ensemble.agent_ids(i).size()));
    total += block_sizes_.back();
  }
  size_ = n_ + total;
  constraints_ = Eigen::MatrixXd::Zero(total, size_);
  Eigen::Index row = 0, col = n_;
  for (std::size_t i = 0; i < ensemble.agent_count(); ++i) {
    const auto& ids = ensemble.agent_ids(i);
    const Eigen::Index ki = block_sizes_[i];
    constraints_.block(row, col, ki, ki) =
        gram(kernel, training.points, ids).entries;
    for (Eigen::Index r = 0; r < ki; ++r)
      constraints_(row + r,
                   static_cast<Eigen::Index>(ids[static_cast<std::size_t>(r)])) =
          -1.0;
    row += ki;
    col += ki;
  }
  cod_.compute(constraints_);
}

Eigen::VectorXd FeasibilityProjector::project(
    const Eigen::VectorXd& direction) const {
  if (direction.size() != size_)
    throw std::invalid_argument("FeasibilityProjector: direction size mismatch");
  return direction - cod_.solve(constraints_ * direction);
}

std::pair<Eigen::VectorXd, std::vector<Eigen::VectorXd>>
FeasibilityProjector::split(const Eigen::VectorXd& stacked) const {
  if (stacked.size() != size_)
    throw std::invalid_argument("FeasibilityProjector: stacked size mismatch");
  std::vector<Eigen::VectorXd> blocks;
  Eigen::Index off = n_;
  for (auto ki : block_sizes_) {
    blocks.push_back(stacked.segment(off, ki));
    off += ki;
  }
  return {stacked.head(n_), std::move(blocks)};
}

VerifyReport verify_against_trainer(const RelaxedSolution& sol,
                                    const TrainState& state,
                                    const TrainingSet& training) {
  if (sol.f_stars.size() != state.functions.size())
    throw std::invalid_argument("verify_against_trainer: agent count mismatch");
  VerifyReport report;
  for (std::size_t i = 0; i < sol.f_stars.size(); ++i) {
    for (const auto& x : training.points) {
      const double gap = std::abs(eval_expansion(state.functions[i],
                                                 training.points, x) -
                                  eval_expansion(sol.f_stars[i],
                                                 training.points, x));
      report.max_function_gap = std::max(report.max_function_gap, gap);
    }
  }
  report.board_gap_inf = (state.board.z - sol.z_star).lpNorm<Eigen::Infinity>();
  return report;
}

}  // namespace dkr
