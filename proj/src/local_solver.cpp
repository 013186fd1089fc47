#include "dkr/local_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <unordered_map>

namespace dkr {

namespace {

// Solve (G + lambda I) c = r. SPD for lambda > 0; falls back to an
// eigendecomposition if the factorization degrades from rounding.
Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& g, double lambda,
                                  const Eigen::VectorXd& r) {
  Eigen::MatrixXd a = g;
  a.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd c = llt.solve(r);
    c += llt.solve(r - a * c);  // one refinement step
    if ((a * c - r).norm() <= 1e-10 * (1.0 + r.norm())) return c;
  }
  std::cerr << "local_solver: SPD factorization degraded, using eigensolver\n";
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = inv(i) > 0.0 ? 1.0 / inv(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() *
         (es.eigenvectors().transpose() * r);
}

}  // namespace

LocalUpdateResult local_update(const KernelExpansion& f_prev,
                               const std::vector<std::size_t>& agent_ids,
                               const MessageBoard& board,
                               const TrainingSet& training, const Kernel& kernel,
                               double lambda) {
  return local_update(f_prev, agent_ids, board, training, kernel, lambda,
                      gram(kernel, training.points, agent_ids).entries);
}

LocalUpdateResult local_update(const KernelExpansion& f_prev,
                               const std::vector<std::size_t>& agent_ids,
                               const MessageBoard& board,
                               const TrainingSet& training, const Kernel& kernel,
                               double lambda, const Eigen::MatrixXd& gram_local) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("local_update: lambda must be > 0");
  if (agent_ids.empty())
    throw std::invalid_argument("local_update: agent has no examples");

  const auto k = static_cast<Eigen::Index>(agent_ids.size());

  // Map f_prev's coefficients onto the agent's example set.
  std::unordered_map<std::size_t, Eigen::Index> pos;
  pos.reserve(agent_ids.size());
  for (Eigen::Index j = 0; j < k; ++j) pos[agent_ids[j]] = j;

  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(k);
  for (std::size_t j = 0; j < f_prev.center_ids.size(); ++j) {
    auto it = pos.find(f_prev.center_ids[j]);
    if (it == pos.end())
      throw std::invalid_argument(
          "local_update: f_prev has a center outside the agent's example set");
    c_prev(it->second) += f_prev.coefficients(static_cast<Eigen::Index>(j));
  }

  // Residual r_j = z_j - f_prev(x_j); f_prev values on the set are G c_prev.
  Eigen::VectorXd z_local(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto id = agent_ids[static_cast<std::size_t>(j)];
    if (id >= static_cast<std::size_t>(board.z.size()))
      throw std::out_of_range("local_update: example id outside board");
    z_local(j) = board.z(static_cast<Eigen::Index>(id));
  }
  const Eigen::VectorXd r = z_local - gram_local * c_prev;

  const Eigen::VectorXd c_new = c_prev + solve_regularized(gram_local, lambda, r);

  LocalUpdateResult out;
  out.new_f = KernelExpansion(agent_ids, c_new, kernel);
  const Eigen::VectorXd fitted = gram_local * c_new;
  out.new_z_values.reserve(agent_ids.size());
  for (Eigen::Index j = 0; j < k; ++j)
    out.new_z_values.emplace_back(agent_ids[static_cast<std::size_t>(j)],
                                  fitted(j));
  return out;
}

void apply_update(MessageBoard& board, const LocalUpdateResult& result) {
  for (const auto& [id, value] : result.new_z_values) {
    if (id >= static_cast<std::size_t>(board.z.size()))
      throw std::out_of_range("apply_update: example id outside board");
    board.z(static_cast<Eigen::Index>(id)) = value;
  }
  ++board.version;
}

}  // namespace dkr
