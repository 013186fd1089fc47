#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/expansion.hpp"

namespace dkr {

// Output of one agent projection: the agent's new function (supported on its
// own example set) and the message-board values it will overwrite.
struct LocalUpdateResult {
  KernelExpansion new_f;
  std::vector<std::pair<std::size_t, double>> new_z_values;  // sorted by id
};

// One step of the collaborative update: solves
//   argmin_f  sum_{j in agent_ids} (f(x_j) - z_j)^2 + lambda * ||f - f_prev||^2
// via the residual system (G + lambda I) c = r over the agent's examples.
LocalUpdateResult local_update(const KernelExpansion& f_prev,
                               const std::vector<std::size_t>& agent_ids,
                               const MessageBoard& board,
                               const TrainingSet& training, const Kernel& kernel,
                               double lambda);

// Variant with a precomputed Gram over agent_ids (rows/cols in agent_ids order).
LocalUpdateResult local_update(const KernelExpansion& f_prev,
                               const std::vector<std::size_t>& agent_ids,
                               const MessageBoard& board,
                               const TrainingSet& training, const Kernel& kernel,
                               double lambda, const Eigen::MatrixXd& gram_local);

// Overwrites z_j for the result's keys, bumps the version, leaves everything
// else bit-identical.
void apply_update(MessageBoard& board, const LocalUpdateResult& result);

}  // namespace dkr
