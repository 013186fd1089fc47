#pragma once

#include <Eigen/Core>
#include <Eigen/QR>
#include <cstdint>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/expansion.hpp"
#include "dkr/trainer.hpp"

namespace dkr {

// Direct solve of the centralized regularized least-squares estimator:
// coefficients from (G + lambda I) c = y over all training inputs.
KernelExpansion solve_centralized(const TrainingSet& training,
                                  const Kernel& kernel, double lambda);

struct RelaxedSolution {
  Eigen::VectorXd z_star;
  std::vector<KernelExpansion> f_stars;  // f_stars[i] supported on agent i's set
  double kkt_residual = 0.0;

  ProductPoint as_product_point() const { return {z_star, f_stars}; }
};

// Direct solve of the relaxed collaborative program
//   min ||z - y||^2 + sum_i lambda_i ||f_i||^2   s.t.  z_j = f_i(x_j) on S_i
// by minimum-norm least squares on the stacked stationarity system.
// shuffle_seed != 0 permutes the stacked rows before solving (the solution
// values are invariant; used for self-consistency checks).
RelaxedSolution solve_relaxed(const TrainingSet& training,
                              const Ensemble& ensemble, const Kernel& kernel,
                              const std::vector<double>& lambdas,
                              std::uint64_t shuffle_seed = 0);

// Objective of the relaxed program at an arbitrary point.
double relaxed_objective(const TrainingSet& training, const Kernel& kernel,
                         const std::vector<double>& lambdas,
                         const Eigen::VectorXd& z,
                         const std::vector<KernelExpansion>& fs);

// Orthogonal projector onto the feasible subspace of the relaxed program,
// acting on stacked (z, a_1..a_m) coefficient vectors. Used to generate
// feasible perturbations for optimality checks.
class FeasibilityProjector {
 public:
  FeasibilityProjector(const TrainingSet& training, const Ensemble& ensemble,
                       const Kernel& kernel);

  Eigen::Index stacked_size() const { return size_; }

  // Projects an arbitrary stacked direction onto the constraint null space.
  Eigen::VectorXd project(const Eigen::VectorXd& direction) const;

  // Splits a stacked vector into (dz, da_1..da_m).
  std::pair<Eigen::VectorXd, std::vector<Eigen::VectorXd>> split(
      const Eigen::VectorXd& stacked) const;

 private:
  Eigen::Index n_;
  std::vector<Eigen::Index> block_sizes_;
  Eigen::Index size_;
  Eigen::MatrixXd constraints_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

struct VerifyReport {
  double max_function_gap = 0.0;  // max_{i,j} |f_{i,T}(x_j) - f*_i(x_j)|
  double board_gap_inf = 0.0;     // ||z_T - z*||_inf
};

VerifyReport verify_against_trainer(const RelaxedSolution& sol,
                                    const TrainState& state,
                                    const TrainingSet& training);

}  // namespace dkr
