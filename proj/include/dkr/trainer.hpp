#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/expansion.hpp"
#include "dkr/local_solver.hpp"

namespace dkr {

enum class Schedule { Serial, RandomPermutation, ColoredParallel };

struct TrainConfig {
  std::vector<double> lambdas;   // one per agent, each > 0
  int max_cycles = 500;
  double stop_tol = 1e-10;       // early stop when the product-space step norm falls below this
  Schedule schedule = Schedule::Serial;
  std::uint64_t seed = 0;        // random_permutation only
};

// A point of the weighted product space R^n x H_K^m.
struct ProductPoint {
  Eigen::VectorXd z;
  std::vector<KernelExpansion> fs;
};

// ||z_a - z_b||^2 + sum_i lambda_i ||f_{a,i} - f_{b,i}||^2_{H_K}.
double product_distance_sq(const ProductPoint& a, const ProductPoint& b,
                           const std::vector<double>& lambdas, const Kernel& kernel,
                           const std::vector<Point>& store);

struct ProjectionRecord {
  std::size_t agent;
  double resid_sq;                          // sum_{j in S_i} (f_i(x_j) - y_j)^2
  std::optional<double> dist_to_ref_sq;     // after this projection
};

struct CycleRecord {
  int cycle;                                // 1-based
  double step_sq;                           // vs previous cycle-end state
  std::optional<double> dist_to_ref_sq;     // at cycle end
  std::vector<ProjectionRecord> projections;  // in visit order
};

struct TrainState {
  std::vector<KernelExpansion> functions;
  MessageBoard board;
  int cycle = 0;
  std::vector<CycleRecord> history;

  ProductPoint as_product_point() const { return {board.z, functions}; }
};

using CycleObserver = std::function<void(const CycleRecord&)>;

// Runs the collaborative training loop: each cycle visits every agent once in
// schedule order, projecting onto its constraint set and writing its fitted
// values back to the board. Stops after max_cycles or when the product-space
// step norm falls below stop_tol. Deterministic for a fixed config.
TrainState train(const TrainingSet& training, const Ensemble& ensemble,
                 const Kernel& kernel, const TrainConfig& config,
                 const ProductPoint* reference = nullptr,
                 const CycleObserver& observer = {});

// Greedy coloring of the agent conflict graph (edge iff example sets
// intersect); agents within a group can update simultaneously.
std::vector<std::vector<std::size_t>> conflict_coloring(const Ensemble& ensemble);

}  // namespace dkr
