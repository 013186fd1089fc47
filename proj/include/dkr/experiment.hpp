#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/serialization.hpp"
#include "dkr/trainer.hpp"

namespace dkr {

enum class EnsembleKind { Centralized, PublicPrivate, Geometric };

// Full experiment description parsed from a JSON config file; drives the CLI.
struct ExperimentConfig {
  // data
  SyntheticTarget target;
  std::size_t n = 0;
  int d = 0;
  std::uint64_t data_seed = 0;

  // ensemble
  EnsembleKind ensemble_kind = EnsembleKind::Centralized;
  std::size_t m = 1;
  std::vector<std::size_t> public_ids;        // 0-based internally
  std::vector<std::size_t> private_sizes;
  std::vector<Point> agent_positions;
  std::vector<Point> example_positions;
  double radius = 0.0;

  Kernel kernel;

  // train
  std::vector<double> lambdas;                // explicit per-agent weights, or
  std::optional<double> shared_lambda;        // one lambda split equally
  int max_cycles = 500;
  double stop_tol = 1e-10;
  Schedule schedule = Schedule::Serial;
  std::uint64_t train_seed = 0;

  TrainConfig train_config() const;
};

ExperimentConfig config_from_json(const json& j);
ExperimentConfig load_config(const std::string& path);

TrainingSet build_training(const ExperimentConfig& cfg);
Ensemble build_ensemble(const ExperimentConfig& cfg, const TrainingSet& training);

}  // namespace dkr
