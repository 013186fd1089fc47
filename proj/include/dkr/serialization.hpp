#pragma once

#include <nlohmann/json_fwd.hpp>
#include <utility>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/expansion.hpp"

namespace dkr {

using json = nlohmann::json;

// Dataset + ensemble layout:
//   {"n": ..., "d": ..., "points": [[...]], "labels": [...],
//    "agents": [[1-based example indices]]}
json dataset_to_json(const TrainingSet& training, const Ensemble& ensemble);
std::pair<TrainingSet, Ensemble> dataset_from_json(const json& j);

// {"family": "linear"|"polynomial"|"gaussian", plus family parameters}
json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const json& j);

// Trained model layout:
//   {"kernel": {...}, "lambdas": [...],
//    "agents": [{"centers": [1-based ids], "coeffs": [...]}]}
json model_to_json(const Kernel& kernel, const std::vector<double>& lambdas,
                   const std::vector<KernelExpansion>& functions);
std::pair<std::vector<KernelExpansion>, std::vector<double>> model_from_json(
    const json& j);

}  // namespace dkr
