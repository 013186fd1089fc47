#include "dkr/experiment.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace dkr {

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig tc;
  if (shared_lambda) {
    if (!lambdas.empty())
      throw std::invalid_argument("train.lambda and train.lambdas are exclusive");
    tc.lambdas.assign(m, *shared_lambda / static_cast<double>(m));
  } else {
    if (lambdas.size() != m)
      throw std::invalid_argument("train.lambdas length != ensemble.m");
    tc.lambdas = lambdas;
  }
  tc.max_cycles = max_cycles;
  tc.stop_tol = stop_tol;
  tc.schedule = schedule;
  tc.seed = train_seed;
  return tc;
}

namespace {

Point point_from_json(const json& row) {
  Point p(static_cast<Eigen::Index>(row.size()));
  for (std::size_t k = 0; k < row.size(); ++k)
    p(static_cast<Eigen::Index>(k)) = row.at(k).get<double>();
  return p;
}

SyntheticTarget target_from_json(const json& j) {
  SyntheticTarget t;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    t.kind = TargetKind::Linear;
    const auto w = j.at("w").get<std::vector<double>>();
    t.w = Eigen::Map<const Eigen::VectorXd>(w.data(),
                                            static_cast<Eigen::Index>(w.size()));
    t.b = j.value("b", 0.0);
  } else if (kind == "sinusoid") {
    t.kind = TargetKind::Sinusoid;
    t.freq = j.value("freq", 1.0);
    t.amp = j.value("amp", 1.0);
  } else {
    throw std::invalid_argument("data.target.kind: unknown kind '" + kind + "'");
  }
  t.noise_sd = j.value("noise_sd", 0.0);
  if (t.noise_sd < 0.0)
    throw std::invalid_argument("data.target.noise_sd must be >= 0");
  return t;
}

Schedule schedule_from_string(const std::string& s) {
  if (s == "serial") return Schedule::Serial;
  if (s == "random_permutation") return Schedule::RandomPermutation;
  if (s == "colored_parallel") return Schedule::ColoredParallel;
  throw std::invalid_argument("train.schedule: unknown schedule '" + s + "'");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;

  const auto& data = j.at("data");
  cfg.target = target_from_json(data.at("target"));
  cfg.n = data.at("n").get<std::size_t>();
  cfg.d = data.at("d").get<int>();
  cfg.data_seed = data.value("seed", std::uint64_t{0});

  const auto& ens = j.at("ensemble");
  const auto kind = ens.at("kind").get<std::string>();
  cfg.m = ens.at("m").get<std::size_t>();
  if (kind == "centralized") {
    cfg.ensemble_kind = EnsembleKind::Centralized;
  } else if (kind == "public_private") {
    cfg.ensemble_kind = EnsembleKind::PublicPrivate;
    for (const auto& v : ens.at("public_ids")) {
      const auto one_based = v.get<std::size_t>();
      if (one_based == 0)
        throw std::invalid_argument("ensemble.public_ids are 1-based");
      cfg.public_ids.push_back(one_based - 1);
    }
    cfg.private_sizes = ens.at("private_sizes").get<std::vector<std::size_t>>();
  } else if (kind == "geometric") {
    cfg.ensemble_kind = EnsembleKind::Geometric;
    for (const auto& row : ens.at("agent_positions"))
      cfg.agent_positions.push_back(point_from_json(row));
    if (ens.contains("example_positions"))
      for (const auto& row : ens.at("example_positions"))
        cfg.example_positions.push_back(point_from_json(row));
    cfg.radius = ens.at("radius").get<double>();
  } else {
    throw std::invalid_argument("ensemble.kind: unknown kind '" + kind + "'");
  }

  cfg.kernel = kernel_from_json(j.at("kernel"));

  const auto& train = j.at("train");
  if (train.contains("lambda"))
    cfg.shared_lambda = train.at("lambda").get<double>();
  if (train.contains("lambdas"))
    cfg.lambdas = train.at("lambdas").get<std::vector<double>>();
  if (!cfg.shared_lambda && cfg.lambdas.empty())
    throw std::invalid_argument("train: need lambda or lambdas");
  cfg.max_cycles = train.value("max_cycles", 500);
  cfg.stop_tol = train.value("stop_tol", 1e-10);
  cfg.schedule = schedule_from_string(train.value("schedule", std::string("serial")));
  cfg.train_seed = train.value("seed", std::uint64_t{0});
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

TrainingSet build_training(const ExperimentConfig& cfg) {
  return generate_data(cfg.target, cfg.n, cfg.d, cfg.data_seed);
}

Ensemble build_ensemble(const ExperimentConfig& cfg, const TrainingSet& training) {
  switch (cfg.ensemble_kind) {
    case EnsembleKind::Centralized:
      return make_centralized(cfg.m, training);
    case EnsembleKind::PublicPrivate:
      return make_public_private(cfg.m, cfg.public_ids, cfg.private_sizes,
                                 training);
    case EnsembleKind::Geometric: {
      // Example positions default to the training inputs themselves.
      const auto& ex = cfg.example_positions.empty() ? training.points
                                                     : cfg.example_positions;
      return make_geometric(cfg.agent_positions, ex, cfg.radius, training);
    }
  }
  throw std::logic_error("build_ensemble: unknown ensemble kind");
}

}  // namespace dkr
