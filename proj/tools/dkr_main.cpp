// Experiment driver: dataset generation, collaborative training runs, exact
// oracle solves, connectedness reports, CSV telemetry.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "dkr/connectivity.hpp"
#include "dkr/experiment.hpp"
#include "dkr/oracle.hpp"
#include "dkr/serialization.hpp"
#include "dkr/trainer.hpp"

namespace fs = std::filesystem;

namespace {

struct Instance {
  dkr::TrainingSet training;
  dkr::Ensemble ensemble;
};

Instance load_instance(const dkr::ExperimentConfig& cfg,
                       const std::string& data_path) {
  if (!data_path.empty()) {
    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("cannot open data file: " + data_path);
    dkr::json j;
    in >> j;
    auto [training, ensemble] = dkr::dataset_from_json(j);
    return {std::move(training), std::move(ensemble)};
  }
  auto training = dkr::build_training(cfg);
  auto ensemble = dkr::build_ensemble(cfg, training);
  return {std::move(training), std::move(ensemble)};
}

void write_json(const fs::path& path, const dkr::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

int cmd_gen(const dkr::ExperimentConfig& cfg, const fs::path& out_dir) {
  const auto inst = load_instance(cfg, "");
  fs::create_directories(out_dir);
  write_json(out_dir / "dataset.json",
             dkr::dataset_to_json(inst.training, inst.ensemble));
  std::cout << "wrote " << (out_dir / "dataset.json").string() << " (n="
            << inst.training.size() << ", m=" << inst.ensemble.agent_count()
            << ", coverage=" << inst.ensemble.covered().size() << "/"
            << inst.training.size() << ")\n";
  return 0;
}

int cmd_train(const dkr::ExperimentConfig& cfg, const std::string& data_path,
              const fs::path& out_dir, bool with_oracle) {
  const auto inst = load_instance(cfg, data_path);
  dkr::ExperimentConfig cfg2 = cfg;
  cfg2.m = inst.ensemble.agent_count();
  const dkr::TrainConfig tc = cfg2.train_config();

  std::optional<dkr::RelaxedSolution> relaxed;
  std::optional<dkr::ProductPoint> reference;
  if (with_oracle) {
    relaxed = dkr::solve_relaxed(inst.training, inst.ensemble, cfg.kernel,
                                 tc.lambdas);
    reference = relaxed->as_product_point();
  }

  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "telemetry.csv");
  if (!csv) throw std::runtime_error("cannot write telemetry.csv");
  csv << "cycle,step_sq,dist_to_oracle_sq,agent,resid_sq\n";
  auto observer = [&](const dkr::CycleRecord& rec) {
    for (const auto& pr : rec.projections) {
      csv << rec.cycle << ",,";
      if (pr.dist_to_ref_sq) csv << fmt(*pr.dist_to_ref_sq);
      csv << ',' << (pr.agent + 1) << ',' << fmt(pr.resid_sq) << '\n';
    }
    csv << rec.cycle << ',' << fmt(rec.step_sq) << ',';
    if (rec.dist_to_ref_sq) csv << fmt(*rec.dist_to_ref_sq);
    csv << ",-1,\n";
    csv.flush();
  };

  dkr::TrainState state;
  try {
    state = dkr::train(inst.training, inst.ensemble, cfg.kernel, tc,
                       reference ? &*reference : nullptr, observer);
  } catch (...) {
    csv.flush();  // keep the partial telemetry on solver failure
    throw;
  }

  write_json(out_dir / "model.json",
             dkr::model_to_json(cfg.kernel, tc.lambdas, state.functions));
  std::cout << "trained " << state.cycle << " cycles; final step_sq="
            << fmt(state.history.back().step_sq) << "\n";
  if (relaxed) {
    const auto report =
        dkr::verify_against_trainer(*relaxed, state, inst.training);
    std::cout << "oracle gap: max|f_i - f*_i|=" << fmt(report.max_function_gap)
              << ", ||z - z*||_inf=" << fmt(report.board_gap_inf) << "\n";
  }
  return 0;
}

int cmd_check(const dkr::ExperimentConfig& cfg, const std::string& data_path,
              const fs::path& out_dir) {
  const auto inst = load_instance(cfg, data_path);
  const auto [connected, graph] =
      dkr::is_connected(inst.ensemble, inst.training, cfg.kernel);
  std::cout << "connected: " << (connected ? "true" : "false")
            << ", components: " << graph.component_count() << "\n";
  fs::create_directories(out_dir);
  std::ofstream edges(out_dir / "edges.txt");
  edges << dkr::format_edge_list(graph);
  return 0;
}

int cmd_oracle(const dkr::ExperimentConfig& cfg, const std::string& data_path,
               const fs::path& out_dir) {
  const auto inst = load_instance(cfg, data_path);
  dkr::ExperimentConfig cfg2 = cfg;
  cfg2.m = inst.ensemble.agent_count();
  const auto lambdas = cfg2.train_config().lambdas;
  double lambda_total = 0.0;
  for (double l : lambdas) lambda_total += l;

  const auto centralized =
      dkr::solve_centralized(inst.training, cfg.kernel, lambda_total);
  const auto relaxed =
      dkr::solve_relaxed(inst.training, inst.ensemble, cfg.kernel, lambdas);

  fs::create_directories(out_dir);
  dkr::json j;
  j["centralized"] = dkr::model_to_json(cfg.kernel, {lambda_total}, {centralized});
  j["relaxed"] = dkr::model_to_json(cfg.kernel, lambdas, relaxed.f_stars);
  dkr::json z = dkr::json::array();
  for (Eigen::Index i = 0; i < relaxed.z_star.size(); ++i)
    z.push_back(relaxed.z_star(i));
  j["relaxed"]["z_star"] = std::move(z);
  j["relaxed"]["kkt_residual"] = relaxed.kkt_residual;
  write_json(out_dir / "oracle.json", j);
  std::cout << "kkt_residual=" << fmt(relaxed.kkt_residual) << "\n";
  return 0;
}

int cmd_compare(const dkr::ExperimentConfig& cfg, const std::string& data_path,
                const std::string& model_path) {
  const auto inst = load_instance(cfg, data_path);
  std::ifstream in(model_path);
  if (!in) throw std::runtime_error("cannot open model file: " + model_path);
  dkr::json mj;
  in >> mj;
  auto [functions, lambdas] = dkr::model_from_json(mj);
  double lambda_total = 0.0;
  for (double l : lambdas) lambda_total += l;

  const auto centralized =
      dkr::solve_centralized(inst.training, cfg.kernel, lambda_total);
  const auto n = inst.training.size();

  std::cout << "agent,max_gap_vs_centralized,mse_vs_labels,mse_vs_target\n";
  for (std::size_t i = 0; i < functions.size(); ++i) {
    double max_gap = 0.0, mse_labels = 0.0, mse_target = 0.0;
    bool have_target = true;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& x = inst.training.points[j];
      const double fi = dkr::eval_expansion(functions[i], inst.training.points, x);
      const double fc = dkr::eval_expansion(centralized, inst.training.points, x);
      max_gap = std::max(max_gap, std::abs(fi - fc));
      const double dy = fi - inst.training.labels(static_cast<Eigen::Index>(j));
      mse_labels += dy * dy;
      try {
        const double de = fi - cfg.target.eval(x);
        mse_target += de * de;
      } catch (const std::exception&) {
        have_target = false;
      }
    }
    std::cout << (i + 1) << ',' << fmt(max_gap) << ','
              << fmt(mse_labels / static_cast<double>(n)) << ',';
    if (have_target) std::cout << fmt(mse_target / static_cast<double>(n));
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative kernel regression experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_path;
  std::string model_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool with_oracle = false;

  app.add_option("--config", config_path, "experiment config JSON")
      ->required();
  app.add_option("--seed", seed, "override the data generation seed");
  app.add_option("--out", out_dir, "output directory");

  auto* gen = app.add_subcommand("gen", "generate dataset + ensemble files");
  auto* train = app.add_subcommand("train", "run the collaborative trainer");
  train->add_option("--data", data_path, "dataset JSON (skip generation)");
  train->add_flag("--oracle", with_oracle,
                  "solve the relaxed program first and record distances to it");
  auto* check = app.add_subcommand("check", "connectedness report");
  check->add_option("--data", data_path, "dataset JSON (skip generation)");
  auto* oracle = app.add_subcommand("oracle", "direct centralized + relaxed solves");
  oracle->add_option("--data", data_path, "dataset JSON (skip generation)");
  auto* compare = app.add_subcommand("compare",
                                     "trained model vs centralized solution");
  compare->add_option("--data", data_path, "dataset JSON (skip generation)");
  compare->add_option("--model", model_path, "trained model JSON")->required();

  // Let global flags appear after the subcommand too.
  for (auto* sub : {gen, train, check, oracle, compare}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = dkr::load_config(config_path);
    if (seed) cfg.data_seed = *seed;
    if (gen->parsed()) return cmd_gen(cfg, out_dir);
    if (train->parsed()) return cmd_train(cfg, data_path, out_dir, with_oracle);
    if (check->parsed()) return cmd_check(cfg, data_path, out_dir);
    if (oracle->parsed()) return cmd_oracle(cfg, data_path, out_dir);
    if (compare->parsed()) return cmd_compare(cfg, data_path, model_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
