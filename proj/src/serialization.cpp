#include "dkr/serialization.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace dkr {

json dataset_to_json(const TrainingSet& training, const Ensemble& ensemble) {
  json j;
  j["n"] = training.size();
  j["d"] = training.dim();
  json points = json::array();
  for (const auto& p : training.points) {
    json row = json::array();
    for (Eigen::Index k = 0; k < p.size(); ++k) row.push_back(p(k));
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  json labels = json::array();
  for (Eigen::Index i = 0; i < training.labels.size(); ++i)
    labels.push_back(training.labels(i));
  j["labels"] = std::move(labels);
  json agents = json::array();
  for (const auto& ids : ensemble.assignments()) {
    json row = json::array();
    for (std::size_t id : ids) row.push_back(id + 1);  // 1-based on disk
    agents.push_back(std::move(row));
  }
  j["agents"] = std::move(agents);
  return j;
}

std::pair<TrainingSet, Ensemble> dataset_from_json(const json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto d = j.at("d").get<int>();
  TrainingSet ts;
  for (const auto& row : j.at("points")) {
    Point p(d);
    if (row.size() != static_cast<std::size_t>(d))
      throw std::invalid_argument("dataset: point dimension != d");
    for (int k = 0; k < d; ++k) p(k) = row.at(static_cast<std::size_t>(k)).get<double>();
    ts.points.push_back(std::move(p));
  }
  const auto& labels = j.at("labels");
  ts.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    ts.labels(static_cast<Eigen::Index>(i)) = labels.at(i).get<double>();
  if (ts.size() != n)
    throw std::invalid_argument("dataset: point count != n");
  ts.validate();

  std::vector<std::vector<std::size_t>> assignments;
  for (const auto& row : j.at("agents")) {
    std::vector<std::size_t> ids;
    for (const auto& v : row) {
      const auto one_based = v.get<std::size_t>();
      if (one_based == 0)
        throw std::invalid_argument("dataset: example indices are 1-based");
      ids.push_back(one_based - 1);
    }
    assignments.push_back(std::move(ids));
  }
  const std::size_t m = assignments.size();
  Ensemble ensemble(m, n, std::move(assignments));
  return {std::move(ts), std::move(ensemble)};
}

json kernel_to_json(const Kernel& k) {
  json j;
  switch (k.family) {
    case KernelFamily::Linear:
      j["family"] = "linear";
      break;
    case KernelFamily::Polynomial:
      j["family"] = "polynomial";
      j["degree"] = k.degree;
      j["offset"] = k.offset;
      break;
    case KernelFamily::Gaussian:
      j["family"] = "gaussian";
      j["bandwidth"] = k.bandwidth;
      break;
  }
  return j;
}

Kernel kernel_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "linear") return Kernel::linear();
  if (family == "polynomial")
    return Kernel::polynomial(j.at("degree").get<int>(),
                              j.value("offset", 1.0));
  if (family == "gaussian")
    return Kernel::gaussian(j.at("bandwidth").get<double>());
  throw std::invalid_argument("kernel: unknown family '" + family + "'");
}

json model_to_json(const Kernel& kernel, const std::vector<double>& lambdas,
                   const std::vector<KernelExpansion>& functions) {
  json j;
  j["kernel"] = kernel_to_json(kernel);
  j["lambdas"] = lambdas;
  json agents = json::array();
  for (const auto& f : functions) {
    json a;
    json centers = json::array();
    for (std::size_t id : f.center_ids) centers.push_back(id + 1);
    a["centers"] = std::move(centers);
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < f.coefficients.size(); ++i)
      coeffs.push_back(f.coefficients(i));
    a["coeffs"] = std::move(coeffs);
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);
  return j;
}

std::pair<std::vector<KernelExpansion>, std::vector<double>> model_from_json(
    const json& j) {
  const Kernel kernel = kernel_from_json(j.at("kernel"));
  const auto lambdas = j.at("lambdas").get<std::vector<double>>();
  std::vector<KernelExpansion> functions;
  for (const auto& a : j.at("agents")) {
    std::vector<std::size_t> centers;
    for (const auto& v : a.at("centers")) {
      const auto one_based = v.get<std::size_t>();
      if (one_based == 0)
        throw std::invalid_argument("model: center indices are 1-based");
      centers.push_back(one_based - 1);
    }
    const auto coeffs = a.at("coeffs").get<std::vector<double>>();
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(
        coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    functions.emplace_back(std::move(centers), std::move(c), kernel);
  }
  return {std::move(functions), lambdas};
}

}  // namespace dkr
