#include "dkr/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "dkr/rng.hpp"

namespace dkr {

void TrainingSet::validate() const {
  if (points.empty()) throw std::invalid_argument("TrainingSet: empty");
  if (static_cast<std::size_t>(labels.size()) != points.size())
    throw std::invalid_argument("TrainingSet: points/labels length mismatch");
  const auto d = points[0].size();
  for (const auto& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("TrainingSet: inconsistent point dimensions");
    if (!p.allFinite())
      throw std::invalid_argument("TrainingSet: non-finite coordinate");
  }
  if (!labels.allFinite())
    throw std::invalid_argument("TrainingSet: non-finite label");
}

Ensemble::Ensemble(std::size_t m, std::size_t n,
                   std::vector<std::vector<std::size_t>> assignments)
    : m_(m), n_(n), assignments_(std::move(assignments)) {
  if (m_ == 0) throw std::invalid_argument("Ensemble: need at least one agent");
  if (assignments_.size() != m_)
    throw std::invalid_argument("Ensemble: assignment count != m");
  for (std::size_t i = 0; i < m_; ++i) {
    auto& ids = assignments_[i];
    if (ids.empty())
      throw std::invalid_argument("Ensemble: agent " + std::to_string(i + 1) +
                                  " has no examples");
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw std::invalid_argument("Ensemble: duplicate example id for agent " +
                                  std::to_string(i + 1));
    if (ids.back() >= n_)
      throw std::invalid_argument("Ensemble: example id out of range for agent " +
                                  std::to_string(i + 1));
  }
}

std::vector<std::size_t> Ensemble::covered() const {
  std::set<std::size_t> u;
  for (const auto& ids : assignments_) u.insert(ids.begin(), ids.end());
  return {u.begin(), u.end()};
}

double SyntheticTarget::eval(const Point& x) const {
  switch (kind) {
    case TargetKind::Linear:
      if (w.size() != x.size())
        throw std::invalid_argument("SyntheticTarget: weight dimension mismatch");
      return w.dot(x) + b;
    case TargetKind::Sinusoid:
      return amp * std::sin(freq * x.sum());
    case TargetKind::Custom:
      if (!custom) throw std::invalid_argument("SyntheticTarget: no custom table");
      return custom(x);
  }
  throw std::logic_error("SyntheticTarget: unknown kind");
}

Ensemble make_centralized(std::size_t m, const TrainingSet& training) {
  const std::size_t n = training.size();
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;
  return Ensemble(m, n, std::vector<std::vector<std::size_t>>(m, all));
}

Ensemble make_public_private(std::size_t m,
                             const std::vector<std::size_t>& public_ids,
                             const std::vector<std::size_t>& private_sizes,
                             const TrainingSet& training) {
  const std::size_t n = training.size();
  if (private_sizes.size() != m)
    throw std::invalid_argument("make_public_private: private_sizes length != m");
  std::set<std::size_t> pub(public_ids.begin(), public_ids.end());
  if (pub.size() != public_ids.size())
    throw std::invalid_argument("make_public_private: duplicate public ids");
  for (std::size_t id : public_ids)
    if (id >= n) throw std::invalid_argument("make_public_private: public id out of range");

  std::size_t total_private = 0;
  for (std::size_t s : private_sizes) total_private += s;
  if (pub.size() + total_private != n)
    throw std::invalid_argument(
        "make_public_private: public + private sizes do not partition the examples");

  // Private blocks take the non-public indices in ascending order.
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < n; ++j)
    if (!pub.count(j)) pool.push_back(j);

  std::vector<std::vector<std::size_t>> assignments(m);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    assignments[i].assign(public_ids.begin(), public_ids.end());
    for (std::size_t k = 0; k < private_sizes[i]; ++k)
      assignments[i].push_back(pool[cursor++]);
  }
  return Ensemble(m, n, std::move(assignments));
}

Ensemble make_geometric(const std::vector<Point>& agent_positions,
                        const std::vector<Point>& example_positions,
                        double radius, const TrainingSet& training) {
  if (!(radius > 0.0))
    throw std::invalid_argument("make_geometric: radius must be > 0");
  if (example_positions.size() != training.size())
    throw std::invalid_argument(
        "make_geometric: example position count != training size");
  const std::size_t m = agent_positions.size();
  std::vector<std::vector<std::size_t>> assignments(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < example_positions.size(); ++j) {
      if ((agent_positions[i] - example_positions[j]).norm() <= radius)
        assignments[i].push_back(j);
    }
    if (assignments[i].empty())
      throw std::invalid_argument("make_geometric: agent " +
                                  std::to_string(i + 1) +
                                  " has no examples within radius");
  }
  return Ensemble(m, training.size(), std::move(assignments));
}

TrainingSet generate_data(const SyntheticTarget& target, std::size_t n, int d,
                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_data: n must be >= 1");
  if (d < 1) throw std::invalid_argument("generate_data: d must be >= 1");
  if (target.noise_sd < 0.0)
    throw std::invalid_argument("generate_data: noise_sd must be >= 0");
  Rng rng(seed);
  TrainingSet ts;
  ts.points.reserve(n);
  ts.labels.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Point x(d);
    for (int k = 0; k < d; ++k) x(k) = rng.uniform(-1.0, 1.0);
    double y = target.eval(x);
    if (target.noise_sd > 0.0) y += target.noise_sd * rng.gaussian();
    ts.points.push_back(std::move(x));
    ts.labels(static_cast<Eigen::Index>(i)) = y;
  }
  return ts;
}

MessageBoard init_board(const TrainingSet& training) {
  MessageBoard board;
  board.z = training.labels;
  board.version = 0;
  return board;
}

}  // namespace dkr
