#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "dkr/kernel.hpp"

namespace dkr {

struct TrainingSet {
  std::vector<Point> points;
  Eigen::VectorXd labels;

  std::size_t size() const { return points.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

  void validate() const;
};

// Bipartite assignment of m agents to n training examples. Each agent's set
// is sorted, duplicate-free, nonempty. Coverage of all n examples is not
// required; see covered().
class Ensemble {
 public:
  Ensemble(std::size_t m, std::size_t n,
           std::vector<std::vector<std::size_t>> assignments);

  std::size_t agent_count() const { return m_; }
  std::size_t example_count() const { return n_; }
  const std::vector<std::size_t>& agent_ids(std::size_t i) const {
    return assignments_.at(i);
  }
  const std::vector<std::vector<std::size_t>>& assignments() const {
    return assignments_;
  }

  // Sorted union of all agents' example ids.
  std::vector<std::size_t> covered() const;
  bool covers_all() const { return covered().size() == n_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> assignments_;
};

// Shared per-example message variables z, overwritten by agent updates.
struct MessageBoard {
  Eigen::VectorXd z;
  std::uint64_t version = 0;
};

enum class TargetKind { Linear, Sinusoid, Custom };

// Synthetic regression target eta(x) used to generate labels and report error.
struct SyntheticTarget {
  TargetKind kind = TargetKind::Linear;
  Eigen::VectorXd w;     // linear: eta(x) = w.x + b
  double b = 0.0;
  double freq = 1.0;     // sinusoid: eta(x) = amp * sin(freq * sum(x))
  double amp = 1.0;
  std::function<double(const Point&)> custom;
  double noise_sd = 0.0;

  double eval(const Point& x) const;
};

Ensemble make_centralized(std::size_t m, const TrainingSet& training);

Ensemble make_public_private(std::size_t m,
                             const std::vector<std::size_t>& public_ids,
                             const std::vector<std::size_t>& private_sizes,
                             const TrainingSet& training);

Ensemble make_geometric(const std::vector<Point>& agent_positions,
                        const std::vector<Point>& example_positions,
                        double radius, const TrainingSet& training);

TrainingSet generate_data(const SyntheticTarget& target, std::size_t n, int d,
                          std::uint64_t seed);

MessageBoard init_board(const TrainingSet& training);

}  // namespace dkr
