#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace dkr {

using Point = Eigen::VectorXd;

enum class KernelFamily { Linear, Polynomial, Gaussian };

// Positive semi-definite similarity function on R^d.
struct Kernel {
  KernelFamily family = KernelFamily::Linear;
  int degree = 2;          // polynomial only
  double offset = 1.0;     // polynomial only
  double bandwidth = 1.0;  // gaussian only

  static Kernel linear();
  static Kernel polynomial(int degree, double offset = 1.0);
  static Kernel gaussian(double bandwidth);

  double operator()(const Point& a, const Point& b) const;
};

double eval_kernel(const Kernel& k, const Point& a, const Point& b);

struct GramMatrix {
  Eigen::MatrixXd entries;
  std::vector<std::size_t> point_ids;

  std::size_t size() const { return point_ids.size(); }
};

// Gram over store[ids[0]], ..., store[ids[k-1]].
GramMatrix gram(const Kernel& k, const std::vector<Point>& store,
                const std::vector<std::size_t>& ids);

// Gram over every point in the store, ids 0..n-1.
GramMatrix gram_all(const Kernel& k, const std::vector<Point>& store);

// Count of singular values above rank_tol relative to the largest.
inline constexpr double kRankTol = 1e-10;
int numerical_rank(const Eigen::MatrixXd& m);
int numerical_rank(const GramMatrix& g);

}  // namespace dkr
