#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "dkr/kernel.hpp"

namespace dkr {

// A function in representer form: f(x) = sum_j coefficients[j] * K(x, x_{center_ids[j]}).
// Centers are ids into an external point store; ids are distinct.
struct KernelExpansion {
  std::vector<std::size_t> center_ids;
  Eigen::VectorXd coefficients;
  Kernel kernel;

  KernelExpansion() = default;
  KernelExpansion(std::vector<std::size_t> centers, Eigen::VectorXd coeffs,
                  Kernel k);

  bool empty() const { return center_ids.empty(); }
};

// f(x); the empty expansion is the zero function.
double eval_expansion(const KernelExpansion& f, const std::vector<Point>& store,
                      const Point& x);

// Squared RKHS norm c^T G c over the expansion's centers, clamped at 0.
double rkhs_norm_sq(const KernelExpansion& f, const std::vector<Point>& store);

// Squared RKHS norm of (a - b); coefficient subtraction over the union of centers.
double rkhs_diff_norm_sq(const KernelExpansion& a, const KernelExpansion& b,
                         const Kernel& k, const std::vector<Point>& store);

}  // namespace dkr
