#include "dkr/expansion.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace dkr {

KernelExpansion::KernelExpansion(std::vector<std::size_t> centers,
                                 Eigen::VectorXd coeffs, Kernel k)
    : center_ids(std::move(centers)), coefficients(std::move(coeffs)),
      kernel(k) {
  if (static_cast<std::size_t>(coefficients.size()) != center_ids.size())
    throw std::invalid_argument("KernelExpansion: centers/coefficients length mismatch");
  std::unordered_set<std::size_t> seen(center_ids.begin(), center_ids.end());
  if (seen.size() != center_ids.size())
    throw std::invalid_argument("KernelExpansion: duplicate center ids");
}

double eval_expansion(const KernelExpansion& f, const std::vector<Point>& store,
                      const Point& x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.center_ids.size(); ++j) {
    const std::size_t id = f.center_ids[j];
    if (id >= store.size())
      throw std::out_of_range("eval_expansion: unresolvable center id");
    acc += f.coefficients(static_cast<Eigen::Index>(j)) * f.kernel(x, store[id]);
  }
  return acc;
}

double rkhs_norm_sq(const KernelExpansion& f, const std::vector<Point>& store) {
  if (f.empty()) return 0.0;
  const GramMatrix g = gram(f.kernel, store, f.center_ids);
  const double v = f.coefficients.dot(g.entries * f.coefficients);
  if (v < 0.0) {
    if (v < -1e-12) return v;  // caller sees genuine negativity beyond tolerance
    return 0.0;
  }
  return v;
}

double rkhs_diff_norm_sq(const KernelExpansion& a, const KernelExpansion& b,
                         const Kernel& k, const std::vector<Point>& store) {
  // Union of centers, coefficients a - b.
  std::vector<std::size_t> ids = a.center_ids;
  std::vector<double> coeffs(a.coefficients.data(),
                             a.coefficients.data() + a.coefficients.size());
  for (std::size_t j = 0; j < b.center_ids.size(); ++j) {
    const std::size_t id = b.center_ids[j];
    auto it = std::find(ids.begin(), ids.end(), id);
    const double c = b.coefficients(static_cast<Eigen::Index>(j));
    if (it == ids.end()) {
      ids.push_back(id);
      coeffs.push_back(-c);
    } else {
      coeffs[static_cast<std::size_t>(it - ids.begin())] -= c;
    }
  }
  if (ids.empty()) return 0.0;
  Eigen::Map<const Eigen::VectorXd> c(coeffs.data(),
                                      static_cast<Eigen::Index>(coeffs.size()));
  const GramMatrix g = gram(k, store, ids);
  const double v = c.dot(g.entries * c);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace dkr
