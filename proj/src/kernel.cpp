#include "dkr/kernel.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dkr {

Kernel Kernel::linear() {
  Kernel k;
  k.family = KernelFamily::Linear;
  return k;
}

Kernel Kernel::polynomial(int degree, double offset) {
  if (degree < 1) throw std::invalid_argument("polynomial kernel: degree must be >= 1");
  if (offset < 0.0) throw std::invalid_argument("polynomial kernel: offset must be >= 0");
  Kernel k;
  k.family = KernelFamily::Polynomial;
  k.degree = degree;
  k.offset = offset;
  return k;
}

Kernel Kernel::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("gaussian kernel: bandwidth must be > 0");
  Kernel k;
  k.family = KernelFamily::Gaussian;
  k.bandwidth = bandwidth;
  return k;
}

double Kernel::operator()(const Point& a, const Point& b) const {
  if (a.size() != b.size())
    throw std::invalid_argument("eval_kernel: point dimension mismatch");
  switch (family) {
    case KernelFamily::Linear:
      return a.dot(b);
    case KernelFamily::Polynomial:
      return std::pow(a.dot(b) + offset, degree);
    case KernelFamily::Gaussian: {
      const double d2 = (a - b).squaredNorm();
      return std::exp(-d2 / (2.0 * bandwidth * bandwidth));
    }
  }
  throw std::logic_error("eval_kernel: unknown kernel family");
}

double eval_kernel(const Kernel& k, const Point& a, const Point& b) {
  return k(a, b);
}

GramMatrix gram(const Kernel& k, const std::vector<Point>& store,
                const std::vector<std::size_t>& ids) {
  if (ids.empty()) throw std::invalid_argument("gram: empty id list");
  for (std::size_t id : ids)
    if (id >= store.size()) throw std::out_of_range("gram: id outside point store");
  const auto n = static_cast<Eigen::Index>(ids.size());
  GramMatrix g;
  g.point_ids = ids;
  g.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = k(store[ids[i]], store[ids[j]]);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

GramMatrix gram_all(const Kernel& k, const std::vector<Point>& store) {
  std::vector<std::size_t> ids(store.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  return gram(k, store, ids);
}

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = kRankTol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

int numerical_rank(const GramMatrix& g) { return numerical_rank(g.entries); }

}  // namespace dkr
