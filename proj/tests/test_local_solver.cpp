#include <doctest.h>

#include <Eigen/QR>
#include <algorithm>

#include "dkr/local_solver.hpp"
#include "dkr/rng.hpp"

using namespace dkr;

namespace {

TrainingSet random_training(Rng& rng, std::size_t n, int d) {
  TrainingSet ts;
  ts.labels.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Point p(d);
    for (int k = 0; k < d; ++k) p(k) = rng.uniform(-1.0, 1.0);
    ts.points.push_back(std::move(p));
    ts.labels(static_cast<Eigen::Index>(i)) = rng.uniform(-1.0, 1.0);
  }
  return ts;
}

double local_objective(const KernelExpansion& f, const KernelExpansion& f_prev,
                       const std::vector<std::size_t>& ids,
                       const MessageBoard& board, const TrainingSet& ts,
                       const Kernel& k, double lambda) {
  double obj = 0.0;
  for (std::size_t id : ids) {
    const double r = eval_expansion(f, ts.points, ts.points[id]) -
                     board.z(static_cast<Eigen::Index>(id));
    obj += r * r;
  }
  return obj + lambda * rkhs_diff_norm_sq(f, f_prev, k, ts.points);
}

}  // namespace

TEST_CASE("local_update: one example, linear kernel, hand value") {
  TrainingSet ts;
  ts.points = {Point::Constant(1, 1.0)};
  ts.labels = Eigen::VectorXd::Constant(1, 1.0);
  const auto board = init_board(ts);
  const auto res = local_update({}, {0}, board, ts, Kernel::linear(), 1.0);
  // (G + lambda) c = z with G = 1, z = 1 -> c = 1/2.
  REQUIRE(res.new_f.center_ids == std::vector<std::size_t>{0});
  CHECK(res.new_f.coefficients(0) == doctest::Approx(0.5));
  CHECK(eval_expansion(res.new_f, ts.points, ts.points[0]) == doctest::Approx(0.5));
  REQUIRE(res.new_z_values.size() == 1);
  CHECK(res.new_z_values[0].first == 0);
  CHECK(res.new_z_values[0].second == doctest::Approx(0.5));
}

TEST_CASE("local_update: zero residual is a fixed point") {
  Rng rng(17);
  const auto ts = random_training(rng, 6, 2);
  const Kernel k = Kernel::gaussian(0.8);
  const std::vector<std::size_t> ids = {0, 1, 2, 3, 4, 5};
  MessageBoard board = init_board(ts);
  auto res = local_update({}, ids, board, ts, k, 0.7);
  apply_update(board, res);
  // Board now holds the fitted values: updating again must change nothing.
  const auto res2 = local_update(res.new_f, ids, board, ts, k, 0.7);
  for (std::size_t j = 0; j < ids.size(); ++j)
    CHECK(res2.new_z_values[j].second ==
          doctest::Approx(res.new_z_values[j].second).epsilon(1e-12));
  CHECK(rkhs_diff_norm_sq(res2.new_f, res.new_f, k, ts.points) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("local_update: first-order perturbation optimality") {
  Rng rng(23);
  const auto ts = random_training(rng, 6, 2);
  const Kernel k = Kernel::gaussian(1.0);
  const std::vector<std::size_t> ids = {0, 1, 2, 3, 4, 5};
  MessageBoard board = init_board(ts);

  // Start from a nontrivial f_prev.
  auto warm = local_update({}, ids, board, ts, k, 2.0);
  apply_update(board, warm);
  board.z(2) += 0.3;  // perturb so the projection is not a no-op
  const auto res = local_update(warm.new_f, ids, board, ts, k, 0.5);

  const double base =
      local_objective(res.new_f, warm.new_f, ids, board, ts, k, 0.5);
  for (double eps : {1e-4, -1e-4}) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      KernelExpansion bumped = res.new_f;
      bumped.coefficients(static_cast<Eigen::Index>(j)) += eps;
      CHECK(local_objective(bumped, warm.new_f, ids, board, ts, k, 0.5) >=
            base - 1e-12);
    }
  }
}

TEST_CASE("local_update: input errors") {
  Rng rng(31);
  const auto ts = random_training(rng, 4, 1);
  const auto board = init_board(ts);
  CHECK_THROWS_AS(local_update({}, {0, 1}, board, ts, Kernel::linear(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_update({}, {0, 1}, board, ts, Kernel::linear(), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_update({}, {}, board, ts, Kernel::linear(), 1.0),
                  std::invalid_argument);
  // f_prev supported outside the agent's set violates the support structure.
  KernelExpansion outside({3}, Eigen::VectorXd::Constant(1, 1.0),
                          Kernel::linear());
  CHECK_THROWS_AS(local_update(outside, {0, 1}, board, ts, Kernel::linear(), 1.0),
                  std::invalid_argument);
}

TEST_CASE("local_update: support invariant and objective decrease") {
  Rng rng(41);
  const auto ts = random_training(rng, 10, 2);
  const Kernel k = Kernel::gaussian(0.7);
  const std::vector<std::size_t> ids = {1, 3, 4, 7, 9};
  MessageBoard board = init_board(ts);
  KernelExpansion f;
  for (int step = 0; step < 5; ++step) {
    const auto res = local_update(f, ids, board, ts, k, 0.4);
    for (std::size_t c : res.new_f.center_ids)
      CHECK(std::binary_search(ids.begin(), ids.end(), c));
    // Objective at new_f is no worse than at f_prev.
    const double at_prev = local_objective(f, f, ids, board, ts, k, 0.4);
    const double at_new = local_objective(res.new_f, f, ids, board, ts, k, 0.4);
    CHECK(at_new <= at_prev + 1e-12);
    f = res.new_f;
    apply_update(board, res);
    board.z(3) += 0.05;  // keep the residual nonzero across steps
  }
}

TEST_CASE("local_update: new_z_values equal the new function at the agent's points") {
  Rng rng(47);
  const auto ts = random_training(rng, 8, 3);
  const Kernel k = Kernel::polynomial(2, 1.0);
  const std::vector<std::size_t> ids = {0, 2, 5, 6};
  const auto board = init_board(ts);
  const auto res = local_update({}, ids, board, ts, k, 0.9);
  for (const auto& [id, v] : res.new_z_values)
    CHECK(v == doctest::Approx(eval_expansion(res.new_f, ts.points,
                                              ts.points[id])).epsilon(1e-10));
}

TEST_CASE("local_update: duplicate x values within an agent remain well-posed") {
  TrainingSet ts;
  ts.points = {Point::Constant(1, 1.0), Point::Constant(1, 1.0)};
  ts.labels = Eigen::Vector2d(1.0, 2.0);
  const auto board = init_board(ts);
  const auto res = local_update({}, {0, 1}, board, ts, Kernel::linear(), 0.5);
  // Both copies of x must get the same fitted value.
  CHECK(res.new_z_values[0].second ==
        doctest::Approx(res.new_z_values[1].second).epsilon(1e-12));
}

TEST_CASE("apply_update") {
  TrainingSet ts;
  ts.points = {Point::Constant(1, 0.0), Point::Constant(1, 1.0),
               Point::Constant(1, 2.0)};
  ts.labels = Eigen::Vector3d(1, 2, 3);

  SUBCASE("empty result only bumps the version") {
    auto board = init_board(ts);
    apply_update(board, LocalUpdateResult{});
    CHECK(board.z == ts.labels);
    CHECK(board.version == 1);
  }
  SUBCASE("single-key overwrite") {
    auto board = init_board(ts);
    LocalUpdateResult r;
    r.new_z_values = {{1, 9.0}};
    apply_update(board, r);
    CHECK(board.z == Eigen::Vector3d(1, 9, 3));
  }
  SUBCASE("disjoint updates commute bit-exactly") {
    LocalUpdateResult r1, r2;
    r1.new_z_values = {{0, 4.25}};
    r2.new_z_values = {{2, -1.5}};
    auto b1 = init_board(ts);
    apply_update(b1, r1);
    apply_update(b1, r2);
    auto b2 = init_board(ts);
    apply_update(b2, r2);
    apply_update(b2, r1);
    CHECK(b1.z == b2.z);
  }
  SUBCASE("out-of-range key") {
    auto board = init_board(ts);
    LocalUpdateResult r;
    r.new_z_values = {{7, 0.0}};
    CHECK_THROWS_AS(apply_update(board, r), std::out_of_range);
  }
}

// Independent check that local_update + apply_update realize the orthogonal
// projection onto C_i in the weighted product space: the projection is
// computed here by a stacked KKT solve of the constrained quadratic program,
// a different algebraic route than the solver's residual substitution.
TEST_CASE("local_update is the weighted product-space projection") {
  Rng rng(59);
  const auto ts = random_training(rng, 5, 2);
  const Kernel k = Kernel::gaussian(0.9);
  const std::vector<std::size_t> ids = {0, 1, 3};
  const double lambda = 0.6;

  MessageBoard board = init_board(ts);
  auto warm = local_update({}, ids, board, ts, k, 1.5);
  apply_update(board, warm);
  board.z(1) -= 0.4;
  const auto res = local_update(warm.new_f, ids, board, ts, k, lambda);

  // QP oracle: min ||z' - z||^2 + lambda (c' - c)^T G (c' - c)
  //            s.t. z'_S = G c', z' off S fixed.
  // Variables u = (z'_S, c', mu); KKT rows stacked and solved by least squares.
  const auto kk = static_cast<Eigen::Index>(ids.size());
  const Eigen::MatrixXd G = gram(k, ts.points, ids).entries;
  Eigen::VectorXd z_s(kk), c_prev(kk);
  for (Eigen::Index j = 0; j < kk; ++j)
    z_s(j) = board.z(static_cast<Eigen::Index>(ids[static_cast<std::size_t>(j)]));
  c_prev = warm.new_f.coefficients;

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(3 * kk, 3 * kk);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * kk);
  // d/dz'_S: 2(z'_S - z_S) + mu = 0
  kkt.block(0, 0, kk, kk) = 2.0 * Eigen::MatrixXd::Identity(kk, kk);
  kkt.block(0, 2 * kk, kk, kk) = Eigen::MatrixXd::Identity(kk, kk);
  rhs.head(kk) = 2.0 * z_s;
  // d/dc': 2 lambda G (c' - c_prev) - G mu = 0
  kkt.block(kk, kk, kk, kk) = 2.0 * lambda * G;
  kkt.block(kk, 2 * kk, kk, kk) = -G;
  rhs.segment(kk, kk) = 2.0 * lambda * G * c_prev;
  // constraint: z'_S - G c' = 0
  kkt.block(2 * kk, 0, kk, kk) = Eigen::MatrixXd::Identity(kk, kk);
  kkt.block(2 * kk, kk, kk, kk) = -G;

  const Eigen::VectorXd u =
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(kkt).solve(rhs);
  const Eigen::VectorXd z_qp = u.head(kk);
  const Eigen::VectorXd fitted_qp = G * u.segment(kk, kk);

  for (Eigen::Index j = 0; j < kk; ++j) {
    CHECK(res.new_z_values[static_cast<std::size_t>(j)].second ==
          doctest::Approx(z_qp(j)).epsilon(1e-8));
    CHECK(res.new_z_values[static_cast<std::size_t>(j)].second ==
          doctest::Approx(fitted_qp(j)).epsilon(1e-8));
  }
}
