#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dkr/ensemble.hpp"
#include "dkr/rng.hpp"

using namespace dkr;

namespace {

TrainingSet tiny_training(std::size_t n, int d = 1) {
  SyntheticTarget t;
  t.kind = TargetKind::Linear;
  t.w = Eigen::VectorXd::Ones(d);
  return generate_data(t, n, d, 1234);
}

}  // namespace

TEST_CASE("make_centralized") {
  const auto ts = tiny_training(4);
  const auto e = make_centralized(3, ts);
  CHECK(e.agent_count() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(e.agent_ids(i) == std::vector<std::size_t>{0, 1, 2, 3});
  // pairwise intersections are the full index set
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = i + 1; k < 3; ++k)
      CHECK(e.agent_ids(i) == e.agent_ids(k));
  CHECK(e.covers_all());

  const auto single = make_centralized(1, ts);
  CHECK(single.agent_ids(0).size() == 4);
}

TEST_CASE("make_public_private") {
  const auto ts = tiny_training(3);
  const auto e = make_public_private(2, {0}, {1, 1}, ts);
  CHECK(e.agent_ids(0) == std::vector<std::size_t>{0, 1});
  CHECK(e.agent_ids(1) == std::vector<std::size_t>{0, 2});

  SUBCASE("pairwise intersections equal the public ids") {
    const auto big = tiny_training(13);
    const auto pp = make_public_private(3, {0, 5, 7}, {4, 3, 3}, big);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = i + 1; k < 3; ++k) {
        std::vector<std::size_t> common;
        std::set_intersection(pp.agent_ids(i).begin(), pp.agent_ids(i).end(),
                              pp.agent_ids(k).begin(), pp.agent_ids(k).end(),
                              std::back_inserter(common));
        CHECK(common == std::vector<std::size_t>{0, 5, 7});
      }
    CHECK(pp.covers_all());
  }

  SUBCASE("Example-1 shape: 3 public + 10x5 private = 53, local fraction (5+3)/53") {
    const auto big = tiny_training(53, 3);
    const auto pp = make_public_private(
        10, {0, 1, 2}, std::vector<std::size_t>(10, 5), big);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(pp.agent_ids(i).size() == 8);
      CHECK(static_cast<double>(pp.agent_ids(i).size()) / 53.0 ==
            doctest::Approx((5.0 + 3.0) / 53.0));
    }
  }

  SUBCASE("inconsistent sizes rejected") {
    CHECK_THROWS_AS(make_public_private(2, {0}, {1, 2}, ts),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_public_private(2, {9}, {1, 1}, ts),
                    std::invalid_argument);
  }
}

TEST_CASE("make_geometric") {
  const auto ts = tiny_training(2);
  const std::vector<Point> agents = {Eigen::Vector2d(0, 0)};
  const std::vector<Point> examples = {Eigen::Vector2d(0.5, 0),
                                       Eigen::Vector2d(2.0, 0)};
  const auto e = make_geometric(agents, examples, 1.0, ts);
  CHECK(e.agent_ids(0) == std::vector<std::size_t>{0});

  SUBCASE("large radius gives the centralized ensemble") {
    const auto all = make_geometric(agents, examples, 10.0, ts);
    CHECK(all.agent_ids(0) == std::vector<std::size_t>{0, 1});
  }

  SUBCASE("empty agent rejected, naming the agent") {
    try {
      make_geometric(agents, examples, 0.1, ts);
      FAIL("expected input error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("agent 1") != std::string::npos);
    }
  }

  SUBCASE("matches the brute-force distance check") {
    Rng rng(77);
    const std::size_t m = 5, n = 30;
    const auto big = tiny_training(n, 2);
    std::vector<Point> apos, epos;
    for (std::size_t i = 0; i < m; ++i)
      apos.push_back(Eigen::Vector2d(rng.uniform(0, 1), rng.uniform(0, 1)));
    for (std::size_t j = 0; j < n; ++j)
      epos.push_back(Eigen::Vector2d(rng.uniform(0, 1), rng.uniform(0, 1)));
    const auto geo = make_geometric(apos, epos, 0.4, big);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const bool near = (apos[i] - epos[j]).norm() <= 0.4;
        const bool assigned =
            std::binary_search(geo.agent_ids(i).begin(),
                               geo.agent_ids(i).end(), j);
        CHECK(near == assigned);
      }
  }
}

TEST_CASE("Ensemble validation") {
  const auto ts = tiny_training(3);
  CHECK_THROWS_AS(Ensemble(1, 3, {{}}), std::invalid_argument);       // empty agent
  CHECK_THROWS_AS(Ensemble(1, 3, {{0, 0}}), std::invalid_argument);   // duplicate
  CHECK_THROWS_AS(Ensemble(1, 3, {{5}}), std::invalid_argument);      // out of range
  CHECK_THROWS_AS(Ensemble(0, 3, {}), std::invalid_argument);         // no agents

  // Uncovered examples are allowed in the core type.
  Ensemble partial(2, 5, {{0}, {2}});
  CHECK_FALSE(partial.covers_all());
  CHECK(partial.covered() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("generate_data") {
  SyntheticTarget t;
  t.kind = TargetKind::Linear;
  t.w = Eigen::Vector2d(0.5, -1.0);
  t.b = 0.25;

  SUBCASE("noise-free labels equal the target exactly") {
    const auto ts = generate_data(t, 20, 2, 99);
    for (std::size_t i = 0; i < 20; ++i)
      CHECK(ts.labels(static_cast<Eigen::Index>(i)) ==
            doctest::Approx(t.w.dot(ts.points[i]) + t.b).epsilon(1e-15));
    for (const auto& p : ts.points) {
      CHECK(p.minCoeff() >= -1.0);
      CHECK(p.maxCoeff() < 1.0);
    }
  }

  SUBCASE("same seed gives bit-identical output") {
    SyntheticTarget noisy = t;
    noisy.noise_sd = 0.3;
    const auto a = generate_data(noisy, 50, 2, 7);
    const auto b = generate_data(noisy, 50, 2, 7);
    CHECK(a.labels == b.labels);
    for (std::size_t i = 0; i < 50; ++i) CHECK(a.points[i] == b.points[i]);
    const auto c = generate_data(noisy, 50, 2, 8);
    CHECK(a.labels != c.labels);
  }

  SUBCASE("noise mean at the law-of-large-numbers scale") {
    SyntheticTarget noisy = t;
    noisy.noise_sd = 0.1;
    const auto ts = generate_data(noisy, 1000, 2, 5);
    double mean = 0.0;
    for (std::size_t i = 0; i < 1000; ++i)
      mean += ts.labels(static_cast<Eigen::Index>(i)) - t.eval(ts.points[i]);
    mean /= 1000.0;
    CHECK(std::abs(mean) <= 3.0 * 0.1 / std::sqrt(1000.0));
  }

  SUBCASE("sinusoid target") {
    SyntheticTarget s;
    s.kind = TargetKind::Sinusoid;
    s.freq = 2.0;
    s.amp = 0.5;
    const auto ts = generate_data(s, 5, 1, 3);
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(ts.labels(static_cast<Eigen::Index>(i)) ==
            doctest::Approx(0.5 * std::sin(2.0 * ts.points[i].sum())));
  }

  CHECK_THROWS_AS(generate_data(t, 0, 2, 0), std::invalid_argument);
}

TEST_CASE("init_board") {
  TrainingSet ts;
  ts.points = {Point::Constant(1, 0.0), Point::Constant(1, 1.0),
               Point::Constant(1, 2.0)};
  ts.labels = Eigen::Vector3d(1, 2, 3);
  auto board = init_board(ts);
  CHECK(board.z == ts.labels);
  CHECK(board.version == 0);
  board.z(1) = 99.0;  // board owns its copy
  CHECK(ts.labels(1) == 2.0);
}
