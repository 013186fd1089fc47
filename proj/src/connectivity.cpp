#include "dkr/connectivity.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dkr {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

int rank_of(const std::vector<std::size_t>& ids,
            const std::vector<Point>& points, const Kernel& kernel) {
  if (ids.empty()) return 0;
  return numerical_rank(gram(kernel, points, ids));
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> AuxiliaryGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& w : witnesses)
    if (w.edge) out.emplace_back(w.agent_a, w.agent_b);
  return out;
}

std::size_t AuxiliaryGraph::component_count() const {
  UnionFind uf(agent_count);
  for (const auto& w : witnesses)
    if (w.edge) uf.unite(w.agent_a, w.agent_b);
  std::size_t roots = 0;
  for (std::size_t i = 0; i < agent_count; ++i)
    if (uf.find(i) == i) ++roots;
  return roots;
}

bool spans_equal(const std::vector<std::size_t>& ids_a,
                 const std::vector<std::size_t>& ids_b,
                 const std::vector<std::size_t>& ids_common,
                 const std::vector<Point>& points, const Kernel& kernel) {
  const int ra = rank_of(ids_a, points, kernel);
  const int rb = rank_of(ids_b, points, kernel);
  if (ra != rb) return false;
  const int rc = rank_of(ids_common, points, kernel);
  if (rc != ra) return false;
  std::vector<std::size_t> u;
  std::set_union(ids_a.begin(), ids_a.end(), ids_b.begin(), ids_b.end(),
                 std::back_inserter(u));
  return rank_of(u, points, kernel) == ra;
}

std::pair<bool, AuxiliaryGraph> is_connected(const Ensemble& ensemble,
                                             const TrainingSet& training,
                                             const Kernel& kernel) {
  const std::size_t m = ensemble.agent_count();
  AuxiliaryGraph graph;
  graph.agent_count = m;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = ensemble.agent_ids(i);
    for (std::size_t k = i + 1; k < m; ++k) {
      const auto& b = ensemble.agent_ids(k);
      std::vector<std::size_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      EdgeWitness w;
      w.agent_a = i;
      w.agent_b = k;
      w.rank_a = rank_of(a, training.points, kernel);
      w.rank_b = rank_of(b, training.points, kernel);
      w.rank_common = rank_of(common, training.points, kernel);
      std::vector<std::size_t> u;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                     std::back_inserter(u));
      w.rank_union = rank_of(u, training.points, kernel);
      w.edge = (w.rank_a == w.rank_b) && (w.rank_a == w.rank_common) &&
               (w.rank_a == w.rank_union);
      graph.witnesses.push_back(w);
    }
  }
  return {graph.component_count() == 1, graph};
}

std::string format_edge_list(const AuxiliaryGraph& graph) {
  std::ostringstream os;
  os << "# agent_a agent_b edge rank_a rank_b rank_common rank_union\n";
  for (const auto& w : graph.witnesses)
    os << (w.agent_a + 1) << ' ' << (w.agent_b + 1) << ' '
       << (w.edge ? 1 : 0) << ' ' << w.rank_a << ' ' << w.rank_b << ' '
       << w.rank_common << ' ' << w.rank_union << '\n';
  return os.str();
}

}  // namespace dkr
