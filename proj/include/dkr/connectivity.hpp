#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dkr/ensemble.hpp"
#include "dkr/kernel.hpp"

namespace dkr {

// Agent-pair span comparison record: the ranks the edge decision rests on.
struct EdgeWitness {
  std::size_t agent_a = 0;
  std::size_t agent_b = 0;
  int rank_a = 0;
  int rank_b = 0;
  int rank_common = 0;
  int rank_union = 0;
  bool edge = false;
};

struct AuxiliaryGraph {
  std::size_t agent_count = 0;
  std::vector<EdgeWitness> witnesses;  // one per unordered agent pair

  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t component_count() const;
};

// True iff span{K(.,x_j) : j in a} = span over b = span over their
// intersection. Decided by comparing the ranks of the Gram matrices of each
// part, the intersection, and the union: the spans coincide exactly when all
// four ranks agree.
bool spans_equal(const std::vector<std::size_t>& ids_a,
                 const std::vector<std::size_t>& ids_b,
                 const std::vector<std::size_t>& ids_common,
                 const std::vector<Point>& points, const Kernel& kernel);

// Builds the auxiliary graph over all agent pairs and decides whether it is
// connected (union-find over the span-equality edges).
std::pair<bool, AuxiliaryGraph> is_connected(const Ensemble& ensemble,
                                             const TrainingSet& training,
                                             const Kernel& kernel);

// Edge-list text: one line per pair with the witness ranks.
std::string format_edge_list(const AuxiliaryGraph& graph);

}  // namespace dkr
