#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "level_graph.hpp"
#include "pq_tree.hpp"
#include "spqo.hpp"

namespace lvp {
namespace torus {

using pq::CircularOrder;
using pq::PQTree;

// Circular orders realizing a crossing-free drawing: one per level, plus the
// edge order of every layer that has edges (keyed by the layer's lower level).
struct TorusEmbedding {
  std::map<int, CircularOrder> level_orders;
  std::map<int, CircularOrder> layer_orders;
};

// Optional replacement trees for the level orders: level -> PQ-tree whose
// leaves are exactly that level's vertices.
using ConstraintTrees = std::map<int, PQTree>;

struct Witness {
  // The graph the verified embedding lives on: the input after edge
  // subdivision (identical to the input when it was already proper).
  LevelGraph proper_graph{1};
  TorusEmbedding embedding;

  // The same orders read back on the input graph: subdivision vertices are
  // spliced out of the level orders and chain pieces renamed to the original
  // edge ids in the layer orders.
  TorusEmbedding display;

  // Rolling-cylinder verdicts only: the level orders cut open into linear
  // ones at the threading cycle, on the proper graph and the input graph.
  std::map<int, std::vector<std::string>> linear_levels;
  std::map<int, std::vector<std::string>> display_linear;
};

// PQ-tree over the layer's edge ids representing exactly the orders where
// every vertex's incident edges are consecutive. May be the empty tree.
PQTree build_layer_tree(const LevelGraph& g, int level);

// (order on the layer's lower endpoints, order on its upper endpoints) read
// off a v-consecutive edge order by collapsing runs of equal endpoints.
std::pair<CircularOrder, CircularOrder> induced_orders(const LevelGraph& g,
                                                       int level,
                                                       const CircularOrder& edge_order);

// The ordering-constraint instance whose solutions are exactly the
// crossing-free torus drawings of g. g must be proper with k >= 2.
spqo::Instance build_instance(const LevelGraph& g,
                              const ConstraintTrees* constraints = nullptr);

// Local conditions on a proper graph: every layer order v-consecutive and
// inducing suborders of the two adjacent level orders.
bool check_embedding(const LevelGraph& g, const TorusEmbedding& emb);

std::optional<Witness> test_torus(const LevelGraph& g,
                                  const ConstraintTrees* constraints = nullptr);
std::optional<Witness> test_cyclic(const LevelGraph& g);
std::optional<Witness> test_radial(const LevelGraph& g);

}  // namespace torus
}  // namespace lvp
