#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "level_graph.hpp"
#include "pq_tree.hpp"
#include "torus.hpp"

namespace lvp {
namespace oracle {

using pq::CircularOrder;

// Hard limits for the exhaustive searches. The oracle refuses loudly instead
// of truncating, so a verdict within budget is always a full enumeration.
struct OracleBudget {
  std::size_t max_level_vertices = 7;   // circular-order enumeration per level
  std::size_t max_layer_edges = 8;      // edge-order enumeration per layer
  std::size_t max_sim_vertices = 48;    // per level, plane instances
  std::uint64_t max_steps = 50000000;   // overall work counter
};

// Literal reading of the definition: try circular orders per level in
// lexicographic sequence and accept the first tuple whose every layer admits
// a v-consecutive edge order inducing the level orders. g must be proper.
std::optional<torus::TorusEmbedding> brute_torus(const LevelGraph& g,
                                                 const OracleBudget& budget = {});

// First (lexicographically) edge order of the layer below `level` that is
// v-consecutive and induces the given full-level orders; nullopt if none.
std::optional<CircularOrder> brute_layer_feasible(const LevelGraph& g, int level,
                                                  const CircularOrder& lower,
                                                  const CircularOrder& upper,
                                                  const OracleBudget& budget = {});

// Simultaneous level planarity in the plane: one linear order per level under
// which no two same-graph edges of a layer invert. Exact: decides by
// exhausting the signed order-variable space with cycle propagation, which
// visits every case the definition quantifies over.
using SimWitness = std::map<int, std::vector<std::string>>;
std::optional<SimWitness> brute_sim_level(const LevelGraph& g,
                                          const OracleBudget& budget = {});

}  // namespace oracle
}  // namespace lvp
