#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "level_graph.hpp"

namespace lvp {
namespace sim {

// Ground set plus betweenness constraints: sought is a linear order of the
// elements that puts each triplet's middle entry between the outer two, in
// either direction.
//
// Text form, one directive per line, '#' starts a comment:
//   elem <name>
//   triplet <a> <b> <c>
struct BetweennessInstance {
  std::vector<std::string> elems;
  std::vector<std::array<std::string, 3>> triplets;

  static BetweennessInstance parse_text(const std::string& text);
  std::string to_text() const;

  // Elements nonempty and distinct; triplet entries distinct and drawn from
  // the element list. Throws otherwise.
  void validate() const;
};

// Simultaneous instances share one vertex set and level assignment; the
// constituent graphs are told apart by the edge tags a LevelGraph already
// carries.
using SimInstance = LevelGraph;

// Linear vertex orders per level, shared by all graphs of the instance.
using SimWitness = std::map<int, std::vector<std::string>>;

// Merges a two-graph two-level instance into a single graph whose planarity
// on the rolling cylinder decides the original: graph one keeps its edges
// upward, graph two's edges flip downward into the wrap layer.
LevelGraph reduce_2x2_to_cyclic(const SimInstance& inst);

// Decides a two-graph two-level instance and reports shared linear orders.
// The cyclic witness's cut-open level orders already are the simultaneous
// witness: rerouting graph two's edges moves curves, not vertices.
std::optional<SimWitness> test_sim_2x2(const SimInstance& inst);

// Hard-instance generators from betweenness constraints. Three graphs on two
// levels: rows of an ordering gadget lock every row to one shared
// permutation, and per-triplet paths in graph three force each middle
// element between its outer two. Two graphs on three levels: same ordering
// gadget, with the triplet paths folded into graph one and their inner
// vertices lifted to level three through subdivided two-level climbs.
SimInstance gen_gadget_3x2(const BetweennessInstance& b);
SimInstance gen_gadget_2x3(const BetweennessInstance& b);

// Exhaustive betweenness check over all element orders, first satisfying
// order by element position. Capped at eight elements.
std::optional<std::vector<std::string>> solve_betweenness(
    const BetweennessInstance& b);

}  // namespace sim
}  // namespace lvp
