#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pq_tree.hpp"

namespace lvp {
namespace spqo {

using pq::CircularOrder;
using pq::PQTree;
using TreeId = std::string;

// Arc of the constraint DAG. phi maps every leaf of the target tree to a
// distinct leaf of the source tree; an assignment satisfies the arc when the
// source's order, restricted to the mapped leaves, reads exactly like the
// target's order.
struct Arc {
  TreeId source;
  TreeId target;
  std::map<std::string, std::string> phi;  // target leaf -> source leaf
};

struct Instance {
  std::map<TreeId, PQTree> trees;
  std::vector<Arc> arcs;
  // Set by normalize() when some target collapses to the empty tree.
  bool marked_infeasible = false;

  void add_tree(const TreeId& id, PQTree t);
  void add_arc(TreeId source, TreeId target, std::map<std::string, std::string> phi);

  // Structural checks: ids resolve, phi maps are injective and total on the
  // target leaves with images inside the source, the arc digraph is acyclic.
  void validate() const;

  std::string dump() const;
};

// Restriction of a source-side order through an arc map: keep the mapped
// leaves, then read them under their target names.
CircularOrder induce_through(const CircularOrder& source_order,
                             const std::map<std::string, std::string>& phi);

// Replaces every arc target with its intersection with the relabeled
// projection of the source, repeating passes until nothing changes. The
// solution set is untouched; targets may collapse to the empty tree, which
// flags the instance infeasible.
Instance normalize(Instance in);

// fixedness[tree][P-node id] for every P-node of every tree. The instance
// must be normalized. Internally computes the count for Q-nodes too, since
// a node's fixedness refers to the fixing nodes in its parents, whatever
// their kind.
std::map<TreeId, std::map<int, int>> fixedness(const Instance& in);
bool is_2fixed(const Instance& in);

using Solution = std::map<TreeId, CircularOrder>;

// Exact and complete on instances where every tree is a pure source with at
// most two outgoing arcs or a pure sink with at most two incoming arcs.
// Other shapes raise a Precondition error. order_budget bounds the number of
// candidate orders tried before giving up with a Budget error.
std::optional<Solution> solve(const Instance& in,
                              std::uint64_t order_budget = 5000000);

bool check_solution(const Instance& in, const Solution& sol);

}  // namespace spqo
}  // namespace lvp
