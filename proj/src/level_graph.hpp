#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pq_tree.hpp"

namespace lvp {

struct Edge {
  std::string from;
  std::string to;
  int graph = 1;    // partition tag for simultaneous instances, 1 otherwise
  std::string id;   // "from->to", with "#2", "#3", ... on parallel copies
};

struct Properized;

// Directed graph with a level assignment. Vertices live on levels 1..k; level
// arithmetic is cyclic, with level k+1 meaning level 1. Parallel edges and
// isolated vertices are allowed, self-loops are not. Simultaneous instances
// store all their graphs here at once, separated by Edge::graph.
class LevelGraph {
 public:
  explicit LevelGraph(int k);

  static LevelGraph parse_text(const std::string& text);
  std::string to_text() const;

  void add_vertex(const std::string& name, int level);
  const std::string& add_edge(const std::string& from, const std::string& to,
                              int graph = 1);

  int levels() const { return k_; }
  bool has_vertex(const std::string& name) const;
  int level_of(const std::string& name) const;
  const std::map<std::string, int>& vertex_levels() const { return levels_of_; }
  std::vector<std::string> vertices_on_level(int level) const;  // sorted
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return levels_of_.size(); }
  int graph_count() const;
  int next_level(int level) const { return level % k_ + 1; }

  bool is_proper() const;
  // Number of levels an edge touches, walking forward cyclically from the
  // source level. 1 means an intra-level edge, 2 means proper.
  int edge_span(const Edge& e) const;

  Properized make_proper() const;

  // Edges from level i to the cyclically next level. Meaningful on proper
  // graphs, where every edge belongs to exactly one layer.
  std::vector<Edge> layer_edges(int level) const;

 private:
  int k_;
  std::map<std::string, int> levels_of_;
  std::vector<Edge> edges_;
  std::map<std::pair<std::string, std::string>, int> pair_count_;
};

struct Properized {
  LevelGraph graph;
  // original edge id -> subdivision vertices in walk order (absent when the
  // edge was already proper)
  std::map<std::string, std::vector<std::string>> chains;
  std::set<std::string> new_vertices;
};

// Adds the four-cycle a,b,c,d below/above the existing levels so that a torus
// drawing of the result is forced to behave like a standing cylinder.
// Requires every edge to go strictly one level up (callers decide the verdict
// short-circuit for backward or intra-level edges).
LevelGraph radial_to_torus(const LevelGraph& g,
                           std::vector<std::string>* gadget_vertices = nullptr);

// Threads the vertical cycle w_1..w_k through all levels, pinning the torus
// drawing of the result to a rolling cylinder.
LevelGraph cyclic_to_torus(const LevelGraph& g,
                           std::vector<std::string>* gadget_vertices = nullptr);

}  // namespace lvp
