#include "torus.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace lvp {
namespace torus {

namespace {

std::string level_id(int i) { return "L" + std::to_string(i); }
std::string layer_id(int i) { return "E" + std::to_string(i); }
std::string lower_id(int i) { return "C" + std::to_string(i) + "+"; }
std::string upper_id(int i) { return "C" + std::to_string(i) + "-"; }

std::map<std::string, std::string> identity_on(const std::vector<std::string>& v) {
  std::map<std::string, std::string> m;
  for (const auto& e : v) m[e] = e;
  return m;
}

// Incident edge ids per endpoint, split by which end of the layer the vertex
// sits on (the two sides are disjoint vertex sets once k >= 2).
struct LayerIncidence {
  std::map<std::string, std::set<std::string>> lower, upper;
};

LayerIncidence layer_incidence(const std::vector<Edge>& edges) {
  LayerIncidence inc;
  for (const Edge& e : edges) {
    inc.lower[e.from].insert(e.id);
    inc.upper[e.to].insert(e.id);
  }
  return inc;
}

bool v_consecutive(const CircularOrder& o, const LayerIncidence& inc) {
  for (const auto& side : {inc.lower, inc.upper})
    for (const auto& [v, ids] : side) {
      // one out-transition around the circle marks one contiguous run
      const auto& seq = o.elems();
      int ends = 0;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        bool a = ids.count(seq[i]) > 0;
        bool b = ids.count(seq[(i + 1) % seq.size()]) > 0;
        if (a && !b) ++ends;
      }
      if (ends > 1) return false;
    }
  return true;
}

}  // namespace

PQTree build_layer_tree(const LevelGraph& g, int level) {
  std::vector<Edge> edges = g.layer_edges(level);
  if (edges.empty())
    throw Error(ErrKind::Precondition, "layer tree needs a nonempty layer");
  std::vector<std::string> ids;
  ids.reserve(edges.size());
  for (const Edge& e : edges) ids.push_back(e.id);

  PQTree t = PQTree::universal(ids);
  LayerIncidence inc = layer_incidence(edges);
  for (const auto& side : {inc.lower, inc.upper})
    for (const auto& [v, mine] : side) {
      if (mine.size() < 2) continue;
      t = t.reduce(mine);
      if (t.empty()) return t;
    }
  return t;
}

std::pair<CircularOrder, CircularOrder> induced_orders(const LevelGraph& g,
                                                       int level,
                                                       const CircularOrder& edge_order) {
  std::vector<Edge> edges = g.layer_edges(level);
  std::map<std::string, const Edge*> by_id;
  for (const Edge& e : edges) by_id[e.id] = &e;

  std::vector<std::string> sorted = edge_order.elems();
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> want;
  for (const Edge& e : edges) want.push_back(e.id);
  std::sort(want.begin(), want.end());
  if (sorted != want)
    throw Error(ErrKind::Precondition, "edge order does not match the layer");

  if (!v_consecutive(edge_order, layer_incidence(edges)))
    throw Error(ErrKind::Precondition, "edge order is not v-consecutive");

  auto walk = [&](bool lower_side) {
    std::vector<std::string> seq;
    for (const std::string& id : edge_order.elems()) {
      const Edge* e = by_id.at(id);
      const std::string& v = lower_side ? e->from : e->to;
      if (seq.empty() || seq.back() != v) seq.push_back(v);
    }
    // a run can wrap around the seam of the circular walk
    if (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
    return CircularOrder(seq);
  };
  return {walk(true), walk(false)};
}

spqo::Instance build_instance(const LevelGraph& g, const ConstraintTrees* constraints) {
  if (g.levels() < 2)
    throw Error(ErrKind::Precondition, "ordering instance needs at least two levels");
  if (!g.is_proper())
    throw Error(ErrKind::Precondition, "ordering instance needs a proper graph");

  spqo::Instance in;
  int k = g.levels();

  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> vs = g.vertices_on_level(i);
    if (vs.empty()) continue;
    PQTree t = PQTree::universal(vs);
    if (constraints) {
      auto it = constraints->find(i);
      if (it != constraints->end()) {
        if (it->second.ground() != vs)
          throw Error(ErrKind::Precondition,
                      "constraint tree for level " + std::to_string(i) +
                          " does not cover that level's vertices");
        t = it->second;
      }
    }
    in.add_tree(level_id(i), std::move(t));
  }

  for (int i = 1; i <= k; ++i) {
    std::vector<Edge> edges = g.layer_edges(i);
    if (edges.empty()) continue;  // vacuous layer, no constraints to add
    int nx = g.next_level(i);

    in.add_tree(layer_id(i), build_layer_tree(g, i));

    // One chosen incident edge per endpoint ties the layer's edge order to
    // the endpoint orders; smallest id keeps the choice reproducible.
    std::map<std::string, std::string> pick_lower, pick_upper;
    for (const Edge& e : edges) {
      auto lo = pick_lower.find(e.from);
      if (lo == pick_lower.end() || e.id < lo->second) pick_lower[e.from] = e.id;
      auto hi = pick_upper.find(e.to);
      if (hi == pick_upper.end() || e.id < hi->second) pick_upper[e.to] = e.id;
    }
    std::vector<std::string> vlo, vhi;
    for (const auto& [v, id] : pick_lower) vlo.push_back(v);
    for (const auto& [v, id] : pick_upper) vhi.push_back(v);

    in.add_tree(lower_id(i), PQTree::universal(vlo));
    in.add_tree(upper_id(nx), PQTree::universal(vhi));

    in.add_arc(level_id(i), lower_id(i), identity_on(vlo));
    in.add_arc(level_id(nx), upper_id(nx), identity_on(vhi));
    in.add_arc(layer_id(i), lower_id(i), pick_lower);
    in.add_arc(layer_id(i), upper_id(nx), pick_upper);
  }

  return spqo::normalize(std::move(in));
}

bool check_embedding(const LevelGraph& g, const TorusEmbedding& emb) {
  if (!g.is_proper())
    throw Error(ErrKind::Precondition, "embedding check needs a proper graph");
  int k = g.levels();

  for (int i = 1; i <= k; ++i) {
    auto it = emb.level_orders.find(i);
    if (it == emb.level_orders.end())
      throw Error(ErrKind::Precondition,
                  "embedding misses level " + std::to_string(i));
    std::vector<std::string> have = it->second.elems();
    std::sort(have.begin(), have.end());
    if (have != g.vertices_on_level(i))
      throw Error(ErrKind::Precondition,
                  "level order does not match level " + std::to_string(i));
  }

  for (int i = 1; i <= k; ++i) {
    std::vector<Edge> edges = g.layer_edges(i);
    if (edges.empty()) continue;
    auto it = emb.layer_orders.find(i);
    if (it == emb.layer_orders.end())
      throw Error(ErrKind::Precondition,
                  "embedding misses layer " + std::to_string(i));
    const CircularOrder& o = it->second;

    std::vector<std::string> have = o.elems();
    std::sort(have.begin(), have.end());
    std::vector<std::string> want;
    for (const Edge& e : edges) want.push_back(e.id);
    std::sort(want.begin(), want.end());
    if (have != want)
      throw Error(ErrKind::Precondition,
                  "layer order does not match layer " + std::to_string(i));

    LayerIncidence inc = layer_incidence(edges);
    if (!v_consecutive(o, inc)) return false;

    auto [lo, hi] = induced_orders(g, i, o);
    std::set<std::string> lo_set(lo.elems().begin(), lo.elems().end());
    std::set<std::string> hi_set(hi.elems().begin(), hi.elems().end());
    if (!emb.level_orders.at(i).restricted_to(lo_set).same_order(lo)) return false;
    int nx = g.next_level(i);
    if (!emb.level_orders.at(nx).restricted_to(hi_set).same_order(hi)) return false;
  }
  return true;
}

namespace {

// Reads level and layer orders for the input graph out of an embedding of
// its properized form: subdivision vertices vanish from the levels, and each
// subdivided edge is represented in its tail's layer by its first piece.
TorusEmbedding splice_to_input(const LevelGraph& input, const Properized& p,
                               const TorusEmbedding& emb) {
  TorusEmbedding out;
  std::set<std::string> input_names;
  for (const auto& [v, lv] : input.vertex_levels()) input_names.insert(v);
  for (const auto& [i, o] : emb.level_orders)
    out.level_orders[i] = o.restricted_to(input_names);

  std::map<std::pair<std::string, std::string>, std::string> piece_by_ends;
  for (const Edge& e : p.graph.edges()) piece_by_ends[{e.from, e.to}] = e.id;

  std::map<std::string, std::string> rep;  // proper edge id -> input edge id
  for (const Edge& e : input.edges()) {
    auto ch = p.chains.find(e.id);
    if (ch == p.chains.end()) {
      rep[e.id] = e.id;
    } else {
      rep[piece_by_ends.at({e.from, ch->second.front()})] = e.id;
    }
  }
  std::set<std::string> rep_ids;
  for (const auto& [pid, oid] : rep) rep_ids.insert(pid);

  for (const auto& [i, o] : emb.layer_orders) {
    CircularOrder kept = o.restricted_to(rep_ids);
    if (kept.empty()) continue;
    out.layer_orders[i] = kept.relabeled(rep);
  }
  return out;
}

// Restricts an embedding of the properized augmented graph to the properized
// original: the augmentation only ever adds vertices and edges, so dropping
// them leaves a valid embedding behind.
TorusEmbedding restrict_to(const Properized& p, const TorusEmbedding& emb) {
  TorusEmbedding out;
  std::set<std::string> keep;
  for (const auto& [v, lv] : p.graph.vertex_levels()) keep.insert(v);
  int k = p.graph.levels();
  for (int i = 1; i <= k; ++i) {
    CircularOrder o = emb.level_orders.at(i).restricted_to(keep);
    if (o.size() != static_cast<std::size_t>(p.graph.vertices_on_level(i).size()))
      throw std::logic_error("restriction lost a vertex of the original graph");
    out.level_orders[i] = std::move(o);
  }
  for (int i = 1; i <= k; ++i) {
    std::vector<Edge> edges = p.graph.layer_edges(i);
    if (edges.empty()) continue;
    std::set<std::string> ids;
    for (const Edge& e : edges) ids.insert(e.id);
    CircularOrder o = emb.layer_orders.at(i).restricted_to(ids);
    if (o.size() != edges.size())
      throw std::logic_error("restriction lost an edge of the original graph");
    out.layer_orders[i] = std::move(o);
  }
  return out;
}

Witness trivial_edgeless(const LevelGraph& g) {
  Witness w;
  w.proper_graph = g;
  for (int i = 1; i <= g.levels(); ++i)
    w.embedding.level_orders[i] = CircularOrder(g.vertices_on_level(i));
  w.display = w.embedding;
  return w;
}

}  // namespace

std::optional<Witness> test_torus(const LevelGraph& g, const ConstraintTrees* constraints) {
  if (g.edges().empty()) {
    Witness w = trivial_edgeless(g);
    if (constraints) {
      // Constraint trees still bind the level orders of an edgeless graph.
      for (int i = 1; i <= g.levels(); ++i) {
        auto it = constraints->find(i);
        if (it == constraints->end()) continue;
        if (it->second.ground() != g.vertices_on_level(i))
          throw Error(ErrKind::Precondition,
                      "constraint tree for level " + std::to_string(i) +
                          " does not cover that level's vertices");
        if (it->second.empty()) return std::nullopt;
        w.embedding.level_orders[i] = it->second.first_order();
        w.display.level_orders[i] = w.embedding.level_orders[i];
      }
    }
    return w;
  }

  Properized p = g.make_proper();
  if (constraints && !p.new_vertices.empty())
    throw Error(ErrKind::Precondition,
                "constraint trees require an already-proper graph");

  spqo::Instance inst = build_instance(p.graph, constraints);
  auto sol = spqo::solve(inst);
  if (!sol) return std::nullopt;

  Witness w;
  w.proper_graph = p.graph;
  int k = p.graph.levels();
  for (int i = 1; i <= k; ++i) {
    auto vs = p.graph.vertices_on_level(i);
    if (vs.empty())
      w.embedding.level_orders[i] = CircularOrder();
    else
      w.embedding.level_orders[i] = sol->at(level_id(i));
  }
  for (int i = 1; i <= k; ++i)
    if (!p.graph.layer_edges(i).empty())
      w.embedding.layer_orders[i] = sol->at(layer_id(i));

  if (!check_embedding(p.graph, w.embedding))
    throw std::logic_error("solved instance produced an invalid embedding");

  w.display = splice_to_input(g, p, w.embedding);
  return w;
}

std::optional<Witness> test_cyclic(const LevelGraph& g) {
  if (g.edges().empty()) {
    Witness w = trivial_edgeless(g);
    for (int i = 1; i <= g.levels(); ++i) {
      w.linear_levels[i] = g.vertices_on_level(i);
      w.display_linear[i] = g.vertices_on_level(i);
    }
    return w;
  }
  if (g.levels() == 1) g.make_proper();  // raises the k=1 diagnostic

  std::vector<std::string> gadget;
  LevelGraph aug = cyclic_to_torus(g, &gadget);
  auto tw = test_torus(aug);
  if (!tw) return std::nullopt;

  Properized p = g.make_proper();
  Witness w;
  w.proper_graph = p.graph;
  w.embedding = restrict_to(p, tw->embedding);
  if (!check_embedding(p.graph, w.embedding))
    throw std::logic_error("stripping the threading cycle broke the embedding");

  // Cut each level's circular order at its threading vertex: what follows
  // w_i around the circle is the level's linear order on the cylinder.
  std::set<std::string> input_names;
  for (const auto& [v, lv] : g.vertex_levels()) input_names.insert(v);
  for (int i = 1; i <= g.levels(); ++i) {
    const std::string& wi = gadget[static_cast<std::size_t>(i) - 1];
    const std::vector<std::string>& seq =
        tw->embedding.level_orders.at(i).elems();
    auto at = std::find(seq.begin(), seq.end(), wi);
    if (at == seq.end())
      throw std::logic_error("threading vertex missing from its level");
    std::vector<std::string> cut(at + 1, seq.end());
    cut.insert(cut.end(), seq.begin(), at);
    std::vector<std::string> mine, shown;
    std::set<std::string> proper_names;
    for (const auto& v : p.graph.vertices_on_level(i)) proper_names.insert(v);
    for (const auto& v : cut) {
      if (proper_names.count(v)) mine.push_back(v);
      if (input_names.count(v)) shown.push_back(v);
    }
    w.linear_levels[i] = std::move(mine);
    w.display_linear[i] = std::move(shown);
  }

  w.display = splice_to_input(g, p, w.embedding);
  return w;
}

std::optional<Witness> test_radial(const LevelGraph& g) {
  if (g.edges().empty()) return trivial_edgeless(g);
  if (g.levels() == 1) g.make_proper();  // raises the k=1 diagnostic

  // The standing cylinder has a bottom and a top: every edge must climb.
  for (const Edge& e : g.edges())
    if (g.level_of(e.from) >= g.level_of(e.to)) return std::nullopt;

  std::vector<std::string> gadget;
  LevelGraph aug = radial_to_torus(g, &gadget);
  auto tw = test_torus(aug);
  if (!tw) return std::nullopt;

  Properized p = g.make_proper();
  Witness w;
  w.proper_graph = p.graph;
  w.embedding = restrict_to(p, tw->embedding);
  if (!check_embedding(p.graph, w.embedding))
    throw std::logic_error("stripping the frame cycle broke the embedding");
  w.display = splice_to_input(g, p, w.embedding);
  return w;
}

}  // namespace torus
}  // namespace lvp
