#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "../src/oracle.hpp"
#include "../src/torus.hpp"
#include "support.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using lvp::Edge;
using lvp::Error;
using lvp::ErrKind;
using lvp::LevelGraph;
using lvp::pq::CircularOrder;
using lvp::pq::PQTree;
using lvp::torus::build_instance;
using lvp::torus::build_layer_tree;
using lvp::torus::check_embedding;
using lvp::torus::ConstraintTrees;
using lvp::torus::induced_orders;
using lvp::torus::test_cyclic;
using lvp::torus::test_radial;
using lvp::torus::test_torus;
using lvp::torus::TorusEmbedding;
using lvp::torus::Witness;

namespace {

LevelGraph triangle() {
  LevelGraph g(3);
  g.add_vertex("a1", 1);
  g.add_vertex("a2", 2);
  g.add_vertex("a3", 3);
  g.add_edge("a1", "a2");
  g.add_edge("a2", "a3");
  g.add_edge("a3", "a1");
  return g;
}

LevelGraph k22() {
  LevelGraph g(2);
  g.add_vertex("u1", 1);
  g.add_vertex("u2", 1);
  g.add_vertex("v1", 2);
  g.add_vertex("v2", 2);
  g.add_edge("u1", "v1");
  g.add_edge("u1", "v2");
  g.add_edge("u2", "v1");
  g.add_edge("u2", "v2");
  return g;
}

LevelGraph wound_four_cycle() {
  LevelGraph g(2);
  g.add_vertex("a", 1);
  g.add_vertex("b", 1);
  g.add_vertex("c", 2);
  g.add_vertex("d", 2);
  g.add_edge("a", "c");
  g.add_edge("c", "b");
  g.add_edge("b", "d");
  g.add_edge("d", "a");
  return g;
}

// Edge orders acceptable for one layer, stated directly: every endpoint's
// bundle occupies consecutive positions.
bool v_consec_order(const std::vector<Edge>& edges,
                    const std::vector<std::string>& order) {
  std::map<std::string, Edge> by_id;
  for (const auto& e : edges) by_id[e.id] = e;
  auto ok_side = [&](bool lower) {
    int n = int(order.size());
    for (int i = 0; i < n; ++i) {
      const std::string& v = lower ? by_id[order[i]].from : by_id[order[i]].to;
      int cnt = 0;
      for (int j = 0; j < n; ++j) {
        const std::string& w =
            lower ? by_id[order[j]].from : by_id[order[j]].to;
        const std::string& wn = lower ? by_id[order[(j + 1) % n]].from
                                      : by_id[order[(j + 1) % n]].to;
        if (w == v && wn != v) ++cnt;
      }
      if (cnt > 1) return false;
    }
    return true;
  };
  return ok_side(true) && ok_side(false);
}

testsup::OrderSet v_consec_set(const LevelGraph& g, int level) {
  std::vector<std::string> ids;
  for (const auto& e : g.layer_edges(level)) ids.push_back(e.id);
  testsup::OrderSet out;
  for (const auto& o : testsup::all_circular_orders(ids))
    if (v_consec_order(g.layer_edges(level), o.elems()))
      out.insert(o.canonical().elems());
  return out;
}

// Crossing-free test for the linear orders a cyclic witness reports: unroll
// one period of the strip, the wrap layer reading the next period's copy of
// level one, which carries the same order.
bool strip_inversion_free(const LevelGraph& g,
                          const std::map<int, std::vector<std::string>>& lin) {
  std::map<std::string, int> pos;
  for (const auto& [lvl, seq] : lin)
    for (std::size_t i = 0; i < seq.size(); ++i) pos[seq[i]] = int(i);
  for (const auto& e : g.edges())
    for (const auto& f : g.edges()) {
      if (e.id >= f.id) continue;
      if (g.level_of(e.from) != g.level_of(f.from)) continue;
      if (e.from == f.from || e.to == f.to) continue;
      if ((pos.at(e.from) < pos.at(f.from)) != (pos.at(e.to) < pos.at(f.to)))
        return false;
    }
  return true;
}

std::size_t total_leaves(const lvp::spqo::Instance& inst) {
  std::size_t n = 0;
  for (const auto& [id, t] : inst.trees) n += t.ground().size();
  return n;
}

}  // namespace

TEST_CASE("layer tree of the complete 2x2 layer") {
  LevelGraph g = k22();
  PQTree t = build_layer_tree(g, 1);
  CHECK(t.contains(CircularOrder(
      std::vector<std::string>{"u1->v1", "u1->v2", "u2->v2", "u2->v1"})));
  CHECK_FALSE(t.contains(CircularOrder(
      std::vector<std::string>{"u1->v1", "u2->v1", "u1->v2", "u2->v2"})));
  // The tree speaks for exactly the orders where all four bundles stay
  // together, nothing more.
  CHECK(testsup::tree_orders(t) == v_consec_set(g, 1));
}

TEST_CASE("layer tree with a single edge is trivial") {
  LevelGraph g(2);
  g.add_vertex("a", 1);
  g.add_vertex("b", 2);
  g.add_edge("a", "b");
  PQTree t = build_layer_tree(g, 1);
  CHECK(t.ground() == std::vector<std::string>{"a->b"});
  CHECK_FALSE(t.empty());
}

TEST_CASE("layer tree of the complete 2x3 layer is empty") {
  LevelGraph g(2);
  g.add_vertex("x1", 1);
  g.add_vertex("x2", 1);
  for (auto y : {"y1", "y2", "y3"}) g.add_vertex(y, 2);
  for (auto x : {"x1", "x2"})
    for (auto y : {"y1", "y2", "y3"}) g.add_edge(x, y);
  // Two lower bundles give two seams; three upper bundles need three.
  PQTree t = build_layer_tree(g, 1);
  CHECK(t.empty());
  CHECK(v_consec_set(g, 1).empty());
}

TEST_CASE("degree-one endpoints put nothing into the layer tree") {
  LevelGraph g(2);
  g.add_vertex("u1", 1);
  g.add_vertex("u2", 1);
  for (auto v : {"v1", "v2", "v3"}) g.add_vertex(v, 2);
  g.add_edge("u1", "v1");
  g.add_edge("u1", "v2");
  g.add_edge("u2", "v3");
  PQTree t = build_layer_tree(g, 1);
  // Only u1 has two edges; on three leaves any pair is adjacent somewhere,
  // so the constraint is vacuous and both circular orders remain.
  CHECK(t.order_count(10) == 2);
}

TEST_CASE("layer tree wants a nonempty layer") {
  LevelGraph g(2);
  g.add_vertex("a", 1);
  g.add_vertex("b", 2);
  g.add_edge("a", "b");
  CHECK_THROWS_AS(build_layer_tree(g, 2), Error);
}

TEST_CASE("induced orders walk the layer") {
  LevelGraph g = k22();
  auto [lo, hi] = induced_orders(
      g, 1,
      CircularOrder(std::vector<std::string>{"u1->v1", "u1->v2", "u2->v2",
                                             "u2->v1"}));
  CHECK(lo.to_text() == "(u1 u2)");
  CHECK(hi.to_text() == "(v1 v2)");

  LevelGraph star(2);
  star.add_vertex("u", 1);
  for (auto v : {"v1", "v2", "v3"}) star.add_vertex(v, 2);
  for (auto v : {"v1", "v2", "v3"}) star.add_edge("u", v);
  auto [slo, shi] = induced_orders(
      star, 1,
      CircularOrder(std::vector<std::string>{"u->v1", "u->v2", "u->v3"}));
  CHECK(slo.to_text() == "(u)");
  CHECK(shi.to_text() == "(v1 v2 v3)");
}

TEST_CASE("induced orders reject bad edge orders") {
  LevelGraph g = k22();
  CHECK_THROWS_AS(
      induced_orders(g, 1, CircularOrder(std::vector<std::string>{"u1->v1"})),
      Error);
  CHECK_THROWS_AS(
      induced_orders(g, 1,
                     CircularOrder(std::vector<std::string>{
                         "u1->v1", "u2->v1", "u1->v2", "u2->v2"})),
      Error);
}

TEST_CASE("instance for the triangle has the expected shape") {
  auto inst = build_instance(triangle());
  CHECK(inst.trees.size() == 12);  // 3 level, 3 layer, 6 consistency
  CHECK(inst.arcs.size() == 12);
  for (auto id : {"L1", "L2", "L3", "E1", "E2", "E3", "C1+", "C1-", "C2+",
                  "C2-", "C3+", "C3-"})
    CHECK(inst.trees.count(id) == 1);
  CHECK(lvp::spqo::is_2fixed(inst));
  std::size_t bound = 3 * 3 + 3;
  CHECK(total_leaves(inst) <= bound);
}

TEST_CASE("instance omits empty layers") {
  LevelGraph g(2);
  g.add_vertex("a", 1);
  g.add_vertex("b", 2);
  g.add_edge("a", "b");
  auto inst = build_instance(g);
  // Layer (2,1) has no edges: only L1, L2, E1, C1+, C2- remain.
  CHECK(inst.trees.size() == 5);
  CHECK(inst.arcs.size() == 4);
  CHECK(inst.trees.count("E2") == 0);
  CHECK(lvp::spqo::is_2fixed(inst));
}

TEST_CASE("instance construction preconditions") {
  LevelGraph one(1);
  one.add_vertex("a", 1);
  CHECK_THROWS_AS(build_instance(one), Error);

  LevelGraph skip(3);
  skip.add_vertex("a", 1);
  skip.add_vertex("b", 3);
  skip.add_edge("a", "b");
  CHECK_THROWS_AS(build_instance(skip), Error);  // not proper

  LevelGraph g = k22();
  ConstraintTrees bad;
  bad[1] = PQTree::universal({"u1", "u2", "v9"});
  CHECK_THROWS_AS(build_instance(g, &bad), Error);
}

TEST_CASE("instances from random graphs are well-formed and 2-fixed") {
  std::mt19937_64 rng(90210);
  for (int round = 0; round < 40; ++round) {
    int k = 2 + int(rng() % 3);
    LevelGraph g(k);
    std::vector<std::vector<std::string>> vs(k + 1);
    for (int i = 1; i <= k; ++i) {
      int n = 1 + int(rng() % 3);
      for (int j = 0; j < n; ++j) {
        std::string name = "v" + std::to_string(i) + "_" + std::to_string(j);
        g.add_vertex(name, i);
        vs[i].push_back(name);
      }
    }
    std::size_t m = 0;
    for (int i = 1; i <= k; ++i)
      for (const auto& a : vs[i])
        for (const auto& b : vs[(i % k) + 1])
          if (rng() % 2 == 0) {
            g.add_edge(a, b);
            ++m;
          }
    auto inst = build_instance(g);
    inst.validate();
    CHECK(lvp::spqo::is_2fixed(inst));
    CHECK(total_leaves(inst) <= 3 * g.vertex_count() + m);
  }
}

TEST_CASE("torus test accepts the triangle") {
  LevelGraph g = triangle();
  auto w = test_torus(g);
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));
  CHECK(w->embedding.level_orders.at(1).to_text() == "(a1)");
  // Proper input: the display view is the embedding itself.
  CHECK(w->display.level_orders.at(1).to_text() == "(a1)");
  CHECK(w->display.layer_orders.at(3).to_text() == "(a3->a1)");
  CHECK(w->linear_levels.empty());
}

TEST_CASE("torus test rejects the two-level complete 3x3 graph") {
  LevelGraph g(2);
  for (auto v : {"x1", "x2", "x3"}) g.add_vertex(v, 1);
  for (auto v : {"y1", "y2", "y3"}) g.add_vertex(v, 2);
  for (auto x : {"x1", "x2", "x3"})
    for (auto y : {"y1", "y2", "y3"}) g.add_edge(x, y);
  CHECK_FALSE(test_torus(g).has_value());
}

TEST_CASE("torus test rejects the complete 2x3 layer via an empty tree") {
  LevelGraph g(2);
  g.add_vertex("x1", 1);
  g.add_vertex("x2", 1);
  for (auto y : {"y1", "y2", "y3"}) g.add_vertex(y, 2);
  for (auto x : {"x1", "x2"})
    for (auto y : {"y1", "y2", "y3"}) g.add_edge(x, y);
  CHECK_FALSE(test_torus(g).has_value());
}

TEST_CASE("torus test accepts the doubly wound four-cycle") {
  auto w = test_torus(wound_four_cycle());
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));
}

TEST_CASE("edgeless graphs are planar on every surface") {
  LevelGraph g(2);
  g.add_vertex("b", 1);
  g.add_vertex("a", 1);
  auto w = test_torus(g);
  REQUIRE(w.has_value());
  CHECK(w->embedding.level_orders.at(1).to_text() == "(a b)");
  CHECK(w->embedding.level_orders.at(2).size() == 0);

  LevelGraph single(1);
  single.add_vertex("x", 1);
  CHECK(test_torus(single).has_value());
  CHECK(test_cyclic(single).has_value());
  CHECK(test_radial(single).has_value());
}

TEST_CASE("one-level graphs with edges are rejected everywhere") {
  LevelGraph g(1);
  g.add_vertex("a", 1);
  g.add_vertex("b", 1);
  g.add_edge("a", "b");
  CHECK_THROWS_AS(test_torus(g), Error);
  CHECK_THROWS_AS(test_cyclic(g), Error);
  CHECK_THROWS_AS(test_radial(g), Error);
}

TEST_CASE("intra-level edges are rejected") {
  LevelGraph g(2);
  g.add_vertex("a", 1);
  g.add_vertex("b", 1);
  g.add_vertex("c", 2);
  g.add_edge("a", "b");
  g.add_edge("a", "c");
  CHECK_THROWS_AS(test_torus(g), Error);
  try {
    test_torus(g);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("intra-level") != std::string::npos);
  }
}

TEST_CASE("subdivided witnesses splice back to input names") {
  LevelGraph g(3);
  g.add_vertex("a", 1);
  g.add_vertex("b", 3);
  g.add_edge("a", "b");  // climbs two levels, gets one subdivision vertex
  g.add_edge("b", "a");  // already proper
  auto w = test_torus(g);
  REQUIRE(w.has_value());
  CHECK(w->proper_graph.vertex_count() == 3);
  CHECK(check_embedding(w->proper_graph, w->embedding));
  CHECK(w->display.level_orders.at(1).to_text() == "(a)");
  CHECK(w->display.level_orders.at(2).size() == 0);
  CHECK(w->display.level_orders.at(3).to_text() == "(b)");
  // Each input edge surfaces once, in the layer where it starts.
  CHECK(w->display.layer_orders.at(1).to_text() == "(a->b)");
  CHECK(w->display.layer_orders.count(2) == 0);
  CHECK(w->display.layer_orders.at(3).to_text() == "(b->a)");
}

TEST_CASE("embedding checker flags the split bundle") {
  LevelGraph g = k22();
  TorusEmbedding emb;
  emb.level_orders[1] = CircularOrder(std::vector<std::string>{"u1", "u2"});
  emb.level_orders[2] = CircularOrder(std::vector<std::string>{"v1", "v2"});
  emb.layer_orders[1] = CircularOrder(
      std::vector<std::string>{"u1->v1", "u2->v1", "u1->v2", "u2->v2"});
  CHECK_FALSE(check_embedding(g, emb));

  emb.layer_orders[1] = CircularOrder(
      std::vector<std::string>{"u1->v1", "u1->v2", "u2->v2", "u2->v1"});
  CHECK(check_embedding(g, emb));

  emb.level_orders.erase(2);
  CHECK_THROWS_AS(check_embedding(g, emb), Error);
}

TEST_CASE("constraint trees restrict the level orders") {
  // Four stacked edges: free instance embeds any way, so it is planar.
  LevelGraph g(2);
  for (auto x : {"x1", "x2", "x3", "x4"}) g.add_vertex(x, 1);
  for (auto y : {"y1", "y2", "y3", "y4"}) g.add_vertex(y, 2);
  g.add_edge("x1", "y1");
  g.add_edge("x2", "y2");
  g.add_edge("x3", "y3");
  g.add_edge("x4", "y4");
  REQUIRE(test_torus(g).has_value());

  // Universal constraints change nothing.
  ConstraintTrees uni;
  uni[1] = PQTree::universal({"x1", "x2", "x3", "x4"});
  uni[2] = PQTree::universal({"y1", "y2", "y3", "y4"});
  auto w = test_torus(g, &uni);
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));

  // Pin level one to the chain order and level two to an order the matching
  // cannot produce from it: the matching copies the rotational sense across,
  // so the combination is infeasible.
  ConstraintTrees chain;
  chain[1] = PQTree::universal({"x1", "x2", "x3", "x4"})
                 .reduce({"x1", "x2"})
                 .reduce({"x2", "x3"})
                 .reduce({"x3", "x4"});
  chain[2] = PQTree::universal({"y1", "y2", "y3", "y4"})
                 .reduce({"y1", "y3"})
                 .reduce({"y3", "y2"})
                 .reduce({"y2", "y4"});
  CHECK_FALSE(test_torus(g, &chain).has_value());

  // Constraining only one level leaves the instance satisfiable.
  ConstraintTrees one;
  one[1] = chain.at(1);
  auto w1 = test_torus(g, &one);
  REQUIRE(w1.has_value());
  CHECK(check_embedding(w1->proper_graph, w1->embedding));

  // An empty constraint tree kills the instance outright.
  ConstraintTrees dead;
  dead[1] = PQTree::empty_tree({"x1", "x2", "x3", "x4"});
  CHECK_FALSE(test_torus(g, &dead).has_value());
}

TEST_CASE("constraint trees demand a proper input graph") {
  LevelGraph g(3);
  g.add_vertex("a", 1);
  g.add_vertex("b", 3);
  g.add_edge("a", "b");
  g.add_edge("b", "a");
  ConstraintTrees c;
  c[1] = PQTree::universal({"a"});
  CHECK_THROWS_AS(test_torus(g, &c), Error);
}

TEST_CASE("constraints never flip a rejection into an acceptance") {
  std::mt19937_64 rng(5150);
  for (int round = 0; round < 25; ++round) {
    LevelGraph g(2);
    std::vector<std::string> lo, hi;
    for (int j = 0; j < 3; ++j) {
      lo.push_back("x" + std::to_string(j));
      hi.push_back("y" + std::to_string(j));
      g.add_vertex(lo.back(), 1);
      g.add_vertex(hi.back(), 2);
    }
    for (const auto& a : lo)
      for (const auto& b : hi) {
        if (rng() % 2 == 0) g.add_edge(a, b);
        if (rng() % 4 == 0) g.add_edge(b, a);
      }
    if (!g.is_proper()) continue;

    ConstraintTrees c;
    c[1] = PQTree::universal(lo);
    if (rng() % 2 == 0) c[1] = c[1].reduce(testsup::random_subset(rng, lo, 2));
    bool free_verdict = test_torus(g).has_value();
    bool bound_verdict = test_torus(g, &c).has_value();
    if (bound_verdict) CHECK(free_verdict);
    // With a universal tree the verdicts must match exactly.
    ConstraintTrees u;
    u[1] = PQTree::universal(lo);
    CHECK(test_torus(g, &u).has_value() == free_verdict);
  }
}

TEST_CASE("cyclic test accepts the triangle and cuts it open") {
  auto w = test_cyclic(triangle());
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));
  REQUIRE(w->linear_levels.size() == 3);
  CHECK(w->linear_levels.at(1) == std::vector<std::string>{"a1"});
  CHECK(w->display_linear.at(2) == std::vector<std::string>{"a2"});
  CHECK(strip_inversion_free(triangle(), w->display_linear));
}

TEST_CASE("cyclic test rejects the complete 2x2 layer") {
  // Linear level orders cannot host both the parallel and the crossing pair.
  CHECK_FALSE(test_cyclic(k22()).has_value());
}

TEST_CASE("cyclic test rejects the doubly wound four-cycle") {
  CHECK_FALSE(test_cyclic(wound_four_cycle()).has_value());
}

TEST_CASE("cyclic witnesses stay inversion-free") {
  std::mt19937_64 rng(31337);
  int planar = 0;
  for (int round = 0; round < 40; ++round) {
    int k = 2 + int(rng() % 2);
    LevelGraph g(k);
    std::vector<std::vector<std::string>> vs(k + 1);
    for (int i = 1; i <= k; ++i) {
      int n = 1 + int(rng() % 3);
      for (int j = 0; j < n; ++j) {
        std::string name = "n" + std::to_string(i) + "_" + std::to_string(j);
        g.add_vertex(name, i);
        vs[i].push_back(name);
      }
    }
    for (int i = 1; i <= k; ++i)
      for (const auto& a : vs[i])
        for (const auto& b : vs[(i % k) + 1])
          if (rng() % 3 == 0) g.add_edge(a, b);
    auto w = test_cyclic(g);
    if (!w) continue;
    ++planar;
    CHECK(check_embedding(w->proper_graph, w->embedding));
    CHECK(strip_inversion_free(w->proper_graph, w->linear_levels));
    for (int i = 1; i <= k; ++i) {
      CHECK(w->linear_levels.at(i).size() == vs[i].size());
      CHECK(w->display_linear.at(i).size() == vs[i].size());
    }
  }
  CHECK(planar > 0);
}

TEST_CASE("radial test short-circuits on downward edges") {
  CHECK_FALSE(test_radial(triangle()).has_value());

  LevelGraph flat(2);
  flat.add_vertex("a", 1);
  flat.add_vertex("b", 1);
  flat.add_vertex("c", 2);
  flat.add_edge("a", "c");
  flat.add_edge("a", "b");  // same level: not strictly upward
  CHECK_FALSE(test_radial(flat).has_value());
}

TEST_CASE("radial test accepts the complete 2x2 layer") {
  auto w = test_radial(k22());
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));
  CHECK(w->display.level_orders.at(1).size() == 2);
  CHECK(w->display.layer_orders.at(1).size() == 4);
  CHECK(w->linear_levels.empty());
}

TEST_CASE("radial test handles long upward edges") {
  LevelGraph g(3);
  g.add_vertex("a", 1);
  g.add_vertex("b", 2);
  g.add_vertex("c", 3);
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  g.add_edge("a", "c");  // climbs two levels
  auto w = test_radial(g);
  REQUIRE(w.has_value());
  CHECK(check_embedding(w->proper_graph, w->embedding));
  CHECK(w->display.layer_orders.at(1).size() == 2);
}

TEST_CASE("torus test agrees with the oracle on random graphs") {
  std::mt19937_64 rng(60601);
  int planar = 0, nonplanar = 0;
  for (int round = 0; round < 60; ++round) {
    int k = 2 + int(rng() % 2);
    LevelGraph g(k);
    std::vector<std::vector<std::string>> vs(k + 1);
    for (int i = 1; i <= k; ++i) {
      int n = 1 + int(rng() % 3);
      for (int j = 0; j < n; ++j) {
        std::string name = "r" + std::to_string(i) + "_" + std::to_string(j);
        g.add_vertex(name, i);
        vs[i].push_back(name);
      }
    }
    for (int i = 1; i <= k; ++i)
      for (const auto& a : vs[i])
        for (const auto& b : vs[(i % k) + 1])
          if (rng() % 2 == 0) g.add_edge(a, b);
    bool fits = true;
    for (int i = 1; i <= k; ++i)
      if (g.layer_edges(i).size() > 6) fits = false;
    if (!fits) continue;

    auto fast = test_torus(g);
    auto slow = lvp::oracle::brute_torus(g);
    CHECK(fast.has_value() == slow.has_value());
    if (fast) {
      CHECK(check_embedding(fast->proper_graph, fast->embedding));
      ++planar;
    } else {
      ++nonplanar;
    }
  }
  CHECK(planar > 0);
  CHECK(nonplanar > 0);
}

TEST_CASE("torus test is deterministic") {
  auto w1 = test_torus(k22());
  auto w2 = test_torus(k22());
  REQUIRE(w1.has_value());
  REQUIRE(w2.has_value());
  CHECK(w1->embedding.level_orders.at(1).to_text() ==
        w2->embedding.level_orders.at(1).to_text());
  CHECK(w1->embedding.layer_orders.at(1).to_text() ==
        w2->embedding.layer_orders.at(1).to_text());
}
