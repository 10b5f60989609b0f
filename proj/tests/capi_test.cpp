#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <string>

#include "levelplan.h"

namespace {

struct GraphDel {
  void operator()(lvp_graph* g) const { lvp_graph_free(g); }
};
struct WitnessDel {
  void operator()(lvp_witness* w) const { lvp_witness_free(w); }
};
struct BetwDel {
  void operator()(lvp_betweenness* b) const { lvp_betweenness_free(b); }
};
using GraphPtr = std::unique_ptr<lvp_graph, GraphDel>;
using WitnessPtr = std::unique_ptr<lvp_witness, WitnessDel>;
using BetwPtr = std::unique_ptr<lvp_betweenness, BetwDel>;

GraphPtr parse(const std::string& text) {
  lvp_graph* g = nullptr;
  REQUIRE(lvp_graph_parse(text.c_str(), &g) == LVP_OK);
  return GraphPtr(g);
}

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  lvp_string_free(s);
  return out;
}

const char* kTriangle =
    "levels 3\n"
    "v a1 1\nv a2 2\nv a3 3\n"
    "e a1 a2\ne a2 a3\ne a3 a1\n";

const char* kK22 =
    "levels 2\n"
    "v u1 1\nv u2 1\nv v1 2\nv v2 2\n"
    "e u1 v1\ne u1 v2\ne u2 v1\ne u2 v2\n";

}  // namespace

TEST_CASE("parse and serialize round-trip") {
  auto g = parse(kTriangle);
  char* text = nullptr;
  REQUIRE(lvp_graph_to_text(g.get(), &text) == LVP_OK);
  std::string t = take(text);
  CHECK(t.find("levels 3") != std::string::npos);
  CHECK(t.find("e a3 a1") != std::string::npos);

  auto again = parse(t);
  char* text2 = nullptr;
  REQUIRE(lvp_graph_to_text(again.get(), &text2) == LVP_OK);
  CHECK(take(text2) == t);
}

TEST_CASE("parse failures carry the line number") {
  lvp_graph* g = nullptr;
  CHECK(lvp_graph_parse("levels 2\nv a\n", &g) == LVP_ERR_PARSE);
  CHECK(std::string(lvp_last_error()).find("line 2") != std::string::npos);
  CHECK(g == nullptr);

  CHECK(lvp_graph_parse(nullptr, &g) == LVP_ERR_PRECONDITION);
  CHECK(lvp_graph_parse("levels 1\n", nullptr) == LVP_ERR_PRECONDITION);
}

TEST_CASE("triangle verdicts and witness text through the C surface") {
  auto g = parse(kTriangle);

  int planar = -1;
  lvp_witness* w = nullptr;
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, &w) == LVP_OK);
  CHECK(planar == 1);
  REQUIRE(w != nullptr);
  WitnessPtr tw(w);
  char* text = nullptr;
  REQUIRE(lvp_witness_text(tw.get(), &text) == LVP_OK);
  CHECK(take(text) ==
        "level 1: a1\n"
        "level 2: a2\n"
        "level 3: a3\n"
        "layer 1: a1->a2\n"
        "layer 2: a2->a3\n"
        "layer 3: a3->a1\n");

  w = nullptr;
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_CYCLIC, &planar, &w) == LVP_OK);
  CHECK(planar == 1);
  WitnessPtr cw(w);
  text = nullptr;
  REQUIRE(lvp_witness_text(cw.get(), &text) == LVP_OK);
  CHECK(take(text) ==
        "level 1: a1\n"
        "level 2: a2\n"
        "level 3: a3\n");

  w = nullptr;
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_RADIAL, &planar, &w) == LVP_OK);
  CHECK(planar == 0);
  CHECK(w == nullptr);
}

TEST_CASE("complete bipartite pair on two levels") {
  auto g = parse(kK22);
  int planar = -1;
  lvp_witness* w = nullptr;
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, &w) == LVP_OK);
  CHECK(planar == 1);
  WitnessPtr tw(w);
  char* text = nullptr;
  REQUIRE(lvp_witness_text(tw.get(), &text) == LVP_OK);
  std::string t = take(text);
  CHECK(t.find("level 1: u1, u2\n") != std::string::npos);
  CHECK(t.find("level 2: v1, v2\n") != std::string::npos);
  // Canonical layer rotation starts at the smallest edge name.
  CHECK(t.find("layer 1: u1->v1, ") != std::string::npos);
  for (const char* id : {"u1->v1", "u1->v2", "u2->v1", "u2->v2"})
    CHECK(t.find(id) != std::string::npos);

  REQUIRE(lvp_test(g.get(), LVP_SURFACE_CYCLIC, &planar, nullptr) == LVP_OK);
  CHECK(planar == 0);
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_RADIAL, &planar, nullptr) == LVP_OK);
  CHECK(planar == 1);
}

TEST_CASE("oracle cross-check agrees on the fixtures") {
  auto tri = parse(kTriangle);
  auto k22 = parse(kK22);
  int planar = -1;
  REQUIRE(lvp_oracle_test(tri.get(), LVP_SURFACE_TORUS, &planar) == LVP_OK);
  CHECK(planar == 1);
  REQUIRE(lvp_oracle_test(tri.get(), LVP_SURFACE_RADIAL, &planar) == LVP_OK);
  CHECK(planar == 0);
  REQUIRE(lvp_oracle_test(k22.get(), LVP_SURFACE_CYCLIC, &planar) == LVP_OK);
  CHECK(planar == 0);
  REQUIRE(lvp_oracle_test(k22.get(), LVP_SURFACE_RADIAL, &planar) == LVP_OK);
  CHECK(planar == 1);
}

TEST_CASE("oracle refuses oversized inputs with a budget error") {
  std::string big = "levels 2\n";
  for (int i = 0; i < 8; ++i)
    big += "v a" + std::to_string(i) + " 1\n";
  big += "v b 2\ne a0 b\n";
  auto g = parse(big);
  int planar = -1;
  CHECK(lvp_oracle_test(g.get(), LVP_SURFACE_TORUS, &planar) ==
        LVP_ERR_BUDGET);
  CHECK(std::string(lvp_last_error()).size() > 0);
  // The solver itself is fine with that size.
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, nullptr) == LVP_OK);
  CHECK(planar == 1);
}

TEST_CASE("svg comes out of an embedding witness only") {
  auto g = parse(kTriangle);
  int planar = -1;
  lvp_witness* w = nullptr;
  REQUIRE(lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, &w) == LVP_OK);
  WitnessPtr tw(w);
  char* svg1 = nullptr;
  char* svg2 = nullptr;
  REQUIRE(lvp_witness_svg(tw.get(), &svg1) == LVP_OK);
  REQUIRE(lvp_witness_svg(tw.get(), &svg2) == LVP_OK);
  std::string a = take(svg1), b = take(svg2);
  CHECK(a == b);
  CHECK(a.find("<svg") == 0);
  CHECK(a.find("class=\"level\"") != std::string::npos);

  const char* sim =
      "levels 2\nv a 1\nv b 2\nv c 1\nv d 2\ne a b 1\ne c d 2\n";
  auto sg = parse(sim);
  w = nullptr;
  REQUIRE(lvp_sim_test(sg.get(), &planar, &w) == LVP_OK);
  CHECK(planar == 1);
  REQUIRE(w != nullptr);
  WitnessPtr sw(w);
  char* out = nullptr;
  CHECK(lvp_witness_svg(sw.get(), &out) == LVP_ERR_PRECONDITION);
  char* text = nullptr;
  REQUIRE(lvp_witness_text(sw.get(), &text) == LVP_OK);
  std::string t = take(text);
  CHECK(t.find("level 1: ") != std::string::npos);
  CHECK(t.find("level 2: ") != std::string::npos);
}

TEST_CASE("simultaneous verdicts through the C surface") {
  // One graph owning a complete 2x2 bipartite layer cannot be drawn flat.
  const char* unsat =
      "levels 2\n"
      "v u1 1\nv u2 1\nv v1 2\nv v2 2\n"
      "e u1 v1 1\ne u1 v2 1\ne u2 v1 1\ne u2 v2 1\n";
  auto g = parse(unsat);
  int planar = -1;
  REQUIRE(lvp_sim_test(g.get(), &planar, nullptr) == LVP_OK);
  CHECK(planar == 0);

  // Three levels do not fit the two-level decision procedure.
  auto tri = parse(kTriangle);
  CHECK(lvp_sim_test(tri.get(), &planar, nullptr) == LVP_ERR_PRECONDITION);
}

TEST_CASE("instance dump describes trees and arcs") {
  auto g = parse(kTriangle);
  char* dump = nullptr;
  REQUIRE(lvp_instance_dump(g.get(), &dump) == LVP_OK);
  std::string d = take(dump);
  CHECK(d.find("trees 12 arcs 12") == 0);
  CHECK(d.find("tree L1 ") != std::string::npos);
  CHECK(d.find("tree E1 ") != std::string::npos);
  CHECK(d.find("arc ") != std::string::npos);
}

TEST_CASE("betweenness parsing and gadget generation") {
  const char* btw =
      "elem a\nelem b\nelem c\n"
      "triplet a b c\n";
  lvp_betweenness* b = nullptr;
  REQUIRE(lvp_betweenness_parse(btw, &b) == LVP_OK);
  BetwPtr bp(b);

  lvp_graph* g32 = nullptr;
  REQUIRE(lvp_gen_gadget(bp.get(), LVP_GADGET_3X2, &g32) == LVP_OK);
  GraphPtr p32(g32);
  char* t1 = nullptr;
  REQUIRE(lvp_graph_to_text(p32.get(), &t1) == LVP_OK);
  std::string s32 = take(t1);
  CHECK(s32.find("levels 2") == 0);
  CHECK(s32.find("u1_1") != std::string::npos);

  lvp_graph* g23 = nullptr;
  REQUIRE(lvp_gen_gadget(bp.get(), LVP_GADGET_2X3, &g23) == LVP_OK);
  GraphPtr p23(g23);
  char* t2 = nullptr;
  REQUIRE(lvp_graph_to_text(p23.get(), &t2) == LVP_OK);
  std::string s23 = take(t2);
  CHECK(s23.find("levels 3") == 0);

  // Regeneration is byte-stable.
  lvp_graph* g32b = nullptr;
  REQUIRE(lvp_gen_gadget(bp.get(), LVP_GADGET_3X2, &g32b) == LVP_OK);
  GraphPtr p32b(g32b);
  char* t3 = nullptr;
  REQUIRE(lvp_graph_to_text(p32b.get(), &t3) == LVP_OK);
  CHECK(take(t3) == s32);

  lvp_betweenness* bad = nullptr;
  CHECK(lvp_betweenness_parse("elem a\ntriplet a a a\n", &bad) ==
        LVP_ERR_PARSE);
  CHECK(std::string(lvp_last_error()).find("distinct") != std::string::npos);
  CHECK(lvp_betweenness_parse("elem a\ntriplet a\n", &bad) == LVP_ERR_PARSE);
  CHECK(std::string(lvp_last_error()).find("line 2") != std::string::npos);
}

TEST_CASE("error classes map onto the status enum") {
  // A one-level graph with an edge is structurally unsupported.
  auto g = parse("levels 1\nv a 1\nv b 1\ne a b\n");
  int planar = -1;
  CHECK(lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, nullptr) ==
        LVP_ERR_PRECONDITION);
  CHECK(lvp_test(g.get(), static_cast<lvp_surface>(99), &planar, nullptr) ==
        LVP_ERR_PRECONDITION);
  CHECK(lvp_test(nullptr, LVP_SURFACE_TORUS, &planar, nullptr) ==
        LVP_ERR_PRECONDITION);

  // Frees accept NULL.
  lvp_graph_free(nullptr);
  lvp_witness_free(nullptr);
  lvp_betweenness_free(nullptr);
  lvp_string_free(nullptr);
}

TEST_CASE("selfcheck corpus passes end to end") {
  int ok = -1;
  char* report = nullptr;
  REQUIRE(lvp_selfcheck(&ok, &report) == LVP_OK);
  std::string r = take(report);
  CHECK(ok == 1);
  CHECK(r.find("selfcheck passed") != std::string::npos);
  CHECK(r.find("FAIL") == std::string::npos);
}
