#include "selfcheck.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "level_graph.hpp"
#include "oracle.hpp"
#include "pq_tree.hpp"
#include "sim_level.hpp"
#include "torus.hpp"

namespace lvp {
namespace selfcheck {

namespace {

using pq::CircularOrder;
using pq::PQTree;

// Every circular order over the labels: first label pinned, rest permuted.
std::vector<CircularOrder> all_orders(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  std::vector<CircularOrder> out;
  if (labels.size() <= 1) {
    out.emplace_back(labels);
    return out;
  }
  std::vector<std::string> rest(labels.begin() + 1, labels.end());
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<std::string> seq = {labels[0]};
    seq.insert(seq.end(), rest.begin(), rest.end());
    out.emplace_back(seq);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

bool circularly_consecutive(const CircularOrder& o, const std::set<std::string>& x) {
  if (x.size() <= 1 || x.size() >= o.size()) return true;
  const auto& e = o.elems();
  std::size_t n = e.size();
  for (std::size_t start = 0; start < n; ++start) {
    if (!x.count(e[start]) || x.count(e[(start + n - 1) % n])) continue;
    std::size_t run = 0;
    while (run < n && x.count(e[(start + run) % n])) ++run;
    return run == x.size();
  }
  return false;
}

std::set<CircularOrder> order_set(const PQTree& t,
                                  const std::vector<CircularOrder>& universe) {
  std::set<CircularOrder> s;
  for (const auto& o : universe)
    if (t.contains(o)) s.insert(o.canonical());
  return s;
}

struct Section {
  std::string name;
  int passed = 0;
  int total = 0;
  void tally(bool ok) {
    ++total;
    if (ok) ++passed;
  }
};

// PQ-tree reduce, project, intersect against literal enumeration on a
// five-element ground set, over a fixed battery of constraint families.
Section check_pq() {
  Section s{"pq set operations"};
  std::vector<std::string> ground = {"a", "b", "c", "d", "e"};
  auto universe = all_orders(ground);

  std::vector<std::vector<std::set<std::string>>> batteries = {
      {{"a", "b"}},
      {{"a", "b", "c"}},
      {{"a", "b"}, {"c", "d"}},
      {{"a", "b"}, {"b", "c"}},
      {{"a", "b", "c"}, {"b", "c", "d"}},
      {{"a", "b"}, {"b", "c"}, {"c", "d"}},
      {{"a", "b", "c"}, {"c", "d", "e"}, {"b", "c"}},
      {{"a", "c"}, {"b", "d"}},
  };

  for (const auto& battery : batteries) {
    PQTree t = PQTree::universal(ground);
    for (const auto& x : battery) t = t.reduce(x);
    std::set<CircularOrder> expect;
    for (const auto& o : universe) {
      bool keep = true;
      for (const auto& x : battery)
        if (!circularly_consecutive(o, x)) keep = false;
      if (keep) expect.insert(o.canonical());
    }
    s.tally(order_set(t, universe) == expect);

    // Projection of the same tree to a three-element window.
    std::set<std::string> window = {"a", "c", "e"};
    PQTree proj = t.project(window);
    std::set<CircularOrder> expect_proj;
    for (const auto& o : universe)
      if (t.contains(o)) expect_proj.insert(o.restricted_to(window).canonical());
    auto small_universe = all_orders({"a", "c", "e"});
    s.tally(order_set(proj, small_universe) == expect_proj);
  }

  // Intersections of battery pairs.
  for (std::size_t i = 0; i + 1 < batteries.size(); i += 2) {
    PQTree t1 = PQTree::universal(ground);
    for (const auto& x : batteries[i]) t1 = t1.reduce(x);
    PQTree t2 = PQTree::universal(ground);
    for (const auto& x : batteries[i + 1]) t2 = t2.reduce(x);
    PQTree both = t1.intersect(t2);
    std::set<CircularOrder> expect;
    for (const auto& o : universe)
      if (t1.contains(o) && t2.contains(o)) expect.insert(o.canonical());
    s.tally(order_set(both, universe) == expect);
  }
  return s;
}

// All graphs on two levels of two vertices each, every subset of the eight
// one-hop edges. The solver must match the brute-force search on the torus,
// and through the gadget graphs on the rolling and standing cylinders; the
// two-graph variant must match the plane oracle.
std::vector<Section> check_small_graphs() {
  Section torus_s{"torus 2+2 exhaustive"};
  Section cyclic_s{"cyclic via gadget"};
  Section radial_s{"radial via gadget"};
  Section sim_s{"simultaneous 2x2"};

  const std::vector<std::pair<std::string, std::string>> ups = {
      {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}};
  const std::vector<std::pair<std::string, std::string>> downs = {
      {"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}};

  for (int mask = 0; mask < 256; ++mask) {
    LevelGraph g(2);
    g.add_vertex("a", 1);
    g.add_vertex("b", 1);
    g.add_vertex("c", 2);
    g.add_vertex("d", 2);
    bool has_down = false;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) g.add_edge(ups[i].first, ups[i].second);
      if (mask & (1 << (4 + i))) {
        g.add_edge(downs[i].first, downs[i].second);
        has_down = true;
      }
    }

    auto fast = torus::test_torus(g);
    auto slow = oracle::brute_torus(g);
    bool agree = fast.has_value() == slow.has_value();
    if (fast && !torus::check_embedding(fast->proper_graph, fast->embedding))
      agree = false;
    torus_s.tally(agree);

    auto cyc = torus::test_cyclic(g);
    auto cyc_slow = oracle::brute_torus(cyclic_to_torus(g));
    cyclic_s.tally(cyc.has_value() == cyc_slow.has_value());

    auto rad = torus::test_radial(g);
    if (has_down) {
      // Edges from the top level back to the bottom have no place on the
      // standing cylinder.
      radial_s.tally(!rad.has_value());
    } else {
      auto rad_slow = oracle::brute_torus(radial_to_torus(g));
      radial_s.tally(rad.has_value() == rad_slow.has_value());
    }

    // Same mask read as two-graph plane instances: the four one-hop pairs,
    // each present in graph 1, graph 2, both, or neither.
    LevelGraph si(2);
    si.add_vertex("a", 1);
    si.add_vertex("b", 1);
    si.add_vertex("c", 2);
    si.add_vertex("d", 2);
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) si.add_edge(ups[i].first, ups[i].second, 1);
      if (mask & (1 << (4 + i))) si.add_edge(ups[i].first, ups[i].second, 2);
    }
    auto sim_fast = sim::test_sim_2x2(si);
    auto sim_slow = oracle::brute_sim_level(si);
    sim_s.tally(sim_fast.has_value() == sim_slow.has_value());
  }
  return {torus_s, cyclic_s, radial_s, sim_s};
}

// Betweenness instances over three elements: every single triplet and every
// pair of triplets. Both generated families must agree with the direct
// betweenness search.
Section check_gadgets() {
  Section s{"betweenness gadgets"};
  std::vector<std::array<std::string, 3>> triplets;
  std::vector<std::string> elems = {"a", "b", "c"};
  for (const auto& x : elems)
    for (const auto& y : elems)
      for (const auto& z : elems) {
        if (x == y || y == z || x == z) continue;
        triplets.push_back({x, y, z});
      }

  std::vector<sim::BetweennessInstance> corpus;
  for (const auto& t : triplets) {
    sim::BetweennessInstance b;
    b.elems = elems;
    b.triplets = {t};
    corpus.push_back(b);
  }
  for (std::size_t i = 0; i < triplets.size(); ++i)
    for (std::size_t j = i + 1; j < triplets.size(); ++j) {
      sim::BetweennessInstance b;
      b.elems = elems;
      b.triplets = {triplets[i], triplets[j]};
      corpus.push_back(b);
    }

  for (const auto& b : corpus) {
    bool want = sim::solve_betweenness(b).has_value();
    bool got32 = oracle::brute_sim_level(sim::gen_gadget_3x2(b)).has_value();
    bool got23 = oracle::brute_sim_level(sim::gen_gadget_2x3(b)).has_value();
    s.tally(want == got32 && want == got23);
  }
  return s;
}

}  // namespace

Report run() {
  std::vector<Section> sections;
  sections.push_back(check_pq());
  for (auto& s : check_small_graphs()) sections.push_back(std::move(s));
  sections.push_back(check_gadgets());

  Report r;
  r.ok = true;
  std::ostringstream out;
  for (const auto& s : sections) {
    bool good = s.passed == s.total && s.total > 0;
    if (!good) r.ok = false;
    out << s.name << ": " << s.passed << "/" << s.total
        << (good ? " ok" : " FAIL") << "\n";
  }
  out << (r.ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  r.text = out.str();
  return r;
}

}  // namespace selfcheck
}  // namespace lvp
