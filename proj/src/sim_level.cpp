#include "sim_level.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "torus.hpp"

namespace lvp {
namespace sim {

namespace {

std::map<std::string, int> position_index(const std::vector<std::string>& v) {
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < v.size(); ++i) pos[v[i]] = int(i);
  return pos;
}

}  // namespace

BetweennessInstance BetweennessInstance::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  BetweennessInstance b;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrKind::Parse, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "elem") {
      std::string name;
      if (!(ls >> name)) fail("elem needs a name");
      b.elems.push_back(name);
    } else if (tok == "triplet") {
      std::array<std::string, 3> t;
      if (!(ls >> t[0] >> t[1] >> t[2])) fail("triplet needs three names");
      b.triplets.push_back(t);
    } else {
      fail("unknown directive: " + tok);
    }
    std::string extra;
    if (ls >> extra) fail("trailing token: " + extra);
  }
  try {
    b.validate();
  } catch (const Error& e) {
    throw Error(ErrKind::Parse, e.what());
  }
  return b;
}

std::string BetweennessInstance::to_text() const {
  std::ostringstream out;
  for (const auto& e : elems) out << "elem " << e << "\n";
  for (const auto& t : triplets)
    out << "triplet " << t[0] << " " << t[1] << " " << t[2] << "\n";
  return out.str();
}

void BetweennessInstance::validate() const {
  std::set<std::string> seen;
  for (const auto& e : elems) {
    if (e.empty())
      throw Error(ErrKind::Precondition, "empty element name");
    if (!seen.insert(e).second)
      throw Error(ErrKind::Precondition, "repeated element: " + e);
  }
  for (const auto& t : triplets) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrKind::Precondition,
                  "triplet entries must be distinct: " + t[0] + " " + t[1] +
                      " " + t[2]);
    for (const auto& m : t)
      if (!seen.count(m))
        throw Error(ErrKind::Precondition, "triplet names unknown element: " + m);
  }
}

LevelGraph reduce_2x2_to_cyclic(const SimInstance& inst) {
  if (inst.levels() != 2)
    throw Error(ErrKind::Precondition,
                "two-graph reduction needs exactly two levels");
  for (const Edge& e : inst.edges()) {
    if (e.graph != 1 && e.graph != 2)
      throw Error(ErrKind::Precondition,
                  "two-graph reduction got an edge of graph " +
                      std::to_string(e.graph));
    if (inst.level_of(e.from) != 1 || inst.level_of(e.to) != 2)
      throw Error(ErrKind::Precondition,
                  "two-graph reduction needs upward edges, got " + e.id);
  }
  LevelGraph out(2);
  for (const auto& [name, lvl] : inst.vertex_levels()) out.add_vertex(name, lvl);
  for (const Edge& e : inst.edges()) {
    if (e.graph == 1)
      out.add_edge(e.from, e.to);
    else
      out.add_edge(e.to, e.from);
  }
  return out;
}

std::optional<SimWitness> test_sim_2x2(const SimInstance& inst) {
  LevelGraph merged = reduce_2x2_to_cyclic(inst);
  auto cyc = torus::test_cyclic(merged);
  if (!cyc) return std::nullopt;

  SimWitness w = cyc->display_linear;
  // The rolling-cylinder drawing pins the vertices; moving graph two's curves
  // back between the levels cannot introduce a crossing. Verify anyway.
  std::map<int, std::map<std::string, int>> pos;
  for (const auto& [lvl, seq] : w) pos[lvl] = position_index(seq);
  for (const Edge& e : inst.edges())
    for (const Edge& f : inst.edges()) {
      if (e.id >= f.id || e.graph != f.graph) continue;
      if (e.from == f.from || e.to == f.to) continue;
      bool lo = pos.at(1).at(e.from) < pos.at(1).at(f.from);
      bool hi = pos.at(2).at(e.to) < pos.at(2).at(f.to);
      if (lo != hi)
        throw std::logic_error("rerouted witness stopped being crossing-free");
    }
  return w;
}

namespace {

struct GadgetNames {
  int n = 0, k = 0;
  std::map<std::string, int> elem_index;  // element name -> 1-based position
};

GadgetNames gadget_prelude(const BetweennessInstance& b) {
  b.validate();
  GadgetNames g;
  g.n = int(b.elems.size());
  g.k = int(b.triplets.size());
  if (g.n < 3)
    throw Error(ErrKind::Precondition, "gadget needs at least three elements");
  if (g.k < 1)
    throw Error(ErrKind::Precondition, "gadget needs at least one triplet");
  for (int j = 0; j < g.n; ++j) g.elem_index[b.elems[j]] = j + 1;
  return g;
}

std::string u_name(int i, int j) {
  return "u" + std::to_string(i) + "_" + std::to_string(j);
}
std::string v_name(int i, int j) {
  return "v" + std::to_string(i) + "_" + std::to_string(j);
}

// Rows u_{i,*} on level one, tie rows v_{i,*} on level two; graph one joins
// row i to tie row i straight down the columns, graph two joins row i+1 to
// tie row i. Any simultaneous embedding then shows every row in one shared
// pattern, so constraints posed on distinct rows talk about the same order.
void add_ordering_gadget(SimInstance& out, const GadgetNames& g) {
  for (int i = 1; i <= g.k; ++i)
    for (int j = 1; j <= g.n; ++j) out.add_vertex(u_name(i, j), 1);
  for (int i = 1; i < g.k; ++i)
    for (int j = 1; j <= g.n; ++j) out.add_vertex(v_name(i, j), 2);
  for (int i = 1; i < g.k; ++i)
    for (int j = 1; j <= g.n; ++j) {
      out.add_edge(u_name(i, j), v_name(i, j), 1);
      out.add_edge(u_name(i + 1, j), v_name(i, j), 2);
    }
}

}  // namespace

SimInstance gen_gadget_3x2(const BetweennessInstance& b) {
  GadgetNames g = gadget_prelude(b);
  SimInstance out(2);
  add_ordering_gadget(out, g);
  for (int i = 1; i <= g.k; ++i) {
    const auto& t = b.triplets[i - 1];
    int a = g.elem_index.at(t[0]);
    int mid = g.elem_index.at(t[1]);
    int c = g.elem_index.at(t[2]);
    std::string x = "x" + std::to_string(i);
    std::string y = "y" + std::to_string(i);
    out.add_vertex(x, 2);
    out.add_vertex(y, 2);
    // The path u_a - x - u_mid - y - u_c of graph three: both of its bends
    // hang below level one, which traps u_mid between u_a and u_c.
    out.add_edge(u_name(i, a), x, 3);
    out.add_edge(u_name(i, mid), x, 3);
    out.add_edge(u_name(i, mid), y, 3);
    out.add_edge(u_name(i, c), y, 3);
  }
  return out;
}

SimInstance gen_gadget_2x3(const BetweennessInstance& b) {
  GadgetNames g = gadget_prelude(b);
  SimInstance out(3);
  add_ordering_gadget(out, g);
  for (int i = 1; i <= g.k; ++i) {
    const auto& t = b.triplets[i - 1];
    int a = g.elem_index.at(t[0]);
    int mid = g.elem_index.at(t[1]);
    int c = g.elem_index.at(t[2]);
    std::string x = "x" + std::to_string(i);
    std::string y = "y" + std::to_string(i);
    out.add_vertex(x, 3);
    out.add_vertex(y, 3);
    // Same path as in the three-graph family, but folded into graph one with
    // its bends on level three. Each leg climbs two levels, so it is laid as
    // two one-level hops over a fresh waypoint on level two.
    for (int s = 1; s <= 4; ++s)
      out.add_vertex("t" + std::to_string(i) + "_" + std::to_string(s), 2);
    auto leg = [&](int foot, const std::string& bend, int s) {
      std::string mid_stop = "t" + std::to_string(i) + "_" + std::to_string(s);
      out.add_edge(u_name(i, foot), mid_stop, 1);
      out.add_edge(mid_stop, bend, 1);
    };
    leg(a, x, 1);
    leg(mid, x, 2);
    leg(mid, y, 3);
    leg(c, y, 4);
  }
  return out;
}

std::optional<std::vector<std::string>> solve_betweenness(
    const BetweennessInstance& b) {
  b.validate();
  int n = int(b.elems.size());
  if (n > 8)
    throw Error(ErrKind::Budget, "betweenness oracle caps at eight elements");

  std::vector<std::array<int, 3>> want;
  auto pos = position_index(b.elems);
  for (const auto& t : b.triplets)
    want.push_back({pos.at(t[0]), pos.at(t[1]), pos.at(t[2])});

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> at(n);
    for (int i = 0; i < n; ++i) at[perm[i]] = i;
    bool ok = true;
    for (const auto& t : want) {
      bool fwd = at[t[0]] < at[t[1]] && at[t[1]] < at[t[2]];
      bool rev = at[t[2]] < at[t[1]] && at[t[1]] < at[t[0]];
      if (!fwd && !rev) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<std::string> order;
      for (int i : perm) order.push_back(b.elems[i]);
      return order;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace sim
}  // namespace lvp
