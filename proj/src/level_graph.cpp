#include "level_graph.hpp"

#include <algorithm>
#include <sstream>

namespace lvp {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') return false;
  return true;
}

}  // namespace

LevelGraph::LevelGraph(int k) : k_(k) {
  if (k < 1) throw Error(ErrKind::Precondition, "level count must be at least 1");
}

void LevelGraph::add_vertex(const std::string& name, int level) {
  if (!valid_name(name))
    throw Error(ErrKind::Precondition, "bad vertex name '" + name + "'");
  if (level < 1 || level > k_)
    throw Error(ErrKind::Precondition, "vertex " + name + ": level " +
                                           std::to_string(level) +
                                           " outside 1.." + std::to_string(k_));
  if (!levels_of_.emplace(name, level).second)
    throw Error(ErrKind::Precondition, "duplicate vertex " + name);
}

const std::string& LevelGraph::add_edge(const std::string& from,
                                        const std::string& to, int graph) {
  if (!levels_of_.count(from))
    throw Error(ErrKind::Precondition, "edge endpoint " + from + " is not a vertex");
  if (!levels_of_.count(to))
    throw Error(ErrKind::Precondition, "edge endpoint " + to + " is not a vertex");
  if (from == to)
    throw Error(ErrKind::Precondition, "self-loop at " + from);
  if (graph < 1)
    throw Error(ErrKind::Precondition, "graph tag must be at least 1");
  Edge e;
  e.from = from;
  e.to = to;
  e.graph = graph;
  int n = ++pair_count_[{from, to}];
  e.id = from + "->" + to + (n > 1 ? "#" + std::to_string(n) : "");
  edges_.push_back(std::move(e));
  return edges_.back().id;
}

bool LevelGraph::has_vertex(const std::string& name) const {
  return levels_of_.count(name) > 0;
}

int LevelGraph::level_of(const std::string& name) const {
  auto it = levels_of_.find(name);
  if (it == levels_of_.end())
    throw Error(ErrKind::Precondition, "unknown vertex " + name);
  return it->second;
}

std::vector<std::string> LevelGraph::vertices_on_level(int level) const {
  std::vector<std::string> out;
  for (const auto& [name, lvl] : levels_of_)
    if (lvl == level) out.push_back(name);
  return out;
}

int LevelGraph::graph_count() const {
  int m = 1;
  for (const auto& e : edges_) m = std::max(m, e.graph);
  return m;
}

int LevelGraph::edge_span(const Edge& e) const {
  int lu = level_of(e.from), lv = level_of(e.to);
  return (lv - lu + k_) % k_ + 1;
}

bool LevelGraph::is_proper() const {
  for (const auto& e : edges_) {
    int lu = level_of(e.from), lv = level_of(e.to);
    if (!(lu == lv - 1 || (lu == k_ && lv == 1))) return false;
  }
  return true;
}

Properized LevelGraph::make_proper() const {
  Properized out{LevelGraph(k_), {}, {}};
  for (const auto& [name, lvl] : levels_of_) out.graph.add_vertex(name, lvl);
  for (const auto& e : edges_) {
    int h = edge_span(e);
    if (h == 1)
      throw Error(ErrKind::Precondition, "intra-level edge unsupported: " + e.id);
    std::vector<std::string> chain;
    std::string prev = e.from;
    int lvl = level_of(e.from);
    for (int step = 0; step < h - 2; ++step) {
      lvl = next_level(lvl);
      std::string name = e.id + "@" + std::to_string(lvl);
      while (out.graph.has_vertex(name)) name += "'";
      out.graph.add_vertex(name, lvl);
      out.graph.add_edge(prev, name, e.graph);
      out.new_vertices.insert(name);
      chain.push_back(name);
      prev = name;
    }
    out.graph.add_edge(prev, e.to, e.graph);
    if (!chain.empty()) out.chains[e.id] = std::move(chain);
  }
  return out;
}

std::vector<Edge> LevelGraph::layer_edges(int level) const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (level_of(e.from) == level && level_of(e.to) == next_level(level))
      out.push_back(e);
  return out;
}

LevelGraph LevelGraph::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_levels = false;
  LevelGraph g(1);
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
    if (tok == "levels") {
      if (have_levels) fail("repeated levels line");
      int k;
      if (!(ls >> k) || k < 1) fail("levels needs a positive integer");
      g = LevelGraph(k);
      have_levels = true;
    } else if (tok == "v") {
      if (!have_levels) fail("levels line must come first");
      std::string name;
      int lvl;
      if (!(ls >> name >> lvl)) fail("v needs a name and a level");
      try {
        g.add_vertex(name, lvl);
      } catch (const Error& e) {
        fail(e.what());
      }
    } else if (tok == "e") {
      if (!have_levels) fail("levels line must come first");
      std::string from, to;
      if (!(ls >> from >> to)) fail("e needs two endpoints");
      int graph = 1;
      std::string gtok;
      if (ls >> gtok) {
        std::size_t used = 0;
        try {
          graph = std::stoi(gtok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != gtok.size() || graph < 1) fail("bad graph tag '" + gtok + "'");
      }
      try {
        g.add_edge(from, to, graph);
      } catch (const Error& e) {
        fail(e.what());
      }
    } else {
      fail("unknown directive '" + tok + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (!have_levels) {
    lineno = 1;
    fail("missing levels line");
  }
  return g;
}

std::string LevelGraph::to_text() const {
  std::ostringstream out;
  out << "levels " << k_ << "\n";
  for (const auto& [name, lvl] : levels_of_) out << "v " << name << " " << lvl << "\n";
  for (const auto& e : edges_) {
    out << "e " << e.from << " " << e.to;
    if (e.graph != 1) out << " " << e.graph;
    out << "\n";
  }
  return out.str();
}

namespace {

std::string fresh_name(const LevelGraph& g, std::string base) {
  while (g.has_vertex(base)) base += "'";
  return base;
}

}  // namespace

LevelGraph radial_to_torus(const LevelGraph& g,
                           std::vector<std::string>* gadget_vertices) {
  for (const auto& e : g.edges()) {
    int lu = g.level_of(e.from), lv = g.level_of(e.to);
    if (lu >= lv)
      throw Error(ErrKind::Precondition,
                  "radial reduction needs strictly upward edges, got " + e.id);
  }
  LevelGraph out = g;
  int k = g.levels();
  std::string a = fresh_name(out, "a");
  std::string c = fresh_name(out, "c");
  std::string b = fresh_name(out, "b");
  std::string d = fresh_name(out, "d");
  out.add_vertex(a, k);
  out.add_vertex(c, k);
  out.add_vertex(b, 1);
  out.add_vertex(d, 1);
  // The four-cycle a-b-c-d sits entirely in the wrap layer from level k to
  // level 1, zigzagging between the two boundary levels. Any v-consecutive
  // ordering of its edges interleaves the feet, so the drawn cycle always
  // loops the layer once and seals it off from other edges.
  out.add_edge(a, b);
  out.add_edge(c, b);
  out.add_edge(c, d);
  out.add_edge(a, d);
  if (gadget_vertices) *gadget_vertices = {a, b, c, d};
  return out;
}

LevelGraph cyclic_to_torus(const LevelGraph& g,
                           std::vector<std::string>* gadget_vertices) {
  if (g.levels() < 2)
    throw Error(ErrKind::Precondition, "cyclic reduction needs at least 2 levels");
  LevelGraph out = g;
  std::vector<std::string> ws;
  for (int i = 1; i <= g.levels(); ++i) {
    std::string w = fresh_name(out, "w" + std::to_string(i));
    out.add_vertex(w, i);
    ws.push_back(w);
  }
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) out.add_edge(ws[i], ws[i + 1]);
  out.add_edge(ws.back(), ws.front());
  if (gadget_vertices) *gadget_vertices = ws;
  return out;
}

}  // namespace lvp
