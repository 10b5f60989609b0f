#include "oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>

namespace lvp {
namespace oracle {

namespace {

struct StepCounter {
  std::uint64_t used = 0;
  std::uint64_t cap;
  explicit StepCounter(std::uint64_t c) : cap(c) {}
  void tick(std::uint64_t n = 1) {
    used += n;
    if (used > cap) throw Error(ErrKind::Budget, "oracle step budget exceeded");
  }
};

// All circular orders on the labels, smallest label pinned first so the
// sequence is lexicographic and free of rotation duplicates.
std::vector<std::vector<std::string>> circular_orders(std::vector<std::string> elems) {
  std::sort(elems.begin(), elems.end());
  if (elems.size() <= 2) return {elems};
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> rest(elems.begin() + 1, elems.end());
  do {
    std::vector<std::string> seq;
    seq.push_back(elems.front());
    seq.insert(seq.end(), rest.begin(), rest.end());
    out.push_back(std::move(seq));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

bool edges_v_consecutive(const std::vector<std::string>& order,
                         const std::map<std::string, std::set<std::string>>& incident) {
  for (const auto& [v, ids] : incident) {
    int runs = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      bool a = ids.count(order[i]) > 0;
      bool b = ids.count(order[(i + 1) % order.size()]) > 0;
      if (a && !b) ++runs;
    }
    if (runs > 1) return false;
  }
  return true;
}

// Endpoint sequence with consecutive repeats collapsed, wrapping included.
std::vector<std::string> collapse_runs(const std::vector<std::string>& endpoints) {
  std::vector<std::string> seq;
  for (const auto& v : endpoints)
    if (seq.empty() || seq.back() != v) seq.push_back(v);
  if (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
  return seq;
}

bool same_circular(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  auto at = std::find(b.begin(), b.end(), a.front());
  if (at == b.end()) return false;
  std::size_t off = static_cast<std::size_t>(at - b.begin());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[(off + i) % b.size()]) return false;
  return true;
}

std::vector<std::string> restriction(const CircularOrder& o,
                                     const std::set<std::string>& keep) {
  std::vector<std::string> out;
  for (const auto& e : o.elems())
    if (keep.count(e)) out.push_back(e);
  return out;
}

std::optional<std::vector<std::string>> layer_edge_order(
    const LevelGraph& g, int level, const CircularOrder& lower,
    const CircularOrder& upper, const OracleBudget& budget, StepCounter& steps) {
  std::vector<Edge> edges = g.layer_edges(level);
  if (edges.empty()) return std::vector<std::string>{};
  if (edges.size() > budget.max_layer_edges)
    throw Error(ErrKind::Budget, "layer exceeds the oracle edge budget");

  std::map<std::string, const Edge*> by_id;
  std::map<std::string, std::set<std::string>> incident;
  std::vector<std::string> ids;
  std::set<std::string> lower_active, upper_active;
  for (const Edge& e : edges) {
    by_id[e.id] = &e;
    ids.push_back(e.id);
    incident[e.from + "\n+"].insert(e.id);
    incident[e.to + "\n-"].insert(e.id);
    lower_active.insert(e.from);
    upper_active.insert(e.to);
  }

  std::vector<std::string> want_lower = restriction(lower, lower_active);
  std::vector<std::string> want_upper = restriction(upper, upper_active);

  for (const auto& cand : circular_orders(ids)) {
    steps.tick();
    if (!edges_v_consecutive(cand, incident)) continue;
    std::vector<std::string> lo, hi;
    for (const auto& id : cand) lo.push_back(by_id.at(id)->from);
    for (const auto& id : cand) hi.push_back(by_id.at(id)->to);
    if (!same_circular(collapse_runs(lo), want_lower)) continue;
    if (!same_circular(collapse_runs(hi), want_upper)) continue;
    return cand;
  }
  return std::nullopt;
}

}  // namespace

std::optional<CircularOrder> brute_layer_feasible(const LevelGraph& g, int level,
                                                  const CircularOrder& lower,
                                                  const CircularOrder& upper,
                                                  const OracleBudget& budget) {
  StepCounter steps(budget.max_steps);
  auto got = layer_edge_order(g, level, lower, upper, budget, steps);
  if (!got) return std::nullopt;
  return CircularOrder(*got);
}

std::optional<torus::TorusEmbedding> brute_torus(const LevelGraph& g,
                                                 const OracleBudget& budget) {
  if (!g.is_proper())
    throw Error(ErrKind::Precondition, "torus oracle needs a proper graph");
  int k = g.levels();
  StepCounter steps(budget.max_steps);

  std::vector<int> busy_levels;
  std::vector<std::vector<std::vector<std::string>>> choices;
  for (int i = 1; i <= k; ++i) {
    std::vector<std::string> vs = g.vertices_on_level(i);
    if (vs.size() > budget.max_level_vertices)
      throw Error(ErrKind::Budget, "level exceeds the oracle vertex budget");
    if (vs.empty()) continue;
    busy_levels.push_back(i);
    choices.push_back(circular_orders(vs));
  }

  std::vector<std::size_t> pick(busy_levels.size(), 0);
  while (true) {
    steps.tick();
    std::map<int, CircularOrder> levels;
    for (int i = 1; i <= k; ++i) levels[i] = CircularOrder();
    for (std::size_t j = 0; j < busy_levels.size(); ++j)
      levels[busy_levels[j]] = CircularOrder(choices[j][pick[j]]);

    bool all_ok = true;
    std::map<int, CircularOrder> layer_orders;
    for (int i = 1; i <= k && all_ok; ++i) {
      if (g.layer_edges(i).empty()) continue;
      auto o = layer_edge_order(g, i, levels.at(i), levels.at(g.next_level(i)),
                                budget, steps);
      if (!o)
        all_ok = false;
      else
        layer_orders[i] = CircularOrder(*o);
    }
    if (all_ok) {
      torus::TorusEmbedding emb;
      emb.level_orders = std::move(levels);
      emb.layer_orders = std::move(layer_orders);
      return emb;
    }

    // odometer, most significant digit first so the scan is lexicographic
    std::size_t j = pick.size();
    while (j > 0) {
      --j;
      if (++pick[j] < choices[j].size()) break;
      pick[j] = 0;
      if (j == 0) return std::nullopt;
    }
    if (pick.empty()) return std::nullopt;
  }
}

namespace {

// -------- simultaneous level planarity (plane) --------
//
// A pair of same-graph edges in one layer must not invert, which makes the
// boolean "a left of b" variables of the two endpoint pairs equal. A signed
// union-find glues those variables into classes; the search then assigns one
// orientation per class, maintaining each level's precedence relation
// transitively closed and backtracking on directed cycles. Every total order
// tuple corresponds to exactly one class assignment, so exhausting the
// assignments is exhausting the definition.

struct SimLevel {
  std::vector<std::string> names;           // sorted
  std::map<std::string, int> index;
  std::vector<std::uint64_t> after;         // closure: bit j set = i precedes j
};

struct PairVar {
  int level;  // index into levels vector
  int a, b;   // a < b, vertex indices in the level
};

struct SignedUF {
  std::vector<int> parent;
  std::vector<int> parity;  // relative to parent
  explicit SignedUF(std::size_t n) : parent(n), parity(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::pair<int, int> find(int x) {
    if (parent[x] == x) return {x, 0};
    auto [r, p] = find(parent[x]);
    parent[x] = r;
    parity[x] ^= p;
    return {r, parity[x]};
  }
  // Returns false on a parity contradiction.
  bool merge(int x, int y, int rel) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) return (px ^ py) == rel;
    parent[rx] = ry;
    parity[rx] = px ^ py ^ rel;
    return true;
  }
};

}  // namespace

std::optional<SimWitness> brute_sim_level(const LevelGraph& g,
                                          const OracleBudget& budget) {
  int k = g.levels();
  for (const Edge& e : g.edges())
    if (g.level_of(e.to) != g.level_of(e.from) + 1)
      throw Error(ErrKind::Precondition,
                  "plane instance has an edge that does not climb one level: " + e.id);

  StepCounter steps(budget.max_steps);

  std::vector<SimLevel> levels(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    SimLevel& L = levels[static_cast<std::size_t>(i - 1)];
    L.names = g.vertices_on_level(i);
    if (L.names.size() > budget.max_sim_vertices || L.names.size() > 64)
      throw Error(ErrKind::Budget, "level exceeds the oracle plane-width budget");
    for (std::size_t j = 0; j < L.names.size(); ++j)
      L.index[L.names[j]] = static_cast<int>(j);
    L.after.assign(L.names.size(), 0);
  }

  // variable ids: per level, pair (a,b) with a < b
  std::vector<int> var_base(static_cast<std::size_t>(k) + 1, 0);
  for (int i = 0; i < k; ++i) {
    std::size_t n = levels[static_cast<std::size_t>(i)].names.size();
    var_base[static_cast<std::size_t>(i) + 1] =
        var_base[static_cast<std::size_t>(i)] + static_cast<int>(n * (n - 1) / 2);
  }
  auto var_id = [&](int lvl, int a, int b) {
    int n = static_cast<int>(levels[static_cast<std::size_t>(lvl)].names.size());
    return var_base[static_cast<std::size_t>(lvl)] + a * n - a * (a + 1) / 2 +
           (b - a - 1);
  };
  int total_vars = var_base[static_cast<std::size_t>(k)];

  SignedUF uf(static_cast<std::size_t>(std::max(total_vars, 1)));
  std::set<int> constrained;

  // group edges by (layer, graph)
  std::map<std::pair<int, int>, std::vector<const Edge*>> groups;
  for (const Edge& e : g.edges())
    groups[{g.level_of(e.from), e.graph}].push_back(&e);

  for (const auto& [key, es] : groups) {
    int lvl = key.first - 1;
    for (std::size_t x = 0; x < es.size(); ++x)
      for (std::size_t y = x + 1; y < es.size(); ++y) {
        const Edge& e = *es[x];
        const Edge& f = *es[y];
        if (e.from == f.from || e.to == f.to) continue;
        int u = levels[static_cast<std::size_t>(lvl)].index.at(e.from);
        int u2 = levels[static_cast<std::size_t>(lvl)].index.at(f.from);
        int v = levels[static_cast<std::size_t>(lvl) + 1].index.at(e.to);
        int v2 = levels[static_cast<std::size_t>(lvl) + 1].index.at(f.to);
        // "u left of u2" equals "v left of v2"; flip parity when the
        // canonical (min,max) variable reads the pair backwards
        int flip = 0;
        int a = u, b = u2;
        if (a > b) {
          std::swap(a, b);
          flip ^= 1;
        }
        int c = v, d = v2;
        if (c > d) {
          std::swap(c, d);
          flip ^= 1;
        }
        int x1 = var_id(lvl, a, b);
        int x2 = var_id(lvl + 1, c, d);
        steps.tick();
        if (!uf.merge(x1, x2, flip)) return std::nullopt;
        constrained.insert(x1);
        constrained.insert(x2);
      }
  }

  // classes in deterministic order of their smallest variable id
  std::map<int, std::vector<std::pair<int, int>>> classes;  // root -> (var, parity)
  for (int v : constrained) {
    auto [r, p] = uf.find(v);
    classes[r].push_back({v, p});
  }
  std::vector<std::vector<std::pair<int, int>>> class_list;
  {
    std::map<int, int> first_var;
    for (auto& [r, mem] : classes) {
      std::sort(mem.begin(), mem.end());
      first_var[mem.front().first] = r;
    }
    for (const auto& [fv, r] : first_var) class_list.push_back(classes.at(r));
  }

  auto decode = [&](int var) {
    int lvl = 0;
    while (var_base[static_cast<std::size_t>(lvl) + 1] <= var) ++lvl;
    int off = var - var_base[static_cast<std::size_t>(lvl)];
    int n = static_cast<int>(levels[static_cast<std::size_t>(lvl)].names.size());
    int a = 0;
    while (off >= n - a - 1) {
      off -= n - a - 1;
      ++a;
    }
    return PairVar{lvl, a, a + off + 1};
  };

  // closure edge insert; false on a directed cycle
  auto add_before = [&](int lvl, int a, int b) {
    SimLevel& L = levels[static_cast<std::size_t>(lvl)];
    std::uint64_t abit = 1ull << a, bbit = 1ull << b;
    if (L.after[static_cast<std::size_t>(b)] & abit) return false;
    if (L.after[static_cast<std::size_t>(a)] & bbit) return true;
    std::uint64_t gain = L.after[static_cast<std::size_t>(b)] | bbit;
    for (std::size_t i = 0; i < L.names.size(); ++i)
      if (i == static_cast<std::size_t>(a) || (L.after[i] & abit)) L.after[i] |= gain;
    return true;
  };

  std::vector<int> assignment(class_list.size(), -1);

  // sign semantics: 0 means every member var is true xor its parity, where
  // "true" reads "smaller index precedes larger index"
  auto apply_class = [&](std::size_t ci, int sign) {
    for (const auto& [var, par] : class_list[ci]) {
      PairVar pv = decode(var);
      bool fwd = (sign ^ par) == 0;
      steps.tick();
      if (!add_before(pv.level, fwd ? pv.a : pv.b, fwd ? pv.b : pv.a)) return false;
    }
    return true;
  };

  // A class whose pair is already transitively forced has only one sign left.
  auto forced_sign = [&](std::size_t ci) {
    for (const auto& [var, par] : class_list[ci]) {
      PairVar pv = decode(var);
      const SimLevel& L = levels[static_cast<std::size_t>(pv.level)];
      bool ab = L.after[static_cast<std::size_t>(pv.a)] & (1ull << pv.b);
      bool ba = L.after[static_cast<std::size_t>(pv.b)] & (1ull << pv.a);
      if (ab) return par;      // pair runs forward, so sign ^ par == 0
      if (ba) return 1 ^ par;  // pair runs backward
    }
    return -1;
  };

  std::vector<std::vector<std::uint64_t>> trail;
  auto snapshot = [&]() {
    std::vector<std::uint64_t> flat;
    for (const auto& L : levels)
      flat.insert(flat.end(), L.after.begin(), L.after.end());
    trail.push_back(std::move(flat));
  };
  auto rollback = [&]() {
    const std::vector<std::uint64_t>& flat = trail.back();
    std::size_t at = 0;
    for (auto& L : levels)
      for (auto& row : L.after) row = flat[at++];
    trail.pop_back();
  };

  std::function<bool(std::size_t)> search = [&](std::size_t next) -> bool {
    // propagate forced classes first
    for (std::size_t ci = 0; ci < class_list.size(); ++ci) {
      if (assignment[ci] != -1) continue;
      int f = forced_sign(ci);
      if (f == -1) continue;
      snapshot();
      assignment[ci] = f;
      if (apply_class(ci, f) && search(next)) return true;
      assignment[ci] = -1;
      rollback();
      return false;
    }
    std::size_t ci = next;
    while (ci < class_list.size() && assignment[ci] != -1) ++ci;
    if (ci == class_list.size()) return true;
    for (int sign : {0, 1}) {
      steps.tick();
      snapshot();
      assignment[ci] = sign;
      if (apply_class(ci, sign) && search(ci + 1)) return true;
      assignment[ci] = -1;
      rollback();
    }
    return false;
  };

  if (!search(0)) return std::nullopt;

  SimWitness w;
  for (int i = 1; i <= k; ++i) {
    SimLevel& L = levels[static_cast<std::size_t>(i - 1)];
    std::size_t n = L.names.size();
    std::vector<bool> placed(n, false);
    std::vector<std::string> order;
    for (std::size_t round = 0; round < n; ++round) {
      for (std::size_t cand = 0; cand < n; ++cand) {
        if (placed[cand]) continue;
        bool ready = true;
        for (std::size_t other = 0; other < n; ++other)
          if (!placed[other] &&
              (L.after[other] & (1ull << cand)) && other != cand) {
            ready = false;
            break;
          }
        if (ready) {
          placed[cand] = true;
          order.push_back(L.names[cand]);
          break;
        }
      }
    }
    if (order.size() != n)
      throw std::logic_error("acyclic precedence had no linear extension");
    w[i] = std::move(order);
  }
  return w;
}

}  // namespace oracle
}  // namespace lvp
