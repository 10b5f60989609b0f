#include "spqo.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <deque>
#include <functional>
#include <sstream>
#include <tuple>

namespace lvp {
namespace spqo {

namespace {

// Sorted leaf names of a tree, for totality checks against phi domains.
std::vector<std::string> ground_of(const PQTree& t) { return t.ground(); }

std::set<std::string> phi_image(const std::map<std::string, std::string>& phi) {
  std::set<std::string> img;
  for (const auto& [t, s] : phi) img.insert(s);
  return img;
}

std::map<std::string, std::string> phi_inverse(
    const std::map<std::string, std::string>& phi) {
  std::map<std::string, std::string> inv;
  for (const auto& [t, s] : phi) inv[s] = t;
  return inv;
}

}  // namespace

void Instance::add_tree(const TreeId& id, PQTree t) {
  if (id.empty()) throw Error(ErrKind::Precondition, "tree id must be nonempty");
  auto [it, fresh] = trees.emplace(id, std::move(t));
  if (!fresh) throw Error(ErrKind::Precondition, "duplicate tree id: " + id);
}

void Instance::add_arc(TreeId source, TreeId target,
                       std::map<std::string, std::string> phi) {
  arcs.push_back(Arc{std::move(source), std::move(target), std::move(phi)});
}

void Instance::validate() const {
  for (const Arc& a : arcs) {
    if (!trees.count(a.source))
      throw Error(ErrKind::Precondition, "arc refers to unknown tree: " + a.source);
    if (!trees.count(a.target))
      throw Error(ErrKind::Precondition, "arc refers to unknown tree: " + a.target);
    if (a.source == a.target)
      throw Error(ErrKind::Precondition, "arc loops on tree: " + a.source);

    const PQTree& src = trees.at(a.source);
    const PQTree& tgt = trees.at(a.target);

    // phi must be total on the target leaves...
    std::vector<std::string> dom;
    dom.reserve(a.phi.size());
    for (const auto& [t, s] : a.phi) dom.push_back(t);
    if (dom != ground_of(tgt))
      throw Error(ErrKind::Precondition,
                  "arc " + a.source + "->" + a.target +
                      ": map domain differs from target leaves");

    // ...injective, and land inside the source leaves.
    std::set<std::string> img = phi_image(a.phi);
    if (img.size() != a.phi.size())
      throw Error(ErrKind::Precondition,
                  "arc " + a.source + "->" + a.target + ": map is not injective");
    const std::vector<std::string>& sg = ground_of(src);
    for (const std::string& s : img)
      if (!std::binary_search(sg.begin(), sg.end(), s))
        throw Error(ErrKind::Precondition,
                    "arc " + a.source + "->" + a.target +
                        ": image leaf not in source: " + s);
  }

  // Kahn's algorithm over tree ids; leftovers witness a cycle.
  std::map<TreeId, int> indeg;
  std::map<TreeId, std::vector<TreeId>> succ;
  for (const auto& [id, t] : trees) indeg[id] = 0;
  for (const Arc& a : arcs) {
    indeg[a.target]++;
    succ[a.source].push_back(a.target);
  }
  std::deque<TreeId> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push_back(id);
  std::size_t seen = 0;
  while (!ready.empty()) {
    TreeId id = ready.front();
    ready.pop_front();
    seen++;
    for (const TreeId& nxt : succ[id])
      if (--indeg[nxt] == 0) ready.push_back(nxt);
  }
  if (seen != trees.size())
    throw Error(ErrKind::Precondition, "arc digraph has a cycle");
}

std::string Instance::dump() const {
  std::ostringstream out;
  out << "trees " << trees.size() << " arcs " << arcs.size()
      << (marked_infeasible ? " infeasible" : "") << "\n";
  for (const auto& [id, t] : trees) out << "tree " << id << " " << t.to_text() << "\n";
  std::vector<const Arc*> sorted;
  sorted.reserve(arcs.size());
  for (const Arc& a : arcs) sorted.push_back(&a);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Arc* a, const Arc* b) {
    return std::tie(a->source, a->target) < std::tie(b->source, b->target);
  });
  for (const Arc* a : sorted) {
    out << "arc " << a->source << " -> " << a->target << " {";
    bool first = true;
    for (const auto& [t, s] : a->phi) {
      out << (first ? " " : ", ") << t << ":" << s;
      first = false;
    }
    out << " }\n";
  }
  return out.str();
}

CircularOrder induce_through(const CircularOrder& source_order,
                             const std::map<std::string, std::string>& phi) {
  return source_order.restricted_to(phi_image(phi)).relabeled(phi_inverse(phi));
}

Instance normalize(Instance in) {
  in.validate();

  std::vector<const Arc*> order;
  order.reserve(in.arcs.size());
  for (const Arc& a : in.arcs) order.push_back(&a);
  std::stable_sort(order.begin(), order.end(), [](const Arc* a, const Arc* b) {
    return std::tie(a->source, a->target) < std::tie(b->source, b->target);
  });

  // Each pass pushes every source's projection into its target. A pass that
  // changes nothing is the fixpoint; when sources are never targets the
  // second pass merely confirms the first.
  const int kMaxPasses = 64;
  bool changed = true;
  int passes = 0;
  while (changed) {
    if (++passes > kMaxPasses)
      throw Error(ErrKind::Budget, "normalization did not settle");
    changed = false;
    for (const Arc* a : order) {
      const PQTree& src = in.trees.at(a->source);
      PQTree& tgt = in.trees.at(a->target);
      if (tgt.empty()) continue;
      PQTree pushed =
          src.project(phi_image(a->phi)).relabeled(phi_inverse(a->phi));
      PQTree replaced = pushed.intersect(tgt);
      if (replaced.to_text() != tgt.to_text()) {
        tgt = std::move(replaced);
        changed = true;
      }
    }
  }

  for (const auto& [id, t] : in.trees)
    if (t.empty()) in.marked_infeasible = true;
  return in;
}

namespace {

// Does some triple of marked leaves meet three different branches of the
// node? Exactly then does a triple separated in the child map onto leaves
// separated by this node.
bool branches_hit_thrice(const PQTree::NodeView& node,
                         const std::set<std::string>& marked) {
  int hit = 0;
  for (const auto& br : node.branches) {
    for (const std::string& leaf : br)
      if (marked.count(leaf)) {
        hit++;
        break;
      }
    if (hit >= 3) return true;
  }
  return false;
}

// A leaf triple separated by the node: least leaf out of each of its first
// three branches. Any such triple identifies the same fixing node upstream.
std::array<std::string, 3> separated_triple(const PQTree::NodeView& node) {
  assert(node.branches.size() >= 3);
  std::array<std::string, 3> out;
  for (int i = 0; i < 3; ++i)
    out[i] = *std::min_element(node.branches[i].begin(), node.branches[i].end());
  return out;
}

}  // namespace

std::map<TreeId, std::map<int, int>> fixedness(const Instance& in) {
  in.validate();

  // Topological order of tree ids, smallest id first among the ready ones.
  std::map<TreeId, int> indeg;
  for (const auto& [id, t] : in.trees) indeg[id] = 0;
  for (const Arc& a : in.arcs) indeg[a.target]++;
  std::vector<TreeId> topo;
  std::set<TreeId> done;
  while (topo.size() < in.trees.size()) {
    for (const auto& [id, d] : indeg) {
      if (d != 0 || done.count(id)) continue;
      topo.push_back(id);
      done.insert(id);
      for (const Arc& a : in.arcs)
        if (a.source == id) indeg[a.target]--;
      break;
    }
  }

  std::map<TreeId, std::vector<const Arc*>> arcs_out, arcs_in;
  for (const Arc& a : in.arcs) {
    arcs_out[a.source].push_back(&a);
    arcs_in[a.target].push_back(&a);
  }

  // counts[tree][node id] over all internal nodes, P and Q alike.
  std::map<TreeId, std::map<int, int>> counts;
  for (const TreeId& id : topo) {
    const PQTree& tree = in.trees.at(id);
    std::map<int, int>& mine = counts[id];

    // Mark, per outgoing arc, which source leaves are images of child leaves.
    std::vector<std::set<std::string>> child_images;
    for (const Arc* a : arcs_out[id]) child_images.push_back(phi_image(a->phi));

    for (const PQTree::NodeView& node : tree.internal_nodes()) {
      int omega = 0;
      for (const auto& img : child_images)
        if (branches_hit_thrice(node, img)) omega++;

      int from_parents = 0;
      for (const Arc* a : arcs_in[id]) {
        const PQTree& parent = in.trees.at(a->source);
        // An emptied parent admits no orders at all; the instance is already
        // infeasible and the parent has no node structure to inherit from.
        if (parent.empty()) continue;
        auto triple = separated_triple(node);
        int up = parent.median_node(a->phi.at(triple[0]), a->phi.at(triple[1]),
                                    a->phi.at(triple[2]));
        from_parents += counts.at(a->source).at(up) - 1;
      }
      mine[node.id] = omega + from_parents;
    }
  }

  // Report P-nodes only; Q-nodes hold their arrangement on their own.
  std::map<TreeId, std::map<int, int>> out;
  for (const auto& [id, per_node] : counts) {
    std::map<int, int> keep;
    for (const auto& [nid, c] : per_node)
      if (in.trees.at(id).node_is_p(nid)) keep[nid] = c;
    out[id] = std::move(keep);
  }
  return out;
}

bool is_2fixed(const Instance& in) {
  auto fx = fixedness(in);
  for (const auto& [id, per_node] : fx)
    for (const auto& [nid, c] : per_node)
      if (c > 2) return false;
  return true;
}

std::optional<Solution> solve(const Instance& in, std::uint64_t order_budget) {
  in.validate();
  if (in.marked_infeasible) return std::nullopt;
  for (const auto& [id, t] : in.trees)
    if (t.empty()) return std::nullopt;

  std::map<TreeId, std::vector<const Arc*>> arcs_out, arcs_in;
  for (const Arc& a : in.arcs) {
    arcs_out[a.source].push_back(&a);
    arcs_in[a.target].push_back(&a);
  }

  std::vector<TreeId> sources, isolated;
  for (const auto& [id, t] : in.trees) {
    bool out = arcs_out.count(id), inn = arcs_in.count(id);
    if (out && inn)
      throw Error(ErrKind::Precondition,
                  "unsupported shape: tree is both a source and a target: " + id);
    if (out && arcs_out[id].size() > 2)
      throw Error(ErrKind::Precondition,
                  "unsupported shape: source with more than two arcs: " + id);
    if (inn && arcs_in[id].size() > 2)
      throw Error(ErrKind::Precondition,
                  "unsupported shape: target with more than two arcs: " + id);
    if (out) sources.push_back(id);
    if (!out && !inn) isolated.push_back(id);
  }

  Solution sol;
  for (const TreeId& id : isolated) sol[id] = in.trees.at(id).first_order();

  std::map<TreeId, CircularOrder> picked;

  // A target is consistent with the current partial assignment when every
  // assigned parent induces an order its tree admits, and two assigned
  // parents induce the same one.
  auto target_ok = [&](const TreeId& tid) -> bool {
    const CircularOrder* seen = nullptr;
    CircularOrder first;
    for (const Arc* a : arcs_in[tid]) {
      auto it = picked.find(a->source);
      if (it == picked.end()) continue;
      CircularOrder induced = induce_through(it->second, a->phi);
      if (!in.trees.at(tid).contains(induced)) return false;
      if (seen && !seen->same_order(induced)) return false;
      first = std::move(induced);
      seen = &first;
    }
    return true;
  };

  std::uint64_t tried = 0;

  // Depth-first over source assignments. Always branch on the source that
  // completes the most targets, so contradictions between parents surface
  // while the partial assignment is still cheap to extend.
  std::function<bool()> descend = [&]() -> bool {
    if (picked.size() == sources.size()) return true;
    TreeId best;
    int best_score = -1;
    for (const TreeId& id : sources) {
      if (picked.count(id)) continue;
      int score = 0;
      for (const Arc* a : arcs_out[id]) {
        bool others_done = true;
        for (const Arc* b : arcs_in[a->target])
          if (b->source != id && !picked.count(b->source)) others_done = false;
        if (others_done) score++;
      }
      if (score > best_score || (score == best_score && id < best)) {
        best_score = score;
        best = id;
      }
    }

    bool found = false;
    in.trees.at(best).for_each_order([&](const CircularOrder& o) {
      if (++tried > order_budget)
        throw Error(ErrKind::Budget, "solver order budget exceeded");
      picked.emplace(best, o);
      bool fine = true;
      for (const Arc* a : arcs_out[best])
        if (!target_ok(a->target)) {
          fine = false;
          break;
        }
      if (fine && descend()) {
        found = true;
        return false;  // keep the assignment, stop enumerating
      }
      picked.erase(best);
      return true;
    });
    return found;
  };

  if (!descend()) return std::nullopt;

  for (const auto& [id, o] : picked) sol[id] = o;
  for (const auto& [id, t] : in.trees) {
    if (sol.count(id)) continue;
    // Pure target: all parents are assigned and agree; read off either one.
    const Arc* a = arcs_in.at(id).front();
    sol[id] = induce_through(picked.at(a->source), a->phi);
  }

  if (!check_solution(in, sol))
    throw std::logic_error("solver produced an assignment its own check rejects");
  return sol;
}

bool check_solution(const Instance& in, const Solution& sol) {
  for (const auto& [id, t] : in.trees) {
    auto it = sol.find(id);
    if (it == sol.end())
      throw Error(ErrKind::Precondition, "solution misses tree: " + id);
    if (t.empty()) return false;
    if (!t.contains(it->second)) return false;
  }
  for (const Arc& a : in.arcs) {
    CircularOrder induced = induce_through(sol.at(a.source), a.phi);
    if (!induced.same_order(sol.at(a.target))) return false;
  }
  return true;
}

}  // namespace spqo
}  // namespace lvp
