#include "pq_tree.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>

namespace lvp {
namespace pq {

namespace {

std::string join(const std::vector<Elem>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CircularOrder

CircularOrder::CircularOrder(std::vector<Elem> elems) : elems_(std::move(elems)) {
  std::set<Elem> seen(elems_.begin(), elems_.end());
  if (seen.size() != elems_.size())
    throw Error(ErrKind::Precondition, "circular order has repeated labels");
}

CircularOrder CircularOrder::canonical() const {
  if (elems_.size() <= 1) return *this;
  auto it = std::min_element(elems_.begin(), elems_.end());
  std::vector<Elem> rot;
  rot.reserve(elems_.size());
  rot.insert(rot.end(), it, elems_.end());
  rot.insert(rot.end(), elems_.begin(), it);
  CircularOrder out;
  out.elems_ = std::move(rot);
  return out;
}

CircularOrder CircularOrder::reversed() const {
  CircularOrder out;
  out.elems_.assign(elems_.rbegin(), elems_.rend());
  return out;
}

CircularOrder CircularOrder::restricted_to(const std::set<Elem>& keep) const {
  CircularOrder out;
  for (const auto& e : elems_)
    if (keep.count(e)) out.elems_.push_back(e);
  return out;
}

CircularOrder CircularOrder::relabeled(const std::map<Elem, Elem>& rename) const {
  std::vector<Elem> out;
  out.reserve(elems_.size());
  for (const auto& e : elems_) {
    auto it = rename.find(e);
    if (it == rename.end())
      throw Error(ErrKind::Precondition, "relabel map misses element " + e);
    out.push_back(it->second);
  }
  return CircularOrder(std::move(out));
}

bool CircularOrder::same_order(const CircularOrder& other) const {
  if (elems_.size() != other.elems_.size()) return false;
  return canonical().elems_ == other.canonical().elems_;
}

bool CircularOrder::operator<(const CircularOrder& other) const {
  return canonical().elems_ < other.canonical().elems_;
}

std::string CircularOrder::to_text() const { return "(" + join(elems_, " ") + ")"; }

// ---------------------------------------------------------------------------
// Construction

static std::vector<Elem> sorted_ground(std::vector<Elem> ground, const char* op) {
  if (ground.empty())
    throw Error(ErrKind::Precondition, std::string(op) + ": ground set is empty");
  std::sort(ground.begin(), ground.end());
  if (std::adjacent_find(ground.begin(), ground.end()) != ground.end())
    throw Error(ErrKind::Precondition, std::string(op) + ": ground set has duplicates");
  return ground;
}

PQTree PQTree::universal(std::vector<Elem> ground) {
  PQTree t;
  t.ground_ = sorted_ground(std::move(ground), "universal");
  std::size_t n = t.ground_.size();
  t.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes_[i].kind = Node::Leaf;
    t.nodes_[i].elem = static_cast<int>(i);
  }
  if (n == 2) {
    t.nodes_[0].nbrs = {1};
    t.nodes_[1].nbrs = {0};
  } else if (n >= 3) {
    Node center;
    center.kind = Node::P;
    for (std::size_t i = 0; i < n; ++i) {
      center.nbrs.push_back(static_cast<int>(i));
      t.nodes_[i].nbrs = {static_cast<int>(n)};
    }
    t.nodes_.push_back(std::move(center));
  }
  return t;
}

PQTree PQTree::empty_tree(std::vector<Elem> ground) {
  PQTree t;
  t.ground_ = sorted_ground(std::move(ground), "empty_tree");
  t.empty_ = true;
  return t;
}

int PQTree::elem_index(const Elem& e) const {
  auto it = std::lower_bound(ground_.begin(), ground_.end(), e);
  if (it == ground_.end() || *it != e) return -1;
  return static_cast<int>(it - ground_.begin());
}

void PQTree::check_subset(const std::set<Elem>& x, const char* op) const {
  for (const auto& e : x)
    if (elem_index(e) < 0)
      throw Error(ErrKind::Precondition,
                  std::string(op) + ": element " + e + " is not in the ground set");
}

std::vector<int> PQTree::branch_leaves(int from, int into) const {
  std::vector<int> out;
  // Iterative DFS over the branch entered along from -> into.
  std::vector<std::pair<int, int>> stack{{into, from}};
  while (!stack.empty()) {
    auto [v, par] = stack.back();
    stack.pop_back();
    const Node& nd = nodes_[v];
    if (nd.kind == Node::Leaf) {
      out.push_back(nd.elem);
      continue;
    }
    for (int w : nd.nbrs)
      if (w != par) stack.push_back({w, v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form: contract trivial internal nodes, retag 3-way Q-nodes as
// P-nodes, order neighbor lists deterministically, renumber compactly.

void PQTree::normalize() {
  std::size_t n = ground_.size();
  if (empty_) {
    nodes_.clear();
    return;
  }
  std::vector<char> dead(nodes_.size(), 0);
  auto replace_in = [&](int a, int olds, int news) {
    for (int& w : nodes_[a].nbrs)
      if (w == olds) {
        w = news;
        return;
      }
    assert(false && "neighbor link missing");
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      if (dead[v] || nodes_[v].kind == Node::Leaf) continue;
      Node& nd = nodes_[v];
      std::size_t deg = nd.nbrs.size();
      if (deg == 3 && nd.kind == Node::Q) {
        nd.kind = Node::P;
        changed = true;
      } else if (deg == 2) {
        int a = nd.nbrs[0], b = nd.nbrs[1];
        replace_in(a, static_cast<int>(v), b);
        replace_in(b, static_cast<int>(v), a);
        dead[v] = 1;
        changed = true;
      } else if (deg == 1) {
        int a = nd.nbrs[0];
        auto& an = nodes_[a].nbrs;
        an.erase(std::find(an.begin(), an.end(), static_cast<int>(v)));
        dead[v] = 1;
        changed = true;
      } else if (deg == 0) {
        dead[v] = 1;
        changed = true;
      }
    }
  }

  // Smallest leaf label reachable through each branch; distinct across the
  // branches of one node, so it is a strict sort key.
  std::function<int(int, int)> min_leaf = [&](int from, int into) -> int {
    const Node& nd = nodes_[into];
    if (nd.kind == Node::Leaf) return nd.elem;
    int best = static_cast<int>(n);
    for (int w : nd.nbrs)
      if (w != from) best = std::min(best, min_leaf(into, w));
    return best;
  };
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (dead[v] || nodes_[v].kind == Node::Leaf) continue;
    Node& nd = nodes_[v];
    std::vector<int> keys(nd.nbrs.size());
    for (std::size_t i = 0; i < nd.nbrs.size(); ++i)
      keys[i] = min_leaf(static_cast<int>(v), nd.nbrs[i]);
    if (nd.kind == Node::P) {
      std::vector<std::size_t> idx(nd.nbrs.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return keys[a] < keys[b];
      });
      std::vector<int> nb;
      for (std::size_t i : idx) nb.push_back(nd.nbrs[i]);
      nd.nbrs = std::move(nb);
    } else {
      // Pick the rotation and direction with the lexicographically smallest
      // key sequence. Rotation and reversal leave Q semantics unchanged.
      std::size_t d = nd.nbrs.size();
      std::vector<int> best;
      std::vector<int> bestNb;
      for (int dir : {1, -1}) {
        for (std::size_t s = 0; s < d; ++s) {
          std::vector<int> cand(d);
          std::vector<int> candNb(d);
          for (std::size_t i = 0; i < d; ++i) {
            long j = (static_cast<long>(s) + dir * static_cast<long>(i)) %
                     static_cast<long>(d);
            if (j < 0) j += static_cast<long>(d);
            cand[i] = keys[j];
            candNb[i] = nd.nbrs[j];
          }
          if (best.empty() || cand < best) {
            best = std::move(cand);
            bestNb = std::move(candNb);
          }
        }
      }
      nd.nbrs = std::move(bestNb);
    }
  }

  // Renumber: leaves keep slots 0..n-1 in ground order, internal nodes are
  // numbered in first-visit order of a DFS from leaf 0.
  std::vector<int> newid(nodes_.size(), -1);
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (!dead[v] && nodes_[v].kind == Node::Leaf) newid[v] = nodes_[v].elem;
  int next = static_cast<int>(n);
  std::vector<int> stack{0};
  std::vector<char> vis(nodes_.size(), 0);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (vis[v]) continue;
    vis[v] = 1;
    if (nodes_[v].kind != Node::Leaf && newid[v] < 0) newid[v] = next++;
    for (auto it = nodes_[v].nbrs.rbegin(); it != nodes_[v].nbrs.rend(); ++it)
      if (!vis[*it]) stack.push_back(*it);
  }
  std::vector<Node> out(next);
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (dead[v] || newid[v] < 0) continue;
    Node nd = nodes_[v];
    for (int& w : nd.nbrs) w = newid[w];
    out[newid[v]] = std::move(nd);
  }
  nodes_ = std::move(out);
}

// ---------------------------------------------------------------------------
// Rooted scratch tree used by reduce and the order generator. Rooting at a
// leaf outside the constraint set turns circular consecutivity into linear
// consecutivity over the frontier, where the classic empty/full/partial
// case analysis applies.

namespace {

struct RNode {
  enum K { RLeaf, RP, RQ } kind = RLeaf;
  int elem = -1;
  std::vector<RNode> ch;
  int total = 0;
  int inx = 0;
};

using Snake = std::vector<RNode>;  // blocks ordered from the non-x end to the x end

bool is_empty_lbl(const RNode& n) { return n.inx == 0; }
bool is_full_lbl(const RNode& n) { return n.inx == n.total; }
bool is_mixed_lbl(const RNode& n) { return n.inx > 0 && n.inx < n.total; }

RNode pack_p(std::vector<RNode> kids) {
  assert(!kids.empty());
  if (kids.size() == 1) return std::move(kids[0]);
  RNode p;
  p.kind = RNode::RP;
  for (const auto& k : kids) {
    p.total += k.total;
    p.inx += k.inx;
  }
  p.ch = std::move(kids);
  return p;
}

RNode make_seq_node(Snake blocks) {
  assert(blocks.size() >= 2);
  RNode q;
  q.kind = blocks.size() == 2 ? RNode::RP : RNode::RQ;
  for (const auto& b : blocks) {
    q.total += b.total;
    q.inx += b.inx;
  }
  q.ch = std::move(blocks);
  return q;
}

// Mixed non-root node: succeed iff its frontier can be arranged with the
// x part forming one end, and report the forced block sequence.
std::optional<Snake> reduce_interior(RNode nd) {
  assert(is_mixed_lbl(nd));
  if (nd.kind == RNode::RP) {
    std::vector<RNode> e, f, m;
    for (auto& c : nd.ch) {
      if (is_empty_lbl(c))
        e.push_back(std::move(c));
      else if (is_full_lbl(c))
        f.push_back(std::move(c));
      else
        m.push_back(std::move(c));
    }
    if (m.size() >= 2) return std::nullopt;
    Snake out;
    if (!m.empty()) {
      auto sub = reduce_interior(std::move(m[0]));
      if (!sub) return std::nullopt;
      if (!e.empty()) out.push_back(pack_p(std::move(e)));
      for (auto& b : *sub) out.push_back(std::move(b));
      if (!f.empty()) out.push_back(pack_p(std::move(f)));
    } else {
      // Mixed with no mixed child: both sides present.
      out.push_back(pack_p(std::move(e)));
      out.push_back(pack_p(std::move(f)));
    }
    return out;
  }
  // Q-node: the child sequence must read empties, at most one mixed child,
  // then fulls, in the stored direction or its reverse.
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<RNode> cs = nd.ch;
    if (attempt == 1) std::reverse(cs.begin(), cs.end());
    std::size_t i = 0;
    while (i < cs.size() && is_empty_lbl(cs[i])) ++i;
    assert(i < cs.size());
    bool ok = true;
    std::size_t mixed_at = cs.size();
    if (is_mixed_lbl(cs[i])) {
      mixed_at = i;
      ++i;
    }
    for (std::size_t j = i; j < cs.size(); ++j)
      if (!is_full_lbl(cs[j])) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Snake out;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (j == mixed_at) {
        auto sub = reduce_interior(std::move(cs[j]));
        if (!sub) return std::nullopt;
        for (auto& b : *sub) out.push_back(std::move(b));
      } else {
        out.push_back(std::move(cs[j]));
      }
    }
    return out;
  }
  return std::nullopt;
}

// Node under which all x leaves live and no single child holds them all.
// The x part must come out consecutive somewhere inside this frontier.
bool reduce_apply(RNode& nd) {
  assert(nd.kind != RNode::RLeaf);
  if (nd.kind == RNode::RP) {
    std::vector<RNode> e, f, m;
    for (auto& c : nd.ch) {
      if (is_empty_lbl(c))
        e.push_back(std::move(c));
      else if (is_full_lbl(c))
        f.push_back(std::move(c));
      else
        m.push_back(std::move(c));
    }
    if (m.size() > 2) return false;
    if (m.empty()) {
      assert(f.size() >= 2 && !e.empty());
      RNode fp = pack_p(std::move(f));
      e.push_back(std::move(fp));
      nd.ch = std::move(e);
      return true;
    }
    Snake snake;
    if (m.size() == 1) {
      auto sub = reduce_interior(std::move(m[0]));
      if (!sub) return false;
      snake = std::move(*sub);
      if (!f.empty()) snake.push_back(pack_p(std::move(f)));
    } else {
      auto sub1 = reduce_interior(std::move(m[0]));
      if (!sub1) return false;
      auto sub2 = reduce_interior(std::move(m[1]));
      if (!sub2) return false;
      snake = std::move(*sub1);
      if (!f.empty()) snake.push_back(pack_p(std::move(f)));
      // The second mixed child joins full side first. Reversing the block
      // order is enough: frontier sets of subtrees are closed under reversal.
      for (auto it = sub2->rbegin(); it != sub2->rend(); ++it)
        snake.push_back(std::move(*it));
    }
    RNode seq = make_seq_node(std::move(snake));
    if (e.empty()) {
      nd = std::move(seq);
    } else {
      e.push_back(std::move(seq));
      nd.ch = std::move(e);
    }
    return true;
  }
  // Q-node: the non-empty children must already sit consecutively; a mixed
  // child is allowed only at the two boundaries of that window, facing the
  // full run with its full side.
  auto& cs = nd.ch;
  std::size_t lo = 0, hi = cs.size() - 1;
  while (lo < cs.size() && is_empty_lbl(cs[lo])) ++lo;
  while (hi > 0 && is_empty_lbl(cs[hi])) --hi;
  assert(lo <= hi && lo < cs.size());
  // A single non-empty child would hold all of x and the descend loop would
  // have moved past this node.
  assert(lo != hi);
  if (lo == hi) return false;
  for (std::size_t j = lo + 1; j < hi; ++j)
    if (!is_full_lbl(cs[j])) return false;
  std::optional<Snake> subLo, subHi;
  if (is_mixed_lbl(cs[lo])) {
    subLo = reduce_interior(std::move(cs[lo]));
    if (!subLo) return false;
  }
  if (is_mixed_lbl(cs[hi])) {
    subHi = reduce_interior(std::move(cs[hi]));
    if (!subHi) return false;
  }
  std::vector<RNode> out;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (j == lo && subLo) {
      for (auto& b : *subLo) out.push_back(std::move(b));
    } else if (j == hi && subHi) {
      // Full side faces left, toward the window.
      for (auto it = subHi->rbegin(); it != subHi->rend(); ++it)
        out.push_back(std::move(*it));
    } else {
      out.push_back(std::move(cs[j]));
    }
  }
  nd.ch = std::move(out);
  return true;
}

bool rooted_reduce(RNode& root, int xsize) {
  RNode* cur = &root;
  while (true) {
    if (cur->inx == cur->total) return true;  // x fills this whole frontier
    RNode* next = nullptr;
    for (auto& c : cur->ch)
      if (c.inx == xsize) {
        next = &c;
        break;
      }
    if (!next) break;
    cur = next;
  }
  if (cur->kind == RNode::RLeaf) return true;
  return reduce_apply(*cur);
}

}  // namespace

// Rooted copies of branches, used by reduce and the order generator. Q
// children keep the reference arrangement, rotated so the parent link sits
// first.
struct PQTree::RootedHelpers {
  static RNode build(const PQTree& t, int v, int from) {
    const Node& nd = t.nodes_[v];
    RNode r;
    if (nd.kind == Node::Leaf) {
      r.kind = RNode::RLeaf;
      r.elem = nd.elem;
      r.total = 1;
      return r;
    }
    r.kind = nd.kind == Node::P ? RNode::RP : RNode::RQ;
    std::vector<int> order;
    if (nd.kind == Node::Q) {
      std::size_t s = 0;
      while (nd.nbrs[s] != from) ++s;
      for (std::size_t i = 1; i < nd.nbrs.size(); ++i)
        order.push_back(nd.nbrs[(s + i) % nd.nbrs.size()]);
    } else {
      for (int w : nd.nbrs)
        if (w != from) order.push_back(w);
    }
    for (int w : order) {
      r.ch.push_back(build(t, w, v));
      r.total += r.ch.back().total;
    }
    return r;
  }

  static void annotate(RNode& nd, const std::vector<char>& in_x) {
    if (nd.kind == RNode::RLeaf) {
      nd.inx = in_x[nd.elem] ? 1 : 0;
      return;
    }
    nd.inx = 0;
    for (auto& c : nd.ch) {
      annotate(c, in_x);
      nd.inx += c.inx;
    }
  }

  // Rebuilds the unrooted node vector from a rooted tree plus the anchor
  // leaf. For Q-nodes the parent goes first in the reference arrangement,
  // matching the rotation used when rooting.
  static int emit(PQTree& out, const RNode& nd, int parent) {
    if (nd.kind == RNode::RLeaf) {
      out.nodes_[nd.elem].nbrs.push_back(parent);
      return nd.elem;
    }
    int id = static_cast<int>(out.nodes_.size());
    out.nodes_.emplace_back();
    out.nodes_[id].kind = nd.kind == RNode::RP ? Node::P : Node::Q;
    out.nodes_[id].nbrs.push_back(parent);
    for (const auto& c : nd.ch) {
      int cid = emit(out, c, id);
      out.nodes_[id].nbrs.push_back(cid);
    }
    return id;
  }
};

PQTree PQTree::reduce(const std::set<Elem>& x) const {
  check_subset(x, "reduce");
  if (empty_) return *this;
  std::size_t n = ground_.size();
  if (x.size() <= 1 || x.size() + 1 >= n) return *this;

  std::vector<char> in_x(n, 0);
  for (const auto& e : x) in_x[elem_index(e)] = 1;
  int anchor = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_x[i]) {
      anchor = static_cast<int>(i);
      break;
    }
  assert(anchor >= 0);

  int root_id = nodes_[anchor].nbrs[0];
  assert(nodes_[root_id].kind != Node::Leaf);
  RNode root = RootedHelpers::build(*this, root_id, anchor);
  RootedHelpers::annotate(root, in_x);
  if (!rooted_reduce(root, static_cast<int>(x.size()))) return empty_tree(ground_);

  PQTree out;
  out.ground_ = ground_;
  out.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes_[i].kind = Node::Leaf;
    out.nodes_[i].elem = static_cast<int>(i);
  }
  int rid = RootedHelpers::emit(out, root, anchor);
  out.nodes_[anchor].nbrs = {rid};
  out.normalize();
  return out;
}

PQTree PQTree::project(const std::set<Elem>& x) const {
  if (x.empty()) throw Error(ErrKind::Precondition, "project: empty element set");
  check_subset(x, "project");
  std::vector<Elem> new_ground(x.begin(), x.end());
  if (empty_) return empty_tree(new_ground);
  if (x.size() == ground_.size()) return *this;

  PQTree out;
  out.ground_ = new_ground;
  std::size_t nn = new_ground.size();

  // Copy, dropping leaves outside x. normalize() then dissolves any internal
  // node left with fewer than three neighbors.
  std::vector<Node> work = nodes_;
  std::vector<char> drop(work.size(), 0);
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    if (x.count(ground_[i])) continue;
    drop[i] = 1;
    if (!work[i].nbrs.empty()) {
      auto& an = work[work[i].nbrs[0]].nbrs;
      an.erase(std::find(an.begin(), an.end(), static_cast<int>(i)));
    }
  }
  std::vector<int> remap(work.size(), -1);
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (drop[i]) continue;
    if (work[i].kind == Node::Leaf) {
      int ni = out.elem_index(ground_[work[i].elem]);
      remap[i] = ni;
    }
  }
  int next = static_cast<int>(nn);
  for (std::size_t i = 0; i < work.size(); ++i)
    if (!drop[i] && work[i].kind != Node::Leaf) remap[i] = next++;
  out.nodes_.resize(next);
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (drop[i]) continue;
    Node nd = work[i];
    if (nd.kind == Node::Leaf) nd.elem = remap[i];
    for (int& w : nd.nbrs) w = remap[w];
    out.nodes_[remap[i]] = std::move(nd);
  }
  out.normalize();
  return out;
}

PQTree PQTree::intersect(const PQTree& other) const {
  if (!same_ground(other))
    throw Error(ErrKind::Precondition, "intersect: ground sets differ");
  if (empty_) return *this;
  if (other.empty()) return other;
  std::size_t n = ground_.size();

  // Replay the constraints that carve out the other tree's order set: every
  // branch leaf set is consecutive, and around every Q-node every union of
  // two reference-adjacent branches is consecutive (which pins the branch
  // arrangement to the reference or its reverse).
  std::vector<std::set<Elem>> cons;
  std::set<std::vector<int>> seen;
  auto add = [&](std::vector<int> idxs) {
    if (idxs.size() <= 1 || idxs.size() + 1 >= n) return;
    std::sort(idxs.begin(), idxs.end());
    if (!seen.insert(idxs).second) return;
    std::set<Elem> s;
    for (int i : idxs) s.insert(other.ground_[i]);
    cons.push_back(std::move(s));
  };
  for (std::size_t v = 0; v < other.nodes_.size(); ++v) {
    const Node& nd = other.nodes_[v];
    if (nd.kind == Node::Leaf) continue;
    std::vector<std::vector<int>> branches;
    for (int w : nd.nbrs)
      branches.push_back(other.branch_leaves(static_cast<int>(v), w));
    for (const auto& b : branches) add(b);
    if (nd.kind == Node::Q) {
      std::size_t d = branches.size();
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<int> u = branches[i];
        const auto& nxt = branches[(i + 1) % d];
        u.insert(u.end(), nxt.begin(), nxt.end());
        add(std::move(u));
      }
    }
  }
  PQTree r = *this;
  for (const auto& c : cons) {
    r = r.reduce(c);
    if (r.empty()) break;
  }
  return r;
}

bool PQTree::contains(const CircularOrder& o) const {
  std::vector<Elem> sorted = o.elems();
  std::sort(sorted.begin(), sorted.end());
  if (sorted != ground_)
    throw Error(ErrKind::Precondition, "contains: order is not over the ground set");
  if (empty_) return false;
  std::size_t n = ground_.size();
  if (n <= 2) return true;

  std::vector<int> pos(n);
  for (std::size_t i = 0; i < o.elems().size(); ++i)
    pos[elem_index(o.elems()[i])] = static_cast<int>(i);

  auto is_arc = [&](const std::vector<int>& leaves) {
    std::vector<int> ps;
    ps.reserve(leaves.size());
    for (int l : leaves) ps.push_back(pos[l]);
    std::sort(ps.begin(), ps.end());
    int breaks = 0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      int a = ps[j], b = ps[(j + 1) % ps.size()];
      if ((b - a + static_cast<int>(n)) % static_cast<int>(n) != 1) ++breaks;
    }
    return breaks <= 1;
  };

  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const Node& nd = nodes_[v];
    if (nd.kind == Node::Leaf) continue;
    std::size_t d = nd.nbrs.size();
    std::vector<std::vector<int>> branches;
    for (int w : nd.nbrs)
      branches.push_back(branch_leaves(static_cast<int>(v), w));
    for (const auto& b : branches)
      if (!is_arc(b)) return false;
    if (nd.kind == Node::Q) {
      std::vector<int> branch_at(n, -1);
      for (std::size_t bi = 0; bi < d; ++bi)
        for (int l : branches[bi]) branch_at[pos[l]] = static_cast<int>(bi);
      std::vector<int> seq;
      for (std::size_t i = 0; i < n; ++i)
        if (seq.empty() || branch_at[i] != seq.back()) seq.push_back(branch_at[i]);
      if (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
      if (seq.size() != d) return false;
      std::size_t z = 0;
      while (seq[z] != 0) ++z;
      bool fwd = true, rev = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (seq[(z + i) % d] != static_cast<int>(i)) fwd = false;
        if (seq[(z + d - i) % d] != static_cast<int>(i)) rev = false;
      }
      if (!fwd && !rev) return false;
    }
  }
  return true;
}

std::uint64_t PQTree::order_count(std::uint64_t cap) const {
  if (empty_) return 0;
  std::size_t n = ground_.size();
  if (n <= 2) return std::min<std::uint64_t>(1, cap);
  auto mul = [&](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t{0};
    if (a > cap / b) return cap;
    return std::min(a * b, cap);
  };
  std::uint64_t total = 1;
  for (const auto& nd : nodes_) {
    if (nd.kind == Node::Leaf) continue;
    if (nd.kind == Node::Q) {
      total = mul(total, 2);
    } else {
      std::uint64_t f = 1;
      for (std::uint64_t i = 2; i + 1 <= nd.nbrs.size(); ++i) f = mul(f, i);
      total = mul(total, f);
    }
    if (total >= cap) return cap;
  }
  return total;
}

bool PQTree::for_each_order(const std::function<bool(const CircularOrder&)>& fn) const {
  if (empty_) return true;
  std::size_t n = ground_.size();
  if (n == 1) return fn(CircularOrder({ground_[0]}));
  if (n == 2) return fn(CircularOrder({ground_[0], ground_[1]}));

  RNode root = RootedHelpers::build(*this, nodes_[0].nbrs[0], 0);
  std::vector<int> buf;
  buf.reserve(n);
  buf.push_back(0);  // cut leaf comes first in every emitted rotation

  std::function<bool(const RNode&, const std::function<bool()>&)> gen;
  std::function<bool(const std::vector<RNode>&, const std::vector<std::size_t>&,
                     std::size_t, const std::function<bool()>&)>
      gen_seq;
  gen_seq = [&](const std::vector<RNode>& ch, const std::vector<std::size_t>& idx,
                std::size_t i, const std::function<bool()>& k) -> bool {
    if (i == idx.size()) return k();
    return gen(ch[idx[i]], [&]() { return gen_seq(ch, idx, i + 1, k); });
  };
  gen = [&](const RNode& nd, const std::function<bool()>& k) -> bool {
    if (nd.kind == RNode::RLeaf) {
      buf.push_back(nd.elem);
      bool go = k();
      buf.pop_back();
      return go;
    }
    std::vector<std::size_t> idx(nd.ch.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (nd.kind == RNode::RQ) {
      if (!gen_seq(nd.ch, idx, 0, k)) return false;
      std::reverse(idx.begin(), idx.end());
      return gen_seq(nd.ch, idx, 0, k);
    }
    do {
      if (!gen_seq(nd.ch, idx, 0, k)) return false;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return true;
  };

  return gen(root, [&]() {
    std::vector<Elem> elems;
    elems.reserve(buf.size());
    for (int i : buf) elems.push_back(ground_[i]);
    return fn(CircularOrder(std::move(elems)));
  });
}

std::vector<CircularOrder> PQTree::enumerate(std::size_t ground_bound,
                                             std::uint64_t cap) const {
  if (empty_) return {};
  if (ground_.size() > ground_bound)
    throw Error(ErrKind::Budget, "enumerate: ground set larger than bound " +
                                     std::to_string(ground_bound));
  std::uint64_t probe = cap == UINT64_MAX ? cap : cap + 1;
  if (order_count(probe) > cap)
    throw Error(ErrKind::Budget, "enumerate: more than " + std::to_string(cap) +
                                     " represented orders");
  std::vector<CircularOrder> out;
  for_each_order([&](const CircularOrder& o) {
    out.push_back(o.canonical());
    return true;
  });
  std::sort(out.begin(), out.end(),
            [](const CircularOrder& a, const CircularOrder& b) {
              return a.elems() < b.elems();
            });
  return out;
}

CircularOrder PQTree::first_order() const {
  if (empty_)
    throw Error(ErrKind::Precondition, "first_order: tree represents no orders");
  CircularOrder got;
  for_each_order([&](const CircularOrder& o) {
    got = o;
    return false;
  });
  return got;
}

PQTree PQTree::relabeled(const std::map<Elem, Elem>& rename) const {
  std::vector<Elem> new_ground;
  new_ground.reserve(ground_.size());
  for (const auto& e : ground_) {
    auto it = rename.find(e);
    if (it == rename.end())
      throw Error(ErrKind::Precondition, "relabeled: map misses element " + e);
    new_ground.push_back(it->second);
  }
  PQTree out;
  out.ground_ = sorted_ground(new_ground, "relabeled");
  if (empty_) {
    out.empty_ = true;
    return out;
  }
  std::size_t n = ground_.size();
  // Leaf slots move to their new sorted positions; internal slots shift as is.
  std::vector<int> remap(nodes_.size(), -1);
  for (std::size_t i = 0; i < n; ++i) remap[i] = out.elem_index(new_ground[i]);
  for (std::size_t i = n; i < nodes_.size(); ++i) remap[i] = static_cast<int>(i);
  out.nodes_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node nd = nodes_[i];
    if (nd.kind == Node::Leaf) nd.elem = remap[i];
    for (int& w : nd.nbrs) w = remap[w];
    out.nodes_[remap[i]] = std::move(nd);
  }
  out.normalize();
  return out;
}

std::vector<PQTree::NodeView> PQTree::internal_nodes() const {
  std::vector<NodeView> out;
  if (empty_) return out;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const Node& nd = nodes_[v];
    if (nd.kind == Node::Leaf) continue;
    NodeView nv;
    nv.id = static_cast<int>(v);
    nv.is_q = nd.kind == Node::Q;
    for (int w : nd.nbrs) {
      std::vector<int> idxs = branch_leaves(static_cast<int>(v), w);
      std::vector<Elem> names;
      names.reserve(idxs.size());
      for (int i : idxs) names.push_back(ground_[i]);
      nv.branches.push_back(std::move(names));
    }
    out.push_back(std::move(nv));
  }
  return out;
}

int PQTree::median_node(const Elem& a, const Elem& b, const Elem& c) const {
  if (empty_) throw Error(ErrKind::Precondition, "median_node: empty tree");
  int ia = elem_index(a), ib = elem_index(b), ic = elem_index(c);
  if (ia < 0 || ib < 0 || ic < 0 || ia == ib || ib == ic || ia == ic)
    throw Error(ErrKind::Precondition, "median_node: needs three distinct elements");
  std::vector<int> parent(nodes_.size(), -2);
  std::vector<int> stack{ia};
  parent[ia] = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : nodes_[v].nbrs)
      if (parent[w] == -2) {
        parent[w] = v;
        stack.push_back(w);
      }
  }
  std::set<int> on_ab;
  for (int v = ib; v != -1; v = parent[v]) on_ab.insert(v);
  int v = ic;
  while (!on_ab.count(v)) v = parent[v];
  assert(nodes_[v].kind != Node::Leaf);
  return v;
}

bool PQTree::node_is_p(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size()) ||
      nodes_[id].kind == Node::Leaf)
    throw Error(ErrKind::Precondition, "node_is_p: not an internal node id");
  return nodes_[id].kind == Node::P;
}

std::string PQTree::to_text() const {
  if (empty_) return "EMPTY{" + join(ground_, ",") + "}";
  std::size_t n = ground_.size();
  if (n == 1) return "(" + ground_[0] + ")";
  if (n == 2) return "(" + ground_[0] + " " + ground_[1] + ")";
  std::function<std::string(int, int)> rec = [&](int v, int from) -> std::string {
    const Node& nd = nodes_[v];
    if (nd.kind == Node::Leaf) return ground_[nd.elem];
    std::string s = nd.kind == Node::P ? "(P" : "(Q";
    for (int w : nd.nbrs) {
      if (w == from) continue;
      s += " " + rec(w, v);
    }
    return s + ")";
  };
  // Rendered from the node next to the smallest leaf; that leaf shows up as
  // an ordinary branch, so every element appears exactly once.
  return rec(nodes_[0].nbrs[0], -1);
}

}  // namespace pq
}  // namespace lvp
