#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lvp {

// Error kinds map to stable CLI exit codes and C API status values.
enum class ErrKind {
  Precondition,  // bad arguments, mismatched ground sets, unsupported input
  Parse,         // malformed input text
  Budget,        // an enumeration bound was exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

namespace pq {

using Elem = std::string;

// A circular sequence of distinct labels. Equality is rotation equality;
// a reversal is a different order (orientation matters on surfaces).
class CircularOrder {
 public:
  CircularOrder() = default;
  explicit CircularOrder(std::vector<Elem> elems);

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<Elem>& elems() const { return elems_; }

  // Rotated so the smallest label comes first. Stable key for set/map use.
  CircularOrder canonical() const;
  CircularOrder reversed() const;
  // Drops every label not in keep; relative circular order is preserved.
  CircularOrder restricted_to(const std::set<Elem>& keep) const;
  CircularOrder relabeled(const std::map<Elem, Elem>& rename) const;

  bool same_order(const CircularOrder& other) const;
  bool operator==(const CircularOrder& other) const { return same_order(other); }
  bool operator!=(const CircularOrder& other) const { return !same_order(other); }
  // Lexicographic on the canonical rotation; total order for containers.
  bool operator<(const CircularOrder& other) const;

  std::string to_text() const;

 private:
  std::vector<Elem> elems_;
};

// Unrooted PQ-tree over a fixed ground set. Leaves carry the elements;
// internal P-nodes allow any cyclic arrangement of their branches, internal
// Q-nodes fix the cyclic arrangement up to reversal. The empty tree (no
// admissible order) is a reserved state that still remembers its ground set.
class PQTree {
 public:
  PQTree() = default;

  static PQTree universal(std::vector<Elem> ground);
  static PQTree empty_tree(std::vector<Elem> ground);

  bool empty() const { return empty_; }
  const std::vector<Elem>& ground() const { return ground_; }
  bool same_ground(const PQTree& other) const { return ground_ == other.ground_; }

  // Restrict to orders where x appears consecutively. Returns the empty tree
  // when no represented order satisfies x.
  PQTree reduce(const std::set<Elem>& x) const;

  // The tree over ground set x representing exactly the restrictions of this
  // tree's orders to x. x must be nonempty.
  PQTree project(const std::set<Elem>& x) const;

  // Orders represented by both trees. Ground sets must match.
  PQTree intersect(const PQTree& other) const;

  bool contains(const CircularOrder& o) const;

  // Number of represented orders, saturating at cap.
  std::uint64_t order_count(std::uint64_t cap = UINT64_MAX) const;

  // All represented orders, sorted. Guards: ground size above ground_bound or
  // order count above cap raise Budget errors. The empty tree yields {}.
  std::vector<CircularOrder> enumerate(std::size_t ground_bound = 10,
                                       std::uint64_t cap = 1000000) const;

  // Streams every represented order in a deterministic sequence. fn returning
  // false stops the walk; returns true when the walk ran to completion.
  bool for_each_order(const std::function<bool(const CircularOrder&)>& fn) const;

  // Deterministic member of the represented set. Errors on the empty tree.
  CircularOrder first_order() const;

  // Injective relabeling of the ground set.
  PQTree relabeled(const std::map<Elem, Elem>& rename) const;

  // Structure access for the ordering-constraint solver.
  struct NodeView {
    int id = -1;
    bool is_q = false;
    // Leaf labels reachable through each neighbor; for Q-nodes the vector
    // follows the reference cyclic arrangement.
    std::vector<std::vector<Elem>> branches;
  };
  std::vector<NodeView> internal_nodes() const;
  // Id of the unique node that lies on all three pairwise leaf paths.
  // The three elements must be distinct ground members.
  int median_node(const Elem& a, const Elem& b, const Elem& c) const;
  bool node_is_p(int id) const;

  std::string to_text() const;

 private:
  struct Node {
    enum Kind { Leaf, P, Q } kind = Leaf;
    int elem = -1;              // ground index, leaves only
    std::vector<int> nbrs;      // Q-nodes: reference cyclic arrangement
  };

  std::vector<Elem> ground_;    // sorted, distinct
  std::vector<Node> nodes_;     // nodes_[i] for i < |ground| is the leaf of ground_[i]
  bool empty_ = false;

  int elem_index(const Elem& e) const;
  void check_subset(const std::set<Elem>& x, const char* op) const;
  std::vector<int> branch_leaves(int from, int into) const;
  void normalize();

  struct RootedHelpers;
};

}  // namespace pq
}  // namespace lvp
