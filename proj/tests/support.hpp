#pragma once

// Shared helpers for the test binaries. Everything here is written against
// first principles (explicit enumeration, direct definition checks) so the
// library under test never verifies itself.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pq_tree.hpp"

namespace testsup {

using lvp::pq::CircularOrder;
using lvp::pq::PQTree;
using Elem = std::string;
using OrderSet = std::set<std::vector<Elem>>;

// Every circular order on the given labels, one canonical rotation each
// (smallest label first). Size (n-1)! for n >= 2.
inline std::vector<CircularOrder> all_circular_orders(std::vector<Elem> elems) {
  std::sort(elems.begin(), elems.end());
  if (elems.size() <= 2) return {CircularOrder(elems)};
  Elem first = elems.front();
  std::vector<Elem> rest(elems.begin() + 1, elems.end());
  std::vector<CircularOrder> out;
  do {
    std::vector<Elem> seq;
    seq.push_back(first);
    seq.insert(seq.end(), rest.begin(), rest.end());
    out.push_back(CircularOrder(std::move(seq)));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

// Direct definition: the members of x occupy one contiguous stretch of the
// circle. Trivial when x or its complement has at most one element.
inline bool circ_consecutive(const CircularOrder& o, const std::set<Elem>& x) {
  const auto& v = o.elems();
  std::size_t n = v.size();
  std::size_t cnt = 0;
  for (const auto& e : v) cnt += x.count(e) ? 1 : 0;
  if (cnt == 0 || cnt == n) return true;
  int ends = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool a = x.count(v[i]) > 0;
    bool b = x.count(v[(i + 1) % n]) > 0;
    if (a && !b) ++ends;
  }
  return ends == 1;
}

inline OrderSet order_set(const std::vector<CircularOrder>& v) {
  OrderSet s;
  for (const auto& o : v) s.insert(o.canonical().elems());
  return s;
}

inline OrderSet tree_orders(const PQTree& t) {
  return order_set(t.enumerate(12, 10000000));
}

// Reference model: a bag of explicit orders mirroring each tree operation.
inline OrderSet model_universal(const std::vector<Elem>& elems) {
  return order_set(all_circular_orders(elems));
}

inline OrderSet model_reduce(const OrderSet& s, const std::set<Elem>& x) {
  OrderSet out;
  for (const auto& v : s)
    if (circ_consecutive(CircularOrder(v), x)) out.insert(v);
  return out;
}

inline OrderSet model_project(const OrderSet& s, const std::set<Elem>& keep) {
  OrderSet out;
  for (const auto& v : s)
    out.insert(CircularOrder(v).restricted_to(keep).canonical().elems());
  return out;
}

inline OrderSet model_intersect(const OrderSet& a, const OrderSet& b) {
  OrderSet out;
  for (const auto& v : a)
    if (b.count(v)) out.insert(v);
  return out;
}

inline std::vector<Elem> letters(std::size_t n) {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
  return out;
}

// Random subset of elems of the requested size.
inline std::set<Elem> random_subset(std::mt19937_64& rng, std::vector<Elem> elems,
                                    std::size_t size) {
  std::shuffle(elems.begin(), elems.end(), rng);
  return std::set<Elem>(elems.begin(), elems.begin() + size);
}

}  // namespace testsup
