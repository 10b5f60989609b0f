#pragma once

#include <string>

namespace lvp {
namespace selfcheck {

struct Report {
  bool ok = false;
  std::string text;  // one summary line per corpus section
};

// Cross-checks the solver stack against the brute-force oracles on small
// exhaustive families: PQ-tree set operations against order enumeration,
// torus verdicts on every two-level graph with two vertices per level,
// cyclic and radial verdicts through their gadget graphs, two-graph
// simultaneous instances, and the betweenness generators. Deterministic;
// runs in a few seconds.
Report run();

}  // namespace selfcheck
}  // namespace lvp
