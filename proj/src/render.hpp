#pragma once

#include <string>

#include "level_graph.hpp"
#include "torus.hpp"

namespace lvp {
namespace render {

// Schematic SVG of a crossing-free drawing on the unit square with both side
// pairs identified. Level j is the vertical line x = (j-1)/k; a vertex sits
// at y = rank/|V_j| counted along its level's circular order from the
// lexicographically smallest name. Each edge runs as an x-monotone polyline
// through a private track on its layer's midline, assigned by the layer's
// circular edge order; a hop whose short way around the vertical circle
// crosses y = 0 is cut there and continues from the opposite border. Output
// bytes depend only on the inputs.
//
// The embedding must satisfy check_embedding for g, which also means g has
// to be proper; anything else is a precondition error.
std::string render_svg(const LevelGraph& g, const torus::TorusEmbedding& emb);

}  // namespace render
}  // namespace lvp
