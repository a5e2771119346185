#pragma once

#include <functional>

#include "quadperiod/quad_graph.hpp"

namespace quadperiod::detail {

/// Maps grid parameters (s, t) ∈ [0,1]² of polygon `p` to a point in the same
/// unit square; the image is then mapped affinely onto the parallelogram.
/// Must fix the boundary setwise and agree along glued edges.
using GridWarp = std::function<std::pair<double, double>(int p, double s, double t)>;

/// m×m grid decomposition of a surface glued from parallelograms. m even.
QuadGraph tile_parallelograms(const PolyhedralSurface& surface, int m, const GridWarp& warp = {});

}  // namespace quadperiod::detail
