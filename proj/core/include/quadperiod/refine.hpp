#pragma once

// Mesh families for convergence studies.

#include <vector>

#include "quadperiod/homology.hpp"
#include "quadperiod/quad_graph.hpp"

namespace quadperiod {

struct RefinementLevel {
  int level = 0;
  QuadGraph graph;
  MeshStats stats;
  bool adapted = false;
};

/// Splits every quad into four through its edge midpoints and the midpoint of
/// its two diagonal midpoints. Old vertices and face centers become black,
/// edge midpoints white. Vertex ids of Λ are kept.
QuadGraph subdivide(const QuadGraph& g);

/// The same closed walk on subdivide(coarse), each edge replaced by its halves.
Cycle transport_subdivided(const QuadGraph& coarse, const QuadGraph& fine, const Cycle& c);

/// Carries a walk between two grid decompositions of the same surface made by
/// tiling (uniform or adapted, m_fine a multiple of m_coarse per side).
Cycle transport_tiled(const QuadGraph& coarse, int m_coarse, const QuadGraph& fine, int m_fine,
                      const Cycle& c);

/// Grid count per polygon side of a tiled graph with `polygons` tiles.
int tiled_side_count(const QuadGraph& g, int polygons);

struct AdaptedOptions {
  double phi_floor = kPi / 12;
  /// Parameter radius (in units of the square side) where the power-law
  /// grading hands over to a linear profile.
  double knee = 0.25;
  int max_attempts = 200;
};

/// h-adapted decomposition of a square-tiled surface. Corners at cones with
/// γ ≤ 1/2 get a radial grading r ∝ s^{1/γ}; the grid is refined until the
/// adaptedness validator passes.
QuadGraph generate_adapted(const PolyhedralSurface& surface, double h,
                           const AdaptedOptions& options = {});

struct SweepOptions {
  double base_cell = 0.5;  // cell size (or h) of level 0
  AdaptedOptions adapted;
};

/// Uniform levels come from repeated subdivision; adapted levels use
/// h = base_cell / 2^level. Every level is checked for genus, area and φ floor.
std::vector<RefinementLevel> sweep(const PolyhedralSurface& surface, int levels, bool adapted,
                                   const SweepOptions& options = {});

struct EdgeBoundReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t incident = 0;  // edges ending at the cone, where the bound degenerates
  double worst_ratio = 0;    // max |xy| / ((1 + π/(2γ)) h |Ox|^{1−γ})
  double worst_x = 0, worst_y = 0;  // |Ox|, |Oy| of the worst edge
  /// Same edges against ((1 + π/2)/γ) h |Oy|^{1−γ}, which follows from
  /// concavity of r^γ and also covers edges ending at O.
  bool corrected_pass = true;
  double corrected_ratio = 0;
};

/// Checks |xy| ≤ (1 + π/(2γ)) h |Ox|^{1−γ} with |Ox| ≤ |Oy| on edges inside
/// cone disks with γ ≤ 1/2. Edges with x = O are counted but not checked
/// against it. Radial edges with |Oy| ≫ |Ox| can violate this form on
/// h-adapted meshes; `corrected_*` holds for every edge.
EdgeBoundReport check_edge_bound(const QuadGraph& g, double h, double slack = 1e-12);

}  // namespace quadperiod
