#pragma once

// Homology of the quad-graph: canonical cycles, their projections to the
// black and white diagonal graphs, and integer period cocycles.

#include <vector>

#include <Eigen/Core>

#include "quadperiod/quad_graph.hpp"

namespace quadperiod {

/// Oriented traversal of an edge of Λ.
struct Step {
  int edge = -1;
  bool forward = true;  // from ends[0] to ends[1]
};

/// Closed walk on Λ.
struct Cycle {
  std::vector<Step> steps;
  std::vector<int> coefficients;  // in the leftover-edge basis, empty if unknown
};

int step_source(const QuadGraph& g, Step s);
int step_target(const QuadGraph& g, Step s);
/// Throws TopologyError unless the walk is nonempty, contiguous and closed.
void validate_cycle(const QuadGraph& g, const Cycle& c);
Cycle reversed(const Cycle& c);
/// Concatenation of closed walks sharing their base vertex.
Cycle concatenate(const Cycle& a, const Cycle& b);
/// Cancels consecutive back-and-forth steps, cyclically.
Cycle reduce_backtracking(const Cycle& c);

struct DiagonalStep {
  int quad = -1;
  int sign = 1;
};

/// Closed path on the black (Γ) or white (Γ*) diagonal graph.
struct DiagonalCycle {
  Color color = Color::kBlack;
  std::vector<DiagonalStep> steps;
};

struct TreeCotree {
  int root = 0;
  std::vector<int> tree;      // edges of T
  std::vector<int> cotree;    // edges dual to T*
  std::vector<int> leftover;  // L, |L| = 2g
  std::vector<int> parent_edge;  // per vertex, edge to its BFS parent (-1 at root)
  std::vector<int> depth;
};

TreeCotree tree_cotree(const QuadGraph& g);

/// For each leftover edge, the closed walk root → ℓ → root through T.
std::vector<Cycle> basis_cycles(const QuadGraph& g, const TreeCotree& tc);

int intersection_number(const QuadGraph& g, const Cycle& c1, const Cycle& c2);
Eigen::MatrixXi intersection_matrix(const QuadGraph& g, const std::vector<Cycle>& cycles);

struct HomologyBasis {
  std::vector<Cycle> a, b;
  std::vector<DiagonalCycle> black_a, white_a, black_b, white_b;
  /// σ^B_k and σ^W_k, k over (a_1..a_g, b_1..b_g); one integer per quad.
  std::vector<std::vector<int>> black_cocycles, white_cocycles;

  [[nodiscard]] int genus() const { return static_cast<int>(a.size()); }
  /// Basis projection k in (a_1..a_g, b_1..b_g) order.
  [[nodiscard]] const DiagonalCycle& projection(Color color, int k) const;
};

/// Integer change of basis bringing the intersection form to the standard J.
/// Only the a/b cycles of the result are filled in.
HomologyBasis symplectic_basis(const QuadGraph& g, const std::vector<Cycle>& cycles,
                               const Eigen::MatrixXi& m);

/// Routes c around each visited vertex of the opposite color, always turning
/// counterclockwise (or clockwise), and records the diagonals crossed.
DiagonalCycle project_cycle(const QuadGraph& g, const Cycle& c, Color color,
                            bool counterclockwise = true);

/// Σ sign·σ(Q) over the path: the period of an integer cochain.
int cochain_period(const std::vector<int>& sigma, const DiagonalCycle& path);

/// Signed sum of σ around vertex v of the opposite color (0 for a cocycle).
int cochain_defect(const QuadGraph& g, const std::vector<int>& sigma, int v);

/// Fills projections and cocycles of a basis whose a/b cycles are set.
void build_cocycles(const QuadGraph& g, HomologyBasis& basis);

/// Full pipeline: tree-cotree, reduction, projections, cocycles.
HomologyBasis compute_homology(const QuadGraph& g);

/// Basis from given cycles, e.g. carried over from a coarser mesh. Throws
/// TopologyError unless their intersection matrix is the standard one.
HomologyBasis homology_from_cycles(const QuadGraph& g, std::vector<Cycle> a, std::vector<Cycle> b);

}  // namespace quadperiod
