#pragma once

// Bipartite quad-graph discretization of a polyhedral surface. Geometry lives
// per quad, in that quad's own flat chart; there are no global coordinates.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quadperiod/common.hpp"
#include "quadperiod/surface.hpp"

namespace quadperiod {

enum class Color : unsigned char { kBlack = 0, kWhite = 1 };

[[nodiscard]] constexpr Color opposite(Color c) {
  return c == Color::kBlack ? Color::kWhite : Color::kBlack;
}

/// Corner slots of a quad in counterclockwise order, first corner black.
enum Slot : int { kBMinus = 0, kWMinus = 1, kBPlus = 2, kWPlus = 3 };

struct QuadSide {
  int quad = -1;
  int side = -1;  // local edge index k: corner k -> corner k+1
};

/// Edge of Λ. `sides[0]` traverses it from `ends[0]` to `ends[1]`, `sides[1]`
/// the other way round.
struct Edge {
  std::array<int, 2> ends{-1, -1};
  std::array<QuadSide, 2> sides{};
  int seam = -1;  // index of the polygon gluing this edge lies on, -1 if interior
};

struct Quad {
  std::array<int, 4> vertices{};  // b-, w-, b+, w+
  std::array<int, 4> edges{};     // edge k joins corner k and corner k+1
  std::array<Complex, 4> chart{}; // corner positions in this quad's chart
  int polygon = -1;               // source polygon, -1 if unknown

  [[nodiscard]] Complex black_diagonal() const { return chart[kBPlus] - chart[kBMinus]; }
  [[nodiscard]] Complex white_diagonal() const { return chart[kWPlus] - chart[kWMinus]; }
  [[nodiscard]] double area() const;
};

/// Position of a cone vertex in the chart of a quad that lies in its disk.
struct ConeAnchor {
  int cone = -1;  // index into QuadGraph::cones()
  Complex position;
};

/// Quad-graph with connectivity, per-quad charts, and cone data.
/// Immutable after construction.
class QuadGraph {
 public:
  QuadGraph() = default;
  /// Builds adjacency, verifies every invariant and throws on violation.
  /// Colors are recomputed by BFS 2-coloring and must match `colors`.
  QuadGraph(std::vector<Color> colors, std::vector<Quad> quads, std::vector<Edge> edges,
            std::vector<ConePoint> cones = {},
            std::vector<std::optional<ConeAnchor>> anchors = {}, Tolerances tol = {});

  [[nodiscard]] std::size_t vertex_count() const { return colors_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] std::size_t quad_count() const { return quads_.size(); }

  [[nodiscard]] Color color(int v) const { return colors_[v]; }
  [[nodiscard]] const std::vector<Color>& colors() const { return colors_; }
  [[nodiscard]] const Quad& quad(int q) const { return quads_[q]; }
  [[nodiscard]] const std::vector<Quad>& quads() const { return quads_; }
  [[nodiscard]] const Edge& edge(int e) const { return edges_[e]; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  /// Cone table: every vertex whose total angle is recorded (singular or not).
  [[nodiscard]] const std::vector<ConePoint>& cones() const { return cones_; }
  [[nodiscard]] const std::vector<std::optional<ConeAnchor>>& anchors() const { return anchors_; }
  /// Vertices with total angle different from 2π.
  [[nodiscard]] std::vector<int> singular_vertices() const;

  [[nodiscard]] int euler_characteristic() const;
  [[nodiscard]] int genus() const { return (2 - euler_characteristic()) / 2; }
  [[nodiscard]] double total_area() const;

  /// Corners (quad, slot) around vertex v in counterclockwise order.
  [[nodiscard]] const std::vector<std::pair<int, int>>& corners(int v) const { return corners_[v]; }
  /// Position of corner (q, k) in corners(quad(q).vertices[k]).
  [[nodiscard]] int slot(int q, int k) const { return slots_[q][k]; }

  /// Quad-side across from the given one.
  [[nodiscard]] QuadSide twin(QuadSide s) const;

 private:
  void build_rotation();
  void validate(const Tolerances& tol);

  std::vector<Color> colors_;
  std::vector<Quad> quads_;
  std::vector<Edge> edges_;
  std::vector<ConePoint> cones_;
  std::vector<std::optional<ConeAnchor>> anchors_;
  std::vector<std::vector<std::pair<int, int>>> corners_;
  std::vector<std::array<int, 4>> slots_;
};

/// ρ_Q = −i (w+ − w−)/(b+ − b−) in the quad's chart.
Complex rho(const Quad& q);

/// Interior angles of a quad, corner order.
std::array<double, 4> interior_angles(const Quad& q);

struct MeshStats {
  double h = 0;        // max edge length
  double phi_min = 0;  // min over interior angles and π/2 − |arg ρ_Q|
  std::size_t quads = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  int genus = 0;
  std::vector<double> cone_indices;  // γ_O of singular vertices
  double gamma_sigma = 1;            // min(1, min γ_O)
  double area = 0;
};

MeshStats mesh_stats(const QuadGraph& g);

/// Worst violator reported by validate_h_adapted.
struct AdaptedReport {
  bool pass = true;
  double max_edge = 0;
  double max_image_edge = 0;  // max |g_O(x) − g_O(y)| over cone-disk edges
  int worst_quad = -1;
  int worst_side = -1;
  std::size_t checked_edges = 0;
  std::string message;
};

/// Checks max edge length ≤ h and, for cones with γ_O ≤ 1/2, that every edge
/// meeting the cone disk has chart image length ≤ h.
AdaptedReport validate_h_adapted(const QuadGraph& g, double h, double slack = 1e-12);

/// Length of the image of segment xy under the cone chart r^γ exp(iγψ),
/// positions given relative to the cone in a common flat chart.
double cone_image_distance(Complex x, Complex y, double gamma);

/// Quad-graph of the flat torus C/(Z + τZ): n×n parallelogram grid.
QuadGraph generate_torus(Complex tau, int n);

/// Uniform quad decomposition of a parallelogram-tiled surface with
/// 1/cell_size subdivisions per polygon side (must be an even integer).
QuadGraph build_quad_graph(const PolyhedralSurface& surface, double cell_size);

/// Raw quad-graph text format (`format: 1`).
std::string dump_quad_graph(const QuadGraph& g);
QuadGraph load_quad_graph(const std::string& document);

}  // namespace quadperiod
