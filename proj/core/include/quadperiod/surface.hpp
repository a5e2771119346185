#pragma once

// Compact polyhedral surfaces glued from convex Euclidean polygons.

#include <optional>
#include <string>
#include <vector>

#include "quadperiod/common.hpp"

namespace quadperiod {

/// Convex planar polygon, vertices listed counterclockwise. Edge k runs from
/// vertex k to vertex k+1 (mod n).
struct Polygon {
  std::vector<Complex> vertices;

  [[nodiscard]] std::size_t size() const { return vertices.size(); }
  [[nodiscard]] Complex edge_vector(std::size_t k) const {
    return vertices[(k + 1) % vertices.size()] - vertices[k];
  }
};

struct EdgeRef {
  int polygon = 0;
  int edge = 0;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

/// Orientation-reversing isometric identification of two polygon edges: the
/// start of `first` is glued to the end of `second` and vice versa.
struct Gluing {
  EdgeRef first;
  EdgeRef second;
};

enum class GeneratorKind { kTorus, kLShape, kSquareTiled };

/// Optional provenance of a surface document; the polygons and gluings are
/// authoritative, this only records how they were produced.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kTorus;
  Complex tau{0.0, 1.0};
  std::vector<std::pair<int, int>> cells;  // unit-square lower-left corners
};

/// Vertex of the glued complex with its total angle θ and singularity
/// index γ = 2π/θ. `radius` is the cone chart radius R_O.
struct ConePoint {
  int vertex = -1;
  double angle = 2 * kPi;
  double index = 1.0;
  double radius = 0.0;

  [[nodiscard]] bool singular(double tol = 1e-9) const {
    return std::abs(angle - 2 * kPi) > tol;
  }
};

/// Polygon corner (polygon, vertex index).
struct Corner {
  int polygon = 0;
  int index = 0;
};

/// Vertices of the glued complex. Each vertex is the cyclic sequence of
/// polygon corners met when turning counterclockwise around it.
struct SurfaceVertices {
  std::vector<std::vector<Corner>> corners;
  std::vector<double> angles;
  /// corner_vertex[p][k]: vertex id of corner k of polygon p.
  std::vector<std::vector<int>> corner_vertex;
};

class PolyhedralSurface {
 public:
  PolyhedralSurface() = default;
  /// Validates every invariant; throws GeometryError / TopologyError.
  PolyhedralSurface(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                    std::optional<GeneratorSpec> generator = std::nullopt,
                    Tolerances tol = {});

  [[nodiscard]] const std::vector<Polygon>& polygons() const { return polygons_; }
  [[nodiscard]] const std::vector<Gluing>& gluings() const { return gluings_; }
  [[nodiscard]] const std::optional<GeneratorSpec>& generator() const { return generator_; }
  [[nodiscard]] const SurfaceVertices& vertices() const { return vertices_; }

  /// Partner of an edge under the gluing.
  [[nodiscard]] EdgeRef partner(EdgeRef e) const;

  /// Euler characteristic V - E + F of the polygon complex.
  [[nodiscard]] int euler_characteristic() const;
  [[nodiscard]] int genus() const { return (2 - euler_characteristic()) / 2; }
  /// Genus from Gauss–Bonnet: Σ (2π − θ_O) = 2π χ.
  [[nodiscard]] double gauss_bonnet_genus() const;

  /// All vertices with their cone data (singular or not).
  [[nodiscard]] std::vector<ConePoint> cone_points(double tol = 1e-9) const;
  [[nodiscard]] double total_area() const;

 private:
  void validate(const Tolerances& tol);

  std::vector<Polygon> polygons_;
  std::vector<Gluing> gluings_;
  std::optional<GeneratorSpec> generator_;
  std::vector<std::vector<EdgeRef>> partner_;
  SurfaceVertices vertices_;
};

/// Parses a surface document (YAML/JSON flow syntax, `format: 1`).
PolyhedralSurface load_surface(const std::string& document);
PolyhedralSurface load_surface_file(const std::string& path);
std::string dump_surface(const PolyhedralSurface& surface);

/// Parallelogram (0, 1, 1+τ, τ) with opposite sides glued.
PolyhedralSurface make_torus_surface(Complex tau);

/// Unit squares at the given integer positions; each horizontal run is closed
/// up by gluing its rightmost edge to its leftmost, likewise each vertical run.
PolyhedralSurface make_square_tiled_surface(const std::vector<std::pair<int, int>>& cells);

/// Three unit squares in an L; genus 2 with one cone point of angle 6π.
PolyhedralSurface make_l_shape_surface();

}  // namespace quadperiod
