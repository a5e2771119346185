#include "quadperiod/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace quadperiod {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double interior_angle(const Polygon& poly, std::size_t k) {
  const std::size_t n = poly.size();
  const Complex out = poly.vertices[(k + 1) % n] - poly.vertices[k];
  const Complex in = poly.vertices[(k + n - 1) % n] - poly.vertices[k];
  // Angle swept counterclockwise from the outgoing edge to the incoming one.
  double a = std::arg(in / out);
  if (a <= 0) a += 2 * kPi;
  return a;
}

}  // namespace

PolyhedralSurface::PolyhedralSurface(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                                     std::optional<GeneratorSpec> generator, Tolerances tol)
    : polygons_(std::move(polygons)), gluings_(std::move(gluings)), generator_(std::move(generator)) {
  validate(tol);
}

void PolyhedralSurface::validate(const Tolerances& tol) {
  if (polygons_.empty()) throw TopologyError("surface has no polygons");
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    const auto& poly = polygons_[p];
    if (poly.size() < 3) {
      throw GeometryError("polygon " + std::to_string(p) + " has fewer than 3 vertices");
    }
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Complex a = poly.edge_vector(k);
      const Complex b = poly.edge_vector((k + 1) % poly.size());
      if (std::abs(a) <= tol.geometry) {
        throw GeometryError("polygon " + std::to_string(p) + " has a zero-length edge");
      }
      if (cross(a, b) <= tol.geometry * std::abs(a) * std::abs(b)) {
        throw GeometryError("polygon " + std::to_string(p) +
                            " is not strictly convex and counterclockwise");
      }
    }
  }

  partner_.assign(polygons_.size(), {});
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    partner_[p].assign(polygons_[p].size(), EdgeRef{-1, -1});
  }
  auto check_ref = [&](EdgeRef e) {
    if (e.polygon < 0 || e.polygon >= static_cast<int>(polygons_.size()) || e.edge < 0 ||
        e.edge >= static_cast<int>(polygons_[e.polygon].size())) {
      throw ParseError("gluing references a nonexistent edge (" + std::to_string(e.polygon) + "," +
                       std::to_string(e.edge) + ")");
    }
  };
  for (const auto& g : gluings_) {
    check_ref(g.first);
    check_ref(g.second);
    if (g.first == g.second) {
      throw TopologyError("edge (" + std::to_string(g.first.polygon) + "," +
                          std::to_string(g.first.edge) + ") is glued to itself");
    }
    for (const EdgeRef e : {g.first, g.second}) {
      if (partner_[e.polygon][e.edge].polygon >= 0) {
        throw TopologyError("non-manifold gluing: edge (" + std::to_string(e.polygon) + "," +
                            std::to_string(e.edge) + ") appears in more than one gluing");
      }
    }
    partner_[g.first.polygon][g.first.edge] = g.second;
    partner_[g.second.polygon][g.second.edge] = g.first;
    const double la = std::abs(polygons_[g.first.polygon].edge_vector(g.first.edge));
    const double lb = std::abs(polygons_[g.second.polygon].edge_vector(g.second.edge));
    if (std::abs(la - lb) > tol.edge_length_rel * std::max(la, lb)) {
      throw GeometryError("glued edges (" + std::to_string(g.first.polygon) + "," +
                          std::to_string(g.first.edge) + ") and (" +
                          std::to_string(g.second.polygon) + "," + std::to_string(g.second.edge) +
                          ") have different lengths");
    }
  }
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    for (std::size_t k = 0; k < polygons_[p].size(); ++k) {
      if (partner_[p][k].polygon < 0) {
        throw TopologyError("unglued edge (" + std::to_string(p) + "," + std::to_string(k) + ")");
      }
    }
  }

  // Vertices are the cycles of the "next corner counterclockwise" permutation:
  // from corner (p,k) cross edge k-1 into its partner (q,l); the corner there
  // is (q,l) itself because the end of (p,k-1) is glued to the start of (q,l).
  vertices_ = {};
  vertices_.corner_vertex.resize(polygons_.size());
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    vertices_.corner_vertex[p].assign(polygons_[p].size(), -1);
  }
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    for (std::size_t k = 0; k < polygons_[p].size(); ++k) {
      if (vertices_.corner_vertex[p][k] >= 0) continue;
      const int id = static_cast<int>(vertices_.corners.size());
      std::vector<Corner> cycle;
      double angle = 0;
      Corner c{static_cast<int>(p), static_cast<int>(k)};
      while (vertices_.corner_vertex[c.polygon][c.index] < 0) {
        vertices_.corner_vertex[c.polygon][c.index] = id;
        cycle.push_back(c);
        angle += interior_angle(polygons_[c.polygon], c.index);
        const int n = static_cast<int>(polygons_[c.polygon].size());
        const EdgeRef across = partner_[c.polygon][(c.index + n - 1) % n];
        c = Corner{across.polygon, across.edge};
      }
      if (c.polygon != static_cast<int>(p) || c.index != static_cast<int>(k)) {
        throw TopologyError("non-manifold vertex link at corner (" + std::to_string(p) + "," +
                            std::to_string(k) + ")");
      }
      vertices_.corners.push_back(std::move(cycle));
      vertices_.angles.push_back(angle);
    }
  }

  if (euler_characteristic() >= 2) {
    throw TopologyError("genus 0 surfaces are not supported");
  }
}

EdgeRef PolyhedralSurface::partner(EdgeRef e) const { return partner_.at(e.polygon).at(e.edge); }

int PolyhedralSurface::euler_characteristic() const {
  return static_cast<int>(vertices_.corners.size()) - static_cast<int>(gluings_.size()) +
         static_cast<int>(polygons_.size());
}

double PolyhedralSurface::gauss_bonnet_genus() const {
  double excess = 0;
  for (double theta : vertices_.angles) excess += 2 * kPi - theta;
  const double chi = excess / (2 * kPi);
  return (2 - chi) / 2;
}

std::vector<ConePoint> PolyhedralSurface::cone_points(double /*tol*/) const {
  // Chart radius: half the smallest polygon width, which keeps each cone disk
  // a union of corner sectors that avoids every other vertex.
  double width = std::numeric_limits<double>::infinity();
  for (const auto& poly : polygons_) {
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Complex e = poly.edge_vector(k);
      width = std::min(width, std::abs(e));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k || j == (k + 1) % n) continue;
        const double d = std::abs(cross(e, poly.vertices[j] - poly.vertices[k])) / std::abs(e);
        width = std::min(width, d);
      }
    }
  }
  std::vector<ConePoint> out;
  for (std::size_t v = 0; v < vertices_.angles.size(); ++v) {
    ConePoint c;
    c.vertex = static_cast<int>(v);
    c.angle = vertices_.angles[v];
    c.index = 2 * kPi / c.angle;
    c.radius = 0.5 * width;
    out.push_back(c);
  }
  return out;
}

double PolyhedralSurface::total_area() const {
  double area = 0;
  for (const auto& poly : polygons_) {
    for (std::size_t k = 0; k < poly.size(); ++k) {
      area += 0.5 * cross(poly.vertices[k], poly.vertices[(k + 1) % poly.size()]);
    }
  }
  return area;
}

PolyhedralSurface make_torus_surface(Complex tau) {
  if (tau.imag() <= 0) throw GeometryError("torus modulus must have Im τ > 0");
  Polygon p{{Complex(0, 0), Complex(1, 0), Complex(1, 0) + tau, tau}};
  std::vector<Gluing> g{{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}};
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kTorus;
  spec.tau = tau;
  return PolyhedralSurface({std::move(p)}, std::move(g), spec);
}

PolyhedralSurface make_square_tiled_surface(const std::vector<std::pair<int, int>>& cells) {
  std::map<std::pair<int, int>, int> index;
  std::vector<Polygon> polys;
  for (const auto& [x, y] : cells) {
    if (index.count({x, y})) throw ParseError("duplicate square in square-tiled surface");
    index[{x, y}] = static_cast<int>(polys.size());
    const Complex o(x, y);
    polys.push_back(Polygon{{o, o + Complex(1, 0), o + Complex(1, 1), o + Complex(0, 1)}});
  }
  // Edges: 0 bottom, 1 right, 2 top, 3 left.
  std::vector<Gluing> gluings;
  for (const auto& [x, y] : cells) {
    const int s = index[{x, y}];
    // Right neighbour, or wrap to the start of the horizontal run.
    auto right = index.find({x + 1, y});
    int r;
    if (right != index.end()) {
      r = right->second;
    } else {
      int xs = x;
      while (index.count({xs - 1, y})) --xs;
      r = index[{xs, y}];
    }
    gluings.push_back({{s, 1}, {r, 3}});
    auto up = index.find({x, y + 1});
    int u;
    if (up != index.end()) {
      u = up->second;
    } else {
      int ys = y;
      while (index.count({x, ys - 1})) --ys;
      u = index[{x, ys}];
    }
    gluings.push_back({{s, 2}, {u, 0}});
  }
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kSquareTiled;
  spec.cells = cells;
  return PolyhedralSurface(std::move(polys), std::move(gluings), spec);
}

PolyhedralSurface make_l_shape_surface() {
  const std::vector<std::pair<int, int>> cells{{0, 0}, {1, 0}, {0, 1}};
  auto s = make_square_tiled_surface(cells);
  GeneratorSpec spec = *s.generator();
  spec.kind = GeneratorKind::kLShape;
  return PolyhedralSurface(s.polygons(), s.gluings(), spec);
}

}  // namespace quadperiod
