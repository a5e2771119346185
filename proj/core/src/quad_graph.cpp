#include "quadperiod/quad_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "quadperiod/detail/tiling.hpp"

namespace quadperiod {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

std::string quad_name(std::size_t q) { return "quad " + std::to_string(q); }

}  // namespace

double Quad::area() const { return 0.5 * cross(black_diagonal(), white_diagonal()); }

Complex rho(const Quad& q) {
  const Complex b = q.black_diagonal();
  if (std::abs(b) == 0) throw GeometryError("degenerate black diagonal (b+ = b-)");
  return Complex(0, -1) * q.white_diagonal() / b;
}

std::array<double, 4> interior_angles(const Quad& q) {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    const Complex out_dir = q.chart[(k + 1) % 4] - q.chart[k];
    const Complex in_dir = q.chart[(k + 3) % 4] - q.chart[k];
    if (std::abs(out_dir) == 0 || std::abs(in_dir) == 0) {
      out[k] = 0;
      continue;
    }
    double a = std::arg(in_dir / out_dir);
    if (a < 0) a += 2 * kPi;
    out[k] = a;
  }
  return out;
}

QuadGraph::QuadGraph(std::vector<Color> colors, std::vector<Quad> quads, std::vector<Edge> edges,
                     std::vector<ConePoint> cones, std::vector<std::optional<ConeAnchor>> anchors,
                     Tolerances tol)
    : colors_(std::move(colors)),
      quads_(std::move(quads)),
      edges_(std::move(edges)),
      cones_(std::move(cones)),
      anchors_(std::move(anchors)) {
  if (anchors_.empty()) anchors_.resize(quads_.size());
  validate(tol);
}

QuadSide QuadGraph::twin(QuadSide s) const {
  const Edge& e = edges_[quads_[s.quad].edges[s.side]];
  if (e.sides[0].quad == s.quad && e.sides[0].side == s.side) return e.sides[1];
  return e.sides[0];
}

std::vector<int> QuadGraph::singular_vertices() const {
  std::vector<int> out;
  for (const auto& c : cones_) {
    if (c.singular()) out.push_back(c.vertex);
  }
  return out;
}

int QuadGraph::euler_characteristic() const {
  return static_cast<int>(colors_.size()) - static_cast<int>(edges_.size()) +
         static_cast<int>(quads_.size());
}

double QuadGraph::total_area() const {
  double sum = 0, comp = 0;
  for (const auto& q : quads_) {
    const double a = q.area();
    const double t = sum + a;
    comp += std::abs(sum) >= std::abs(a) ? (sum - t) + a : (a - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void QuadGraph::validate(const Tolerances& tol) {
  const std::size_t nv = colors_.size();
  if (quads_.empty() || nv == 0) throw TopologyError("empty quad-graph");
  if (anchors_.size() != quads_.size()) throw ParseError("anchor table size mismatch");

  // Incidence between quads and edges.
  for (std::size_t q = 0; q < quads_.size(); ++q) {
    for (int k = 0; k < 4; ++k) {
      const int v = quads_[q].vertices[k];
      const int e = quads_[q].edges[k];
      if (v < 0 || v >= static_cast<int>(nv)) throw ParseError(quad_name(q) + ": bad vertex id");
      if (e < 0 || e >= static_cast<int>(edges_.size())) {
        throw ParseError(quad_name(q) + ": bad edge id");
      }
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    for (int s = 0; s < 2; ++s) {
      const QuadSide side = edge.sides[s];
      if (side.quad < 0 || side.quad >= static_cast<int>(quads_.size()) || side.side < 0 ||
          side.side > 3) {
        throw TopologyError("edge " + std::to_string(e) + " is not shared by two quad sides");
      }
      const Quad& q = quads_[side.quad];
      if (q.edges[side.side] != static_cast<int>(e)) {
        throw TopologyError("edge " + std::to_string(e) + " side table inconsistent with quads");
      }
      const int from = q.vertices[side.side];
      const int to = q.vertices[(side.side + 1) % 4];
      const int want_from = edge.ends[s];
      const int want_to = edge.ends[1 - s];
      if (from != want_from || to != want_to) {
        throw TopologyError("edge " + std::to_string(e) +
                            " is not traversed in opposite directions by its two quads");
      }
    }
    const Complex a = quads_[edge.sides[0].quad].chart[(edge.sides[0].side + 1) % 4] -
                      quads_[edge.sides[0].quad].chart[edge.sides[0].side];
    const Complex b = quads_[edge.sides[1].quad].chart[(edge.sides[1].side + 1) % 4] -
                      quads_[edge.sides[1].quad].chart[edge.sides[1].side];
    if (std::abs(std::abs(a) - std::abs(b)) > tol.geometry * std::max(1.0, std::abs(a))) {
      throw GeometryError("edge " + std::to_string(e) + " has different lengths in its two charts");
    }
  }
  std::vector<int> side_count(edges_.size(), 0);
  for (const auto& q : quads_) {
    for (int k = 0; k < 4; ++k) ++side_count[q.edges[k]];
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (side_count[e] != 2) {
      throw TopologyError("edge " + std::to_string(e) + " appears in " +
                          std::to_string(side_count[e]) + " quad sides");
    }
  }

  // BFS 2-coloring; an odd cycle is an error, not something to repair.
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbour, edge)
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adj[edges_[e].ends[0]].emplace_back(edges_[e].ends[1], static_cast<int>(e));
    adj[edges_[e].ends[1]].emplace_back(edges_[e].ends[0], static_cast<int>(e));
  }
  std::vector<int> parity(nv, -1), parent(nv, -1);
  std::queue<int> queue;
  parity[quads_[0].vertices[0]] = 0;
  queue.push(quads_[0].vertices[0]);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const auto& [w, e] : adj[v]) {
      if (parity[w] < 0) {
        parity[w] = 1 - parity[v];
        parent[w] = v;
        queue.push(w);
      } else if (parity[w] == parity[v]) {
        // Odd cycle: tree paths from both ends to their common ancestor.
        std::vector<int> pv{v}, pw{w};
        while (parent[pv.back()] >= 0) pv.push_back(parent[pv.back()]);
        while (parent[pw.back()] >= 0) pw.push_back(parent[pw.back()]);
        while (pv.size() > 1 && pw.size() > 1 && pv[pv.size() - 2] == pw[pw.size() - 2]) {
          pv.pop_back();
          pw.pop_back();
        }
        std::ostringstream msg;
        msg << "parity obstruction: odd cycle";
        for (int x : pv) msg << ' ' << x;
        for (auto it = pw.rbegin() + 1; it != pw.rend(); ++it) msg << ' ' << *it;
        msg << ' ' << v;
        throw TopologyError(msg.str());
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (parity[v] < 0) throw TopologyError("quad-graph is disconnected (vertex " + std::to_string(v) + ")");
    if (static_cast<int>(colors_[v]) != parity[v]) {
      throw TopologyError("vertex " + std::to_string(v) +
                          " color disagrees with the BFS 2-coloring anchored at quad 0");
    }
  }

  for (std::size_t q = 0; q < quads_.size(); ++q) {
    const Quad& quad = quads_[q];
    for (int k = 0; k < 4; ++k) {
      const Color want = (k % 2 == 0) ? Color::kBlack : Color::kWhite;
      if (colors_[quad.vertices[k]] != want) {
        throw TopologyError(quad_name(q) + ": corners must alternate black/white starting black");
      }
    }
    double signed_area = 0;
    for (int k = 0; k < 4; ++k) signed_area += 0.5 * cross(quad.chart[k], quad.chart[(k + 1) % 4]);
    const double scale = std::max(std::abs(quad.black_diagonal()), std::abs(quad.white_diagonal()));
    if (signed_area <= tol.geometry * scale * scale) {
      throw GeometryError(quad_name(q) + ": chart is degenerate or clockwise");
    }
    if (segments_cross(quad.chart[0], quad.chart[1], quad.chart[2], quad.chart[3]) ||
        segments_cross(quad.chart[1], quad.chart[2], quad.chart[3], quad.chart[0])) {
      throw GeometryError(quad_name(q) + ": chart is self-intersecting");
    }
    if (rho(quad).real() <= 0) throw GeometryError(quad_name(q) + ": Re rho <= 0");
  }

  build_rotation();

  if (euler_characteristic() >= 2) throw TopologyError("genus 0 surfaces are not supported");

  // Angle sums from the charts; Gauss–Bonnet must reproduce the Euler count.
  std::vector<double> angle(nv, 0.0);
  for (const auto& quad : quads_) {
    const auto a = interior_angles(quad);
    for (int k = 0; k < 4; ++k) angle[quad.vertices[k]] += a[k];
  }
  double excess = 0;
  for (double th : angle) excess += 2 * kPi - th;
  if (std::abs(excess / (2 * kPi) - euler_characteristic()) > 1e-6) {
    throw GeometryError("Gauss-Bonnet genus disagrees with the Euler count");
  }

  if (cones_.empty()) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (std::abs(angle[v] - 2 * kPi) <= 1e-9) continue;
      ConePoint c;
      c.vertex = static_cast<int>(v);
      c.angle = angle[v];
      c.index = 2 * kPi / angle[v];
      c.radius = std::numeric_limits<double>::infinity();
      for (const auto& [q, k] : corners_[v]) {
        const Quad& quad = quads_[q];
        c.radius = std::min(c.radius, std::abs(quad.chart[(k + 1) % 4] - quad.chart[k]));
      }
      cones_.push_back(c);
    }
  }
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    const ConePoint& c = cones_[i];
    if (c.vertex < 0 || c.vertex >= static_cast<int>(nv)) throw ParseError("cone table: bad vertex");
    if (std::abs(c.angle - angle[c.vertex]) > 1e-6) {
      throw GeometryError("cone table angle at vertex " + std::to_string(c.vertex) +
                          " disagrees with the chart angle sum");
    }
    // Quads incident to a cone always carry its anchor.
    for (const auto& [q, k] : corners_[c.vertex]) {
      if (!anchors_[q]) anchors_[q] = ConeAnchor{static_cast<int>(i), quads_[q].chart[k]};
    }
  }
}

void QuadGraph::build_rotation() {
  const std::size_t nv = colors_.size();
  std::vector<std::array<bool, 4>> seen(quads_.size(), {false, false, false, false});
  std::vector<int> corner_total(nv, 0);
  for (const auto& q : quads_) {
    for (int k = 0; k < 4; ++k) ++corner_total[q.vertices[k]];
  }
  corners_.assign(nv, {});
  slots_.assign(quads_.size(), {-1, -1, -1, -1});
  for (std::size_t q = 0; q < quads_.size(); ++q) {
    for (int k = 0; k < 4; ++k) {
      const int v = quads_[q].vertices[k];
      if (seen[q][k] || !corners_[v].empty()) continue;
      // Turning counterclockwise around v: leave the quad through its incoming
      // side k-1; the twin side starts at v and names the next corner.
      int cq = static_cast<int>(q), ck = k;
      while (!seen[cq][ck]) {
        seen[cq][ck] = true;
        slots_[cq][ck] = static_cast<int>(corners_[v].size());
        corners_[v].emplace_back(cq, ck);
        const QuadSide next = twin(QuadSide{cq, (ck + 3) % 4});
        cq = next.quad;
        ck = next.side;
      }
      if (static_cast<int>(corners_[v].size()) != corner_total[v]) {
        throw TopologyError("vertex " + std::to_string(v) + " has a non-manifold link");
      }
    }
  }
}

MeshStats mesh_stats(const QuadGraph& g) {
  MeshStats s;
  s.quads = g.quad_count();
  s.vertices = g.vertex_count();
  s.edges = g.edge_count();
  s.genus = g.genus();
  s.area = g.total_area();
  s.phi_min = kPi / 2;
  for (const auto& q : g.quads()) {
    for (int k = 0; k < 4; ++k) s.h = std::max(s.h, std::abs(q.chart[(k + 1) % 4] - q.chart[k]));
    for (double a : interior_angles(q)) s.phi_min = std::min(s.phi_min, a);
    s.phi_min = std::min(s.phi_min, kPi / 2 - std::abs(std::arg(rho(q))));
  }
  s.phi_min = std::max(s.phi_min, 0.0);
  for (const auto& c : g.cones()) {
    if (!c.singular()) continue;
    s.cone_indices.push_back(c.index);
    s.gamma_sigma = std::min(s.gamma_sigma, c.index);
  }
  return s;
}

double cone_image_distance(Complex x, Complex y, double gamma) {
  const double rx = std::abs(x), ry = std::abs(y);
  if (rx == 0) return std::pow(ry, gamma);
  if (ry == 0) return std::pow(rx, gamma);
  const double dpsi = std::arg(y / x);
  return std::abs(std::pow(rx, gamma) - std::pow(ry, gamma) * std::polar(1.0, gamma * dpsi));
}

AdaptedReport validate_h_adapted(const QuadGraph& g, double h, double slack) {
  AdaptedReport r;
  const double limit = h * (1 + slack);
  for (std::size_t qi = 0; qi < g.quad_count(); ++qi) {
    const Quad& q = g.quad(static_cast<int>(qi));
    for (int k = 0; k < 4; ++k) {
      const double len = std::abs(q.chart[(k + 1) % 4] - q.chart[k]);
      r.max_edge = std::max(r.max_edge, len);
      if (len > limit && r.pass) {
        r.pass = false;
        r.worst_quad = static_cast<int>(qi);
        r.worst_side = k;
        r.message = "edge length " + std::to_string(len) + " exceeds h";
      }
    }
    const auto& anchor = g.anchors()[qi];
    if (!anchor) continue;
    const ConePoint& cone = g.cones()[anchor->cone];
    if (cone.index > 0.5) continue;
    for (int k = 0; k < 4; ++k) {
      const Complex x = q.chart[k] - anchor->position;
      const Complex y = q.chart[(k + 1) % 4] - anchor->position;
      if (point_segment_distance(0, x, y) >= cone.radius) continue;
      ++r.checked_edges;
      const double img = cone_image_distance(x, y, cone.index);
      if (img > r.max_image_edge) {
        r.max_image_edge = img;
        if (img > limit) {
          r.pass = false;
          r.worst_quad = static_cast<int>(qi);
          r.worst_side = k;
          r.message = "cone chart image of edge has length " + std::to_string(img) +
                      " > h near vertex " + std::to_string(cone.vertex);
        }
      }
    }
  }
  return r;
}

namespace detail {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

QuadGraph tile_parallelograms(const PolyhedralSurface& surface, int m, const GridWarp& warp) {
  if (m < 2 || m % 2 != 0) {
    throw TopologyError("parity obstruction: subdivision count " + std::to_string(m) +
                        " per side must be even");
  }
  const auto& polys = surface.polygons();
  const int np = static_cast<int>(polys.size());
  for (int p = 0; p < np; ++p) {
    const auto& v = polys[p].vertices;
    if (v.size() != 4 || std::abs(v[0] + v[2] - v[1] - v[3]) > 1e-9) {
      throw GeometryError("unsupported polygon shape: polygon " + std::to_string(p) +
                          " is not a parallelogram");
    }
  }
  const int pts_per = (m + 1) * (m + 1);
  const int segs_per = 2 * m * (m + 1);
  auto point_id = [&](int p, int i, int j) { return p * pts_per + i * (m + 1) + j; };
  // Horizontal segment (i,j)-(i+1,j) then vertical segment (i,j)-(i,j+1).
  auto hseg = [&](int p, int i, int j) { return p * segs_per + i * (m + 1) + j; };
  auto vseg = [&](int p, int i, int j) { return p * segs_per + m * (m + 1) + i * m + j; };
  auto boundary_point = [&](int p, int k, int t) {
    switch (k) {
      case 0: return point_id(p, t, 0);
      case 1: return point_id(p, m, t);
      case 2: return point_id(p, m - t, m);
      default: return point_id(p, 0, m - t);
    }
  };
  auto boundary_segment = [&](int p, int k, int t) {
    switch (k) {
      case 0: return hseg(p, t, 0);
      case 1: return vseg(p, m, t);
      case 2: return hseg(p, m - t - 1, m);
      default: return vseg(p, 0, m - t - 1);
    }
  };

  UnionFind upts(static_cast<std::size_t>(np) * pts_per);
  UnionFind usegs(static_cast<std::size_t>(np) * segs_per);
  std::vector<int> seam_of(static_cast<std::size_t>(np) * segs_per, -1);
  for (std::size_t gi = 0; gi < surface.gluings().size(); ++gi) {
    const auto& g = surface.gluings()[gi];
    for (int t = 0; t <= m; ++t) {
      upts.unite(boundary_point(g.first.polygon, g.first.edge, t),
                 boundary_point(g.second.polygon, g.second.edge, m - t));
    }
    for (int t = 0; t < m; ++t) {
      const int a = boundary_segment(g.first.polygon, g.first.edge, t);
      const int b = boundary_segment(g.second.polygon, g.second.edge, m - 1 - t);
      usegs.unite(a, b);
      seam_of[a] = seam_of[b] = static_cast<int>(gi);
    }
  }

  std::vector<int> vid(upts.parent.size(), -1);
  std::vector<Color> colors;
  for (int p = 0; p < np; ++p) {
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const int root = upts.find(point_id(p, i, j));
        if (vid[root] < 0) {
          vid[root] = static_cast<int>(colors.size());
          colors.push_back((i + j) % 2 == 0 ? Color::kBlack : Color::kWhite);
        }
      }
    }
  }

  auto position = [&](int p, int i, int j) {
    double s = static_cast<double>(i) / m, t = static_cast<double>(j) / m;
    if (warp) std::tie(s, t) = warp(p, s, t);
    const auto& v = polys[p].vertices;
    return v[0] + s * (v[1] - v[0]) + t * (v[3] - v[0]);
  };

  std::vector<Quad> quads;
  std::vector<Edge> edges;
  std::vector<int> eid(usegs.parent.size(), -1);
  quads.reserve(static_cast<std::size_t>(np) * m * m);
  for (int p = 0; p < np; ++p) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const std::array<std::pair<int, int>, 4> c{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
        const std::array<int, 4> segs{hseg(p, i, j), vseg(p, i + 1, j), hseg(p, i, j + 1),
                                      vseg(p, i, j)};
        const int shift = (i + j) % 2 == 0 ? 0 : 1;
        Quad q;
        q.polygon = p;
        const int qi = static_cast<int>(quads.size());
        for (int k = 0; k < 4; ++k) {
          const int src = (k + shift) % 4;
          q.vertices[k] = vid[upts.find(point_id(p, c[src].first, c[src].second))];
          q.chart[k] = position(p, c[src].first, c[src].second);
        }
        for (int k = 0; k < 4; ++k) {
          const int src = (k + shift) % 4;
          const int root = usegs.find(segs[src]);
          if (eid[root] < 0) {
            eid[root] = static_cast<int>(edges.size());
            Edge e;
            e.ends = {q.vertices[k], q.vertices[(k + 1) % 4]};
            e.sides[0] = QuadSide{qi, k};
            e.seam = seam_of[segs[src]];
            edges.push_back(e);
          } else {
            Edge& e = edges[eid[root]];
            if (e.sides[1].quad >= 0) throw TopologyError("segment glued more than twice");
            e.sides[1] = QuadSide{qi, k};
          }
          q.edges[k] = eid[root];
        }
        quads.push_back(q);
      }
    }
  }

  // Cone table from the surface vertices, anchored in every quad whose
  // chart meets the cone disk around the corresponding polygon corner.
  const auto surface_cones = surface.cone_points();
  std::vector<ConePoint> cones;
  std::vector<int> cone_of_surface_vertex(surface_cones.size(), -1);
  for (const auto& sc : surface_cones) {
    if (!sc.singular()) continue;
    const Corner c0 = surface.vertices().corners[sc.vertex].front();
    const int k = c0.index;
    const std::array<std::pair<int, int>, 4> corner_ij{{{0, 0}, {m, 0}, {m, m}, {0, m}}};
    ConePoint c = sc;
    c.vertex = vid[upts.find(point_id(c0.polygon, corner_ij[k].first, corner_ij[k].second))];
    cone_of_surface_vertex[sc.vertex] = static_cast<int>(cones.size());
    cones.push_back(c);
  }
  std::vector<std::optional<ConeAnchor>> anchors(quads.size());
  if (!cones.empty()) {
    for (std::size_t qi = 0; qi < quads.size(); ++qi) {
      const Quad& q = quads[qi];
      const auto& poly = polys[q.polygon];
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 4; ++k) {
        const int ci = cone_of_surface_vertex[surface.vertices().corner_vertex[q.polygon][k]];
        if (ci < 0) continue;
        double d = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 4; ++s) {
          d = std::min(d, point_segment_distance(poly.vertices[k], q.chart[s], q.chart[(s + 1) % 4]));
        }
        if (d < cones[ci].radius && d < best) {
          best = d;
          anchors[qi] = ConeAnchor{ci, poly.vertices[k]};
        }
      }
    }
  }
  return QuadGraph(std::move(colors), std::move(quads), std::move(edges), std::move(cones),
                   std::move(anchors));
}

}  // namespace detail

QuadGraph build_quad_graph(const PolyhedralSurface& surface, double cell_size) {
  if (!(cell_size > 0)) throw GeometryError("cell size must be positive");
  const double quotient = 1.0 / cell_size;
  const int m = static_cast<int>(std::lround(quotient));
  if (std::abs(quotient - m) > 1e-9 * quotient) {
    throw GeometryError("cell size must divide the polygon side evenly");
  }
  return detail::tile_parallelograms(surface, m);
}

QuadGraph generate_torus(Complex tau, int n) {
  if (n < 2 || n % 2 != 0) {
    throw TopologyError("parity obstruction: torus grid size n = " + std::to_string(n) +
                        " must be even for a checkerboard coloring");
  }
  return detail::tile_parallelograms(make_torus_surface(tau), n);
}

}  // namespace quadperiod
