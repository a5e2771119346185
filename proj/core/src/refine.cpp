#include "quadperiod/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadperiod/detail/tiling.hpp"

namespace quadperiod {

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Grading profile on [0, 1/2]: c·s^α up to the knee, then the C¹ linear
// continuation reaching 1/2 at s = 1/2.
struct Profile {
  double alpha = 1, knee = 0.25, c = 1, slope = 1, offset = 0;

  Profile(double a, double k) : alpha(a), knee(k) {
    c = 0.5 / (std::pow(knee, alpha - 1) * (knee + alpha * (0.5 - knee)));
    offset = c * std::pow(knee, alpha);
    slope = c * alpha * std::pow(knee, alpha - 1);
  }
  [[nodiscard]] double operator()(double s) const {
    return s <= knee ? c * std::pow(s, alpha) : offset + slope * (s - knee);
  }
};

bool is_square(const Polygon& p) {
  if (p.vertices.size() != 4) return false;
  const Complex u = p.vertices[1] - p.vertices[0];
  const Complex v = p.vertices[3] - p.vertices[0];
  const double tol = 1e-9 * std::max(std::abs(u), 1.0);
  return std::abs(p.vertices[0] + p.vertices[2] - p.vertices[1] - p.vertices[3]) <= tol &&
         std::abs(std::abs(u) - std::abs(v)) <= tol && std::abs(v - u * Complex(0, 1)) <= tol;
}

int even_ceil(double x) {
  int m = static_cast<int>(std::ceil(x - 1e-9));
  m = std::max(m, 2);
  return m % 2 == 0 ? m : m + 1;
}

}  // namespace

QuadGraph subdivide(const QuadGraph& g) {
  const int nv = static_cast<int>(g.vertex_count());
  const int ne = static_cast<int>(g.edge_count());
  const int nq = static_cast<int>(g.quad_count());

  std::vector<Color> colors(static_cast<std::size_t>(nv + ne + nq), Color::kBlack);
  for (int e = 0; e < ne; ++e) colors[nv + e] = Color::kWhite;
  auto midpoint = [&](int e) { return nv + e; };
  auto center = [&](int q) { return nv + ne + q; };

  // Edge keys: half (e, part) → 2e + part with part 0 touching ends[0];
  // interior spoke from the midpoint of side k of quad q → 2E + 4q + k.
  std::vector<Edge> edges(static_cast<std::size_t>(2 * ne + 4 * nq));
  auto attach = [&](int key, int from, int to, int quad, int side, int seam) {
    Edge& e = edges[key];
    if (e.sides[0].quad < 0) {
      e.ends = {from, to};
      e.sides[0] = QuadSide{quad, side};
      e.seam = seam;
    } else {
      e.sides[1] = QuadSide{quad, side};
    }
  };

  std::vector<Quad> quads(static_cast<std::size_t>(4 * nq));
  for (int qi = 0; qi < nq; ++qi) {
    const Quad& q = g.quad(qi);
    const Complex c = 0.25 * (q.chart[0] + q.chart[1] + q.chart[2] + q.chart[3]);
    // Half of side k adjacent to corner k (first) or to corner k+1 (second).
    auto half_at_start = [&](int k) {
      const Edge& e = g.edge(q.edges[k]);
      const bool forward = e.sides[0].quad == qi && e.sides[0].side == k;
      return 2 * q.edges[k] + (forward ? 0 : 1);
    };
    auto half_at_end = [&](int k) {
      const Edge& e = g.edge(q.edges[k]);
      const bool forward = e.sides[0].quad == qi && e.sides[0].side == k;
      return 2 * q.edges[k] + (forward ? 1 : 0);
    };
    for (int k = 0; k < 4; ++k) {
      const int km = (k + 3) % 4;
      const int child = 4 * qi + k;
      Quad& cq = quads[child];
      cq.polygon = q.polygon;
      cq.vertices = {q.vertices[k], midpoint(q.edges[k]), center(qi), midpoint(q.edges[km])};
      cq.chart = {q.chart[k], 0.5 * (q.chart[k] + q.chart[(k + 1) % 4]), c,
                  0.5 * (q.chart[km] + q.chart[k])};
      const std::array<int, 4> keys{half_at_start(k), 2 * ne + 4 * qi + k,
                                    2 * ne + 4 * qi + km, half_at_end(km)};
      const std::array<int, 4> seams{g.edge(q.edges[k]).seam, -1, -1, g.edge(q.edges[km]).seam};
      for (int s = 0; s < 4; ++s) {
        cq.edges[s] = keys[s];
        attach(keys[s], cq.vertices[s], cq.vertices[(s + 1) % 4], child, s, seams[s]);
      }
    }
  }

  std::vector<std::optional<ConeAnchor>> anchors(quads.size());
  for (int qi = 0; qi < nq; ++qi) {
    const auto& a = g.anchors()[qi];
    if (!a) continue;
    const double radius = g.cones()[a->cone].radius;
    for (int k = 0; k < 4; ++k) {
      const Quad& cq = quads[4 * qi + k];
      double d = std::numeric_limits<double>::infinity();
      for (int s = 0; s < 4; ++s) {
        d = std::min(d, point_segment_distance(a->position, cq.chart[s], cq.chart[(s + 1) % 4]));
      }
      if (d < radius) anchors[4 * qi + k] = a;
    }
  }
  return QuadGraph(std::move(colors), std::move(quads), std::move(edges), g.cones(),
                   std::move(anchors));
}

QuadGraph generate_adapted(const PolyhedralSurface& surface, double h,
                           const AdaptedOptions& options) {
  if (!(h > 0)) throw Error("h must be positive");
  const auto& polys = surface.polygons();
  double side = 0;
  for (std::size_t p = 0; p < polys.size(); ++p) {
    const auto& v = polys[p].vertices;
    if (v.size() != 4 || std::abs(v[0] + v[2] - v[1] - v[3]) > 1e-9) {
      throw GeometryError("adapted meshing needs parallelogram tiles; polygon " +
                          std::to_string(p) + " is not one");
    }
    side = std::max({side, std::abs(v[1] - v[0]), std::abs(v[3] - v[0])});
  }

  // Grading exponent per surface vertex: 1/γ at cones with γ ≤ 1/2.
  const auto cones = surface.cone_points();
  std::vector<double> alpha(cones.size(), 1.0);
  bool graded = false;
  for (const auto& c : cones) {
    if (c.index <= 0.5 + 1e-12) {
      alpha[c.vertex] = 1.0 / c.index;
      graded = true;
    }
  }

  int m = even_ceil(side / h);
  if (!graded) {
    QuadGraph g = detail::tile_parallelograms(surface, m);
    const AdaptedReport r = validate_h_adapted(g, h);
    if (!r.pass) throw GeometryError("uniform grid is not h-adapted: " + r.message);
    return g;
  }
  for (std::size_t p = 0; p < polys.size(); ++p) {
    if (!is_square(polys[p])) {
      throw GeometryError("graded meshing near cones needs square tiles; polygon " +
                          std::to_string(p) + " is not a square");
    }
  }

  std::vector<Profile> profiles;
  std::vector<int> profile_of(alpha.size());
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    auto it = std::find_if(profiles.begin(), profiles.end(),
                           [&](const Profile& pr) { return pr.alpha == alpha[v]; });
    if (it == profiles.end()) {
      profiles.emplace_back(alpha[v], alpha[v] == 1.0 ? 0.5 : options.knee);
      it = profiles.end() - 1;
    }
    profile_of[v] = static_cast<int>(it - profiles.begin());
  }
  const auto& corner_vertex = surface.vertices().corner_vertex;
  const detail::GridWarp warp = [&](int p, double s, double t) {
    const int cs = s < 0.5 ? 0 : 1, ct = t < 0.5 ? 0 : 1;
    static constexpr int kCorner[2][2] = {{0, 3}, {1, 2}};
    const Profile& pr = profiles[profile_of[corner_vertex[p][kCorner[cs][ct]]]];
    double x = std::abs(s - cs), y = std::abs(t - ct);
    const double r = std::max(x, y);
    if (r > 0 && pr.alpha != 1.0) {
      const double f = pr(r) / r;
      x *= f;
      y *= f;
    }
    return std::pair{cs == 0 ? x : 1 - x, ct == 0 ? y : 1 - y};
  };

  std::string last;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    QuadGraph g = detail::tile_parallelograms(surface, m, warp);
    const AdaptedReport r = validate_h_adapted(g, h);
    if (r.pass) {
      const MeshStats st = mesh_stats(g);
      if (st.phi_min < options.phi_floor) {
        throw GeometryError("adapted mesh violates the phi floor: phi_min " +
                            std::to_string(st.phi_min) + " < " +
                            std::to_string(options.phi_floor));
      }
      return g;
    }
    last = r.message;
    m += 2 * std::max(1, m / 32);
  }
  throw GeometryError("could not reach an h-adapted mesh for h = " + std::to_string(h) + ": " +
                      last);
}

std::vector<RefinementLevel> sweep(const PolyhedralSurface& surface, int levels, bool adapted,
                                   const SweepOptions& options) {
  if (levels < 2) throw Error("a sweep needs at least 2 levels");
  std::vector<RefinementLevel> out;
  out.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    RefinementLevel lvl;
    lvl.level = l;
    lvl.adapted = adapted;
    if (adapted) {
      lvl.graph = generate_adapted(surface, options.base_cell / std::pow(2.0, l), options.adapted);
    } else {
      lvl.graph = l == 0 ? build_quad_graph(surface, options.base_cell) : subdivide(out.back().graph);
    }
    lvl.stats = mesh_stats(lvl.graph);
    if (!out.empty()) {
      const MeshStats& first = out.front().stats;
      if (lvl.stats.genus != first.genus) {
        throw TopologyError("genus changed across refinement levels at level " +
                            std::to_string(l));
      }
      if (std::abs(lvl.stats.area - first.area) > 1e-12 * std::max(1.0, first.area)) {
        throw GeometryError("total area changed across refinement levels at level " +
                            std::to_string(l));
      }
      if (!(lvl.stats.h < out.back().stats.h)) {
        throw GeometryError("h did not decrease at level " + std::to_string(l));
      }
    }
    if (lvl.stats.phi_min < options.adapted.phi_floor) {
      throw GeometryError("phi_min " + std::to_string(lvl.stats.phi_min) +
                          " below the floor at level " + std::to_string(l));
    }
    out.push_back(std::move(lvl));
  }
  return out;
}

EdgeBoundReport check_edge_bound(const QuadGraph& g, double h, double slack) {
  EdgeBoundReport r;
  const double eps = 1e-12;
  for (std::size_t qi = 0; qi < g.quad_count(); ++qi) {
    const auto& anchor = g.anchors()[qi];
    if (!anchor) continue;
    const ConePoint& cone = g.cones()[anchor->cone];
    const double gamma = cone.index;
    if (gamma > 0.5) continue;
    const Quad& q = g.quad(static_cast<int>(qi));
    for (int k = 0; k < 4; ++k) {
      Complex x = q.chart[k] - anchor->position;
      Complex y = q.chart[(k + 1) % 4] - anchor->position;
      if (point_segment_distance(0, x, y) >= cone.radius) continue;
      if (std::abs(x) > std::abs(y)) std::swap(x, y);
      const double len = std::abs(y - x);
      const double corrected =
          len / ((1 + kPi / 2) / gamma * h * std::pow(std::abs(y), 1 - gamma));
      r.corrected_ratio = std::max(r.corrected_ratio, corrected);
      if (corrected > 1 + slack) r.corrected_pass = false;
      if (std::abs(x) <= eps) {
        ++r.incident;
        continue;
      }
      ++r.checked;
      const double bound = (1 + kPi / (2 * gamma)) * h * std::pow(std::abs(x), 1 - gamma);
      const double ratio = len / bound;
      if (ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_x = std::abs(x);
        r.worst_y = std::abs(y);
      }
      if (ratio > 1 + slack) r.pass = false;
    }
  }
  return r;
}

}  // namespace quadperiod

namespace quadperiod {

Cycle transport_subdivided(const QuadGraph& coarse, const QuadGraph& fine, const Cycle& c) {
  const int nv = static_cast<int>(coarse.vertex_count());
  if (fine.edge_count() != 2 * coarse.edge_count() + 4 * coarse.quad_count()) {
    throw TopologyError("graph is not a subdivision of the coarse graph");
  }
  Cycle out;
  out.coefficients = c.coefficients;
  for (const Step& s : c.steps) {
    const Edge& e = coarse.edge(s.edge);
    const int mid = nv + s.edge;
    // Half 2e joins ends[0] and the midpoint, half 2e+1 the midpoint and ends[1].
    const Step first{2 * s.edge, fine.edge(2 * s.edge).ends[1] == mid};
    const Step second{2 * s.edge + 1, fine.edge(2 * s.edge + 1).ends[0] == mid};
    if (fine.edge(2 * s.edge).ends[first.forward ? 0 : 1] != e.ends[0]) {
      throw TopologyError("graph is not a subdivision of the coarse graph");
    }
    if (s.forward) {
      out.steps.push_back(first);
      out.steps.push_back(second);
    } else {
      out.steps.push_back({second.edge, !second.forward});
      out.steps.push_back({first.edge, !first.forward});
    }
  }
  validate_cycle(fine, out);
  return out;
}

int tiled_side_count(const QuadGraph& g, int polygons) {
  const auto per = g.quad_count() / static_cast<std::size_t>(polygons);
  const int m = static_cast<int>(std::llround(std::sqrt(static_cast<double>(per))));
  if (static_cast<std::size_t>(m) * m * polygons != g.quad_count()) {
    throw TopologyError("quad count is not that of a tiled decomposition");
  }
  return m;
}

Cycle transport_tiled(const QuadGraph& coarse, int m_coarse, const QuadGraph& fine, int m_fine,
                      const Cycle& c) {
  if (m_fine % m_coarse != 0) throw TopologyError("fine grid count must be a multiple of the coarse");
  const int r = m_fine / m_coarse;
  const int mc2 = m_coarse * m_coarse, mf2 = m_fine * m_fine;
  // Counterclockwise side src of grid cell (i, j) runs from offset[src] to offset[src+1].
  static constexpr int kOff[5][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  Cycle out;
  out.coefficients = c.coefficients;
  for (const Step& s : c.steps) {
    const QuadSide side = coarse.edge(s.edge).sides[0];
    const int p = side.quad / mc2, i = side.quad % mc2 % m_coarse, j = side.quad % mc2 / m_coarse;
    const int src = (side.side + (i + j) % 2) % 4;
    int x0 = (i + kOff[src][0]) * r, y0 = (j + kOff[src][1]) * r;
    int dx = kOff[src + 1][0] - kOff[src][0], dy = kOff[src + 1][1] - kOff[src][1];
    if (!s.forward) {
      x0 += r * dx;
      y0 += r * dy;
      dx = -dx;
      dy = -dy;
    }
    for (int t = 0; t < r; ++t) {
      const int x = x0 + t * dx, y = y0 + t * dy;
      // Cell on the left of the unit segment traverses it counterclockwise,
      // the cell on the right clockwise.
      int li, lj, lsrc, ri, rj, rsrc;
      if (dx == 1) {
        li = x, lj = y, lsrc = 0, ri = x, rj = y - 1, rsrc = 2;
      } else if (dy == 1) {
        li = x - 1, lj = y, lsrc = 1, ri = x, rj = y, rsrc = 3;
      } else if (dx == -1) {
        li = x - 1, lj = y - 1, lsrc = 2, ri = x - 1, rj = y, rsrc = 0;
      } else {
        li = x, lj = y - 1, lsrc = 3, ri = x - 1, rj = y - 1, rsrc = 1;
      }
      auto inside = [&](int a, int b) { return a >= 0 && b >= 0 && a < m_fine && b < m_fine; };
      const bool left = inside(li, lj);
      const int ci = left ? li : ri, cj = left ? lj : rj, csrc = left ? lsrc : rsrc;
      const int q = p * mf2 + cj * m_fine + ci;
      const int k = (csrc - (ci + cj) % 2 + 4) % 4;
      const int e = fine.quad(q).edges[k];
      const QuadSide s0 = fine.edge(e).sides[0];
      const bool along_side0 = s0.quad == q && s0.side == k;
      out.steps.push_back({e, along_side0 == left});
    }
  }
  validate_cycle(fine, out);
  return out;
}

}  // namespace quadperiod
