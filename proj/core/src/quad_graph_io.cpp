#include <iomanip>
#include <sstream>

#include "quadperiod/quad_graph.hpp"

namespace quadperiod {

namespace {

class Reader {
 public:
  explicit Reader(const std::string& doc) : in_(doc) {}

  // Next non-empty, non-comment line split into tokens.
  std::istringstream line() {
    std::string s;
    while (std::getline(in_, s)) {
      ++lineno_;
      const auto hash = s.find('#');
      if (hash != std::string::npos) s.erase(hash);
      if (s.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(s);
    }
    throw ParseError("quad-graph document ends early");
  }

  std::size_t section(const std::string& name) {
    auto ls = line();
    std::string key;
    long long n = -1;
    ls >> key >> n;
    if (key != name || n < 0) fail("expected '" + name + " <count>'");
    return static_cast<std::size_t>(n);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("quad-graph line " + std::to_string(lineno_) + ": " + what);
  }

  template <typename... T>
  void read(std::istringstream& ls, T&... out) {
    ((ls >> out), ...);
    if (!ls) fail("malformed record");
  }

  bool more() {
    std::string s;
    const auto pos = in_.tellg();
    while (std::getline(in_, s)) {
      if (s.find_first_not_of(" \t\r") != std::string::npos && s[s.find_first_not_of(" \t\r")] != '#') {
        in_.seekg(pos);
        return true;
      }
    }
    return false;
  }

 private:
  std::istringstream in_;
  int lineno_ = 0;
};

}  // namespace

std::string dump_quad_graph(const QuadGraph& g) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "format: 1\nkind: quadgraph\n";
  out << "vertices " << g.vertex_count() << '\n';
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    out << v << ' ' << (g.color(static_cast<int>(v)) == Color::kBlack ? 'b' : 'w') << '\n';
  }
  out << "edges " << g.edge_count() << '\n';
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(static_cast<int>(e));
    out << e << ' ' << edge.ends[0] << ' ' << edge.ends[1] << ' ' << edge.seam << '\n';
  }
  out << "quads " << g.quad_count() << '\n';
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const Quad& quad = g.quad(static_cast<int>(q));
    out << q;
    for (int v : quad.vertices) out << ' ' << v;
    for (int e : quad.edges) out << ' ' << e;
    for (const Complex& z : quad.chart) out << ' ' << z.real() << ' ' << z.imag();
    out << ' ' << quad.polygon << '\n';
  }
  out << "cones " << g.cones().size() << '\n';
  for (const auto& c : g.cones()) out << c.vertex << ' ' << c.angle << ' ' << c.radius << '\n';
  std::size_t anchored = 0;
  for (const auto& a : g.anchors()) anchored += a.has_value();
  out << "anchors " << anchored << '\n';
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const auto& a = g.anchors()[q];
    if (a) out << q << ' ' << a->cone << ' ' << a->position.real() << ' ' << a->position.imag() << '\n';
  }
  return out.str();
}

QuadGraph load_quad_graph(const std::string& document) {
  Reader r(document);
  {
    auto ls = r.line();
    std::string key, value;
    ls >> key >> value;
    if (key != "format:" || value != "1") r.fail("expected 'format: 1'");
    auto ks = r.line();
    ks >> key >> value;
    if (key != "kind:" || value != "quadgraph") r.fail("expected 'kind: quadgraph'");
  }

  const std::size_t nv = r.section("vertices");
  std::vector<Color> colors(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto ls = r.line();
    std::size_t id = 0;
    char c = 0;
    r.read(ls, id, c);
    if (id != i) r.fail("vertex ids must be consecutive from 0");
    if (c != 'b' && c != 'w') r.fail("vertex color must be 'b' or 'w'");
    colors[i] = c == 'b' ? Color::kBlack : Color::kWhite;
  }

  const std::size_t ne = r.section("edges");
  std::vector<Edge> edges(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    auto ls = r.line();
    std::size_t id = 0;
    r.read(ls, id, edges[i].ends[0], edges[i].ends[1]);
    if (id != i) r.fail("edge ids must be consecutive from 0");
    int seam = -1;
    if (ls >> seam) edges[i].seam = seam;
    for (int v : edges[i].ends) {
      if (v < 0 || v >= static_cast<int>(nv)) r.fail("edge references an unknown vertex");
    }
  }

  const std::size_t nq = r.section("quads");
  std::vector<Quad> quads(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    auto ls = r.line();
    std::size_t id = 0;
    r.read(ls, id);
    if (id != i) r.fail("quad ids must be consecutive from 0");
    Quad& q = quads[i];
    for (int& v : q.vertices) r.read(ls, v);
    for (int& e : q.edges) r.read(ls, e);
    for (Complex& z : q.chart) {
      double x = 0, y = 0;
      r.read(ls, x, y);
      z = Complex(x, y);
    }
    int poly = -1;
    if (ls >> poly) q.polygon = poly;
    for (int k = 0; k < 4; ++k) {
      const int e = q.edges[k];
      if (e < 0 || e >= static_cast<int>(ne)) r.fail("quad references an unknown edge");
      Edge& edge = edges[e];
      const int a = q.vertices[k], b = q.vertices[(k + 1) % 4];
      const QuadSide side{static_cast<int>(i), k};
      if (edge.ends[0] == a && edge.ends[1] == b && edge.sides[0].quad < 0) {
        edge.sides[0] = side;
      } else if (edge.ends[0] == b && edge.ends[1] == a && edge.sides[1].quad < 0) {
        edge.sides[1] = side;
      } else {
        throw TopologyError("quad " + std::to_string(i) + " side " + std::to_string(k) +
                            " does not match edge " + std::to_string(e) +
                            " (non-manifold or inconsistently oriented)");
      }
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (edges[e].sides[0].quad < 0 || edges[e].sides[1].quad < 0) {
      throw TopologyError("edge " + std::to_string(e) + " is a boundary edge");
    }
  }

  std::vector<ConePoint> cones;
  std::vector<std::optional<ConeAnchor>> anchors(nq);
  if (r.more()) {
    const std::size_t nc = r.section("cones");
    for (std::size_t i = 0; i < nc; ++i) {
      auto ls = r.line();
      ConePoint c;
      r.read(ls, c.vertex, c.angle, c.radius);
      if (!(c.angle > 0)) r.fail("cone angle must be positive");
      c.index = 2 * kPi / c.angle;
      cones.push_back(c);
    }
    if (r.more()) {
      const std::size_t na = r.section("anchors");
      for (std::size_t i = 0; i < na; ++i) {
        auto ls = r.line();
        std::size_t q = 0;
        int cone = -1;
        double x = 0, y = 0;
        r.read(ls, q, cone, x, y);
        if (q >= nq || cone < 0 || cone >= static_cast<int>(cones.size())) {
          r.fail("anchor references an unknown quad or cone");
        }
        anchors[q] = ConeAnchor{cone, Complex(x, y)};
      }
    }
  }
  return QuadGraph(std::move(colors), std::move(quads), std::move(edges), std::move(cones),
                   std::move(anchors));
}

}  // namespace quadperiod
