#include <fstream>
#include <iomanip>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "quadperiod/surface.hpp"

namespace quadperiod {

namespace {

Complex read_point(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 2) throw ParseError("expected a point [x, y]");
  return {n[0].as<double>(), n[1].as<double>()};
}

EdgeRef read_edge_ref(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 2) throw ParseError("expected an edge reference [polygon, edge]");
  return {n[0].as<int>(), n[1].as<int>()};
}

std::optional<GeneratorSpec> read_generator(const YAML::Node& n) {
  if (!n) return std::nullopt;
  GeneratorSpec spec;
  const auto kind = n["kind"].as<std::string>("");
  if (kind == "torus") {
    spec.kind = GeneratorKind::kTorus;
    if (n["tau"]) spec.tau = read_point(n["tau"]);
  } else if (kind == "l_shape") {
    spec.kind = GeneratorKind::kLShape;
    spec.cells = {{0, 0}, {1, 0}, {0, 1}};
  } else if (kind == "square_tiled") {
    spec.kind = GeneratorKind::kSquareTiled;
    if (!n["cells"] || !n["cells"].IsSequence()) throw ParseError("square_tiled generator needs cells");
    for (const auto& c : n["cells"]) {
      if (!c.IsSequence() || c.size() != 2) throw ParseError("cell must be [x, y]");
      spec.cells.emplace_back(c[0].as<int>(), c[1].as<int>());
    }
  } else {
    throw ParseError("unknown generator kind '" + kind + "'");
  }
  return spec;
}

PolyhedralSurface from_generator(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::kTorus:
      return make_torus_surface(spec.tau);
    case GeneratorKind::kLShape:
      return make_l_shape_surface();
    case GeneratorKind::kSquareTiled:
      return make_square_tiled_surface(spec.cells);
  }
  throw ParseError("unreachable generator kind");
}

}  // namespace

PolyhedralSurface load_surface(const std::string& document) {
  YAML::Node root;
  try {
    root = YAML::Load(document);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("surface document: ") + e.what());
  }
  if (!root.IsMap()) throw ParseError("surface document must be a mapping");
  try {
    if (!root["format"] || root["format"].as<int>() != 1) {
      throw ParseError("surface document must declare 'format: 1'");
    }
    auto generator = read_generator(root["generator"]);
    if (!root["polygons"]) {
      if (!generator) throw ParseError("surface document needs 'polygons' or 'generator'");
      return from_generator(*generator);
    }
    std::vector<Polygon> polygons;
    for (const auto& p : root["polygons"]) {
      Polygon poly;
      for (const auto& v : p) poly.vertices.push_back(read_point(v));
      polygons.push_back(std::move(poly));
    }
    std::vector<Gluing> gluings;
    if (root["gluings"]) {
      for (const auto& g : root["gluings"]) {
        if (!g.IsSequence() || g.size() != 2) throw ParseError("gluing must be [[p,e],[q,f]]");
        gluings.push_back({read_edge_ref(g[0]), read_edge_ref(g[1])});
      }
    }
    return PolyhedralSurface(std::move(polygons), std::move(gluings), generator);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("surface document: ") + e.what());
  }
}

PolyhedralSurface load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open surface file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_surface(ss.str());
}

std::string dump_surface(const PolyhedralSurface& surface) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "format: 1\npolygons:\n";
  for (const auto& p : surface.polygons()) {
    out << "  - [";
    for (std::size_t k = 0; k < p.size(); ++k) {
      out << (k ? ", " : "") << "[" << p.vertices[k].real() << ", " << p.vertices[k].imag() << "]";
    }
    out << "]\n";
  }
  out << "gluings:\n";
  for (const auto& g : surface.gluings()) {
    out << "  - [[" << g.first.polygon << ", " << g.first.edge << "], [" << g.second.polygon << ", "
        << g.second.edge << "]]\n";
  }
  if (const auto& gen = surface.generator()) {
    switch (gen->kind) {
      case GeneratorKind::kTorus:
        out << "generator: {kind: torus, tau: [" << gen->tau.real() << ", " << gen->tau.imag()
            << "]}\n";
        break;
      case GeneratorKind::kLShape:
        out << "generator: {kind: l_shape}\n";
        break;
      case GeneratorKind::kSquareTiled:
        out << "generator: {kind: square_tiled, cells: [";
        for (std::size_t i = 0; i < gen->cells.size(); ++i) {
          out << (i ? ", " : "") << "[" << gen->cells[i].first << ", " << gen->cells[i].second << "]";
        }
        out << "]}\n";
        break;
    }
  }
  return out.str();
}

}  // namespace quadperiod
