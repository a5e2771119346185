#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "quadperiod/quad_graph.hpp"
#include "quadperiod/surface.hpp"

namespace qp = quadperiod;
using qp::Complex;

namespace {

const char* kSquareTorus = R"(
format: 1
polygons:
  - [[0, 0], [1, 0], [1, 1], [0, 1]]
gluings:
  - [[0, 0], [0, 2]]
  - [[0, 1], [0, 3]]
)";

qp::Quad quad_from(Complex bm, Complex wm, Complex bp, Complex wp) {
  qp::Quad q;
  q.chart = {bm, wm, bp, wp};
  return q;
}

}  // namespace

TEST(Surface, SquareTorusDocument) {
  const auto s = qp::load_surface(kSquareTorus);
  EXPECT_EQ(s.polygons().size(), 1u);
  EXPECT_EQ(s.gluings().size(), 2u);
  EXPECT_EQ(s.genus(), 1);
  EXPECT_DOUBLE_EQ(s.total_area(), 1.0);
  for (const auto& c : s.cone_points()) EXPECT_FALSE(c.singular());
}

TEST(Surface, LShapeHasOneVertexOfAngleSixPi) {
  const auto s = qp::make_l_shape_surface();
  ASSERT_EQ(s.vertices().angles.size(), 1u);
  EXPECT_NEAR(s.vertices().angles[0], 6 * qp::kPi, 1e-12);
  EXPECT_EQ(s.genus(), 2);
  EXPECT_NEAR(s.gauss_bonnet_genus(), 2.0, 1e-12);
  const auto cones = s.cone_points();
  ASSERT_EQ(cones.size(), 1u);
  EXPECT_NEAR(cones[0].index, 1.0 / 3.0, 1e-15);
}

TEST(Surface, UngluedEdgeIsRejected) {
  const char* doc = R"(
format: 1
polygons:
  - [[0, 0], [1, 0], [1, 1], [0, 1]]
gluings:
  - [[0, 0], [0, 2]]
)";
  try {
    qp::load_surface(doc);
    FAIL() << "expected an error";
  } catch (const qp::TopologyError& e) {
    EXPECT_NE(std::string(e.what()).find("unglued edge"), std::string::npos);
  }
}

TEST(Surface, UnequalGluedEdgesAreRejected) {
  const char* doc = R"(
format: 1
polygons:
  - [[0, 0], [2, 0], [2, 1], [0, 1]]
gluings:
  - [[0, 0], [0, 1]]
  - [[0, 2], [0, 3]]
)";
  EXPECT_THROW(qp::load_surface(doc), qp::GeometryError);
}

TEST(Surface, MissingFormatHeaderIsRejected) {
  EXPECT_THROW(qp::load_surface("generator: {kind: l_shape}\n"), qp::ParseError);
  EXPECT_THROW(qp::load_surface("format: 2\ngenerator: {kind: l_shape}\n"), qp::ParseError);
}

TEST(Surface, DumpRoundTrips) {
  const auto s = qp::make_torus_surface({0.5, 0.8});
  const auto t = qp::load_surface(qp::dump_surface(s));
  ASSERT_EQ(t.polygons().size(), 1u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(t.polygons()[0].vertices[k] - s.polygons()[0].vertices[k]), 0, 1e-15);
  }
}

TEST(Rho, UnitSquareIsOne) {
  const Complex r = qp::rho(quad_from(0, 1, {1, 1}, {0, 1}));
  EXPECT_NEAR(std::abs(r - Complex(1, 0)), 0, 1e-15);
}

TEST(Rho, RectangleHasUnitModulusButIsNotReal) {
  // Equal diagonals that are not orthogonal.
  const Complex r = qp::rho(quad_from(0, 2, {2, 1}, {0, 1}));
  EXPECT_NEAR(std::abs(r - Complex(0.8, 0.6)), 0, 1e-15);
}

TEST(Rho, RhombusWithDiagonalRatioTwo) {
  const Complex r = qp::rho(quad_from(-1, {0, -0.5}, 1, {0, 0.5}));
  EXPECT_NEAR(std::abs(r - Complex(0.5, 0)), 0, 1e-15);
}

TEST(Rho, ClockwiseSquareHasNegativeRealPart) {
  EXPECT_LT(qp::rho(quad_from(0, {0, 1}, {1, 1}, 1)).real(), 0);
}

TEST(QuadGraph, ClockwiseQuadIsRejected) {
  std::string doc = qp::dump_quad_graph(qp::generate_torus({0, 1}, 2));
  // Quad 0 of the 2x2 grid has chart (0,0) (0.5,0) (0.5,0.5) (0,0.5); list it clockwise.
  const std::string ccw = "0 0 0.5 0 0.5 0.5 0 0.5";
  const std::string cw = "0 0 0 0.5 0.5 0.5 0.5 0";
  const auto at = doc.find(ccw);
  ASSERT_NE(at, std::string::npos);
  doc.replace(at, ccw.size(), cw);
  EXPECT_THROW(qp::load_quad_graph(doc), qp::Error);
}

TEST(GenerateTorus, SquareTwoByTwo) {
  const auto g = qp::generate_torus({0, 1}, 2);
  EXPECT_EQ(g.quad_count(), 4u);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_EQ(g.genus(), 1);
  for (const auto& q : g.quads()) EXPECT_NEAR(std::abs(qp::rho(q) - 1.0), 0, 1e-14);
}

TEST(GenerateTorus, SkewCellsTakeTwoReciprocalRhos) {
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  ASSERT_EQ(g.quad_count(), 16u);
  // Checkerboard coloring: the black diagonal alternates between the two
  // diagonals of the cell, giving ρ and 1/ρ.
  const Complex a(0.5536332179930795, 0.03806228373702421);
  const Complex b(1.797752808988764, -0.12359550561797748);
  EXPECT_NEAR(std::abs(1.0 / a - b), 0, 1e-14);
  int na = 0, nb = 0;
  for (const auto& q : g.quads()) {
    const Complex r = qp::rho(q);
    na += std::abs(r - a) < 1e-12;
    nb += std::abs(r - b) < 1e-12;
    EXPECT_GT(r.real(), 0);
    EXPECT_GT(std::abs(r.imag()), 1e-3);
    EXPECT_NEAR(q.area(), 0.8 / 16, 1e-15);
  }
  EXPECT_EQ(na, 8);
  EXPECT_EQ(nb, 8);
}

TEST(GenerateTorus, OddGridIsNotBipartite) {
  EXPECT_THROW(qp::generate_torus({0, 1}, 3), qp::TopologyError);
}

TEST(BuildQuadGraph, LShapeHalfCell) {
  const auto g = qp::build_quad_graph(qp::make_l_shape_surface(), 0.5);
  EXPECT_EQ(g.quad_count(), 12u);
  EXPECT_EQ(g.genus(), 2);
  const auto sing = g.singular_vertices();
  ASSERT_EQ(sing.size(), 1u);
  std::set<int> quads;
  for (const auto& [q, k] : g.corners(sing[0])) quads.insert(q);
  EXPECT_EQ(g.corners(sing[0]).size(), 12u);
  EXPECT_EQ(quads.size(), 12u);
}

TEST(BuildQuadGraph, TorusMatchesGenerator) {
  const auto a = qp::build_quad_graph(qp::make_torus_surface({0, 1}), 0.5);
  const auto b = qp::generate_torus({0, 1}, 2);
  EXPECT_EQ(a.quad_count(), b.quad_count());
  EXPECT_EQ(a.vertex_count(), b.vertex_count());
  EXPECT_EQ(a.edge_count(), b.edge_count());
  const auto sa = qp::mesh_stats(a), sb = qp::mesh_stats(b);
  EXPECT_DOUBLE_EQ(sa.h, sb.h);
  EXPECT_DOUBLE_EQ(sa.area, sb.area);
}

TEST(BuildQuadGraph, CellMustDivideSide) {
  EXPECT_THROW(qp::build_quad_graph(qp::make_l_shape_surface(), 0.3), qp::GeometryError);
}

TEST(MeshStats, SquareTorusFour) {
  const auto s = qp::mesh_stats(qp::generate_torus({0, 1}, 4));
  EXPECT_DOUBLE_EQ(s.h, 0.25);
  EXPECT_NEAR(s.phi_min, qp::kPi / 2, 1e-12);
  EXPECT_EQ(s.quads, 16u);
  EXPECT_EQ(s.genus, 1);
  EXPECT_DOUBLE_EQ(s.gamma_sigma, 1.0);
}

TEST(MeshStats, LShapeGenusAndCone) {
  const auto s = qp::mesh_stats(qp::build_quad_graph(qp::make_l_shape_surface(), 0.5));
  EXPECT_EQ(s.genus, 2);
  ASSERT_EQ(s.cone_indices.size(), 1u);
  EXPECT_NEAR(s.gamma_sigma, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.area, 3.0, 1e-14);
}

TEST(QuadGraphIo, RoundTrip) {
  const auto g = qp::build_quad_graph(qp::make_l_shape_surface(), 0.25);
  const auto h = qp::load_quad_graph(qp::dump_quad_graph(g));
  EXPECT_EQ(h.quad_count(), g.quad_count());
  EXPECT_EQ(h.vertex_count(), g.vertex_count());
  EXPECT_EQ(h.singular_vertices(), g.singular_vertices());
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    for (int k = 0; k < 4; ++k) {
      EXPECT_EQ(h.quad(static_cast<int>(q)).vertices[k], g.quad(static_cast<int>(q)).vertices[k]);
      EXPECT_NEAR(std::abs(h.quad(static_cast<int>(q)).chart[k] - g.quad(static_cast<int>(q)).chart[k]), 0,
                  1e-15);
    }
  }
}

TEST(ValidateAdapted, TorusIsVacuous) {
  const auto g = qp::generate_torus({0, 1}, 8);
  EXPECT_TRUE(qp::validate_h_adapted(g, 0.125).pass);
  EXPECT_FALSE(qp::validate_h_adapted(g, 0.1).pass);
}

TEST(ValidateAdapted, UniformLShapeFailsNearCone) {
  const auto g = qp::build_quad_graph(qp::make_l_shape_surface(), 1.0 / 16);
  const auto r = qp::validate_h_adapted(g, 1.0 / 16);
  EXPECT_FALSE(r.pass);
  // The edge ending at the cone maps to length (1/16)^{1/3}.
  EXPECT_NEAR(r.max_image_edge, 0.3968502629920499, 1e-12);
}

TEST(ConeImage, RadialAndAngular) {
  EXPECT_NEAR(qp::cone_image_distance(1.0 / 16, 2.0 / 16, 1.0 / 3), 0.1031497370079501, 1e-14);
  // Identity chart when γ = 1.
  EXPECT_NEAR(qp::cone_image_distance({0.3, 0.1}, {-0.2, 0.4}, 1.0), std::abs(Complex(0.5, -0.3)), 1e-15);
}
