#include <cmath>

#include <gtest/gtest.h>

#include "quadperiod/dec.hpp"
#include "quadperiod/refine.hpp"

namespace qp = quadperiod;
using qp::Complex;

namespace {

double min_cone_distance(const qp::QuadGraph& g) {
  const int cone = g.singular_vertices().at(0);
  double r = 1e300;
  for (const auto& [q, k] : g.corners(cone)) {
    for (int j = 0; j < 4; ++j) {
      if (j != k) r = std::min(r, std::abs(g.quad(q).chart[j] - g.quad(q).chart[k]));
    }
  }
  return r;
}

}  // namespace

TEST(Subdivide, TorusTwoToFour) {
  const auto fine = qp::subdivide(qp::generate_torus({0, 1}, 2));
  const auto ref = qp::generate_torus({0, 1}, 4);
  EXPECT_EQ(fine.quad_count(), 16u);
  EXPECT_EQ(fine.vertex_count(), 16u);
  EXPECT_EQ(fine.edge_count(), 32u);
  const auto s = qp::mesh_stats(fine), r = qp::mesh_stats(ref);
  EXPECT_DOUBLE_EQ(s.h, r.h);
  EXPECT_NEAR(s.phi_min, r.phi_min, 1e-15);
  EXPECT_NEAR(s.area, 1.0, 1e-15);
}

TEST(Subdivide, KeepsVertexIdsAndColors) {
  const auto coarse = qp::build_quad_graph(qp::make_l_shape_surface(), 0.5);
  const auto fine = qp::subdivide(coarse);
  for (int v = 0; v < static_cast<int>(coarse.vertex_count()); ++v) {
    EXPECT_EQ(fine.color(v), qp::Color::kBlack);
  }
  const std::size_t nv = coarse.vertex_count(), ne = coarse.edge_count();
  for (std::size_t e = 0; e < ne; ++e) EXPECT_EQ(fine.color(static_cast<int>(nv + e)), qp::Color::kWhite);
  EXPECT_EQ(fine.vertex_count(), nv + ne + coarse.quad_count());
  EXPECT_EQ(fine.singular_vertices(), coarse.singular_vertices());
}

TEST(Subdivide, LShapeGenusAndAreaOverFiveLevels) {
  auto g = qp::build_quad_graph(qp::make_l_shape_surface(), 0.5);
  for (int l = 0; l < 5; ++l) {
    EXPECT_EQ(g.genus(), 2);
    EXPECT_NEAR(g.total_area(), 3.0, 1e-12);
    g = qp::subdivide(g);
  }
}

TEST(TransportSubdivided, KeepsIntersectionsAndPeriods) {
  const auto coarse = qp::build_quad_graph(qp::make_l_shape_surface(), 0.5);
  const auto fine = qp::subdivide(coarse);
  const auto basis = qp::compute_homology(coarse);
  std::vector<qp::Cycle> a, b;
  for (const auto& c : basis.a) a.push_back(qp::transport_subdivided(coarse, fine, c));
  for (const auto& c : basis.b) b.push_back(qp::transport_subdivided(coarse, fine, c));
  const auto moved = qp::homology_from_cycles(fine, a, b);
  const auto pc = qp::periods(qp::dz(coarse), basis);
  const auto pf = qp::periods(qp::dz(fine), moved);
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::abs(pc.a_black[k] - pf.a_black[k]), 0, 1e-13);
    EXPECT_NEAR(std::abs(pc.b_white[k] - pf.b_white[k]), 0, 1e-13);
  }
}

TEST(TransportTiled, UniformToAdapted) {
  const auto s = qp::make_l_shape_surface();
  const auto coarse = qp::build_quad_graph(s, 0.5);
  const auto fine = qp::generate_adapted(s, 0.125);
  const int mc = qp::tiled_side_count(coarse, 3), mf = qp::tiled_side_count(fine, 3);
  EXPECT_EQ(mc, 2);
  EXPECT_EQ(mf % mc, 0);
  const auto basis = qp::compute_homology(coarse);
  std::vector<qp::Cycle> a, b;
  for (const auto& c : basis.a) a.push_back(qp::transport_tiled(coarse, mc, fine, mf, c));
  for (const auto& c : basis.b) b.push_back(qp::transport_tiled(coarse, mc, fine, mf, c));
  const auto moved = qp::homology_from_cycles(fine, a, b);
  EXPECT_EQ(moved.genus(), 2);
  const auto pc = qp::periods(qp::dz(coarse), basis);
  const auto pf = qp::periods(qp::dz(fine), moved);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(pc.b_black[k] - pf.b_black[k]), 0, 1e-12);
}

TEST(GenerateAdapted, TorusIsUniformGrid) {
  const auto g = qp::generate_adapted(qp::make_torus_surface({0, 1}), 0.125);
  const auto s = qp::mesh_stats(g);
  EXPECT_LE(s.h, 0.125 + 1e-15);
  EXPECT_NEAR(s.phi_min, qp::kPi / 2, 1e-12);
  EXPECT_EQ(s.quads, 64u);
  EXPECT_TRUE(qp::validate_h_adapted(g, 0.125).pass);
}

TEST(GenerateAdapted, LShapePassesValidatorWithCubicInnerRadius) {
  const auto s = qp::make_l_shape_surface();
  for (double h : {0.25, 0.125, 0.0625}) {
    const auto g = qp::generate_adapted(s, h);
    EXPECT_TRUE(qp::validate_h_adapted(g, h).pass) << h;
    EXPECT_EQ(g.genus(), 2);
    EXPECT_NEAR(g.total_area(), 3.0, 1e-12);
    EXPECT_GE(qp::mesh_stats(g).phi_min, qp::kPi / 12);
    // Innermost radius h^{1/γ} with γ = 1/3.
    EXPECT_NEAR(min_cone_distance(g) / (h * h * h), 1.0, 1e-9) << h;
  }
}

TEST(EdgeBound, StatedFormFailsOnRadialEdges) {
  // Radial edge x → y with |Oy| = 8|Ox| and image length h: the ratio to
  // (1 + π/(2γ)) h |Ox|^{1−γ} is 7/(1 + 3π/2) at γ = 1/3 for every h.
  const double counterexample = 7 / (1 + 3 * qp::kPi / 2);
  const auto s = qp::make_l_shape_surface();
  for (double h : {0.25, 0.125, 0.0625}) {
    const auto g = qp::generate_adapted(s, h);
    const auto r = qp::check_edge_bound(g, h);
    EXPECT_GT(r.checked, 0u);
    EXPECT_GT(r.incident, 0u);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.worst_ratio, counterexample, 1e-9);
    EXPECT_NEAR(r.worst_y / r.worst_x, 8.0, 1e-9);
    // ((1 + π/2)/γ) h |Oy|^{1−γ} holds everywhere.
    EXPECT_TRUE(r.corrected_pass);
    EXPECT_LE(r.corrected_ratio, 0.5);
  }
}

TEST(Sweep, TorusUniformHalvesH) {
  const auto levels = qp::sweep(qp::make_torus_surface({0, 1}), 5, false);
  ASSERT_EQ(levels.size(), 5u);
  double h = 0.5;
  for (const auto& l : levels) {
    EXPECT_DOUBLE_EQ(l.stats.h, h);
    h /= 2;
  }
}

TEST(Sweep, LShapeUniformSelfSimilar) {
  const auto levels = qp::sweep(qp::make_l_shape_surface(), 5, false);
  for (std::size_t l = 1; l < levels.size(); ++l) {
    EXPECT_NEAR(levels[l].stats.h, levels[l - 1].stats.h / 2, 1e-15);
    EXPECT_NEAR(levels[l].stats.phi_min, levels[0].stats.phi_min, 1e-12);
    EXPECT_EQ(levels[l].stats.genus, 2);
  }
}

TEST(Sweep, LShapeAdaptedLevelsValidate) {
  const auto levels = qp::sweep(qp::make_l_shape_surface(), 4, true);
  double h = 0.5;
  for (const auto& l : levels) {
    EXPECT_TRUE(l.adapted);
    EXPECT_TRUE(qp::validate_h_adapted(l.graph, h).pass);
    h /= 2;
  }
}
