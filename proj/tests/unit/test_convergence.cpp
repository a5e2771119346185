#include <cmath>

#include <gtest/gtest.h>

#include "quadperiod/convergence.hpp"
#include "quadperiod/dec.hpp"

namespace qp = quadperiod;
using qp::Complex;

namespace {

std::vector<qp::Cycle> all_cycles(const qp::HomologyBasis& b) {
  std::vector<qp::Cycle> c = b.a;
  c.insert(c.end(), b.b.begin(), b.b.end());
  return c;
}

}  // namespace

TEST(PredictedExponent, Cases) {
  EXPECT_NEAR(qp::predicted_exponent(1.0 / 3, false), 2.0 / 3, 1e-15);
  EXPECT_EQ(qp::predicted_exponent(1.0 / 3, true), 1.0);
  EXPECT_EQ(qp::predicted_exponent(1.0, false), 1.0);
  EXPECT_EQ(qp::predicted_exponent(0.5, false), 1.0);
  EXPECT_EQ(qp::predicted_exponent(0.75, false), 1.0);
}

TEST(FitSlope, PowerLawAndDegenerateInput) {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3 * std::pow(x, 0.7));
  EXPECT_NEAR(qp::fit_slope(h, e), 0.7, 1e-12);
  EXPECT_TRUE(std::isnan(qp::fit_slope({0.5, 0.25}, {1, 0.5})));
  // Zero errors are dropped; two points remain.
  EXPECT_TRUE(std::isnan(qp::fit_slope({0.5, 0.25, 0.125}, {1, 0.5, 0})));
}

TEST(RunConvergence, TorusIsExact) {
  qp::ConvergenceOptions o;
  o.levels = 4;
  o.base_cell = 0.5;
  const auto r = qp::run_convergence(qp::make_torus_surface({0.5, 0.8}), o);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.pass());
  EXPECT_FALSE(r.reference_is_level);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.pi_error, 1e-8);
    EXPECT_LE(row.bw_minus_wb, 1e-8);
    EXPECT_LE(row.bb_minus_ww, 1e-8);
  }
  EXPECT_TRUE(std::isnan(r.fit("pi_error").slope));
}

TEST(RunConvergence, LShapeUniformDifferencesDecrease) {
  qp::ConvergenceOptions o;
  o.levels = 4;
  o.base_cell = 0.5;
  const auto r = qp::run_convergence(qp::make_l_shape_surface(), o);
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.gamma_sigma, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r.predicted, 2.0 / 3, 1e-15);
  EXPECT_TRUE(r.reference_is_level);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows.back().pi_error, 0.0);
  for (std::size_t l = 1; l < r.rows.size(); ++l) {
    EXPECT_LT(r.rows[l].bw_minus_wb, r.rows[l - 1].bw_minus_wb);
    EXPECT_LT(r.rows[l].bb_minus_ww, r.rows[l - 1].bb_minus_ww);
    EXPECT_GE(r.rows[l].mean_gap, -1e-10);
  }
  EXPECT_TRUE(r.fit("bw_minus_wb").decreasing);
  EXPECT_THROW((void)r.fit("no_such_quantity"), qp::Error);
}

TEST(RunConvergence, ExternalReferenceIsUsed) {
  qp::ConvergenceOptions o;
  o.levels = 3;
  o.base_cell = 0.5;
  Eigen::MatrixXcd ref(1, 1);
  ref(0, 0) = Complex(0, 1.5);
  o.reference = ref;
  const auto r = qp::run_convergence(qp::make_torus_surface({0, 1}), o);
  EXPECT_FALSE(r.reference_is_level);
  for (const auto& row : r.rows) EXPECT_NEAR(row.pi_error, 0.5, 1e-8);
  EXPECT_FALSE(r.exact);
}

TEST(ConsistentBases, SameIntersectionAtEveryLevel) {
  const auto s = qp::make_l_shape_surface();
  const auto levels = qp::sweep(s, 3, false, {0.5, {}});
  const auto bases = qp::consistent_bases(s, levels, 0.5);
  ASSERT_EQ(bases.size(), 3u);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto p = qp::periods(qp::dz(levels[l].graph), bases[l]);
    const auto p0 = qp::periods(qp::dz(levels[0].graph), bases[0]);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(p.b_black[k] - p0.b_black[k]), 0, 1e-12);
    Eigen::MatrixXi j = Eigen::MatrixXi::Zero(4, 4);
    j.topRightCorner(2, 2).setIdentity();
    j.bottomLeftCorner(2, 2) = -Eigen::MatrixXi::Identity(2, 2);
    EXPECT_EQ(qp::intersection_matrix(levels[l].graph, all_cycles(bases[l])), j);
  }
}
