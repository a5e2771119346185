#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quadperiod/dec.hpp"

namespace qp = quadperiod;
using qp::Complex;

namespace {

const Complex kI(0, 1);

qp::QuadGraph l_shape(double cell) { return qp::build_quad_graph(qp::make_l_shape_surface(), cell); }

qp::Quad rhombus() {
  qp::Quad q;
  q.chart = {Complex(-1, 0), Complex(0, -0.5), Complex(1, 0), Complex(0, 0.5)};
  return q;
}

qp::VertexFunction random_function(const qp::QuadGraph& g, std::mt19937_64& rng, bool real) {
  std::normal_distribution<double> n;
  qp::VertexFunction f;
  f.values.resize(g.vertex_count());
  for (auto& v : f.values) v = real ? Complex(n(rng), 0) : Complex(n(rng), n(rng));
  return f;
}

double max_abs(const qp::DiscreteDifferential& w) {
  double m = 0;
  for (std::size_t q = 0; q < w.size(); ++q) m = std::max({m, std::abs(w.black[q]), std::abs(w.white[q])});
  return m;
}

}  // namespace

TEST(Dz, HalfDiagonals) {
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  const auto z = qp::dz(g);
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    EXPECT_NEAR(std::abs(z.black[q] - 0.5 * g.quad(static_cast<int>(q)).black_diagonal()), 0, 1e-15);
    EXPECT_NEAR(std::abs(z.white[q] - 0.5 * g.quad(static_cast<int>(q)).white_diagonal()), 0, 1e-15);
  }
}

TEST(D, ConstantIsZero) {
  const auto g = l_shape(0.25);
  qp::VertexFunction f;
  f.values.assign(g.vertex_count(), Complex(3, -2));
  EXPECT_EQ(max_abs(qp::d(g, f)), 0.0);
}

TEST(D, UnitJumpGivesUnitPeriod) {
  const auto g = l_shape(0.25);
  const auto basis = qp::compute_homology(g);
  for (int k = 0; k < 8; ++k) {
    qp::VertexFunction f;
    f.values.assign(g.vertex_count(), 0);
    f.jumps.assign(8, 0);
    f.jumps[k] = 1;
    const auto w = qp::d(g, f, &basis);
    const Eigen::VectorXd p = qp::periods(w, basis).real_flat();
    for (int m = 0; m < 8; ++m) EXPECT_NEAR(p[m], m == k ? 1 : 0, 1e-14) << k << " " << m;
  }
}

TEST(D, JumpsNeedBasis) {
  const auto g = l_shape(0.5);
  qp::VertexFunction f;
  f.values.assign(g.vertex_count(), 0);
  f.jumps.assign(8, 1);
  EXPECT_THROW(qp::d(g, f), qp::Error);
}

TEST(IsClosed, ExactFormsWithJumps) {
  const auto g = l_shape(0.125);
  const auto basis = qp::compute_homology(g);
  std::mt19937_64 rng(1);
  auto f = random_function(g, rng, false);
  f.jumps = {0.5, -1, 2, 0.25, -0.75, 1.5, -2, 1};
  const auto w = qp::d(g, f, &basis);
  const auto r = qp::is_closed(g, w);
  EXPECT_TRUE(r.ok);
  EXPECT_LE(r.value / max_abs(w), 1e-14);
}

TEST(IsClosed, ConstantBlackValueOnTorus) {
  const auto g = qp::generate_torus({0, 1}, 2);
  qp::DiscreteDifferential w(g.quad_count());
  for (auto& b : w.black) b = 1;
  // Each white vertex meets 4 black diagonals, two entering and two leaving.
  EXPECT_TRUE(qp::is_closed(g, w).ok);
  EXPECT_EQ(qp::is_closed(g, w).value, 0.0);
}

TEST(IsClosed, RandomValuesAreNotClosed) {
  const auto g = l_shape(0.25);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  qp::DiscreteDifferential w(g.quad_count());
  for (std::size_t q = 0; q < w.size(); ++q) {
    w.black[q] = n(rng);
    w.white[q] = n(rng);
  }
  const auto r = qp::is_closed(g, w);
  EXPECT_FALSE(r.ok);
  EXPECT_GT(r.value, 1e-3);
}

TEST(HodgeStar, OrthodiagonalFormula) {
  // |e| = 2 along the black diagonal, |e*| = 1 along the white one.
  const Eigen::Matrix2d s = qp::star_matrix(rhombus());
  EXPECT_NEAR(s(0, 0), 0, 1e-15);
  EXPECT_NEAR(s(0, 1), -2, 1e-15);
  EXPECT_NEAR(s(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(s(1, 1), 0, 1e-15);
}

TEST(HodgeStar, DzIsAnEigenform) {
  for (const auto& g : {qp::generate_torus({0.5, 0.8}, 4), l_shape(0.25)}) {
    const auto z = qp::dz(g);
    const auto s = qp::hodge_star(g, z);
    EXPECT_LE(max_abs(s + kI * z), 1e-15);
  }
}

TEST(HodgeStar, SquaresToMinusOne) {
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  qp::DiscreteDifferential w(g.quad_count());
  for (std::size_t q = 0; q < w.size(); ++q) {
    w.black[q] = {n(rng), n(rng)};
    w.white[q] = {n(rng), n(rng)};
  }
  EXPECT_LE(max_abs(qp::hodge_star(g, qp::hodge_star(g, w)) + w) / max_abs(w), 1e-14);
  for (const auto& q : g.quads()) {
    const Eigen::Matrix2d s = qp::star_matrix(q);
    EXPECT_LE(((s * s) + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(IsHolomorphic, DzAndDzbar) {
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  const auto r = qp::is_holomorphic(g, qp::dz(g));
  EXPECT_TRUE(r.ok);
  EXPECT_LE(r.value, 1e-15);
  const auto rb = qp::is_holomorphic(g, qp::dzbar(g));
  EXPECT_FALSE(rb.ok);
  EXPECT_GT(rb.value, 0.1);
}

TEST(Wedge, DzDzbarOnUnitTorus) {
  // ∬_{F_Q} dz∧dz̄ = −4i area(F_Q) and the faces F_Q cover half the surface.
  const auto g = qp::generate_torus({0, 1}, 2);
  const Complex w = qp::wedge(g, qp::dz(g), qp::dzbar(g));
  EXPECT_NEAR(std::abs(w - Complex(0, -2)), 0, 1e-15);
}

TEST(Wedge, DzDzbarScalesWithArea) {
  const auto g = l_shape(0.25);
  EXPECT_NEAR(std::abs(qp::wedge(g, qp::dz(g), qp::dzbar(g)) - Complex(0, -2 * 3)), 0, 1e-12);
}

TEST(Wedge, Antisymmetric) {
  const auto g = l_shape(0.25);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  qp::DiscreteDifferential w(g.quad_count());
  for (std::size_t q = 0; q < w.size(); ++q) {
    w.black[q] = {n(rng), n(rng)};
    w.white[q] = {n(rng), n(rng)};
  }
  EXPECT_NEAR(std::abs(qp::wedge(g, w, w)), 0, 1e-12);
  EXPECT_NEAR(std::abs(qp::wedge(g, qp::dz(g), qp::dz(g))), 0, 1e-15);
  const auto z = qp::dz(g);
  EXPECT_NEAR(std::abs(qp::wedge(g, w, z) + qp::wedge(g, z, w)), 0, 1e-12);
}

TEST(Energy, DzOnUnitTorus) {
  const auto g = qp::generate_torus({0, 1}, 4);
  EXPECT_NEAR(qp::energy(g, qp::dz(g)), 2.0, 1e-14);
}

TEST(Energy, ExactConstantIsZero) {
  const auto g = l_shape(0.25);
  qp::VertexFunction f;
  f.values.assign(g.vertex_count(), 7.0);
  EXPECT_EQ(qp::energy(g, qp::d(g, f)), 0.0);
}

TEST(Energy, MatchesGradientSum) {
  const auto g = l_shape(0.125);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const auto df = qp::d(g, random_function(g, rng, true));
    double grad = 0;
    for (std::size_t q = 0; q < g.quad_count(); ++q) {
      grad += g.quad(static_cast<int>(q)).area() * qp::gradient(g, df, static_cast<int>(q)).squaredNorm();
    }
    const double e = qp::energy(g, df);
    EXPECT_LE(std::abs(e - grad) / e, 1e-12);
  }
}

TEST(Gradient, LinearAndConstant) {
  const auto q = rhombus();
  // f = Re z: differences along the diagonals are their real parts.
  const Eigen::Vector2d g = qp::gradient(q, q.black_diagonal().real(), q.white_diagonal().real());
  EXPECT_NEAR(g.x(), 1, 1e-15);
  EXPECT_NEAR(g.y(), 0, 1e-15);
  EXPECT_EQ(qp::gradient(q, 0, 0).norm(), 0.0);
}

TEST(Gradient, ReproducesDiagonalDifferences) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  for (const auto& q : g.quads()) {
    const double db = n(rng), dw = n(rng);
    const Eigen::Vector2d v = qp::gradient(q, db, dw);
    const Complex b = q.black_diagonal(), w = q.white_diagonal();
    EXPECT_NEAR(v.x() * b.real() + v.y() * b.imag(), db, 1e-12);
    EXPECT_NEAR(v.x() * w.real() + v.y() * w.imag(), dw, 1e-12);
  }
}

TEST(Derivatives, ZAndZbar) {
  const auto q = rhombus();
  const auto [dz, dzb] = qp::derivatives(q, q.black_diagonal(), q.white_diagonal());
  EXPECT_NEAR(std::abs(dz - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(dzb), 0, 1e-15);
  const auto [cz, czb] =
      qp::derivatives(q, std::conj(q.black_diagonal()), std::conj(q.white_diagonal()));
  EXPECT_NEAR(std::abs(cz), 0, 1e-15);
  EXPECT_NEAR(std::abs(czb - 1.0), 0, 1e-15);
}

TEST(Derivatives, GradientNormForRealFunctions) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  for (const auto& q : g.quads()) {
    const double db = n(rng), dw = n(rng);
    const auto [d, db_] = qp::derivatives(q, db, dw);
    const double grad = qp::gradient(q, db, dw).norm();
    EXPECT_NEAR(4 * std::norm(d), grad * grad, 1e-12 * grad * grad);
    EXPECT_NEAR(std::abs(db_ - std::conj(d)), 0, 1e-12);
  }
}

TEST(Integrate, DzAlongBasisProjections) {
  const auto g = qp::generate_torus({0.5, 0.8}, 4);
  const auto basis = qp::compute_homology(g);
  const auto p = qp::periods(qp::dz(g), basis);
  EXPECT_NEAR(std::abs(p.a_black[0] - p.a_white[0]), 0, 1e-14);
  EXPECT_NEAR(std::abs(p.b_black[0] - p.b_white[0]), 0, 1e-14);
  // The periods span the lattice Z + τZ with a·b = +1.
  const Complex a = p.a_black[0], b = p.b_black[0];
  EXPECT_NEAR(std::abs(a.real() * b.imag() - a.imag() * b.real()), 0.8, 1e-14);
  EXPECT_GT(a.real() * b.imag() - a.imag() * b.real(), 0);
}

TEST(Integrate, ContractibleLoopOfClosedForm) {
  const auto g = qp::generate_torus({0, 1}, 4);
  // Black diagonals of the quads around one white vertex form a closed loop.
  int v = 0;
  while (g.color(v) != qp::Color::kWhite) ++v;
  qp::DiagonalCycle loop;
  loop.color = qp::Color::kBlack;
  for (const auto& [q, k] : g.corners(v)) loop.steps.push_back({q, k == qp::kWMinus ? 1 : -1});
  EXPECT_NEAR(std::abs(qp::integrate(qp::dz(g), loop)), 0, 1e-15);
}

TEST(Periods, ExactFormHasZeroPeriods) {
  const auto g = l_shape(0.25);
  const auto basis = qp::compute_homology(g);
  std::mt19937_64 rng(9);
  const auto w = qp::d(g, random_function(g, rng, false));
  const auto p = qp::periods(w, basis);
  for (int k = 0; k < 2; ++k) {
    for (const auto& v : {p.a_black, p.a_white, p.b_black, p.b_white}) EXPECT_NEAR(std::abs(v[k]), 0, 1e-12);
  }
}

TEST(DifferentialIo, RoundTripAndValidation) {
  const auto g = l_shape(0.25);
  const auto z = qp::dz(g);
  const auto back = qp::load_differential(qp::dump_differential(z));
  ASSERT_EQ(back.size(), z.size());
  for (std::size_t q = 0; q < z.size(); ++q) {
    EXPECT_EQ(back.black[q], z.black[q]);
    EXPECT_EQ(back.white[q], z.white[q]);
  }
  EXPECT_THROW(qp::load_differential("quad_id,re_wb,im_wb,re_ww,im_ww\n0,1,2,3\n"), qp::ParseError);
  EXPECT_THROW(qp::load_differential("quad_id,re_wb,im_wb,re_ww,im_ww\n0,1,2,3,4\n0,1,2,3,4\n"),
               qp::ParseError);
}
