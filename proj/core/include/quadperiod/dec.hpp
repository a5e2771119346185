#pragma once

// Discrete exterior calculus on type-◊ differentials: two complex numbers per
// quad, the values on the medial edges parallel to the black and the white
// diagonal.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "quadperiod/homology.hpp"

namespace quadperiod {

struct DiscreteDifferential {
  std::vector<Complex> black;  // ω_b(Q), medial edge parallel to b− → b+
  std::vector<Complex> white;  // ω_w(Q), medial edge parallel to w− → w+

  DiscreteDifferential() = default;
  explicit DiscreteDifferential(std::size_t quads) : black(quads), white(quads) {}

  [[nodiscard]] std::size_t size() const { return black.size(); }
  [[nodiscard]] bool is_real(double tol = 0) const;

  DiscreteDifferential& operator+=(const DiscreteDifferential& o);
  DiscreteDifferential& operator*=(Complex s);
};

DiscreteDifferential operator+(DiscreteDifferential a, const DiscreteDifferential& b);
DiscreteDifferential operator-(DiscreteDifferential a, const DiscreteDifferential& b);
DiscreteDifferential operator*(Complex s, DiscreteDifferential a);
DiscreteDifferential conj(const DiscreteDifferential& w);
DiscreteDifferential real_part(const DiscreteDifferential& w);
DiscreteDifferential imag_part(const DiscreteDifferential& w);

/// Vertex function, possibly multi-valued: the jumps are coefficients against
/// the basis cocycles in the order (A^B_1..g, A^W_1..g, B^B_1..g, B^W_1..g).
struct VertexFunction {
  std::vector<Complex> values;
  std::vector<double> jumps;
};

/// Black/white a/b periods, g entries each.
struct PeriodVector {
  std::vector<Complex> a_black, a_white, b_black, b_white;

  [[nodiscard]] std::vector<Complex> a() const;  // (A^B + A^W)/2
  [[nodiscard]] std::vector<Complex> b() const;
  /// Real parts flattened in (A^B, A^W, B^B, B^W) order.
  [[nodiscard]] Eigen::VectorXd real_flat() const;
};

/// Cocycle k in (A^B, A^W, B^B, B^W) order: its color and values.
std::pair<Color, const std::vector<int>*> jump_cocycle(const HomologyBasis& basis, int k);

DiscreteDifferential dz(const QuadGraph& g);
DiscreteDifferential dzbar(const QuadGraph& g);

DiscreteDifferential d(const QuadGraph& g, const VertexFunction& f,
                       const HomologyBasis* basis = nullptr);

struct Residual {
  bool ok = true;
  double value = 0;  // max absolute residual
  int where = -1;    // vertex or quad attaining it
};

/// Closedness at every vertex face (ccw Varignon-corner signs).
Residual is_closed(const QuadGraph& g, const DiscreteDifferential& w, double tol = 1e-12);

/// Per-quad real matrix of ⋆ acting on (ω_b, ω_w).
Eigen::Matrix2d star_matrix(const Quad& q);
DiscreteDifferential hodge_star(const QuadGraph& g, const DiscreteDifferential& w);

/// Max per-quad |ω_w − iρ_Q ω_b|, relative to the quad's |ω|; closedness is
/// checked separately and folded into `ok`.
Residual is_holomorphic(const QuadGraph& g, const DiscreteDifferential& w, double tol = 1e-12);

/// ∬ ω1 ∧ ω2 = Σ_Q 2(ω1_b ω2_w − ω1_w ω2_b), i.e. ∬_{F_Q} dz∧dz̄ = −4i·area(F_Q).
Complex wedge(const QuadGraph& g, const DiscreteDifferential& w1, const DiscreteDifferential& w2);
Complex inner_product(const QuadGraph& g, const DiscreteDifferential& w1,
                      const DiscreteDifferential& w2);
double energy(const QuadGraph& g, const DiscreteDifferential& w);

/// Discrete gradient of a real function from its diagonal differences.
Eigen::Vector2d gradient(const Quad& q, double delta_black, double delta_white);
/// Gradient on quad q of a real exact-or-jumped df (uses 2·Re ω).
Eigen::Vector2d gradient(const QuadGraph& g, const DiscreteDifferential& df, int q);

/// (∂_Λ f, ∂̄_Λ f) on a quad from contour integrals over its Varignon
/// parallelogram, given the diagonal differences of f.
std::pair<Complex, Complex> derivatives(const Quad& q, Complex delta_black, Complex delta_white);
std::pair<Complex, Complex> derivatives(const QuadGraph& g, const DiscreteDifferential& df, int q);

/// Σ sign·2·ω_color(Q) along a diagonal path.
Complex integrate(const DiscreteDifferential& w, const DiagonalCycle& path);
PeriodVector periods(const DiscreteDifferential& w, const HomologyBasis& basis);

/// CSV rows `quad_id,re_wb,im_wb,re_ww,im_ww` with a header.
std::string dump_differential(const DiscreteDifferential& w);
/// Inverse of dump_differential. Rows may come in any order but must cover
/// quads 0..n−1 exactly once.
DiscreteDifferential load_differential(const std::string& csv);

}  // namespace quadperiod
