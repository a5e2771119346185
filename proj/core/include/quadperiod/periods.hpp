#pragma once

// Discrete holomorphic differentials, canonical bases and period matrices.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "quadperiod/harmonic.hpp"

namespace quadperiod {

/// ω = η + i⋆η. Throws SolverError if η is not closed and co-closed within
/// tol (relative to max |η|).
DiscreteDifferential holomorphic_from_harmonic(const QuadGraph& g, const DiscreteDifferential& eta,
                                               double tol = 1e-8);

struct CanonicalBasis {
  int genus = 0;
  /// η_m + i⋆η_m for the elementary period vectors e_m, order (A^B, A^W, B^B, B^W).
  std::vector<DiscreteDifferential> elementary;
  std::vector<PeriodVector> elementary_periods;
  std::vector<DiscreteDifferential> black, white;  // ω^B_k, ω^W_k
  std::vector<DiscreteDifferential> canonical;     // ω_k = ω^B_k + ω^W_k
  double condition = 0;       // of the real 4g×4g a-period system
  double a_period_error = 0;  // max deviation of re-measured a-periods
  double max_solver_residual = 0;

  /// Holomorphic differential with real period parts P′ (A^B, A^W, B^B, B^W).
  [[nodiscard]] DiscreteDifferential with_real_periods(const Eigen::VectorXd& p) const;
};

CanonicalBasis canonical_basis(const QuadGraph& g, const HomologyBasis& basis,
                               const SolverOptions& options = {});

struct PeriodMatrices {
  Eigen::MatrixXcd bw, bb, ww, wb;  // Π^{B,W}, Π^{B,B}, Π^{W,W}, Π^{W,B}
  Eigen::MatrixXcd tilde;           // [[Π^{B,W}, Π^{B,B}], [Π^{W,W}, Π^{W,B}]]
  Eigen::MatrixXcd pi;              // from the canonical set directly
  Eigen::MatrixXcd pi_blocks;       // (Π^{B,W} + Π^{B,B} + Π^{W,W} + Π^{W,B})/2
};

PeriodMatrices period_matrices(const CanonicalBasis& cb, const HomologyBasis& basis);

/// Energy forms of the period vector. E_Λ acts on P′ in (A^W, A^B, B^B, B^W) order.
Eigen::MatrixXd energy_form_discrete(const Eigen::MatrixXcd& tilde);
/// Continuous analogue (factor 2) acting on (A_1..A_g, B_1..B_g).
Eigen::MatrixXd energy_form_continuous(const Eigen::MatrixXcd& pi);

/// Reorders (A^B, A^W, B^B, B^W) into (A^W, A^B, B^B, B^W).
Eigen::VectorXd to_energy_order(const Eigen::VectorXd& p);

/// |energy(ω) − (i/2)Σ(A^B B̄^W − B^B Ā^W) − (i/2)Σ(A^W B̄^B − B^W Ā^B)| / energy(ω).
double bilinear_identity_residual(const QuadGraph& g, const DiscreteDifferential& w,
                                  const HomologyBasis& basis);

/// λ_min(L M Lᵀ − 4(L M^{-1} Lᵀ)^{-1}) with M = Im Π̃, L = (I I).
double mean_gap_min_eigenvalue(const Eigen::MatrixXcd& tilde);

/// Every structural invariant of a set of period matrices.
struct PeriodDiagnostics {
  double tilde_symmetry = 0;  // ‖Π̃ − Π̃ᵀ‖ / ‖Π̃‖
  double pi_symmetry = 0;
  double min_eig_im_tilde = 0;
  double min_eig_im_pi = 0;
  double min_eig_im_bw = 0;
  double min_eig_im_wb = 0;
  double block_average_mismatch = 0;  // ‖Π − Π_blocks‖
  double re_bw = 0, re_wb = 0, im_bb = 0, im_ww = 0;  // orthodiagonal pattern norms
  double tilde_norm = 0;
  double mean_gap = 0;
};

PeriodDiagnostics diagnose(const PeriodMatrices& pm);

struct ConvergenceDiagnostics {
  double bw_minus_wb = 0;
  double bb_minus_ww = 0;
  double bw_plus_bb_minus_ref = -1;  // -1 when no reference
  double pi_minus_ref = -1;
  double mean_gap = 0;
};

ConvergenceDiagnostics convergence_diagnostics(const PeriodMatrices& pm,
                                               const std::optional<Eigen::MatrixXcd>& reference);

/// Abelian integral of a closed differential on a fundamental domain.
struct AbelianIntegral {
  int base_edge = -1;
  /// Per quad corner: value at that corner's copy in the fundamental domain.
  std::vector<std::array<Complex, 4>> corner_values;
  /// Jumps across cut edges: value differences of the two copies of each endpoint.
  std::vector<Complex> cut_jumps;
  std::size_t domain_vertices = 0;
};

AbelianIntegral abelian_integral(const QuadGraph& g, const DiscreteDifferential& w);

/// Corner values keyed by (polygon, rounded chart position) for comparing levels.
std::map<std::tuple<int, long long, long long>, Complex> abelian_samples(const QuadGraph& g,
                                                                        const AbelianIntegral& a);

}  // namespace quadperiod
