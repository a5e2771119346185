#pragma once

// Discrete harmonic differentials with prescribed real black/white periods,
// as minimizers of the Dirichlet energy over multi-valued vertex functions.

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "quadperiod/dec.hpp"

namespace quadperiod {

enum class SolverKind { kDirect, kConjugateGradient };

struct SolverOptions {
  SolverKind kind = SolverKind::kDirect;
  double tol = 1e-10;  // relative residual
  int max_iter = 100000;
};

/// Dirichlet energy Σ_Q (G_Q f + J_Q)ᵀ W_Q (G_Q f + J_Q) on vertex functions.
struct EnergySystem {
  Eigen::SparseMatrix<double> matrix;  // K = Σ G_Qᵀ W_Q G_Q, unpinned
  std::vector<Eigen::Matrix2d> weights;  // W_Q = area(Q)·(D_Q D_Qᵀ)^{-1}
  int pinned_black = -1;
  int pinned_white = -1;
  const QuadGraph* graph = nullptr;
  const HomologyBasis* basis = nullptr;

  /// Per-quad jump offsets J_Q for periods P′ in (A^B, A^W, B^B, B^W) order.
  [[nodiscard]] std::vector<Eigen::Vector2d> jump_offsets(const Eigen::VectorXd& p) const;
  /// Right-hand side −Σ G_Qᵀ W_Q J_Q.
  [[nodiscard]] Eigen::VectorXd rhs(const Eigen::VectorXd& p) const;
  /// Σ_Q area |∇_Q(f + jumps)|².
  [[nodiscard]] double quadratic_form(const Eigen::VectorXd& f, const Eigen::VectorXd& p) const;
};

/// The system refers to g and basis, which must outlive it.
EnergySystem assemble(const QuadGraph& g, const HomologyBasis& basis);

struct HarmonicSolution {
  Eigen::VectorXd potential;  // f₀, zero at the pinned vertices
  Eigen::VectorXd periods;    // P′
  DiscreteDifferential eta;
  int iterations = 0;
  double residual = 0;  // relative residual of the pinned system
  double energy = 0;
};

/// Solves for every column of `p` (4g rows), sharing one factorization.
std::vector<HarmonicSolution> solve(const EnergySystem& system, const Eigen::MatrixXd& p,
                                    const SolverOptions& options = {});
HarmonicSolution solve(const EnergySystem& system, const Eigen::VectorXd& p,
                       const SolverOptions& options = {});

struct MinimalityReport {
  double max_orthogonality = 0;  // max |⟨η, df⟩| / (‖η‖‖df‖)
  double min_energy_gap = 0;     // min energy(η + df) − energy(η)
  double coclosed_residual = 0;  // is_closed(⋆η), relative to max |η|
  int trials = 0;
};

MinimalityReport verify_minimality(const EnergySystem& system, const HarmonicSolution& solution,
                                   int trials, std::uint64_t seed);

}  // namespace quadperiod
