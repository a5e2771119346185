#pragma once

// Refinement studies of period matrices and energy forms.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quadperiod/harmonic.hpp"
#include "quadperiod/refine.hpp"

namespace quadperiod {

/// Rate exponent of λ_Σ(h): 1 when γ_Σ > 1/2 or the mesh is adapted, else 2γ_Σ.
double predicted_exponent(double gamma_sigma, bool adapted);

/// Least-squares slope of log(error) against log(h); NaN with fewer than 3
/// finite positive points.
double fit_slope(const std::vector<double>& h, const std::vector<double>& error);

struct ConvergenceOptions {
  int levels = 5;
  bool adapted = false;
  double base_cell = 0.25;
  /// External reference. Without one, genus-1 surfaces use the exact value
  /// ∫_b dz / ∫_a dz and others the finest level.
  std::optional<Eigen::MatrixXcd> reference;
  /// Real (A, B) period vectors of length 2g whose energies are tracked.
  /// Defaults to the all-ones vector.
  std::vector<Eigen::VectorXd> energy_vectors;
  /// With the finest level as reference, the fit can skip this many levels
  /// next to it, where Π_h − Π_ref underestimates the true error.
  int reference_gap = 0;
  int fit_points = 3;
  double band_below = 0.27;
  double band_above = 0.25;
  /// Errors at or below this (relative to ‖Π̃‖) count as exactly zero.
  double exact_tol = 1e-8;
  SolverOptions solver;
  AdaptedOptions adapted_options;
};

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  double phi_min = 0;
  std::size_t quads = 0;
  double pi_error = 0;       // ‖Π_h − Π_ref‖
  double bw_minus_wb = 0;    // ‖Π^{B,W} − Π^{W,B}‖
  double bb_minus_ww = 0;    // ‖Π^{B,B} − Π^{W,W}‖
  std::vector<double> energy_errors;
  double mean_gap = 0;
  double tilde_norm = 0;
  Eigen::MatrixXcd pi;
};

struct RateFit {
  std::string quantity;
  double slope = 0;  // NaN when not fitted
  int points = 0;
  bool exact = false;       // every value below the exact tolerance
  bool decreasing = false;  // strictly, over all fitted rows
  std::vector<double> successive;  // log2 ratios of consecutive values
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double gamma_sigma = 1;
  bool adapted = false;
  double predicted = 1;
  bool log_corrected = false;  // γ_Σ = 1/2
  bool exact = false;          // all Π errors vanish (flat torus)
  double band_low = 0, band_high = 0;
  bool reference_is_level = true;
  std::vector<RateFit> fits;  // Π error, BW−WB, BB−WW, energies

  /// Π error fit inside the band (or exact) and every fitted quantity decreasing.
  [[nodiscard]] bool pass() const;
  [[nodiscard]] const RateFit& fit(const std::string& quantity) const;
};

/// Runs the full pipeline at each refinement level with one symplectic basis
/// carried through all levels.
ConvergenceReport run_convergence(const PolyhedralSurface& surface,
                                  const ConvergenceOptions& options = {});

/// Symplectic basis of the base tiling carried to every level of a sweep.
std::vector<HomologyBasis> consistent_bases(const PolyhedralSurface& surface,
                                            const std::vector<RefinementLevel>& levels,
                                            double base_cell);

}  // namespace quadperiod
