#include "quadperiod/convergence.hpp"

#include <cmath>
#include <limits>

#include "quadperiod/detail/tiling.hpp"
#include "quadperiod/periods.hpp"

namespace quadperiod {

double predicted_exponent(double gamma_sigma, bool adapted) {
  if (adapted || gamma_sigma > 0.5) return 1.0;
  return 2 * gamma_sigma;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& error) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < h.size() && i < error.size(); ++i) {
    if (!(error[i] > 0) || !std::isfinite(error[i]) || !(h[i] > 0)) continue;
    const double x = std::log(h[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<HomologyBasis> consistent_bases(const PolyhedralSurface& surface,
                                            const std::vector<RefinementLevel>& levels,
                                            double base_cell) {
  constexpr int kBase = 2;
  const int np = static_cast<int>(surface.polygons().size());
  const QuadGraph base = detail::tile_parallelograms(surface, kBase);
  const HomologyBasis hb = compute_homology(base);
  std::vector<HomologyBasis> out;
  out.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const QuadGraph& g = levels[l].graph;
    std::vector<Cycle> a, b;
    if (levels[l].adapted || l == 0) {
      const int m = tiled_side_count(g, np);
      if (!levels[l].adapted && m != static_cast<int>(std::lround(1 / base_cell))) {
        throw TopologyError("level 0 is not the base tiling");
      }
      for (const auto& c : hb.a) a.push_back(transport_tiled(base, kBase, g, m, c));
      for (const auto& c : hb.b) b.push_back(transport_tiled(base, kBase, g, m, c));
    } else {
      const QuadGraph& prev = levels[l - 1].graph;
      for (const auto& c : out.back().a) a.push_back(transport_subdivided(prev, g, c));
      for (const auto& c : out.back().b) b.push_back(transport_subdivided(prev, g, c));
    }
    out.push_back(homology_from_cycles(g, std::move(a), std::move(b)));
  }
  return out;
}

namespace {

std::vector<double> log2_ratios(const std::vector<double>& v) {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    r.push_back(v[i] > 0 && v[i + 1] > 0 ? std::log2(v[i] / v[i + 1])
                                         : std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

// Discrete energy of the harmonic differential with equal black and white
// periods (A, B).
double level_energy(const Eigen::MatrixXcd& tilde, const Eigen::VectorXd& ab) {
  const auto g = ab.size() / 2;
  Eigen::VectorXd p(4 * g);
  p << ab.head(g), ab.head(g), ab.tail(g), ab.tail(g);
  return p.dot(energy_form_discrete(tilde) * p);
}

}  // namespace

ConvergenceReport run_convergence(const PolyhedralSurface& surface,
                                  const ConvergenceOptions& options) {
  if (options.levels < 3) throw Error("a convergence study needs at least 3 levels");
  SweepOptions so;
  so.base_cell = options.base_cell;
  so.adapted = options.adapted_options;
  const auto levels = sweep(surface, options.levels, options.adapted, so);
  const auto bases = consistent_bases(surface, levels, options.base_cell);

  ConvergenceReport rep;
  rep.adapted = options.adapted;
  rep.gamma_sigma = levels.front().stats.gamma_sigma;
  rep.predicted = predicted_exponent(rep.gamma_sigma, options.adapted);
  rep.log_corrected = !options.adapted && std::abs(rep.gamma_sigma - 0.5) < 1e-12;
  rep.band_low = rep.predicted - options.band_below;
  rep.band_high = rep.predicted + options.band_above;
  const int gg = bases.front().genus();
  std::optional<Eigen::MatrixXcd> analytic = options.reference;
  if (!analytic && gg == 1) {
    const PeriodVector pv = periods(dz(levels.front().graph), bases.front());
    analytic = Eigen::MatrixXcd::Constant(1, 1, pv.b()[0] / pv.a()[0]);
  }
  rep.reference_is_level = !analytic.has_value();

  std::vector<Eigen::VectorXd> vectors = options.energy_vectors;
  if (vectors.empty()) vectors.push_back(Eigen::VectorXd::Ones(2 * gg));

  std::vector<Eigen::MatrixXcd> tildes;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const CanonicalBasis cb = canonical_basis(levels[l].graph, bases[l], options.solver);
    const PeriodMatrices pm = period_matrices(cb, bases[l]);
    ConvergenceRow row;
    row.level = levels[l].level;
    row.h = levels[l].stats.h;
    row.phi_min = levels[l].stats.phi_min;
    row.quads = levels[l].stats.quads;
    row.bw_minus_wb = (pm.bw - pm.wb).norm();
    row.bb_minus_ww = (pm.bb - pm.ww).norm();
    row.mean_gap = mean_gap_min_eigenvalue(pm.tilde);
    row.tilde_norm = pm.tilde.norm();
    row.pi = pm.pi;
    tildes.push_back(pm.tilde);
    rep.rows.push_back(std::move(row));
  }

  const Eigen::MatrixXcd ref = analytic ? *analytic : rep.rows.back().pi;
  std::vector<double> ref_energy;
  for (const auto& v : vectors) {
    if (v.size() != 2 * gg) throw Error("energy vectors must have 2g entries");
    ref_energy.push_back(analytic ? v.dot(energy_form_continuous(ref) * v)
                                           : level_energy(tildes.back(), v));
  }
  for (std::size_t l = 0; l < rep.rows.size(); ++l) {
    auto& row = rep.rows[l];
    row.pi_error = (row.pi - ref).norm();
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      row.energy_errors.push_back(std::abs(level_energy(tildes[l], vectors[k]) - ref_energy[k]));
    }
  }

  const int n = static_cast<int>(rep.rows.size());
  const double scale = rep.rows.back().tilde_norm;
  auto make_fit = [&](const std::string& name, auto value, bool against_reference) {
    RateFit f;
    f.quantity = name;
    // Rows compared with the finest level exclude it and its neighbours.
    const bool self_ref = against_reference && rep.reference_is_level;
    const int usable = self_ref ? n - 1 - options.reference_gap : n;
    const int last_row = self_ref ? n - 1 : n;
    std::vector<double> all, hs, es;
    for (int l = 0; l < last_row; ++l) all.push_back(value(rep.rows[l]));
    f.exact = true;
    for (double v : all) f.exact = f.exact && v <= options.exact_tol * scale;
    f.successive = log2_ratios(all);
    f.decreasing = true;
    for (std::size_t i = 0; i + 1 < all.size(); ++i) f.decreasing = f.decreasing && all[i + 1] < all[i];
    for (int l = std::max(0, usable - options.fit_points); l < usable; ++l) {
      hs.push_back(rep.rows[l].h);
      es.push_back(value(rep.rows[l]));
    }
    f.slope = f.exact ? std::numeric_limits<double>::quiet_NaN() : fit_slope(hs, es);
    f.points = std::isnan(f.slope) ? 0 : static_cast<int>(hs.size());
    rep.fits.push_back(std::move(f));
  };
  make_fit("pi_error", [](const ConvergenceRow& r) { return r.pi_error; }, true);
  make_fit("bw_minus_wb", [](const ConvergenceRow& r) { return r.bw_minus_wb; }, false);
  make_fit("bb_minus_ww", [](const ConvergenceRow& r) { return r.bb_minus_ww; }, false);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    make_fit("energy_error_" + std::to_string(k),
             [k](const ConvergenceRow& r) { return r.energy_errors[k]; }, true);
  }
  rep.exact = rep.fits.front().exact;
  return rep;
}

bool ConvergenceReport::pass() const {
  const RateFit& pi = fits.front();
  if (pi.exact) return true;
  if (std::isnan(pi.slope) || pi.slope < band_low || pi.slope > band_high) return false;
  for (const auto& f : fits) {
    if (!f.exact && !f.decreasing) return false;
  }
  return true;
}

const RateFit& ConvergenceReport::fit(const std::string& quantity) const {
  for (const auto& f : fits) {
    if (f.quantity == quantity) return f;
  }
  throw Error("no fit named " + quantity);
}

}  // namespace quadperiod
