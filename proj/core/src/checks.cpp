#include "quadperiod/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadperiod/periods.hpp"

namespace quadperiod {

namespace {

class Recorder {
 public:
  explicit Recorder(CheckReport& r) : r_(r) {}
  void at_most(const std::string& name, double value, double threshold) {
    add(name, value, threshold, Check::Bound::kAtMost, value <= threshold);
  }
  void above(const std::string& name, double value, double threshold) {
    add(name, value, threshold, Check::Bound::kAbove, value > threshold);
  }
  void at_least(const std::string& name, double value, double threshold) {
    add(name, value, threshold, Check::Bound::kAtLeast, value >= threshold);
  }

 private:
  void add(const std::string& name, double value, double threshold, Check::Bound b, bool ok) {
    r_.checks.push_back({name, value, threshold, b, ok && std::isfinite(value)});
  }
  CheckReport& r_;
};

double max_abs(const DiscreteDifferential& w) {
  double m = 0;
  for (std::size_t q = 0; q < w.size(); ++q) m = std::max({m, std::abs(w.black[q]), std::abs(w.white[q])});
  return m;
}

DiscreteDifferential random_differential(std::size_t quads, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  DiscreteDifferential w(quads);
  for (std::size_t q = 0; q < quads; ++q) {
    w.black[q] = {n(rng), n(rng)};
    w.white[q] = {n(rng), n(rng)};
  }
  return w;
}

}  // namespace

bool CheckReport::pass() const { return first_failure() == nullptr; }

const Check* CheckReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

CheckReport run_checks(const QuadGraph& g, const CheckOptions& options) {
  CheckReport rep;
  Recorder rec(rep);
  const double tol = options.tol;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const auto nq = g.quad_count();
  rep.genus = g.genus();

  // Quad-graph: construction already validated; recount the Euler characteristic.
  rec.at_most("quad_graph.euler_characteristic",
              std::abs(static_cast<double>(g.euler_characteristic() - (2 - 2 * g.genus()))), 0);

  // Homology.
  const HomologyBasis basis = compute_homology(g);
  const int gg = basis.genus();
  {
    std::vector<Cycle> all = basis.a;
    all.insert(all.end(), basis.b.begin(), basis.b.end());
    Eigen::MatrixXi j = Eigen::MatrixXi::Zero(2 * gg, 2 * gg);
    j.topRightCorner(gg, gg).setIdentity();
    j.bottomLeftCorner(gg, gg) = -Eigen::MatrixXi::Identity(gg, gg);
    rec.at_most("homology.intersection_form",
                (intersection_matrix(g, all) - j).cwiseAbs().maxCoeff(), 0);
    int defect = 0, period = 0;
    for (const Color color : {Color::kBlack, Color::kWhite}) {
      const auto& cocycles = color == Color::kBlack ? basis.black_cocycles : basis.white_cocycles;
      for (int k = 0; k < 2 * gg; ++k) {
        for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
          if (g.color(v) != color) defect = std::max(defect, std::abs(cochain_defect(g, cocycles[k], v)));
        }
        for (int m = 0; m < 2 * gg; ++m) {
          const int p = cochain_period(cocycles[k], basis.projection(color, m));
          period = std::max(period, std::abs(p - (m == k ? 1 : 0)));
        }
      }
    }
    rec.at_most("homology.cocycle_closed", defect, 0);
    rec.at_most("homology.cocycle_periods", period, 0);
  }

  // DEC identities.
  {
    double stokes = 0, energy_gap = 0;
    for (int t = 0; t < options.trials; ++t) {
      VertexFunction f;
      f.values.resize(g.vertex_count());
      for (auto& v : f.values) v = normal(rng);
      const DiscreteDifferential df = d(g, f);
      stokes = std::max(stokes, is_closed(g, df).value / std::max(max_abs(df), 1e-300));
      VertexFunction fr;
      fr.values.resize(g.vertex_count());
      for (auto& v : fr.values) v = normal(rng);
      const DiscreteDifferential dfr = d(g, fr);
      double grad = 0;
      for (std::size_t q = 0; q < nq; ++q) {
        grad += g.quad(static_cast<int>(q)).area() * gradient(g, dfr, static_cast<int>(q)).squaredNorm();
      }
      const double e = energy(g, dfr);
      energy_gap = std::max(energy_gap, std::abs(e - grad) / e);
    }
    rec.at_most("dec.stokes", stokes, 1e-12);
    rec.at_most("dec.energy_gradient", energy_gap, 1e-12);

    const DiscreteDifferential w1 = random_differential(nq, rng);
    const DiscreteDifferential w2 = random_differential(nq, rng);
    const DiscreteDifferential ss = hodge_star(g, hodge_star(g, w1));
    rec.at_most("dec.star_star", max_abs(ss + w1) / max_abs(w1), 1e-12);
    const Complex a = wedge(g, w1, w2), b = wedge(g, w2, w1);
    rec.at_most("dec.wedge_antisymmetry", std::abs(a + b) / std::max(std::abs(a), 1.0), 1e-12);

    // ∬ dz∧dz̄ = −4i Σ area(F_Q), the Varignon parallelograms having half the quad area.
    const double area = g.total_area();
    rec.at_most("dec.wedge_dz_dzbar",
                std::abs(wedge(g, dz(g), dzbar(g)) - Complex(0, -4) * (area / 2)) / area, 1e-12);

    // ⋆ω = −iω per quad iff ω_w = iρ_Q ω_b.
    int disagreements = 0;
    std::uniform_int_distribution<std::size_t> pick(0, nq - 1);
    for (int t = 0; t < 1000; ++t) {
      const Quad& q = g.quad(static_cast<int>(pick(rng)));
      const Complex wb(normal(rng), normal(rng));
      const bool make_holomorphic = t % 2 == 0;
      const Complex ww = make_holomorphic ? Complex(0, 1) * rho(q) * wb : Complex(normal(rng), normal(rng));
      const Eigen::Matrix2d s = star_matrix(q);
      const Complex sb = s(0, 0) * wb + s(0, 1) * ww, sw = s(1, 0) * wb + s(1, 1) * ww;
      const double scale = std::abs(wb) + std::abs(ww);
      const bool star = std::abs(sb + Complex(0, 1) * wb) + std::abs(sw + Complex(0, 1) * ww) <= 1e-12 * scale;
      const bool relation = std::abs(ww - Complex(0, 1) * rho(q) * wb) <= 1e-12 * scale;
      if (star != relation || relation != make_holomorphic) ++disagreements;
    }
    rec.at_most("dec.holomorphic_equivalence", disagreements, 0);
  }

  // Harmonic solver contracts.
  const EnergySystem system = assemble(g, basis);
  {
    Eigen::VectorXd p(4 * gg);
    for (auto& x : p) x = normal(rng);
    const HarmonicSolution sol = solve(system, p, options.solver);
    const double measured = (periods(sol.eta, basis).real_flat() - p).cwiseAbs().maxCoeff();
    rec.at_most("harmonic.periods", measured / p.norm(), tol);
    rec.at_most("harmonic.residual", sol.residual, options.solver.tol);
    const MinimalityReport m = verify_minimality(system, sol, options.trials, options.seed);
    rec.at_most("harmonic.coclosed", m.coclosed_residual, tol);
    rec.at_most("harmonic.orthogonality", m.max_orthogonality, tol);
    rec.at_least("harmonic.energy_gap", m.min_energy_gap, -tol * std::max(sol.energy, 1.0));
  }

  // Period matrices.
  const CanonicalBasis cb = canonical_basis(g, basis, options.solver);
  {
    std::vector<DiscreteDifferential> forms = cb.canonical;
    if (options.inject && !forms.empty()) {
      forms[0].white[0] += Complex(1, 0) * std::max(max_abs(forms[0]), 1.0);
    }
    double holo = 0;
    for (const auto& w : forms) {
      const Residual r = is_holomorphic(g, w, tol);
      const double closed = is_closed(g, w).value / std::max(max_abs(w), 1e-300);
      holo = std::max({holo, r.value, closed});
    }
    rec.at_most("periods.holomorphicity", holo, tol);
  }
  rec.at_most("periods.a_periods", cb.a_period_error, tol);
  const PeriodMatrices pm = period_matrices(cb, basis);
  rep.pi = pm.pi;
  const PeriodDiagnostics dg = diagnose(pm);
  rec.at_most("periods.tilde_symmetry", dg.tilde_symmetry, 1e-7);
  rec.at_most("periods.pi_symmetry", dg.pi_symmetry, 1e-7);
  rec.above("periods.im_tilde_positive", dg.min_eig_im_tilde, 0);
  rec.above("periods.im_pi_positive", dg.min_eig_im_pi, 0);
  rec.at_most("periods.block_average", dg.block_average_mismatch / dg.tilde_norm, tol);
  rec.at_least("periods.mean_gap", dg.mean_gap, -1e-10);
  double max_im_rho = 0;
  for (const auto& q : g.quads()) max_im_rho = std::max(max_im_rho, std::abs(rho(q).imag()));
  if (max_im_rho <= 1e-12) {
    const double pattern = std::max({dg.re_bw, dg.re_wb, dg.im_bb, dg.im_ww});
    rec.at_most("periods.orthodiagonal_blocks", pattern / dg.tilde_norm, tol);
  }
  double bilinear = 0;
  for (const auto& w : cb.canonical) bilinear = std::max(bilinear, bilinear_identity_residual(g, w, basis));
  rec.at_most("periods.bilinear_identity", bilinear, tol);

  if (options.differential) {
    if (options.differential->size() != nq) {
      rec.at_most("input.size", std::abs(static_cast<double>(options.differential->size()) - nq), 0);
    } else {
      const DiscreteDifferential& w = *options.differential;
      const double closed = is_closed(g, w).value / std::max(max_abs(w), 1e-300);
      rec.at_most("input.holomorphicity", std::max(is_holomorphic(g, w, tol).value, closed), tol);
    }
  }
  return rep;
}

}  // namespace quadperiod
