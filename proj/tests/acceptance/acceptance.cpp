// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quadperiod/convergence.hpp"
#include "quadperiod/periods.hpp"

namespace qp = quadperiod;
using qp::Complex;

namespace {

const Complex kI(0, 1);

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Pipeline {
  std::string name;
  qp::QuadGraph g;
  qp::HomologyBasis basis;
  qp::CanonicalBasis cb;
  qp::PeriodMatrices pm;
  bool square_tiled = false;

  Pipeline(std::string n, qp::QuadGraph graph, bool squares)
      : name(std::move(n)), g(std::move(graph)), square_tiled(squares) {
    basis = qp::compute_homology(g);
    cb = qp::canonical_basis(g, basis);
    pm = qp::period_matrices(cb, basis);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs(const qp::DiscreteDifferential& w) {
  double m = 0;
  for (std::size_t q = 0; q < w.size(); ++q) m = std::max({m, std::abs(w.black[q]), std::abs(w.white[q])});
  return m;
}

qp::VertexFunction random_function(const qp::QuadGraph& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  qp::VertexFunction f;
  f.values.resize(g.vertex_count());
  for (auto& v : f.values) v = Complex(n(rng), n(rng));
  return f;
}

qp::QuadGraph l_shape_level(int level) {
  return qp::build_quad_graph(qp::make_l_shape_surface(), 0.5 / (1 << level));
}

// Tori for both τ at n ∈ {2, 4, 8, 16}, then L-shape levels 1–4.
std::vector<Pipeline> build_corpus() {
  std::vector<Pipeline> corpus;
  for (const Complex tau : {Complex(0, 1), Complex(0.5, 0.8)}) {
    for (int n : {2, 4, 8, 16}) {
      std::ostringstream name;
      name << "torus tau=" << tau.real() << "+" << tau.imag() << "i n=" << n;
      corpus.emplace_back(name.str(), qp::generate_torus(tau, n), tau == Complex(0, 1));
    }
  }
  for (int level = 1; level <= 4; ++level) {
    corpus.emplace_back("l_shape level " + std::to_string(level), l_shape_level(level), true);
  }
  return corpus;
}

Outcome torus_exactness() {
  double worst = 0;
  for (const Complex tau : {Complex(0, 1), Complex(0.5, 0.8)}) {
    for (int n : {2, 4, 8, 16}) {
      const Pipeline p("", qp::generate_torus(tau, n), false);
      if (p.pm.pi.rows() != 1 || p.pm.pi.cols() != 1) return {false, "period matrix is not 1x1"};
      worst = std::max(worst, std::abs(p.pm.pi(0, 0) - tau));
    }
  }
  return {worst <= 1e-8, "max |Pi - tau| = " + fmt(worst)};
}

Outcome structure(const std::vector<Pipeline>& corpus) {
  double sym = 0, eig = INFINITY;
  std::string where;
  for (const auto& p : corpus) {
    const auto d = qp::diagnose(p.pm);
    sym = std::max({sym, d.tilde_symmetry, d.pi_symmetry});
    const double e = std::min(d.min_eig_im_tilde, d.min_eig_im_pi);
    if (e < eig) {
      eig = e;
      where = p.name;
    }
  }
  return {sym <= 1e-7 && eig > 0,
          "max rel asymmetry " + fmt(sym) + ", min eig Im " + fmt(eig) + " (" + where + ")"};
}

Outcome orthodiagonal(const std::vector<Pipeline>& corpus) {
  double worst = 0;
  int meshes = 0;
  for (const auto& p : corpus) {
    if (!p.square_tiled) continue;
    const auto d = qp::diagnose(p.pm);
    worst = std::max(worst, std::max({d.re_bw, d.re_wb, d.im_bb, d.im_ww}) / d.tilde_norm);
    ++meshes;
  }
  return {worst <= 1e-8, std::to_string(meshes) + " meshes, max block norm / |Pi~| = " + fmt(worst)};
}

Outcome energy_form() {
  const Pipeline p("", l_shape_level(3), true);
  const Eigen::MatrixXd e = qp::energy_form_discrete(p.pm.tilde);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  double form = 0, bilinear = 0;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd pv(4 * p.cb.genus);
    for (auto& x : pv) x = n(rng);
    const auto w = p.cb.with_real_periods(pv);
    const Eigen::VectorXd q = qp::to_energy_order(pv);
    const double energy = qp::energy(p.g, w);
    form = std::max(form, std::abs(energy - q.dot(e * q)) / energy);
    bilinear = std::max(bilinear, qp::bilinear_identity_residual(p.g, w, p.basis));
  }
  return {form <= 1e-8 && bilinear <= 1e-8,
          "20 samples, form residual " + fmt(form) + ", bilinear residual " + fmt(bilinear)};
}

Outcome harmonic_contracts() {
  const auto g = l_shape_level(3);
  const auto basis = qp::compute_homology(g);
  const auto system = qp::assemble(g, basis);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  double period = 0, coclosed = 0, ortho = 0;
  for (int t = 0; t < 4; ++t) {
    Eigen::VectorXd pv(4 * basis.genus());
    for (auto& x : pv) x = n(rng);
    const auto sol = qp::solve(system, pv);
    const Eigen::VectorXd measured = qp::periods(sol.eta, basis).real_flat();
    period = std::max(period, (measured - pv).norm() / pv.norm());
    const auto m = qp::verify_minimality(system, sol, 50, 100 + t);
    coclosed = std::max(coclosed, m.coclosed_residual);
    ortho = std::max(ortho, m.max_orthogonality);
  }
  return {period <= 1e-8 && coclosed <= 1e-8 && ortho <= 1e-9,
          "period error " + fmt(period) + ", coclosed " + fmt(coclosed) + ", orthogonality " +
              fmt(ortho) + " (4 P', 50 f each)"};
}

Outcome dec_identities() {
  std::mt19937_64 rng(11);
  std::vector<qp::QuadGraph> meshes;
  meshes.push_back(qp::generate_torus({0.5, 0.8}, 8));
  meshes.push_back(l_shape_level(2));
  meshes.push_back(qp::generate_adapted(qp::make_l_shape_surface(), 0.25));

  double stokes = 0, starstar = 0, wedge = 0, grad = 0;
  for (const auto& g : meshes) {
    const auto df = qp::d(g, random_function(g, rng));
    stokes = std::max(stokes, qp::is_closed(g, df).value / max_abs(df));
    starstar = std::max(starstar, max_abs(qp::hodge_star(g, qp::hodge_star(g, df)) + df) / max_abs(df));
    // The two-form lives on the medial faces F_Q, each half of its quad.
    const double medial_area = 0.5 * g.total_area();
    wedge = std::max(wedge, std::abs(qp::wedge(g, qp::dz(g), qp::dzbar(g)) + 4.0 * kI * medial_area));
    const auto dr = qp::real_part(df);
    double sum = 0;
    for (std::size_t q = 0; q < g.quad_count(); ++q) {
      sum += g.quad(static_cast<int>(q)).area() * qp::gradient(g, dr, static_cast<int>(q)).squaredNorm();
    }
    const double e = qp::energy(g, dr);
    grad = std::max(grad, std::abs(e - sum) / e);
  }

  // Holomorphicity: ⋆ω = −iω per quad against ω_w = iρ ω_b on random quads.
  const auto& g = meshes.back();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(g.quad_count()) - 1);
  std::normal_distribution<double> n;
  int disagreements = 0, holomorphic = 0;
  for (int t = 0; t < 1000; ++t) {
    const int q = pick(rng);
    qp::DiscreteDifferential w(g.quad_count());
    w.black[q] = Complex(n(rng), n(rng));
    const Complex r = qp::rho(g.quad(q));
    w.white[q] = (t % 2 == 0) ? kI * r * w.black[q] : Complex(n(rng), n(rng));
    const bool relation = std::abs(w.white[q] - kI * r * w.black[q]) <= 1e-12 * std::abs(w.black[q]);
    const auto s = qp::hodge_star(g, w);
    const double defect = std::max(std::abs(s.black[q] + kI * w.black[q]), std::abs(s.white[q] + kI * w.white[q]));
    const bool star = defect <= 1e-10 * max_abs(w);
    disagreements += relation != star;
    holomorphic += relation;
  }

  const bool pass = stokes <= 1e-12 && starstar <= 1e-12 && wedge <= 1e-12 && grad <= 1e-12 &&
                    disagreements == 0;
  return {pass, "stokes " + fmt(stokes) + ", star-star " + fmt(starstar) + ", wedge " + fmt(wedge) +
                    ", energy/gradient " + fmt(grad) + ", holomorphic tests disagree on " +
                    std::to_string(disagreements) + "/1000 quads (" + std::to_string(holomorphic) +
                    " holomorphic)"};
}

Outcome convergence() {
  const auto surface = qp::make_l_shape_surface();
  qp::ConvergenceOptions uo;
  uo.levels = 7;
  uo.base_cell = 0.25;
  const auto u = qp::run_convergence(surface, uo);

  std::vector<double> h, pi, bw, bb;
  for (std::size_t l = 0; l + 1 < u.rows.size(); ++l) {
    h.push_back(u.rows[l].h);
    pi.push_back(u.rows[l].pi_error);
    bw.push_back(u.rows[l].bw_minus_wb);
    bb.push_back(u.rows[l].bb_minus_ww);
  }
  // The BW−WB and BB−WW differences vanish in the limit, so all levels count.
  std::vector<double> h_all, bw_all, bb_all;
  for (const auto& row : u.rows) {
    h_all.push_back(row.h);
    bw_all.push_back(row.bw_minus_wb);
    bb_all.push_back(row.bb_minus_ww);
  }
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1])) return false;
    }
    return true;
  };
  auto last3 = [](const std::vector<double>& v) { return std::vector<double>(v.end() - 3, v.end()); };
  auto in_band = [](double s) { return s >= 0.4 && s <= 0.9; };

  const double s_pi = qp::fit_slope(last3(h), last3(pi));
  const double s_bw = qp::fit_slope(last3(h_all), last3(bw_all));
  const double s_bb = qp::fit_slope(last3(h_all), last3(bb_all));
  const bool enough = u.rows.size() >= 5 && u.rows.back().quads >= 100000;
  const bool uniform_ok = enough && decreasing(pi) && in_band(s_pi) && decreasing(bw_all) &&
                          in_band(s_bw) && decreasing(bb_all) && in_band(s_bb);

  qp::ConvergenceOptions ao;
  ao.levels = 5;
  ao.base_cell = 0.25;
  ao.adapted = true;
  const auto a = qp::run_convergence(surface, ao);
  std::vector<double> ha, pa;
  for (std::size_t l = 0; l + 1 < a.rows.size(); ++l) {
    ha.push_back(a.rows[l].h);
    pa.push_back(a.rows[l].pi_error);
  }
  const double s_ad = qp::fit_slope(last3(ha), last3(pa));
  const bool adapted_ok = s_ad >= 0.8;

  return {uniform_ok && adapted_ok,
          "uniform " + std::to_string(u.rows.size()) + " levels to " +
              std::to_string(u.rows.back().quads) + " quads: Pi slope " + fmt(s_pi) +
              (decreasing(pi) ? " (decreasing)" : " (not decreasing)") + ", BW-WB " + fmt(s_bw) +
              ", BB-WW " + fmt(s_bb) + ", band [0.4, 0.9]; adapted Pi slope " + fmt(s_ad) +
              " (need >= 0.8)"};
}

Outcome mean_gap(const std::vector<Pipeline>& corpus) {
  double worst = INFINITY;
  for (const auto& p : corpus) worst = std::min(worst, qp::mean_gap_min_eigenvalue(p.pm.tilde));
  return {worst >= -1e-10, std::to_string(corpus.size()) + " meshes, min eigenvalue " + fmt(worst)};
}

// Distance of z from the lattice Z + τZ.
double lattice_distance(Complex z, Complex tau) {
  const double m = z.imag() / tau.imag();
  const double n = z.real() - m * tau.real();
  return std::abs(Complex(n - std::round(n), 0) + (m - std::round(m)) * tau);
}

Outcome abelian() {
  double torus = 0;
  for (const Complex tau : {Complex(0, 1), Complex(0.5, 0.8)}) {
    const Pipeline p("", qp::generate_torus(tau, 8), false);
    const auto ai = qp::abelian_integral(p.g, p.cb.canonical[0]);
    const auto side = p.g.edge(ai.base_edge).sides[0];
    const auto& bq = p.g.quad(side.quad);
    const Complex z0 = bq.chart[side.side];
    const Complex z1 = bq.chart[(side.side + 1) % 4];
    const auto c0 = p.g.color(bq.vertices[side.side]);
    for (std::size_t q = 0; q < p.g.quad_count(); ++q) {
      const auto& quad = p.g.quad(static_cast<int>(q));
      for (int k = 0; k < 4; ++k) {
        const Complex origin = p.g.color(quad.vertices[k]) == c0 ? z0 : z1;
        torus = std::max(torus, lattice_distance(ai.corner_values[q][k] - (quad.chart[k] - origin), tau));
      }
    }
  }

  const auto surface = qp::make_l_shape_surface();
  const double base = 0.25;
  const auto levels = qp::sweep(surface, 5, false, {base, {}});
  const auto bases = qp::consistent_bases(surface, levels, base);
  std::vector<std::map<std::tuple<int, long long, long long>, Complex>> samples;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto cb = qp::canonical_basis(levels[l].graph, bases[l]);
    samples.push_back(qp::abelian_samples(levels[l].graph, qp::abelian_integral(levels[l].graph, cb.canonical[0])));
  }
  std::vector<double> diffs;
  for (std::size_t l = 0; l + 1 < samples.size(); ++l) {
    double m = 0;
    for (const auto& [key, v] : samples[l]) {
      const auto it = samples[l + 1].find(key);
      if (it != samples[l + 1].end()) m = std::max(m, std::abs(v - it->second));
    }
    diffs.push_back(m);
  }
  bool decreasing = diffs.size() == 4;
  std::string list;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (i > 0 && !(diffs[i] < diffs[i - 1])) decreasing = false;
    list += (i ? ", " : "") + fmt(diffs[i]);
  }
  return {torus <= 1e-10 && decreasing,
          "torus max distance mod lattice " + fmt(torus) + "; l_shape level-pair max differences " + list};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](int number, double limit_s, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(limit_s) + " s limit";
    }
    all = all && o.pass;
    std::printf("criterion %d: %s  %s  [%.2f s]\n", number, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
  };

  std::vector<Pipeline> corpus;
  report(1, 5, torus_exactness);
  report(2, 120, [&] {
    corpus = build_corpus();
    return structure(corpus);
  });
  report(3, 0, [&] { return orthodiagonal(corpus); });
  report(4, 0, energy_form);
  report(5, 0, harmonic_contracts);
  report(6, 0, dec_identities);
  report(7, 900, convergence);
  report(8, 0, [&] { return mean_gap(corpus); });
  report(9, 0, abelian);
  return all ? 0 : 1;
}
