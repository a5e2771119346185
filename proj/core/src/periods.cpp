#include "quadperiod/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace quadperiod {

namespace {

double max_abs(const DiscreteDifferential& w) {
  double s = 0;
  for (std::size_t q = 0; q < w.size(); ++q) s = std::max({s, std::abs(w.black[q]), std::abs(w.white[q])});
  return s;
}

double min_eig_sym(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Differential with coefficients c over a list of differentials.
DiscreteDifferential combine(const std::vector<DiscreteDifferential>& ws, const Eigen::VectorXcd& c) {
  DiscreteDifferential r(ws.front().size());
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    if (c[m] == Complex(0)) continue;
    for (std::size_t q = 0; q < r.size(); ++q) {
      r.black[q] += c[m] * ws[m].black[q];
      r.white[q] += c[m] * ws[m].white[q];
    }
  }
  return r;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

DiscreteDifferential holomorphic_from_harmonic(const QuadGraph& g, const DiscreteDifferential& eta,
                                               double tol) {
  const double scale = std::max(max_abs(eta), 1e-300);
  const DiscreteDifferential star = hodge_star(g, eta);
  if (is_closed(g, eta).value > tol * scale) throw SolverError("harmonic input is not closed");
  if (is_closed(g, star).value > tol * scale) throw SolverError("harmonic input is not co-closed");
  return eta + Complex(0, 1) * star;
}

DiscreteDifferential CanonicalBasis::with_real_periods(const Eigen::VectorXd& p) const {
  return combine(elementary, p.cast<Complex>());
}

CanonicalBasis canonical_basis(const QuadGraph& g, const HomologyBasis& basis,
                               const SolverOptions& options) {
  CanonicalBasis cb;
  const int gg = basis.genus();
  cb.genus = gg;
  const int n = 4 * gg;
  const EnergySystem system = assemble(g, basis);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  auto solutions = solve(system, identity, options);
  for (int c = 0; c < n; ++c) {
    // An iterative solve at the requested residual can leave ⋆η measurably
    // non-closed on fine meshes; tighten it until the invariant holds.
    SolverOptions o = options;
    while (o.kind == SolverKind::kConjugateGradient && o.tol > 1e-15) {
      try {
        (void)holomorphic_from_harmonic(g, solutions[c].eta);
        break;
      } catch (const SolverError&) {
        o.tol /= 100;
        solutions[c] = solve(system, Eigen::VectorXd(identity.col(c)), o);
      }
    }
    cb.max_solver_residual = std::max(cb.max_solver_residual, solutions[c].residual);
    cb.elementary.push_back(holomorphic_from_harmonic(g, solutions[c].eta));
    cb.elementary_periods.push_back(periods(cb.elementary.back(), basis));
  }

  // Rows: Re A^B, Re A^W, Im A^B, Im A^W; columns: elementary differentials.
  Eigen::MatrixXd m(n, n);
  for (int c = 0; c < n; ++c) {
    const PeriodVector& p = cb.elementary_periods[c];
    for (int k = 0; k < gg; ++k) {
      m(k, c) = p.a_black[k].real();
      m(gg + k, c) = p.a_white[k].real();
      m(2 * gg + k, c) = p.a_black[k].imag();
      m(3 * gg + k, c) = p.a_white[k].imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  cb.condition = sv(0) / sv(sv.size() - 1);
  if (!(sv(sv.size() - 1) > 1e-14 * sv(0))) {
    throw SolverError("a-period system is singular (condition " + std::to_string(cb.condition) + ")");
  }
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n, 2 * gg);
  targets.topLeftCorner(2 * gg, 2 * gg).setIdentity();  // ω^B_k then ω^W_k
  const Eigen::MatrixXd coeff = Eigen::FullPivLU<Eigen::MatrixXd>(m).solve(targets);

  for (int k = 0; k < gg; ++k) {
    cb.black.push_back(combine(cb.elementary, coeff.col(k).cast<Complex>()));
    cb.white.push_back(combine(cb.elementary, coeff.col(gg + k).cast<Complex>()));
    cb.canonical.push_back(cb.black.back() + cb.white.back());
  }
  for (int k = 0; k < gg; ++k) {
    const PeriodVector pb = periods(cb.black[k], basis);
    const PeriodVector pw = periods(cb.white[k], basis);
    for (int j = 0; j < gg; ++j) {
      const double delta = j == k ? 1.0 : 0.0;
      cb.a_period_error = std::max({cb.a_period_error, std::abs(pb.a_black[j] - delta),
                                    std::abs(pb.a_white[j]), std::abs(pw.a_white[j] - delta),
                                    std::abs(pw.a_black[j])});
    }
  }
  if (cb.a_period_error > 10 * std::max(options.tol, 1e-12) * std::max(1.0, cb.condition)) {
    throw SolverError("canonical a-periods off by " + std::to_string(cb.a_period_error));
  }
  return cb;
}

PeriodMatrices period_matrices(const CanonicalBasis& cb, const HomologyBasis& basis) {
  const int gg = cb.genus;
  PeriodMatrices pm;
  pm.bw.resize(gg, gg);
  pm.bb.resize(gg, gg);
  pm.ww.resize(gg, gg);
  pm.wb.resize(gg, gg);
  pm.pi.resize(gg, gg);
  for (int k = 0; k < gg; ++k) {
    const PeriodVector pb = periods(cb.black[k], basis);
    const PeriodVector pw = periods(cb.white[k], basis);
    const PeriodVector pc = periods(cb.canonical[k], basis);
    for (int j = 0; j < gg; ++j) {
      pm.bb(j, k) = pb.b_black[j];
      pm.wb(j, k) = pb.b_white[j];
      pm.bw(j, k) = pw.b_black[j];
      pm.ww(j, k) = pw.b_white[j];
      pm.pi(j, k) = 0.5 * (pc.b_black[j] + pc.b_white[j]);
    }
  }
  pm.tilde.resize(2 * gg, 2 * gg);
  pm.tilde << pm.bw, pm.bb, pm.ww, pm.wb;
  pm.pi_blocks = 0.5 * (pm.bw + pm.bb + pm.ww + pm.wb);
  return pm;
}

Eigen::MatrixXd energy_form_discrete(const Eigen::MatrixXcd& tilde) {
  const Eigen::MatrixXd re = tilde.real();
  const Eigen::MatrixXd im = tilde.imag();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(im);
  if (!lu.isInvertible()) throw SolverError("Im of the period matrix is not invertible");
  const Eigen::MatrixXd inv = lu.inverse();
  const auto n = tilde.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = re * inv * re + im;
  e.topRightCorner(n, n) = -re * inv;
  e.bottomLeftCorner(n, n) = -inv * re;
  e.bottomRightCorner(n, n) = inv;
  return e;
}

Eigen::MatrixXd energy_form_continuous(const Eigen::MatrixXcd& pi) {
  return 2 * energy_form_discrete(pi);
}

Eigen::VectorXd to_energy_order(const Eigen::VectorXd& p) {
  const auto g = p.size() / 4;
  Eigen::VectorXd r(p.size());
  r << p.segment(g, g), p.segment(0, g), p.segment(2 * g, g), p.segment(3 * g, g);
  return r;
}

double bilinear_identity_residual(const QuadGraph& g, const DiscreteDifferential& w,
                                  const HomologyBasis& basis) {
  const PeriodVector p = periods(w, basis);
  Complex expr = 0;
  const Complex half_i(0, 0.5);
  for (int k = 0; k < basis.genus(); ++k) {
    expr += half_i * (p.a_black[k] * std::conj(p.b_white[k]) - p.b_black[k] * std::conj(p.a_white[k]));
    expr += half_i * (p.a_white[k] * std::conj(p.b_black[k]) - p.b_white[k] * std::conj(p.a_black[k]));
  }
  const double e = energy(g, w);
  if (e == 0) return std::abs(expr);
  return std::abs(e - expr) / e;
}

double mean_gap_min_eigenvalue(const Eigen::MatrixXcd& tilde) {
  const auto n = tilde.rows() / 2;
  const Eigen::MatrixXd m = tilde.imag();
  Eigen::MatrixXd l(n, 2 * n);
  l << Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd minv = m.fullPivLu().inverse();
  const Eigen::MatrixXd inner = (l * minv * l.transpose()).fullPivLu().inverse();
  return min_eig_sym(l * m * l.transpose() - 4 * inner);
}

PeriodDiagnostics diagnose(const PeriodMatrices& pm) {
  PeriodDiagnostics d;
  d.tilde_norm = pm.tilde.norm();
  d.tilde_symmetry = (pm.tilde - pm.tilde.transpose()).norm() / std::max(d.tilde_norm, 1e-300);
  d.pi_symmetry = (pm.pi - pm.pi.transpose()).norm() / std::max(pm.pi.norm(), 1e-300);
  d.min_eig_im_tilde = min_eig_sym(pm.tilde.imag());
  d.min_eig_im_pi = min_eig_sym(pm.pi.imag());
  d.min_eig_im_bw = min_eig_sym(pm.bw.imag());
  d.min_eig_im_wb = min_eig_sym(pm.wb.imag());
  d.block_average_mismatch = (pm.pi - pm.pi_blocks).norm();
  d.re_bw = pm.bw.real().norm();
  d.re_wb = pm.wb.real().norm();
  d.im_bb = pm.bb.imag().norm();
  d.im_ww = pm.ww.imag().norm();
  d.mean_gap = mean_gap_min_eigenvalue(pm.tilde);
  return d;
}

ConvergenceDiagnostics convergence_diagnostics(const PeriodMatrices& pm,
                                               const std::optional<Eigen::MatrixXcd>& reference) {
  ConvergenceDiagnostics c;
  c.bw_minus_wb = (pm.bw - pm.wb).norm();
  c.bb_minus_ww = (pm.bb - pm.ww).norm();
  if (reference) {
    if (reference->rows() != pm.pi.rows() || reference->cols() != pm.pi.cols()) {
      throw Error("reference period matrix has the wrong dimension");
    }
    c.bw_plus_bb_minus_ref = (pm.bw + pm.bb - *reference).norm();
    c.pi_minus_ref = (pm.pi - *reference).norm();
  }
  c.mean_gap = mean_gap_min_eigenvalue(pm.tilde);
  return c;
}

AbelianIntegral abelian_integral(const QuadGraph& g, const DiscreteDifferential& w) {
  const std::size_t nq = g.quad_count();
  // Cut graph: polygon seams outside a spanning tree of the polygon gluings,
  // or, without polygon data, the primal edges outside the dual spanning tree.
  std::vector<char> cut(g.edge_count(), 0);
  bool polygons_known = true;
  int npoly = 0;
  for (const auto& q : g.quads()) {
    polygons_known = polygons_known && q.polygon >= 0;
    npoly = std::max(npoly, q.polygon + 1);
  }
  if (polygons_known) {
    std::vector<std::vector<std::pair<int, int>>> adj(npoly);  // (polygon, seam)
    for (const auto& e : g.edges()) {
      if (e.seam < 0) continue;
      const int p0 = g.quad(e.sides[0].quad).polygon, p1 = g.quad(e.sides[1].quad).polygon;
      adj[p0].emplace_back(p1, e.seam);
      adj[p1].emplace_back(p0, e.seam);
    }
    std::vector<char> seen(npoly, 0);
    std::vector<char> tree_seam;
    std::queue<int> queue;
    seen[0] = 1;
    queue.push(0);
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop();
      for (const auto& [r, seam] : adj[p]) {
        if (seen[r]) continue;
        seen[r] = 1;
        if (seam >= static_cast<int>(tree_seam.size())) tree_seam.resize(seam + 1, 0);
        tree_seam[seam] = 1;
        queue.push(r);
      }
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const int seam = g.edge(static_cast<int>(e)).seam;
      cut[e] = seam >= 0 && !(seam < static_cast<int>(tree_seam.size()) && tree_seam[seam]);
    }
  } else {
    const TreeCotree tc = tree_cotree(g);
    std::fill(cut.begin(), cut.end(), 1);
    for (int e : tc.cotree) cut[e] = 0;
  }

  // Domain vertex copies: quad corners glued across uncut edges.
  UnionFind uf(4 * nq);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (cut[e]) continue;
    const Edge& edge = g.edge(static_cast<int>(e));
    const auto [q0, k0] = edge.sides[0];
    const auto [q1, k1] = edge.sides[1];
    // Side k0 of q0 runs ends[0] → ends[1]; side k1 of q1 the other way.
    uf.unite(4 * q0 + k0, 4 * q1 + (k1 + 1) % 4);
    uf.unite(4 * q0 + (k0 + 1) % 4, 4 * q1 + k1);
  }

  AbelianIntegral out;
  // Base edge: lexicographically smallest by sorted endpoints.
  int base = 0;
  auto key = [&](int e) {
    const auto& ends = g.edge(e).ends;
    return std::make_tuple(std::min(ends[0], ends[1]), std::max(ends[0], ends[1]), e);
  };
  for (int e = 1; e < static_cast<int>(g.edge_count()); ++e) {
    if (key(e) < key(base)) base = e;
  }
  out.base_edge = base;

  // Diagonal adjacency between corner copies of the same color.
  std::vector<std::vector<std::pair<int, Complex>>> adj(4 * nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const int bm = uf.find(4 * static_cast<int>(q) + kBMinus), bp = uf.find(4 * static_cast<int>(q) + kBPlus);
    const int wm = uf.find(4 * static_cast<int>(q) + kWMinus), wp = uf.find(4 * static_cast<int>(q) + kWPlus);
    const Complex db = 2.0 * w.black[q], dw = 2.0 * w.white[q];
    adj[bm].emplace_back(bp, db);
    adj[bp].emplace_back(bm, -db);
    adj[wm].emplace_back(wp, dw);
    adj[wp].emplace_back(wm, -dw);
  }
  std::vector<Complex> value(4 * nq);
  std::vector<char> done(4 * nq, 0);
  const QuadSide bs = g.edge(base).sides[0];
  for (int start : {uf.find(4 * bs.quad + bs.side), uf.find(4 * bs.quad + (bs.side + 1) % 4)}) {
    std::queue<int> queue;
    done[start] = 1;
    queue.push(start);
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop();
      for (const auto& [n, delta] : adj[c]) {
        if (done[n]) continue;
        done[n] = 1;
        value[n] = value[c] + delta;
        queue.push(n);
      }
    }
  }
  out.corner_values.resize(nq);
  std::vector<char> root_seen(4 * nq, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    for (int k = 0; k < 4; ++k) {
      const int r = uf.find(4 * static_cast<int>(q) + k);
      out.corner_values[q][k] = value[r];
      if (!root_seen[r]) {
        root_seen[r] = 1;
        ++out.domain_vertices;
      }
    }
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!cut[e]) continue;
    const Edge& edge = g.edge(static_cast<int>(e));
    const auto [q0, k0] = edge.sides[0];
    const auto [q1, k1] = edge.sides[1];
    out.cut_jumps.push_back(out.corner_values[q1][(k1 + 1) % 4] - out.corner_values[q0][k0]);
    out.cut_jumps.push_back(out.corner_values[q1][k1] - out.corner_values[q0][(k0 + 1) % 4]);
  }
  return out;
}

std::map<std::tuple<int, long long, long long>, Complex> abelian_samples(const QuadGraph& g,
                                                                        const AbelianIntegral& a) {
  std::map<std::tuple<int, long long, long long>, Complex> out;
  constexpr double kGrid = 1e9;
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const Quad& quad = g.quad(static_cast<int>(q));
    for (int k = 0; k < 4; ++k) {
      out[{quad.polygon, std::llround(quad.chart[k].real() * kGrid),
           std::llround(quad.chart[k].imag() * kGrid)}] = a.corner_values[q][k];
    }
  }
  return out;
}

}  // namespace quadperiod
