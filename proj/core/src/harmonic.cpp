#include "quadperiod/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>

namespace quadperiod {

namespace {

Eigen::Vector2d differences(const Quad& q, const Eigen::VectorXd& f) {
  return {f[q.vertices[kBPlus]] - f[q.vertices[kBMinus]],
          f[q.vertices[kWPlus]] - f[q.vertices[kWMinus]]};
}

}  // namespace

EnergySystem assemble(const QuadGraph& g, const HomologyBasis& basis) {
  EnergySystem s;
  s.graph = &g;
  s.basis = &basis;
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.quad_count() * 16);
  s.weights.reserve(g.quad_count());
  for (const auto& q : g.quads()) {
    const Complex b = q.black_diagonal();
    const Complex w = q.white_diagonal();
    Eigen::Matrix2d dq;
    dq << b.real(), b.imag(), w.real(), w.imag();
    const Eigen::Matrix2d ddt = dq * dq.transpose();
    if (std::abs(ddt.determinant()) <= 1e-300) throw GeometryError("degenerate quad (singular D_Q)");
    const Eigen::Matrix2d wq = q.area() * ddt.inverse();
    s.weights.push_back(wq);
    // G_Q has rows (-1 at b-, +1 at b+) and (-1 at w-, +1 at w+).
    const std::array<std::array<std::pair<int, double>, 2>, 2> rows{{
        {{{q.vertices[kBMinus], -1.0}, {q.vertices[kBPlus], 1.0}}},
        {{{q.vertices[kWMinus], -1.0}, {q.vertices[kWPlus], 1.0}}},
    }};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (const auto& [vi, si] : rows[i]) {
          for (const auto& [vj, sj] : rows[j]) trip.emplace_back(vi, vj, si * wq(i, j) * sj);
        }
      }
    }
  }
  s.matrix.resize(n, n);
  s.matrix.setFromTriplets(trip.begin(), trip.end());

  // The two color indicators must span the kernel's known part.
  Eigen::VectorXd ones_black = Eigen::VectorXd::Zero(n), ones_white = Eigen::VectorXd::Zero(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    (g.color(static_cast<int>(v)) == Color::kBlack ? ones_black : ones_white)[v] = 1;
  }
  const double scale = s.matrix.diagonal().cwiseAbs().maxCoeff();
  if ((s.matrix * ones_black).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (s.matrix * ones_white).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SolverError("energy matrix does not annihilate color-constant functions");
  }
  s.pinned_black = g.quad(0).vertices[kBMinus];
  s.pinned_white = g.quad(0).vertices[kWMinus];
  return s;
}

std::vector<Eigen::Vector2d> EnergySystem::jump_offsets(const Eigen::VectorXd& p) const {
  const int gg = basis->genus();
  if (p.size() != 4 * gg) throw Error("period vector must have 4g entries");
  std::vector<Eigen::Vector2d> j(graph->quad_count(), Eigen::Vector2d::Zero());
  for (int k = 0; k < 4 * gg; ++k) {
    if (p[k] == 0) continue;
    const auto [color, sigma] = jump_cocycle(*basis, k);
    const int row = color == Color::kBlack ? 0 : 1;
    for (std::size_t q = 0; q < j.size(); ++q) {
      if ((*sigma)[q] != 0) j[q][row] += p[k] * (*sigma)[q];
    }
  }
  return j;
}

Eigen::VectorXd EnergySystem::rhs(const Eigen::VectorXd& p) const {
  const auto jumps = jump_offsets(p);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(matrix.rows());
  for (std::size_t qi = 0; qi < jumps.size(); ++qi) {
    if (jumps[qi].isZero()) continue;
    const Quad& q = graph->quad(static_cast<int>(qi));
    const Eigen::Vector2d t = weights[qi] * jumps[qi];
    r[q.vertices[kBMinus]] += t[0];
    r[q.vertices[kBPlus]] -= t[0];
    r[q.vertices[kWMinus]] += t[1];
    r[q.vertices[kWPlus]] -= t[1];
  }
  return r;
}

double EnergySystem::quadratic_form(const Eigen::VectorXd& f, const Eigen::VectorXd& p) const {
  const auto jumps = jump_offsets(p);
  double e = 0;
  for (std::size_t qi = 0; qi < jumps.size(); ++qi) {
    const Eigen::Vector2d delta = differences(graph->quad(static_cast<int>(qi)), f) + jumps[qi];
    e += delta.dot(weights[qi] * delta);
  }
  return e;
}

std::vector<HarmonicSolution> solve(const EnergySystem& system, const Eigen::MatrixXd& p,
                                    const SolverOptions& options) {
  const auto n = system.matrix.rows();
  // Reduced index space without the two pinned vertices.
  std::vector<Eigen::Index> reduced(n, -1);
  Eigen::Index m = 0;
  for (Eigen::Index v = 0; v < n; ++v) {
    if (v != system.pinned_black && v != system.pinned_white) reduced[v] = m++;
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(system.matrix.nonZeros());
  for (Eigen::Index col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      const auto r = reduced[it.row()], c = reduced[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  Eigen::SparseMatrix<double> k(m, m);
  k.setFromTriplets(trip.begin(), trip.end());

  Eigen::MatrixXd b(m, p.cols());
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const Eigen::VectorXd full = system.rhs(p.col(j));
    for (Eigen::Index v = 0; v < n; ++v) {
      if (reduced[v] >= 0) b(reduced[v], j) = full[v];
    }
  }

  Eigen::MatrixXd x(m, p.cols());
  std::vector<int> iterations(p.cols(), 0);
  if (options.kind == SolverKind::kDirect) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(k);
    if (ldlt.info() != Eigen::Success) throw SolverError("factorization of the energy matrix failed");
    if ((ldlt.vectorD().array() <= 0).any()) {
      throw SolverError("pinned energy matrix is not positive definite (inconsistent pinning)");
    }
    x = ldlt.solve(b);
    // One step of iterative refinement per column if needed.
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double bn = b.col(j).norm();
      Eigen::VectorXd r = b.col(j) - k * x.col(j);
      if (bn > 0 && r.norm() > options.tol * bn) {
        x.col(j) += ldlt.solve(r);
        iterations[j] = 1;
      }
    }
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(k);
    cg.setTolerance(options.tol);
    cg.setMaxIterations(options.max_iter);
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      x.col(j) = cg.solve(b.col(j));
      iterations[j] = static_cast<int>(cg.iterations());
      if (cg.info() != Eigen::Success) {
        throw SolverError("conjugate gradient did not converge: residual " +
                          std::to_string(cg.error()) + " after " +
                          std::to_string(cg.iterations()) + " iterations");
      }
    }
  }

  std::vector<HarmonicSolution> out;
  out.reserve(p.cols());
  const QuadGraph& g = *system.graph;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    HarmonicSolution s;
    s.periods = p.col(j);
    s.potential = Eigen::VectorXd::Zero(n);
    for (Eigen::Index v = 0; v < n; ++v) {
      if (reduced[v] >= 0) s.potential[v] = x(reduced[v], j);
    }
    const double bn = b.col(j).norm();
    s.residual = bn > 0 ? (b.col(j) - k * x.col(j)).norm() / bn : (k * x.col(j)).norm();
    if (s.residual > options.tol) {
      throw SolverError("harmonic solve residual " + std::to_string(s.residual) +
                        " exceeds tolerance");
    }
    s.iterations = iterations[j];
    VertexFunction f;
    f.values.assign(s.potential.data(), s.potential.data() + n);
    f.jumps.assign(s.periods.data(), s.periods.data() + s.periods.size());
    s.eta = d(g, f, system.basis);
    s.energy = system.quadratic_form(s.potential, s.periods);
    out.push_back(std::move(s));
  }
  return out;
}

HarmonicSolution solve(const EnergySystem& system, const Eigen::VectorXd& p,
                       const SolverOptions& options) {
  return std::move(solve(system, Eigen::MatrixXd(p), options).front());
}

MinimalityReport verify_minimality(const EnergySystem& system, const HarmonicSolution& solution,
                                   int trials, std::uint64_t seed) {
  const QuadGraph& g = *system.graph;
  MinimalityReport r;
  r.trials = trials;
  const double e0 = energy(g, solution.eta);
  const double eta_norm = std::sqrt(std::max(e0, 0.0));
  double scale = 0;
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    scale = std::max({scale, std::abs(solution.eta.black[q]), std::abs(solution.eta.white[q])});
  }
  r.coclosed_residual = is_closed(g, hodge_star(g, solution.eta)).value / std::max(scale, 1e-300);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  r.min_energy_gap = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    VertexFunction f;
    f.values.resize(g.vertex_count());
    for (auto& v : f.values) v = normal(rng);
    const DiscreteDifferential df = d(g, f);
    const double df_norm = std::sqrt(energy(g, df));
    const double ip = std::abs(inner_product(g, solution.eta, df));
    if (eta_norm > 0 && df_norm > 0) {
      r.max_orthogonality = std::max(r.max_orthogonality, ip / (eta_norm * df_norm));
    }
    r.min_energy_gap = std::min(r.min_energy_gap, energy(g, solution.eta + df) - e0);
  }
  return r;
}

}  // namespace quadperiod
