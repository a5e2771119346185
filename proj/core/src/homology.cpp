#include "quadperiod/homology.hpp"

#include <cstdlib>
#include <queue>
#include <unordered_map>

#include <Eigen/LU>

namespace quadperiod {

namespace {

// Side of the step's edge that starts at the given end of the traversal.
QuadSide side_leaving_source(const QuadGraph& g, Step s) {
  return g.edge(s.edge).sides[s.forward ? 0 : 1];
}
QuadSide side_leaving_target(const QuadGraph& g, Step s) {
  return g.edge(s.edge).sides[s.forward ? 1 : 0];
}

// Orientation of a traversed diagonal when turning counterclockwise past
// corner k: from vertices[k+1] to vertices[k-1].
int ccw_diagonal_sign(int k) { return (k == 0 || k == 3) ? 1 : -1; }

using Coeffs = std::vector<long long>;

long long form(const Eigen::MatrixXi& m, const Coeffs& u, const Coeffs& v) {
  long long s = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (u[i] == 0) continue;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += u[i] * m(i, j) * v[j];
  }
  return s;
}

void axpy(Coeffs& x, long long a, const Coeffs& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += a * y[i];
}

}  // namespace

int step_source(const QuadGraph& g, Step s) { return g.edge(s.edge).ends[s.forward ? 0 : 1]; }
int step_target(const QuadGraph& g, Step s) { return g.edge(s.edge).ends[s.forward ? 1 : 0]; }

void validate_cycle(const QuadGraph& g, const Cycle& c) {
  if (c.steps.empty()) throw TopologyError("empty cycle");
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const Step s = c.steps[i];
    if (s.edge < 0 || s.edge >= static_cast<int>(g.edge_count())) {
      throw TopologyError("cycle references an unknown edge");
    }
    const Step next = c.steps[(i + 1) % c.steps.size()];
    if (step_target(g, s) != step_source(g, next)) {
      throw TopologyError("cycle is not a closed contiguous walk (step " + std::to_string(i) + ")");
    }
  }
}

Cycle reversed(const Cycle& c) {
  Cycle r;
  r.steps.reserve(c.steps.size());
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) r.steps.push_back({it->edge, !it->forward});
  r.coefficients = c.coefficients;
  for (int& x : r.coefficients) x = -x;
  return r;
}

Cycle concatenate(const Cycle& a, const Cycle& b) {
  Cycle r = a;
  r.steps.insert(r.steps.end(), b.steps.begin(), b.steps.end());
  if (a.coefficients.size() == b.coefficients.size()) {
    for (std::size_t i = 0; i < r.coefficients.size(); ++i) r.coefficients[i] += b.coefficients[i];
  } else if (a.steps.empty()) {
    r.coefficients = b.coefficients;
  } else {
    r.coefficients.clear();
  }
  return r;
}

Cycle reduce_backtracking(const Cycle& c) {
  std::vector<Step> stack;
  for (const Step s : c.steps) {
    if (!stack.empty() && stack.back().edge == s.edge && stack.back().forward != s.forward) {
      stack.pop_back();
    } else {
      stack.push_back(s);
    }
  }
  std::size_t lo = 0, hi = stack.size();
  while (hi - lo >= 2 && stack[lo].edge == stack[hi - 1].edge &&
         stack[lo].forward != stack[hi - 1].forward) {
    ++lo;
    --hi;
  }
  Cycle r;
  r.steps.assign(stack.begin() + static_cast<std::ptrdiff_t>(lo),
                 stack.begin() + static_cast<std::ptrdiff_t>(hi));
  r.coefficients = c.coefficients;
  return r;
}

const DiagonalCycle& HomologyBasis::projection(Color color, int k) const {
  const int g = genus();
  if (color == Color::kBlack) return k < g ? black_a[k] : black_b[k - g];
  return k < g ? white_a[k] : white_b[k - g];
}

TreeCotree tree_cotree(const QuadGraph& g) {
  const std::size_t nv = g.vertex_count();
  TreeCotree tc;
  tc.root = 0;
  tc.parent_edge.assign(nv, -1);
  tc.depth.assign(nv, -1);
  std::vector<std::vector<int>> incident(nv);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    incident[g.edge(static_cast<int>(e)).ends[0]].push_back(static_cast<int>(e));
    incident[g.edge(static_cast<int>(e)).ends[1]].push_back(static_cast<int>(e));
  }
  std::vector<char> in_tree(g.edge_count(), 0);
  std::queue<int> queue;
  tc.depth[tc.root] = 0;
  queue.push(tc.root);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int e : incident[v]) {
      const auto& ends = g.edge(e).ends;
      const int w = ends[0] == v ? ends[1] : ends[0];
      if (tc.depth[w] >= 0) continue;
      tc.depth[w] = tc.depth[v] + 1;
      tc.parent_edge[w] = e;
      in_tree[e] = 1;
      tc.tree.push_back(e);
      queue.push(w);
    }
  }
  if (tc.tree.size() + 1 != nv) throw TopologyError("quad-graph is disconnected");

  std::vector<char> quad_seen(g.quad_count(), 0), in_cotree(g.edge_count(), 0);
  quad_seen[0] = 1;
  std::queue<int> dual;
  dual.push(0);
  while (!dual.empty()) {
    const int q = dual.front();
    dual.pop();
    for (int k = 0; k < 4; ++k) {
      const int e = g.quad(q).edges[k];
      if (in_tree[e] || in_cotree[e]) continue;
      const QuadSide other = g.twin(QuadSide{q, k});
      if (quad_seen[other.quad]) continue;
      quad_seen[other.quad] = 1;
      in_cotree[e] = 1;
      tc.cotree.push_back(e);
      dual.push(other.quad);
    }
  }
  if (tc.cotree.size() + 1 != g.quad_count()) throw TopologyError("dual graph is disconnected");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!in_tree[e] && !in_cotree[e]) tc.leftover.push_back(static_cast<int>(e));
  }
  if (static_cast<int>(tc.leftover.size()) != 2 * g.genus()) {
    throw TopologyError("leftover edge count differs from 2g");
  }
  return tc;
}

std::vector<Cycle> basis_cycles(const QuadGraph& g, const TreeCotree& tc) {
  // Tree path from the root down to v.
  auto root_path = [&](int v) {
    std::vector<Step> down;
    while (v != tc.root) {
      const int e = tc.parent_edge[v];
      const bool forward = g.edge(e).ends[1] == v;
      down.push_back({e, forward});
      v = step_source(g, down.back());
    }
    return std::vector<Step>(down.rbegin(), down.rend());
  };
  std::vector<Cycle> out;
  for (std::size_t i = 0; i < tc.leftover.size(); ++i) {
    const int e = tc.leftover[i];
    Cycle c;
    c.steps = root_path(g.edge(e).ends[0]);
    c.steps.push_back({e, true});
    const auto back = root_path(g.edge(e).ends[1]);
    for (auto it = back.rbegin(); it != back.rend(); ++it) c.steps.push_back({it->edge, !it->forward});
    c.coefficients.assign(tc.leftover.size(), 0);
    c.coefficients[i] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

int intersection_number(const QuadGraph& g, const Cycle& c1, const Cycle& c2) {
  // Push c1 off to its left. At every visit the push-off crosses the edges in
  // the corner slots strictly counterclockwise between the outgoing and the
  // incoming walk edge; record those crossings as a cochain on edges.
  std::unordered_map<int, int> cochain;
  const std::size_t n = c1.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Step in = c1.steps[i];
    const Step out = c1.steps[(i + 1) % n];
    const QuadSide a_side = side_leaving_target(g, in);
    const QuadSide b_side = side_leaving_source(g, out);
    const int w = step_target(g, in);
    const auto& corners = g.corners(w);
    const int deg = static_cast<int>(corners.size());
    const int a = g.slot(a_side.quad, a_side.side);
    const int b = g.slot(b_side.quad, b_side.side);
    for (int j = (b + 1) % deg; j != a; j = (j + 1) % deg) {
      const auto [q, k] = corners[j];
      const int e = g.quad(q).edges[k];
      const QuadSide s0 = g.edge(e).sides[0];
      cochain[e] += (s0.quad == q && s0.side == k) ? 1 : -1;
    }
  }
  int total = 0;
  for (const Step s : c2.steps) {
    const auto it = cochain.find(s.edge);
    if (it != cochain.end()) total += s.forward ? it->second : -it->second;
  }
  return total;
}

Eigen::MatrixXi intersection_matrix(const QuadGraph& g, const std::vector<Cycle>& cycles) {
  const auto n = static_cast<Eigen::Index>(cycles.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = intersection_number(g, cycles[i], cycles[j]);
      m(j, i) = -m(i, j);
    }
  }
  return m;
}

HomologyBasis symplectic_basis(const QuadGraph& g, const std::vector<Cycle>& cycles,
                               const Eigen::MatrixXi& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.cols() != m.rows() || n != cycles.size() || n % 2 != 0) {
    throw TopologyError("intersection matrix has the wrong shape");
  }
  if (m != -m.transpose()) throw TopologyError("intersection matrix is not antisymmetric");

  std::vector<Coeffs> remaining;
  for (std::size_t i = 0; i < n; ++i) {
    Coeffs e(n, 0);
    e[i] = 1;
    remaining.push_back(e);
  }
  std::vector<Coeffs> as, bs;
  while (!remaining.empty()) {
    const Coeffs u = remaining.front();
    remaining.erase(remaining.begin());
    // Greedy pivot: a partner with pairing ±1; if none exists, Euclidean
    // steps among the partners produce one (or expose a degenerate form).
    int pivot = -1;
    for (;;) {
      int smallest = -1, nonzero = 0;
      for (std::size_t j = 0; j < remaining.size(); ++j) {
        const long long f = form(m, u, remaining[j]);
        if (f == 0) continue;
        ++nonzero;
        if (smallest < 0 || std::llabs(f) < std::llabs(form(m, u, remaining[smallest]))) {
          smallest = static_cast<int>(j);
        }
      }
      if (smallest < 0) throw TopologyError("intersection form is degenerate");
      const long long fs = form(m, u, remaining[smallest]);
      if (std::llabs(fs) == 1) {
        pivot = smallest;
        break;
      }
      if (nonzero == 1) throw TopologyError("intersection form is not unimodular");
      for (std::size_t j = 0; j < remaining.size(); ++j) {
        if (static_cast<int>(j) == smallest) continue;
        const long long f = form(m, u, remaining[j]);
        axpy(remaining[j], -(f / fs), remaining[smallest]);
      }
    }
    Coeffs v = remaining[pivot];
    remaining.erase(remaining.begin() + pivot);
    if (form(m, u, v) < 0) {
      for (auto& x : v) x = -x;
    }
    for (auto& x : remaining) {
      const long long fxb = form(m, x, v);
      const long long fxa = form(m, x, u);
      axpy(x, -fxb, u);
      axpy(x, fxa, v);
    }
    as.push_back(u);
    bs.push_back(v);
  }

  auto realize = [&](const Coeffs& coeffs) {
    Cycle c;
    c.coefficients.assign(cycles.front().coefficients.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const Cycle piece = coeffs[i] >= 0 ? cycles[i] : reversed(cycles[i]);
      for (long long t = 0; t < std::llabs(coeffs[i]); ++t) c = concatenate(c, piece);
    }
    c = reduce_backtracking(c);
    validate_cycle(g, c);
    return c;
  };
  HomologyBasis basis;
  for (const auto& u : as) basis.a.push_back(realize(u));
  for (const auto& v : bs) basis.b.push_back(realize(v));

  std::vector<Cycle> all = basis.a;
  all.insert(all.end(), basis.b.begin(), basis.b.end());
  const Eigen::MatrixXi check = intersection_matrix(g, all);
  const int gg = static_cast<int>(as.size());
  Eigen::MatrixXi j = Eigen::MatrixXi::Zero(2 * gg, 2 * gg);
  j.topRightCorner(gg, gg).setIdentity();
  j.bottomLeftCorner(gg, gg) = -Eigen::MatrixXi::Identity(gg, gg);
  if (check != j) throw TopologyError("reduced basis does not have the standard intersection form");
  return basis;
}

DiagonalCycle project_cycle(const QuadGraph& g, const Cycle& c, Color color, bool counterclockwise) {
  DiagonalCycle out;
  out.color = color;
  const std::size_t n = c.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Step in = c.steps[i];
    const int w = step_target(g, in);
    if (g.color(w) == color) continue;
    const Step next = c.steps[(i + 1) % n];
    const QuadSide a_side = side_leaving_target(g, in);
    const QuadSide b_side = side_leaving_source(g, next);
    const auto& corners = g.corners(w);
    const int deg = static_cast<int>(corners.size());
    const int a = g.slot(a_side.quad, a_side.side);
    const int b = g.slot(b_side.quad, b_side.side);
    if (counterclockwise) {
      for (int j = a; j != b; j = (j + 1) % deg) {
        const auto [q, k] = corners[j];
        out.steps.push_back({q, ccw_diagonal_sign(k)});
      }
    } else {
      for (int j = a; j != b; j = (j + deg - 1) % deg) {
        const auto [q, k] = corners[(j + deg - 1) % deg];
        out.steps.push_back({q, -ccw_diagonal_sign(k)});
      }
    }
  }
  return out;
}

int cochain_period(const std::vector<int>& sigma, const DiagonalCycle& path) {
  int total = 0;
  for (const auto& s : path.steps) total += s.sign * sigma[s.quad];
  return total;
}

int cochain_defect(const QuadGraph& g, const std::vector<int>& sigma, int v) {
  int total = 0;
  for (const auto& [q, k] : g.corners(v)) total += ccw_diagonal_sign(k) * sigma[q];
  return total;
}

void build_cocycles(const QuadGraph& g, HomologyBasis& basis) {
  const int gg = basis.genus();
  basis.black_a.clear();
  basis.white_a.clear();
  basis.black_b.clear();
  basis.white_b.clear();
  for (const auto& c : basis.a) {
    basis.black_a.push_back(project_cycle(g, c, Color::kBlack));
    basis.white_a.push_back(project_cycle(g, c, Color::kWhite));
  }
  for (const auto& c : basis.b) {
    basis.black_b.push_back(project_cycle(g, c, Color::kBlack));
    basis.white_b.push_back(project_cycle(g, c, Color::kWhite));
  }

  // A closed path on one diagonal graph, read as crossings with the other
  // color's diagonals, is a cocycle there; its periods are intersection
  // numbers. Solve the small integer system for the dual (δ) combination.
  auto build = [&](Color color) {
    const Color dual = opposite(color);
    std::vector<std::vector<int>> candidates;
    for (int k = 0; k < 2 * gg; ++k) {
      std::vector<int> sigma(g.quad_count(), 0);
      for (const auto& s : basis.projection(dual, k).steps) sigma[s.quad] += s.sign;
      candidates.push_back(std::move(sigma));
    }
    Eigen::MatrixXd p(2 * gg, 2 * gg);
    for (int j = 0; j < 2 * gg; ++j) {
      for (int k = 0; k < 2 * gg; ++k) p(j, k) = cochain_period(candidates[k], basis.projection(color, j));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
    if (!lu.isInvertible()) throw TopologyError("cocycle period system is singular");
    const Eigen::MatrixXd inv = lu.inverse();
    Eigen::MatrixXi coeff = inv.array().round().cast<int>().matrix();
    if (((p * coeff.cast<double>()) - Eigen::MatrixXd::Identity(2 * gg, 2 * gg)).norm() != 0) {
      throw TopologyError("cocycle period system is not unimodular");
    }
    std::vector<std::vector<int>> result(2 * gg, std::vector<int>(g.quad_count(), 0));
    for (int m = 0; m < 2 * gg; ++m) {
      for (int k = 0; k < 2 * gg; ++k) {
        if (coeff(k, m) == 0) continue;
        for (std::size_t q = 0; q < g.quad_count(); ++q) result[m][q] += coeff(k, m) * candidates[k][q];
      }
    }
    for (int m = 0; m < 2 * gg; ++m) {
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (g.color(static_cast<int>(v)) == color) continue;
        if (cochain_defect(g, result[m], static_cast<int>(v)) != 0) {
          throw TopologyError("cocycle is not closed at vertex " + std::to_string(v));
        }
      }
      for (int j = 0; j < 2 * gg; ++j) {
        if (cochain_period(result[m], basis.projection(color, j)) != (j == m ? 1 : 0)) {
          throw TopologyError("cocycle periods are not the dual basis");
        }
      }
    }
    return result;
  };
  basis.black_cocycles = build(Color::kBlack);
  basis.white_cocycles = build(Color::kWhite);
}

HomologyBasis compute_homology(const QuadGraph& g) {
  const TreeCotree tc = tree_cotree(g);
  const auto cycles = basis_cycles(g, tc);
  HomologyBasis basis = symplectic_basis(g, cycles, intersection_matrix(g, cycles));
  build_cocycles(g, basis);
  return basis;
}

HomologyBasis homology_from_cycles(const QuadGraph& g, std::vector<Cycle> a, std::vector<Cycle> b) {
  const auto gg = static_cast<int>(a.size());
  if (b.size() != a.size() || gg != g.genus()) {
    throw TopologyError("need g a-cycles and g b-cycles, genus is " + std::to_string(g.genus()));
  }
  std::vector<Cycle> all = a;
  all.insert(all.end(), b.begin(), b.end());
  for (const auto& c : all) validate_cycle(g, c);
  Eigen::MatrixXi j = Eigen::MatrixXi::Zero(2 * gg, 2 * gg);
  j.topRightCorner(gg, gg).setIdentity();
  j.bottomLeftCorner(gg, gg) = -Eigen::MatrixXi::Identity(gg, gg);
  if (intersection_matrix(g, all) != j) {
    throw TopologyError("given cycles are not a symplectic basis");
  }
  HomologyBasis basis;
  basis.a = std::move(a);
  basis.b = std::move(b);
  build_cocycles(g, basis);
  return basis;
}

}  // namespace quadperiod
