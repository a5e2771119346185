#include "quadperiod/dec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/LU>

namespace quadperiod {

namespace {

void check_size(const QuadGraph& g, const DiscreteDifferential& w) {
  if (w.black.size() != g.quad_count() || w.white.size() != g.quad_count()) {
    throw Error("differential does not match the quad-graph");
  }
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

bool DiscreteDifferential::is_real(double tol) const {
  for (std::size_t q = 0; q < size(); ++q) {
    if (std::abs(black[q].imag()) > tol || std::abs(white[q].imag()) > tol) return false;
  }
  return true;
}

DiscreteDifferential& DiscreteDifferential::operator+=(const DiscreteDifferential& o) {
  for (std::size_t q = 0; q < size(); ++q) {
    black[q] += o.black[q];
    white[q] += o.white[q];
  }
  return *this;
}

DiscreteDifferential& DiscreteDifferential::operator*=(Complex s) {
  for (std::size_t q = 0; q < size(); ++q) {
    black[q] *= s;
    white[q] *= s;
  }
  return *this;
}

DiscreteDifferential operator+(DiscreteDifferential a, const DiscreteDifferential& b) { return a += b; }
DiscreteDifferential operator-(DiscreteDifferential a, const DiscreteDifferential& b) {
  return a += Complex(-1) * b;
}
DiscreteDifferential operator*(Complex s, DiscreteDifferential a) { return a *= s; }

DiscreteDifferential conj(const DiscreteDifferential& w) {
  DiscreteDifferential r(w.size());
  for (std::size_t q = 0; q < w.size(); ++q) {
    r.black[q] = std::conj(w.black[q]);
    r.white[q] = std::conj(w.white[q]);
  }
  return r;
}

DiscreteDifferential real_part(const DiscreteDifferential& w) {
  DiscreteDifferential r(w.size());
  for (std::size_t q = 0; q < w.size(); ++q) {
    r.black[q] = w.black[q].real();
    r.white[q] = w.white[q].real();
  }
  return r;
}

DiscreteDifferential imag_part(const DiscreteDifferential& w) {
  DiscreteDifferential r(w.size());
  for (std::size_t q = 0; q < w.size(); ++q) {
    r.black[q] = w.black[q].imag();
    r.white[q] = w.white[q].imag();
  }
  return r;
}

std::vector<Complex> PeriodVector::a() const {
  std::vector<Complex> r(a_black.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = 0.5 * (a_black[k] + a_white[k]);
  return r;
}

std::vector<Complex> PeriodVector::b() const {
  std::vector<Complex> r(b_black.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = 0.5 * (b_black[k] + b_white[k]);
  return r;
}

Eigen::VectorXd PeriodVector::real_flat() const {
  const auto g = static_cast<Eigen::Index>(a_black.size());
  Eigen::VectorXd v(4 * g);
  for (Eigen::Index k = 0; k < g; ++k) {
    v(k) = a_black[k].real();
    v(g + k) = a_white[k].real();
    v(2 * g + k) = b_black[k].real();
    v(3 * g + k) = b_white[k].real();
  }
  return v;
}

std::pair<Color, const std::vector<int>*> jump_cocycle(const HomologyBasis& basis, int k) {
  const int g = basis.genus();
  switch (k / g) {
    case 0: return {Color::kBlack, &basis.black_cocycles[k]};
    case 1: return {Color::kWhite, &basis.white_cocycles[k - g]};
    case 2: return {Color::kBlack, &basis.black_cocycles[k - g]};
    default: return {Color::kWhite, &basis.white_cocycles[k - 2 * g]};
  }
}

DiscreteDifferential dz(const QuadGraph& g) {
  DiscreteDifferential w(g.quad_count());
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    w.black[q] = 0.5 * g.quad(static_cast<int>(q)).black_diagonal();
    w.white[q] = 0.5 * g.quad(static_cast<int>(q)).white_diagonal();
  }
  return w;
}

DiscreteDifferential dzbar(const QuadGraph& g) { return conj(dz(g)); }

DiscreteDifferential d(const QuadGraph& g, const VertexFunction& f, const HomologyBasis* basis) {
  if (f.values.size() != g.vertex_count()) throw Error("vertex function has the wrong size");
  DiscreteDifferential w(g.quad_count());
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const auto& v = g.quad(static_cast<int>(q)).vertices;
    w.black[q] = f.values[v[kBPlus]] - f.values[v[kBMinus]];
    w.white[q] = f.values[v[kWPlus]] - f.values[v[kWMinus]];
  }
  if (!f.jumps.empty()) {
    if (basis == nullptr || static_cast<int>(f.jumps.size()) != 4 * basis->genus()) {
      throw Error("jump data requires a homology basis with 4g cocycles");
    }
    for (int k = 0; k < static_cast<int>(f.jumps.size()); ++k) {
      if (f.jumps[k] == 0) continue;
      const auto [color, sigma] = jump_cocycle(*basis, k);
      auto& target = color == Color::kBlack ? w.black : w.white;
      for (std::size_t q = 0; q < g.quad_count(); ++q) {
        if ((*sigma)[q] != 0) target[q] += f.jumps[k] * (*sigma)[q];
      }
    }
  }
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    w.black[q] *= 0.5;
    w.white[q] *= 0.5;
  }
  return w;
}

Residual is_closed(const QuadGraph& g, const DiscreteDifferential& w, double tol) {
  check_size(g, w);
  Residual r;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const bool black = g.color(static_cast<int>(v)) == Color::kBlack;
    Complex sum = 0;
    for (const auto& [q, k] : g.corners(static_cast<int>(v))) {
      // Black vertex: the face edge in Q is parallel to the white diagonal,
      // +1 at b−; white vertex: parallel to the black one, +1 at w−.
      if (black) {
        sum += (k == kBMinus ? 1.0 : -1.0) * w.white[q];
      } else {
        sum += (k == kWMinus ? 1.0 : -1.0) * w.black[q];
      }
    }
    if (std::abs(sum) > r.value) {
      r.value = std::abs(sum);
      r.where = static_cast<int>(v);
    }
  }
  r.ok = r.value <= tol;
  return r;
}

Eigen::Matrix2d star_matrix(const Quad& q) {
  const Complex e = 0.5 * q.black_diagonal();
  const Complex es = 0.5 * q.white_diagonal();
  const double phi = std::arg(es / e);
  if (!(phi > 0 && phi < kPi)) throw GeometryError("diagonal angle outside (0, π)");
  const double r = std::abs(e) / std::abs(es);
  const double cot = std::cos(phi) / std::sin(phi);
  Eigen::Matrix2d m;
  m << cot, -r / std::sin(phi), 1.0 / (r * std::sin(phi)), -cot;
  return m;
}

DiscreteDifferential hodge_star(const QuadGraph& g, const DiscreteDifferential& w) {
  check_size(g, w);
  DiscreteDifferential r(g.quad_count());
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const Eigen::Matrix2d m = star_matrix(g.quad(static_cast<int>(q)));
    r.black[q] = m(0, 0) * w.black[q] + m(0, 1) * w.white[q];
    r.white[q] = m(1, 0) * w.black[q] + m(1, 1) * w.white[q];
  }
  return r;
}

Residual is_holomorphic(const QuadGraph& g, const DiscreteDifferential& w, double tol) {
  check_size(g, w);
  Residual r;
  double scale = 0;
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    scale = std::max({scale, std::abs(w.black[q]), std::abs(w.white[q])});
  }
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const double res =
        std::abs(w.white[q] - Complex(0, 1) * rho(g.quad(static_cast<int>(q))) * w.black[q]);
    if (res > r.value) {
      r.value = res;
      r.where = static_cast<int>(q);
    }
  }
  if (scale > 0) r.value /= scale;
  const Residual closed = is_closed(g, w, tol * std::max(scale, 1.0));
  r.ok = r.value <= tol && closed.ok;
  return r;
}

Complex wedge(const QuadGraph& g, const DiscreteDifferential& w1, const DiscreteDifferential& w2) {
  check_size(g, w1);
  check_size(g, w2);
  // Neumaier-compensated sum in fixed quad order.
  Complex sum = 0, comp = 0;
  for (std::size_t q = 0; q < g.quad_count(); ++q) {
    const Complex term = 2.0 * (w1.black[q] * w2.white[q] - w1.white[q] * w2.black[q]);
    const Complex t = sum + term;
    for (int part = 0; part < 2; ++part) {
      const double s = part == 0 ? sum.real() : sum.imag();
      const double x = part == 0 ? term.real() : term.imag();
      const double tt = part == 0 ? t.real() : t.imag();
      const double c = std::abs(s) >= std::abs(x) ? (s - tt) + x : (x - tt) + s;
      comp += part == 0 ? Complex(c, 0) : Complex(0, c);
    }
    sum = t;
  }
  return sum + comp;
}

Complex inner_product(const QuadGraph& g, const DiscreteDifferential& w1,
                      const DiscreteDifferential& w2) {
  return wedge(g, w1, hodge_star(g, conj(w2)));
}

double energy(const QuadGraph& g, const DiscreteDifferential& w) {
  return inner_product(g, w, w).real();
}

Eigen::Vector2d gradient(const Quad& q, double delta_black, double delta_white) {
  const Complex b = q.black_diagonal();
  const Complex w = q.white_diagonal();
  Eigen::Matrix2d a;
  a << b.real(), b.imag(), w.real(), w.imag();
  if (std::abs(cross(b, w)) <= 1e-300) throw GeometryError("collinear diagonals");
  return a.inverse() * Eigen::Vector2d(delta_black, delta_white);
}

Eigen::Vector2d gradient(const QuadGraph& g, const DiscreteDifferential& df, int q) {
  return gradient(g.quad(q), 2 * df.black[q].real(), 2 * df.white[q].real());
}

std::pair<Complex, Complex> derivatives(const Quad& q, Complex delta_black, Complex delta_white) {
  // Varignon parallelogram traversed counterclockwise: the edge cutting
  // corner v carries f(v); its vector is ±e_b (white corners) or ±e_w.
  const Complex eb = 0.5 * q.black_diagonal();
  const Complex ew = 0.5 * q.white_diagonal();
  const double area_f = cross(eb, ew);
  if (area_f <= 0) throw GeometryError("zero-area quad");
  const Complex norm(0, -4 * area_f);  // ∬_{F_Q} dz∧dz̄
  const Complex contour_zbar = delta_black * std::conj(ew) - delta_white * std::conj(eb);
  const Complex contour_z = delta_black * ew - delta_white * eb;
  return {contour_zbar / norm, -contour_z / norm};
}

std::pair<Complex, Complex> derivatives(const QuadGraph& g, const DiscreteDifferential& df, int q) {
  return derivatives(g.quad(q), 2.0 * df.black[q], 2.0 * df.white[q]);
}

Complex integrate(const DiscreteDifferential& w, const DiagonalCycle& path) {
  const auto& values = path.color == Color::kBlack ? w.black : w.white;
  Complex sum = 0;
  for (const auto& s : path.steps) {
    if (s.quad < 0 || s.quad >= static_cast<int>(values.size())) throw Error("broken diagonal path");
    sum += 2.0 * static_cast<double>(s.sign) * values[s.quad];
  }
  return sum;
}

PeriodVector periods(const DiscreteDifferential& w, const HomologyBasis& basis) {
  PeriodVector p;
  for (int k = 0; k < basis.genus(); ++k) {
    p.a_black.push_back(integrate(w, basis.black_a[k]));
    p.a_white.push_back(integrate(w, basis.white_a[k]));
    p.b_black.push_back(integrate(w, basis.black_b[k]));
    p.b_white.push_back(integrate(w, basis.white_b[k]));
  }
  return p;
}

std::string dump_differential(const DiscreteDifferential& w) {
  std::ostringstream out;
  out << std::setprecision(17) << "quad_id,re_wb,im_wb,re_ww,im_ww\n";
  for (std::size_t q = 0; q < w.size(); ++q) {
    out << q << ',' << w.black[q].real() << ',' << w.black[q].imag() << ',' << w.white[q].real()
        << ',' << w.white[q].imag() << '\n';
  }
  return out.str();
}

DiscreteDifferential load_differential(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("quad_id", 0) != 0) {
    throw ParseError("differential table must start with the header quad_id,re_wb,im_wb,re_ww,im_ww");
  }
  std::vector<std::pair<long, std::array<double, 4>>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long id = -1;
    std::array<double, 4> v{};
    if (!(ls >> id >> v[0] >> v[1] >> v[2] >> v[3]) || id < 0) {
      throw ParseError("differential table line " + std::to_string(lineno) + ": expected 5 fields");
    }
    rows.emplace_back(id, v);
  }
  DiscreteDifferential w(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [id, v] : rows) {
    if (static_cast<std::size_t>(id) >= rows.size() || seen[id]) {
      throw ParseError("differential table: quad ids must be 0..n-1, each once");
    }
    seen[id] = true;
    w.black[id] = {v[0], v[1]};
    w.white[id] = {v[2], v[3]};
  }
  return w;
}

}  // namespace quadperiod
