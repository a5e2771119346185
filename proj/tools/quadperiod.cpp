#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "quadperiod/checks.hpp"
#include "quadperiod/convergence.hpp"
#include "quadperiod/periods.hpp"
#include "quadperiod/refine.hpp"
#include "quadperiod/surface.hpp"
#include "report.hpp"

namespace qp = quadperiod;
using qp_cli::Cell;
using qp_cli::Format;
using qp_cli::Report;

namespace {

// Exit codes: invariant failure and bad input/usage.
constexpr int kInvariantFailure = 1;
constexpr int kInputError = 2;

struct Globals {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;

  [[nodiscard]] Format fmt() const { return format == "json" ? Format::kJson : Format::kCsv; }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw qp::ParseError("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// A surface document or a raw quad-graph file.
struct Input {
  std::optional<qp::PolyhedralSurface> surface;
  std::optional<qp::QuadGraph> graph;
};

Input load_input(const std::string& path) {
  const std::string text = read_file(path);
  Input in;
  if (text.find("kind: quadgraph") != std::string::npos) {
    in.graph = qp::load_quad_graph(text);
  } else {
    in.surface = qp::load_surface(text);
  }
  return in;
}

qp::QuadGraph mesh_of(const Input& in, double cell) {
  if (in.graph) return *in.graph;
  return qp::build_quad_graph(*in.surface, cell);
}

const qp::PolyhedralSurface& need_surface(const Input& in, const std::string& what) {
  if (!in.surface) throw qp::Error(what + " needs a surface document, not a raw quad-graph");
  return *in.surface;
}

std::vector<double> parse_numbers(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::string s = item;
    for (char& c : s) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(s);
    double x;
    while (in >> x) out.push_back(x);
    if (!in.eof()) throw qp::ParseError("not a number in '" + item + "'");
  }
  return out;
}

Cell integer(std::size_t x) { return static_cast<std::int64_t>(x); }

void stats_row(qp_cli::Table& t, int level, const qp::MeshStats& s, bool adapted) {
  t.row({std::int64_t{level}, s.h, s.phi_min, integer(s.quads), integer(s.vertices), integer(s.edges),
         std::int64_t{s.genus}, s.gamma_sigma, s.area, adapted});
}

const std::vector<std::string> kStatsColumns{"level", "h",     "phi_min",     "quads", "vertices",
                                             "edges", "genus", "gamma_sigma", "area",  "adapted"};

// mesh ---------------------------------------------------------------------

int cmd_mesh(const Globals& g, const std::string& input, int levels, bool adapted, double phi_floor,
             double cell) {
  const Input in = load_input(input);
  std::vector<qp::RefinementLevel> lv;
  if (in.graph) {
    if (adapted) throw qp::Error("adapted meshes need a surface document");
    qp::QuadGraph cur = *in.graph;
    for (int l = 0; l < levels; ++l) {
      if (l > 0) cur = qp::subdivide(cur);
      lv.push_back({l, cur, qp::mesh_stats(cur), false});
    }
  } else {
    qp::SweepOptions so;
    so.base_cell = cell;
    so.adapted.phi_floor = phi_floor;
    if (levels == 1) {
      qp::QuadGraph m = adapted ? qp::generate_adapted(*in.surface, cell, so.adapted)
                                : qp::build_quad_graph(*in.surface, cell);
      lv.push_back({0, m, qp::mesh_stats(m), adapted});
    } else {
      lv = qp::sweep(*in.surface, levels, adapted, so);
    }
  }
  Report rep;
  auto& t = rep.table("levels", kStatsColumns);
  bool ok = true;
  for (const auto& l : lv) {
    stats_row(t, l.level, l.stats, l.adapted);
    ok = ok && l.stats.phi_min >= phi_floor;
    if (g.out.empty()) {
      std::cout << "# level " << l.level << " h=" << qp_cli::format_double(l.stats.h)
                << " phi_min=" << qp_cli::format_double(l.stats.phi_min) << " quads=" << l.stats.quads
                << '\n'
                << qp::dump_quad_graph(l.graph);
    } else {
      std::filesystem::create_directories(g.out);
      std::ofstream f(std::filesystem::path(g.out) / ("level_" + std::to_string(l.level) + ".qg"));
      f << qp::dump_quad_graph(l.graph);
    }
  }
  if (g.out.empty()) {
    std::cout << rep.render(g.fmt());
  } else {
    rep.write(g.fmt(), g.out, "mesh");
  }
  return ok ? 0 : kInvariantFailure;
}

// check --------------------------------------------------------------------

int cmd_check(const Globals& g, const std::string& input, double cell, bool inject,
              const std::string& differential) {
  const Input in = load_input(input);
  const qp::QuadGraph mesh = mesh_of(in, cell);
  qp::CheckOptions opts;
  opts.tol = g.tol;
  opts.seed = g.seed;
  opts.inject = inject;
  if (!differential.empty()) opts.differential = qp::load_differential(read_file(differential));
  const qp::CheckReport r = qp::run_checks(mesh, opts);

  Report rep;
  rep.table("summary", {"genus", "quads", "pass"})
      .row({std::int64_t{r.genus}, integer(mesh.quad_count()), r.pass()});
  rep.matrix("pi", r.pi);
  auto& t = rep.table("checks", {"check", "value", "bound", "threshold", "pass"});
  for (const auto& c : r.checks) {
    const char* bound = c.bound == qp::Check::Bound::kAtMost  ? "<="
                        : c.bound == qp::Check::Bound::kAbove ? ">"
                                                              : ">=";
    t.row({c.name, c.value, std::string(bound), c.threshold, c.pass});
  }
  rep.write(g.fmt(), g.out, "check");
  if (const auto* f = r.first_failure()) {
    std::cerr << "first failing check: " << f->name << " (value " << qp_cli::format_double(f->value)
              << ")\n";
    return kInvariantFailure;
  }
  return 0;
}

// homology -----------------------------------------------------------------

std::string describe(const qp::Cycle& c) {
  std::ostringstream s;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    s << (i ? " " : "") << (c.steps[i].forward ? "+" : "-") << c.steps[i].edge;
  }
  return s.str();
}

int cmd_homology(const Globals& g, const std::string& input, double cell) {
  const Input in = load_input(input);
  const qp::QuadGraph mesh = mesh_of(in, cell);
  const qp::TreeCotree tc = qp::tree_cotree(mesh);
  const auto raw = qp::basis_cycles(mesh, tc);
  const Eigen::MatrixXi before = qp::intersection_matrix(mesh, raw);
  const qp::HomologyBasis hb = qp::compute_homology(mesh);
  std::vector<qp::Cycle> all = hb.a;
  all.insert(all.end(), hb.b.begin(), hb.b.end());
  const Eigen::MatrixXi after = qp::intersection_matrix(mesh, all);
  const int gg = hb.genus();

  Report rep;
  rep.table("summary", {"genus", "tree_edges", "cotree_edges", "leftover_edges"})
      .row({std::int64_t{gg}, integer(tc.tree.size()), integer(tc.cotree.size()),
            integer(tc.leftover.size())});
  auto& cyc = rep.table("cycles", {"name", "length", "steps"});
  for (std::size_t k = 0; k < raw.size(); ++k) {
    cyc.row({"raw_" + std::to_string(k), integer(raw[k].steps.size()), describe(raw[k])});
  }
  for (int k = 0; k < gg; ++k) {
    cyc.row({"a_" + std::to_string(k + 1), integer(hb.a[k].steps.size()), describe(hb.a[k])});
  }
  for (int k = 0; k < gg; ++k) {
    cyc.row({"b_" + std::to_string(k + 1), integer(hb.b[k].steps.size()), describe(hb.b[k])});
  }
  auto& im = rep.table("intersection", {"stage", "row", "col", "value"});
  for (Eigen::Index i = 0; i < before.rows(); ++i) {
    for (Eigen::Index j = 0; j < before.cols(); ++j) {
      im.row({"before", std::int64_t{i}, std::int64_t{j}, std::int64_t{before(i, j)}});
    }
  }
  for (Eigen::Index i = 0; i < after.rows(); ++i) {
    for (Eigen::Index j = 0; j < after.cols(); ++j) {
      im.row({"after", std::int64_t{i}, std::int64_t{j}, std::int64_t{after(i, j)}});
    }
  }
  auto& co = rep.table("cocycles", {"color", "index", "support"});
  for (const auto color : {qp::Color::kBlack, qp::Color::kWhite}) {
    const auto& set = color == qp::Color::kBlack ? hb.black_cocycles : hb.white_cocycles;
    for (std::size_t k = 0; k < set.size(); ++k) {
      std::size_t support = 0;
      for (int v : set[k]) support += v != 0;
      co.row({std::string(color == qp::Color::kBlack ? "black" : "white"), integer(k), integer(support)});
    }
  }
  rep.write(g.fmt(), g.out, "homology");
  Eigen::MatrixXi j = Eigen::MatrixXi::Zero(2 * gg, 2 * gg);
  j.topRightCorner(gg, gg).setIdentity();
  j.bottomLeftCorner(gg, gg) = -Eigen::MatrixXi::Identity(gg, gg);
  return after == j ? 0 : kInvariantFailure;
}

// harmonic -----------------------------------------------------------------

int cmd_harmonic(const Globals& g, const std::string& input, double cell,
                 const std::vector<std::string>& period_items, bool cg) {
  const Input in = load_input(input);
  const qp::QuadGraph mesh = mesh_of(in, cell);
  const qp::HomologyBasis hb = qp::compute_homology(mesh);
  const std::vector<double> values = parse_numbers(period_items);
  const int gg = hb.genus();
  if (static_cast<int>(values.size()) != 4 * gg) {
    throw qp::Error("--periods needs 4g = " + std::to_string(4 * gg) +
                    " values in the order A^B, A^W, B^B, B^W");
  }
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(values.data(), 4 * gg);
  qp::SolverOptions so;
  if (cg) so.kind = qp::SolverKind::kConjugateGradient;
  const qp::EnergySystem sys = qp::assemble(mesh, hb);
  const qp::HarmonicSolution sol = qp::solve(sys, p, so);
  const qp::MinimalityReport m = qp::verify_minimality(sys, sol, 20, g.seed);
  const double period_err = (qp::periods(sol.eta, hb).real_flat() - p).cwiseAbs().maxCoeff();
  const double scale = std::max(p.norm(), 1.0);

  Report rep;
  auto& d = rep.table("diagnostics", {"quantity", "value", "threshold", "pass"});
  bool ok = true;
  auto add = [&](const std::string& name, double v, double thr) {
    const bool pass = v <= thr;
    ok = ok && pass;
    d.row({name, v, thr, pass});
  };
  d.row({std::string("energy"), sol.energy, std::string(""), true});
  d.row({std::string("iterations"), static_cast<double>(sol.iterations), std::string(""), true});
  add("residual", sol.residual, so.tol);
  add("period_error", period_err / scale, g.tol);
  add("coclosed", m.coclosed_residual, g.tol);
  add("orthogonality", m.max_orthogonality, g.tol);
  add("energy_decrease", -m.min_energy_gap, g.tol * std::max(sol.energy, 1.0));
  auto& eta = rep.table("eta", {"quad_id", "re_wb", "im_wb", "re_ww", "im_ww"});
  for (std::size_t q = 0; q < mesh.quad_count(); ++q) {
    eta.row({integer(q), sol.eta.black[q].real(), sol.eta.black[q].imag(), sol.eta.white[q].real(),
             sol.eta.white[q].imag()});
  }
  rep.write(g.fmt(), g.out, "harmonic");
  return ok ? 0 : kInvariantFailure;
}

// periods ------------------------------------------------------------------

int cmd_periods(const Globals& g, const std::string& input, double cell, const std::string& dump_dir) {
  const Input in = load_input(input);
  const qp::QuadGraph mesh = mesh_of(in, cell);
  const qp::HomologyBasis hb = qp::compute_homology(mesh);
  const qp::CanonicalBasis cb = qp::canonical_basis(mesh, hb);
  const qp::PeriodMatrices pm = qp::period_matrices(cb, hb);
  const qp::PeriodDiagnostics dg = qp::diagnose(pm);

  Report rep;
  rep.matrix("pi", pm.pi);
  rep.matrix("pi_bw", pm.bw);
  rep.matrix("pi_bb", pm.bb);
  rep.matrix("pi_ww", pm.ww);
  rep.matrix("pi_wb", pm.wb);
  rep.matrix("pi_tilde", pm.tilde);
  auto& d = rep.table("diagnostics", {"quantity", "value", "threshold", "pass"});
  bool ok = true;
  auto at_most = [&](const std::string& n, double v, double thr) {
    ok = ok && v <= thr;
    d.row({n, v, thr, v <= thr});
  };
  auto above = [&](const std::string& n, double v, double thr) {
    ok = ok && v > thr;
    d.row({n, v, thr, v > thr});
  };
  at_most("tilde_symmetry", dg.tilde_symmetry, 1e-7);
  at_most("pi_symmetry", dg.pi_symmetry, 1e-7);
  above("min_eig_im_tilde", dg.min_eig_im_tilde, 0);
  above("min_eig_im_pi", dg.min_eig_im_pi, 0);
  above("min_eig_im_bw", dg.min_eig_im_bw, 0);
  above("min_eig_im_wb", dg.min_eig_im_wb, 0);
  at_most("block_average_mismatch", dg.block_average_mismatch / dg.tilde_norm, g.tol);
  above("mean_gap", dg.mean_gap, -1e-10);
  at_most("a_period_error", cb.a_period_error, g.tol);
  d.row({std::string("re_bw"), dg.re_bw, std::string(""), true});
  d.row({std::string("re_wb"), dg.re_wb, std::string(""), true});
  d.row({std::string("im_bb"), dg.im_bb, std::string(""), true});
  d.row({std::string("im_ww"), dg.im_ww, std::string(""), true});
  d.row({std::string("condition"), cb.condition, std::string(""), true});
  double bilinear = 0;
  for (const auto& w : cb.canonical) bilinear = std::max(bilinear, qp::bilinear_identity_residual(mesh, w, hb));
  at_most("bilinear_identity", bilinear, g.tol);
  rep.write(g.fmt(), g.out, "periods");

  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    for (std::size_t k = 0; k < cb.canonical.size(); ++k) {
      const std::filesystem::path dir(dump_dir);
      std::ofstream(dir / ("omega_" + std::to_string(k + 1) + ".csv")) << qp::dump_differential(cb.canonical[k]);
      std::ofstream(dir / ("omega_black_" + std::to_string(k + 1) + ".csv")) << qp::dump_differential(cb.black[k]);
      std::ofstream(dir / ("omega_white_" + std::to_string(k + 1) + ".csv")) << qp::dump_differential(cb.white[k]);
    }
  }
  return ok ? 0 : kInvariantFailure;
}

// converge -----------------------------------------------------------------

int cmd_converge(const Globals& g, const std::string& input, int levels, bool adapted, double cell,
                 const std::vector<std::string>& reference, double below, double above, int gap) {
  const Input in = load_input(input);
  const auto& surface = need_surface(in, "converge");
  qp::ConvergenceOptions o;
  o.levels = levels;
  o.adapted = adapted;
  o.base_cell = cell;
  o.band_below = below;
  o.band_above = above;
  o.reference_gap = gap;
  o.exact_tol = g.tol;
  if (!reference.empty()) {
    const auto v = parse_numbers(reference);
    const int gg = surface.genus();
    if (static_cast<int>(v.size()) != 2 * gg * gg) {
      throw qp::Error("--reference needs g*g complex entries as re,im pairs, row-major");
    }
    Eigen::MatrixXcd r(gg, gg);
    for (int i = 0; i < gg * gg; ++i) r(i / gg, i % gg) = {v[2 * i], v[2 * i + 1]};
    o.reference = r;
  }
  const qp::ConvergenceReport r = qp::run_convergence(surface, o);

  Report rep;
  std::vector<std::string> cols{"level", "h", "phi_min", "quads", "pi_error", "bw_minus_wb", "bb_minus_ww"};
  for (std::size_t k = 0; k < r.rows.front().energy_errors.size(); ++k) {
    cols.push_back("energy_error_" + std::to_string(k));
  }
  cols.push_back("mean_gap");
  auto& t = rep.table("levels", cols);
  for (const auto& row : r.rows) {
    std::vector<Cell> cells{std::int64_t{row.level}, row.h, row.phi_min, integer(row.quads), row.pi_error,
                            row.bw_minus_wb, row.bb_minus_ww};
    for (double e : row.energy_errors) cells.push_back(e);
    cells.push_back(row.mean_gap);
    t.row(std::move(cells));
  }
  auto& f = rep.table("fits", {"quantity", "slope", "points", "exact", "decreasing", "successive"});
  for (const auto& fit : r.fits) {
    std::string succ;
    for (std::size_t i = 0; i < fit.successive.size(); ++i) {
      succ += (i ? " " : "") + qp_cli::format_double(fit.successive[i]);
    }
    f.row({fit.quantity, fit.slope, std::int64_t{fit.points}, fit.exact, fit.decreasing, succ});
  }
  std::string status = r.exact ? "exact" : (r.pass() ? "pass" : "fail");
  rep.table("summary", {"gamma_sigma", "adapted", "predicted", "band_low", "band_high", "log_corrected",
                        "reference", "status"})
      .row({r.gamma_sigma, r.adapted, r.predicted, r.band_low, r.band_high, r.log_corrected,
            std::string(r.reference_is_level ? "finest_level" : "given"), status});
  rep.write(g.fmt(), g.out, "converge");
  return r.pass() ? 0 : kInvariantFailure;
}

// integrate ----------------------------------------------------------------

int cmd_integrate(const Globals& g, const std::string& input, double cell,
                  const std::vector<std::string>& a_items, double sample) {
  const Input in = load_input(input);
  const qp::QuadGraph mesh = mesh_of(in, cell);
  const qp::HomologyBasis hb = qp::compute_homology(mesh);
  const int gg = hb.genus();
  const auto v = parse_numbers(a_items);
  if (static_cast<int>(v.size()) != 2 * gg) {
    throw qp::Error("--a needs g complex a-periods as re,im pairs");
  }
  const qp::CanonicalBasis cb = qp::canonical_basis(mesh, hb);
  qp::DiscreteDifferential w(mesh.quad_count());
  for (int k = 0; k < gg; ++k) w += qp::Complex(v[2 * k], v[2 * k + 1]) * cb.canonical[k];
  const qp::AbelianIntegral ai = qp::abelian_integral(mesh, w);
  const auto samples = qp::abelian_samples(mesh, ai);

  Report rep;
  auto& t = rep.table("integral", {"polygon", "x", "y", "re", "im"});
  for (const auto& [key, value] : samples) {
    const double x = static_cast<double>(std::get<1>(key)) * 1e-9;
    const double y = static_cast<double>(std::get<2>(key)) * 1e-9;
    if (sample > 0) {
      const double fx = x / sample, fy = y / sample;
      if (std::abs(fx - std::round(fx)) > 1e-6 || std::abs(fy - std::round(fy)) > 1e-6) continue;
    }
    t.row({std::int64_t{std::get<0>(key)}, x, y, value.real(), value.imag()});
  }
  std::string jumps;
  rep.table("summary", {"base_edge", "cut_jumps", "domain_vertices"})
      .row({std::int64_t{ai.base_edge}, integer(ai.cut_jumps.size()), integer(ai.domain_vertices)});
  rep.write(g.fmt(), g.out, "integrate");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete period matrices of polyhedral surfaces on bipartite quad-graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Tolerance for invariant checks")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Write reports into this directory instead of stdout");

  std::string input;
  double cell = 0.25;
  int code = 0;

  auto* mesh = app.add_subcommand("mesh", "Write refinement levels in the raw quad-graph format");
  int levels = 3;
  bool adapted = false;
  double phi_floor = qp::kPi / 12;
  mesh->add_option("input", input, "Surface document or quad-graph file")->required();
  mesh->add_option("--levels", levels, "Number of levels")->capture_default_str()->check(CLI::PositiveNumber);
  mesh->add_flag("--adapted", adapted, "h-adapted meshes graded at cones of index <= 1/2");
  mesh->add_option("--phi-floor", phi_floor, "Minimal admissible angle (rad)")->capture_default_str();
  mesh->add_option("--cell", cell, "Cell size (or h) of level 0")->capture_default_str();
  mesh->callback([&] { code = cmd_mesh(g, input, levels, adapted, phi_floor, cell); });

  auto* check = app.add_subcommand("check", "Run every invariant check");
  bool inject = false;
  std::string differential;
  check->add_option("input", input, "Surface document or quad-graph file")->required();
  check->add_option("--cell", cell, "Cell size")->capture_default_str();
  check->add_flag("--inject", inject, "Corrupt a canonical differential before checking holomorphicity");
  check->add_option("--differential", differential, "Differential table to test for holomorphicity");
  check->callback([&] { code = cmd_check(g, input, cell, inject, differential); });

  auto* homology = app.add_subcommand("homology", "Basis cycles, intersection matrices and cocycles");
  homology->add_option("input", input, "Surface document or quad-graph file")->required();
  homology->add_option("--cell", cell, "Cell size")->capture_default_str();
  homology->callback([&] { code = cmd_homology(g, input, cell); });

  auto* harmonic = app.add_subcommand("harmonic", "Harmonic differential with given real periods");
  std::vector<std::string> period_items;
  bool cg = false;
  harmonic->add_option("input", input, "Surface document or quad-graph file")->required();
  harmonic->add_option("--cell", cell, "Cell size")->capture_default_str();
  harmonic->add_option("--periods", period_items, "4g values: A^B, A^W, B^B, B^W")->required();
  harmonic->add_flag("--cg", cg, "Use preconditioned conjugate gradients");
  harmonic->callback([&] { code = cmd_harmonic(g, input, cell, period_items, cg); });

  auto* periods = app.add_subcommand("periods", "Complete and averaged period matrices");
  std::string dump_dir;
  periods->add_option("input", input, "Surface document or quad-graph file")->required();
  periods->add_option("--cell", cell, "Cell size")->capture_default_str();
  periods->add_option("--dump-differentials", dump_dir, "Directory for canonical differentials");
  periods->callback([&] { code = cmd_periods(g, input, cell, dump_dir); });

  auto* converge = app.add_subcommand("converge", "Refinement study with fitted rates");
  std::vector<std::string> reference;
  double below = 0.27, above = 0.25;
  int gap = 0;
  converge->add_option("input", input, "Surface document")->required();
  converge->add_option("--levels", levels, "Number of levels (>= 3)")->capture_default_str();
  converge->add_flag("--adapted", adapted, "Use h-adapted meshes");
  converge->add_option("--cell", cell, "Cell size (or h) of level 0")->capture_default_str();
  converge->add_option("--reference", reference, "Reference Π as re,im pairs, row-major");
  converge->add_option("--band-below", below, "Accepted distance below the predicted rate")->capture_default_str();
  converge->add_option("--band-above", above, "Accepted distance above the predicted rate")->capture_default_str();
  converge->add_option("--reference-gap", gap, "Levels next to the finest one left out of the fit")
      ->capture_default_str();
  converge->callback([&] {
    code = cmd_converge(g, input, levels, adapted, cell, reference, below, above, gap);
  });

  auto* integrate = app.add_subcommand("integrate", "Abelian integral of the first kind");
  std::vector<std::string> a_items;
  double sample = 0;
  integrate->add_option("input", input, "Surface document or quad-graph file")->required();
  integrate->add_option("--cell", cell, "Cell size")->capture_default_str();
  integrate->add_option("--a", a_items, "Complex a-periods as re,im pairs")->required();
  integrate->add_option("--sample", sample, "Only report points on this coarser grid");
  integrate->callback([&] { code = cmd_integrate(g, input, cell, a_items, sample); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const qp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return code;
}
