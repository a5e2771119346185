#include "report.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace qp_cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

namespace {

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visitor;
  return std::visit(visitor, c);
}

nlohmann::json json_cell(const Cell& c) {
  struct {
    nlohmann::json operator()(const std::string& s) const { return s; }
    nlohmann::json operator()(double d) const {
      // JSON has no NaN or infinity.
      return std::isfinite(d) ? nlohmann::json(d) : nlohmann::json(format_double(d));
    }
    nlohmann::json operator()(std::int64_t i) const { return i; }
    nlohmann::json operator()(bool b) const { return b; }
  } visitor;
  return std::visit(visitor, c);
}

}  // namespace

Table& Report::table(std::string name, std::vector<std::string> columns) {
  tables_.push_back({std::move(name), std::move(columns), {}});
  return tables_.back();
}

void Report::matrix(const std::string& name, const Eigen::MatrixXcd& m) {
  matrices_.emplace_back(name, m);
}

std::string Report::render(Format format) const {
  if (format == Format::kJson) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [name, m] : matrices_) {
      auto rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
      }
      doc[name] = rows;
    }
    for (const auto& t : tables_) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t k = 0; k < t.columns.size() && k < r.size(); ++k) obj[t.columns[k]] = json_cell(r[k]);
        arr.push_back(obj);
      }
      doc[t.name] = arr;
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  bool first = true;
  auto emit = [&](const Table& t) {
    if (!first) out << '\n';
    first = false;
    out << "# " << t.name << '\n';
    for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
    out << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << csv_cell(r[k]);
      out << '\n';
    }
  };
  if (!matrices_.empty()) {
    Table mt{"matrices", {"matrix", "row", "col", "re", "im"}, {}};
    for (const auto& [name, m] : matrices_) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          mt.row({name, std::int64_t{i}, std::int64_t{j}, m(i, j).real(), m(i, j).imag()});
        }
      }
    }
    emit(mt);
  }
  for (const auto& t : tables_) emit(t);
  return out.str();
}

void Report::write(Format format, const std::filesystem::path& out, const std::string& stem) const {
  const std::string text = render(format);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(out);
  const auto path = out / (stem + (format == Format::kJson ? ".json" : ".csv"));
  std::ofstream f(path);
  if (!f) throw quadperiod::Error("cannot write " + path.string());
  f << text;
}

}  // namespace qp_cli
