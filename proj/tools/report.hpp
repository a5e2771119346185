#pragma once

// Tabular reports written as CSV (17 significant digits) or JSON.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "quadperiod/common.hpp"

namespace qp_cli {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table& row(std::vector<Cell> r) {
    rows.push_back(std::move(r));
    return *this;
  }
};

enum class Format { kCsv, kJson };

class Report {
 public:
  Table& table(std::string name, std::vector<std::string> columns);
  void matrix(const std::string& name, const Eigen::MatrixXcd& m);

  /// Writes to `<out>/<stem>.csv|json`, or stdout when out is empty.
  void write(Format format, const std::filesystem::path& out, const std::string& stem) const;
  [[nodiscard]] std::string render(Format format) const;

 private:
  std::vector<Table> tables_;
  std::vector<std::pair<std::string, Eigen::MatrixXcd>> matrices_;
};

std::string format_double(double x);

}  // namespace qp_cli
