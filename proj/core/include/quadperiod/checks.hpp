#pragma once

// The invariant suite run by `quadperiod check`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quadperiod/harmonic.hpp"

namespace quadperiod {

struct Check {
  enum class Bound { kAtMost, kAbove, kAtLeast };
  std::string name;
  double value = 0;
  double threshold = 0;
  Bound bound = Bound::kAtMost;
  bool pass = true;
};

struct CheckOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int trials = 20;
  /// Corrupts one canonical differential before the holomorphicity check.
  bool inject = false;
  /// Extra differential to test for holomorphicity.
  std::optional<DiscreteDifferential> differential;
  SolverOptions solver;
};

struct CheckReport {
  std::vector<Check> checks;
  int genus = 0;
  Eigen::MatrixXcd pi;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] const Check* first_failure() const;
};

/// Quad-graph, homology, DEC, harmonic and period-matrix invariants.
CheckReport run_checks(const QuadGraph& g, const CheckOptions& options = {});

}  // namespace quadperiod
