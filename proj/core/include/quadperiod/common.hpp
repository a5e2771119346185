#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace quadperiod {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Absolute tolerance for geometric equalities on unit-scale inputs.
struct Tolerances {
  double geometry = 1e-9;
  double edge_length_rel = 1e-12;
};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid geometry: degenerate quads, unequal glued edges, bad orientation.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid combinatorics: unglued edges, non-bipartite graphs, wrong genus.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure (singular system, non-convergence).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadperiod
