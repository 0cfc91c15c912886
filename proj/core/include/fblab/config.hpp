#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fblab {

/// Run parameters grouped by INI section. Every field has a default, so the
/// empty text parses to a complete configuration.
struct RunConfig {
  struct Run {
    std::uint64_t seed = 20240601;
    std::string out = "fblab_out";
    bool operator==(const Run&) const = default;
  } run;

  struct Solver {
    int n = 129;
    double lo = 0.0;
    double hi = 1.0;
    /// quadratic: x^2 + y^2 - offset; constant: boundary_value everywhere.
    std::string boundary = "quadratic";
    double offset = 1.0;
    double boundary_value = 0.0;
    double eps = 0.05;
    double residual_tol = 1e-8;
    int max_iter = 100;
    bool operator==(const Solver&) const = default;
  } solver;

  struct Sweep {
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    int n = 129;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Monotonicity {
    std::vector<int> grids{65, 129, 257};
    int radii = 6;
    double r_min = 0.046875;
    double r_max = 0.15;
    std::string variant = "derivation";
    double tol_factor = 1e-3;
    double margin = 0.2;
    int n_theta = 256;
    bool operator==(const Monotonicity&) const = default;
  } monotonicity;

  struct Identity {
    int fields = 20;
    std::vector<int> grids{65, 129, 257};
    bool operator==(const Identity&) const = default;
  } identity;

  struct Blowup {
    std::vector<double> radii{0.2, 0.1, 0.05};
    double tol = 1e-2;
    bool operator==(const Blowup&) const = default;
  } blowup;

  struct Counterexample {
    std::vector<double> eps{1e-2, 1e-4, 1e-6};
    std::vector<int> k{2, 5, 10};
    int samples = 200;
    bool operator==(const Counterexample&) const = default;
  } counterexample;

  struct Montecarlo {
    int n = 17;
    int samples = 100000;
    double t_max = 20.0;
    int dimension = 2;
    double penalty = 1.0;
    double eps = 0.1;
    bool operator==(const Montecarlo&) const = default;
  } montecarlo;

  struct Decay {
    double r0 = 0.4;
    std::vector<double> divisors{8.0, 16.0, 32.0};
    double x0 = 0.5;
    double y0 = 0.5;
    bool operator==(const Decay&) const = default;
  } decay;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Sections [run], [solver], [sweep], [monotonicity], [identity], [blowup],
/// [counterexample], [montecarlo], [decay]; `key = value` lines; `#` and `;`
/// start comments; lists are comma separated. Throws ParseError with the
/// line number on malformed lines or values, and one ParseError naming every
/// unknown section or key.
RunConfig parse_config(const std::string& text);

/// Every key with its current value; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Reads and parses a file; ParseError (line 0) when it cannot be read.
RunConfig load_config(const std::string& path);

}  // namespace fblab
