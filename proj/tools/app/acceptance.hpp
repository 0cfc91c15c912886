#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fblab/config.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/solver.hpp"

namespace fblab::app {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  /// Short human-readable summary of the measured numbers.
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

/// Problem from the [solver] section on an n x n grid: `quadratic` gives the
/// benchmark with its offset, `constant` uses boundary_value everywhere.
/// ParameterError on any other boundary name.
NavierProblem make_problem(const RunConfig& cfg, int n);

/// Sign-change node of u nearest (lo, lo) + 0.7071 (hi - lo) (1, 1), at
/// least monotonicity.margin from the edge.
Point2 free_boundary_center(const ScalarField2D& u, const RunConfig& cfg);

/// `derivation` or `printed`; ParameterError otherwise.
DissipationVariant dissipation_variant(const std::string& name);

/// Criterion ids run from 1 to kCriteria.
inline constexpr int kCriteria = 10;

std::string criterion_name(int id);

/// Runs one criterion. Library errors are caught and reported as a failure
/// with the error text in detail.
CriterionResult run_criterion(int id, const RunConfig& cfg);

/// All criteria in order; `on_result` fires after each one.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] name (1.23 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace fblab::app
