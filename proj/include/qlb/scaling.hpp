#pragma once

#include "qlb/frank_wolfe.hpp"
#include "qlb/oracles.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlb {

/// Least squares on (log2 x, log2 cost).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  double ci_low = 0.0;   ///< 95% interval for the slope
  double ci_high = 0.0;
  std::size_t points = 0;
};

/// Requires at least `min_points` points, positive values and distinct x.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& cost,
                     std::size_t min_points = 4);

/// Reads two named columns of a headed CSV and fits them.
LogLogFit fit_scaling_csv(const std::string& path, const std::string& x_column,
                          const std::string& cost_column, std::size_t min_points = 4);

/// Planted instance used by the query-scaling sweeps.
struct ScalingInstance {
  std::size_t N = 256;
  std::size_t w = 5;
  double p = 0.1;
};

struct ScalingPoint {
  std::size_t d = 0;
  double eps = 0.0;
  std::size_t N = 0;
  ModeKind mode = ModeKind::ClassicalExact;
  std::uint64_t seed = 0;
  QueryLedger ledger;
  double objective = 0.0;
};

/// One lasso_solve on a planted instance of dimension d, reporting its ledger.
ScalingPoint scaling_point(std::size_t d, double eps, const SolveMode& mode,
                           const ScalingInstance& instance, std::uint64_t seed);

/// CSV header and row for a scaling point.
std::string scaling_csv_header();
std::string scaling_csv_row(const ScalingPoint& point);

}  // namespace qlb
