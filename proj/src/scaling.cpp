#include "qlb/scaling.hpp"

#include "qlb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qlb {

namespace {

// Two-sided 97.5% Student t quantiles for 1..30 degrees of freedom.
constexpr double kStudentT[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                2.060,  2.056, 2.052, 2.048, 2.045, 2.042};

double t_quantile(std::size_t dof) {
  if (dof == 0) return std::numeric_limits<double>::infinity();
  if (dof <= 30) return kStudentT[dof - 1];
  return 1.960;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    out.push_back(field);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& cost,
                     std::size_t min_points) {
  if (x.size() != cost.size()) throw std::invalid_argument("fit_loglog: length mismatch");
  if (x.size() < std::max<std::size_t>(2, min_points)) {
    throw std::invalid_argument("fit_loglog: needs at least " +
                                std::to_string(std::max<std::size_t>(2, min_points)) + " points");
  }
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(cost[i] > 0.0)) {
      throw std::invalid_argument("fit_loglog: values must be positive");
    }
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(cost[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog: degenerate x range");
  LogLogFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const std::size_t dof = n - 2;
  fit.slope_stderr = dof > 0 ? std::sqrt(sse / static_cast<double>(dof) / sxx) : 0.0;
  const double half = dof > 0 ? t_quantile(dof) * fit.slope_stderr : 0.0;
  fit.ci_low = fit.slope - half;
  fit.ci_high = fit.slope + half;
  return fit;
}

LogLogFit fit_scaling_csv(const std::string& path, const std::string& x_column,
                          const std::string& cost_column, std::size_t min_points) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  const auto header = split(line);
  auto column = [&](const std::string& name) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw CsvError(1, "no column named '" + name + "'");
  };
  const std::size_t xi = column(x_column);
  const std::size_t ci = column(cost_column);
  std::vector<double> xs, cs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) throw CsvError(lineno, "row length differs from header");
    auto parse = [&](const std::string& f) {
      try {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
        return v;
      } catch (const std::exception&) {
        throw CsvError(lineno, "non-numeric cell '" + f + "'");
      }
    };
    xs.push_back(parse(fields[xi]));
    cs.push_back(parse(fields[ci]));
  }
  return fit_loglog(xs, cs, min_points);
}

ScalingPoint scaling_point(std::size_t d, double eps, const SolveMode& mode,
                           const ScalingInstance& instance, std::uint64_t seed) {
  const auto planted = gen_lasso_hidden(d, std::min(instance.w, d), instance.p, instance.N, seed);
  const LassoProblem problem(planted.samples);
  const auto report = lasso_solve(problem, eps, mode, mix_seed(seed, 0x501e));
  ScalingPoint point;
  point.d = d;
  point.eps = eps;
  point.N = instance.N;
  point.mode = mode.kind;
  point.seed = seed;
  point.ledger = report.ledger;
  point.objective = report.objective;
  return point;
}

std::string scaling_csv_header() {
  return "d,eps,N,mode,seed,q_X,q_y,q_tree,gates,input_queries,total_queries,objective";
}

std::string scaling_csv_row(const ScalingPoint& point) {
  const auto r = ledger_report(point.ledger);
  std::ostringstream out;
  out << point.d << ',' << fmt(point.eps) << ',' << point.N << ',' << to_string(point.mode) << ','
      << point.seed << ',' << r.q_X << ',' << r.q_y << ',' << r.q_tree << ',' << r.gates << ','
      << r.input_queries << ',' << r.total_queries << ',' << fmt(point.objective);
  return out.str();
}

}  // namespace qlb
