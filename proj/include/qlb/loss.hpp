#pragma once

#include "qlb/dataset.hpp"
#include "qlb/kp_tree.hpp"

#include <vector>

namespace qlb {

/// L_S(theta) = (1/N) ||X theta - y||^2 with compensated summation.
double empirical_loss(const SampleSet& S, const std::vector<double>& theta);
double empirical_loss(const SampleSet& S, const KPTree& theta);

/// (2/N) X^T (X theta - y).
std::vector<double> empirical_gradient(const SampleSet& S, const std::vector<double>& theta);
std::vector<double> empirical_gradient(const SampleSet& S, const KPTree& theta);

/// max over vertex pairs s, x of the l1 ball of (2/N) ||X (s - x)||^2.
/// Requires a valid LInf sample set.
double curvature_exact(const SampleSet& S);

struct PlantedMinimizer {
  std::vector<double> theta_star;
  double v = 0.0;  ///< Lasso: common planted value. Ridge: 1/sqrt(d).
  NormRegime regime = NormRegime::LInf;
};

/// Expected squared loss under the planted Lasso distribution.
double population_loss_lasso(const std::vector<double>& theta, double p, const IndexSet& W);
std::vector<double> population_gradient_lasso(const std::vector<double>& theta, double p,
                                              const IndexSet& W);
/// theta* = v e_W with v = 2p / (1 + 4p^2 (w - 1)).
PlantedMinimizer lasso_population_minimizer(std::size_t d, double p, const IndexSet& W);

/// Expected squared loss under the planted Ridge distribution.
double population_loss_ridge(const std::vector<double>& theta, double p, const IndexSet& W,
                             std::size_t d);
/// theta*_j = +1/sqrt(d) on W, -1/sqrt(d) elsewhere.
PlantedMinimizer ridge_population_minimizer(std::size_t d, const IndexSet& W);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qlb
