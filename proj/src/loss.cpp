#include "qlb/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlb {

namespace {

void check_dim(const SampleSet& S, std::size_t d) {
  if (d != S.dim()) throw std::invalid_argument("theta dimension differs from the sample set");
}

// Residuals r = X theta - y using only the nonzero entries of theta.
Eigen::VectorXd residuals(const SampleSet& S, const std::vector<std::pair<std::size_t, double>>& nz) {
  Eigen::VectorXd r = -S.y;
  for (const auto& [j, v] : nz) r.noalias() += v * S.X.col(static_cast<Eigen::Index>(j));
  return r;
}

std::vector<std::pair<std::size_t, double>> nonzeros(const std::vector<double>& theta) {
  std::vector<std::pair<std::size_t, double>> nz;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] != 0.0) nz.emplace_back(j, theta[j]);
  }
  return nz;
}

std::vector<std::pair<std::size_t, double>> nonzeros(const KPTree& theta) {
  std::vector<std::pair<std::size_t, double>> nz;
  theta.for_each_entry([&](std::size_t j, double v) { nz.emplace_back(j, v); });
  return nz;
}

double loss_from(const SampleSet& S, const std::vector<std::pair<std::size_t, double>>& nz) {
  const Eigen::VectorXd r = residuals(S, nz);
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc.add(r(i) * r(i));
  return acc.value() / static_cast<double>(S.rows());
}

std::vector<double> gradient_from(const SampleSet& S,
                                  const std::vector<std::pair<std::size_t, double>>& nz) {
  const Eigen::VectorXd r = residuals(S, nz);
  const Eigen::VectorXd g = (2.0 / static_cast<double>(S.rows())) * (S.X.transpose() * r);
  return {g.data(), g.data() + g.size()};
}

void check_p(double p, double upper) {
  if (!(p > 0.0 && p < upper)) throw std::invalid_argument("p out of range");
}

void check_set(const IndexSet& W, std::size_t d) {
  std::vector<bool> seen(d, false);
  for (std::size_t j : W) {
    if (j >= d) throw std::invalid_argument("W has an index >= d");
    if (seen[j]) throw std::invalid_argument("W has duplicate indices");
    seen[j] = true;
  }
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double empirical_loss(const SampleSet& S, const std::vector<double>& theta) {
  check_dim(S, theta.size());
  return loss_from(S, nonzeros(theta));
}

double empirical_loss(const SampleSet& S, const KPTree& theta) {
  check_dim(S, theta.dim());
  return loss_from(S, nonzeros(theta));
}

std::vector<double> empirical_gradient(const SampleSet& S, const std::vector<double>& theta) {
  check_dim(S, theta.size());
  return gradient_from(S, nonzeros(theta));
}

std::vector<double> empirical_gradient(const SampleSet& S, const KPTree& theta) {
  check_dim(S, theta.dim());
  return gradient_from(S, nonzeros(theta));
}

double curvature_exact(const SampleSet& S) {
  if (S.regime != NormRegime::LInf || !validate(S).empty()) {
    throw std::invalid_argument("curvature_exact requires a valid LInf sample set");
  }
  const auto d = static_cast<Eigen::Index>(S.dim());
  const double scale = 2.0 / static_cast<double>(S.rows());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d, d);
  G.selfadjointView<Eigen::Lower>().rankUpdate(S.X.transpose());
  // ||X (s - x)||^2 for s = sigma e_j, x = rho e_k expands into Gram entries.
  double best = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k <= j; ++k) {
      const double gjj = G(j, j);
      const double gkk = G(k, k);
      const double gjk = G(j, k);
      double pair_max;
      if (j == k) {
        pair_max = 4.0 * gjj;  // s = -x
      } else {
        pair_max = gjj + gkk + 2.0 * std::abs(gjk);
      }
      best = std::max(best, scale * pair_max);
      if (best >= 8.0) return best;
    }
  }
  return best;
}

double population_loss_lasso(const std::vector<double>& theta, double p, const IndexSet& W) {
  check_p(p, 0.5);
  check_set(W, theta.size());
  std::vector<bool> in_w(theta.size(), false);
  for (std::size_t j : W) in_w[j] = true;
  CompensatedSum off_sq, on_sq_dev, on_sum, on_sq;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (in_w[j]) {
      on_sq_dev.add((theta[j] - 2.0 * p) * (theta[j] - 2.0 * p));
      on_sum.add(theta[j]);
      on_sq.add(theta[j] * theta[j]);
    } else {
      off_sq.add(theta[j] * theta[j]);
    }
  }
  const double s = on_sum.value();
  const double cross = s * s - on_sq.value();  // sum over ordered pairs j1 != j2 in W
  const double w = static_cast<double>(W.size());
  return off_sq.value() + on_sq_dev.value() + 4.0 * p * p * cross - 4.0 * p * p * w + 1.0;
}

std::vector<double> population_gradient_lasso(const std::vector<double>& theta, double p,
                                              const IndexSet& W) {
  check_p(p, 0.5);
  check_set(W, theta.size());
  CompensatedSum on_sum;
  for (std::size_t j : W) on_sum.add(theta[j]);
  std::vector<double> g(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) g[j] = 2.0 * theta[j];
  for (std::size_t j : W) {
    g[j] = 2.0 * theta[j] - 4.0 * p + 8.0 * p * p * (on_sum.value() - theta[j]);
  }
  return g;
}

PlantedMinimizer lasso_population_minimizer(std::size_t d, double p, const IndexSet& W) {
  check_p(p, 0.5);
  check_set(W, d);
  PlantedMinimizer out;
  out.regime = NormRegime::LInf;
  const double w = static_cast<double>(W.size());
  out.v = 2.0 * p / (1.0 + 4.0 * p * p * (w - 1.0));
  out.theta_star.assign(d, 0.0);
  for (std::size_t j : W) out.theta_star[j] = out.v;
  return out;
}

double population_loss_ridge(const std::vector<double>& theta, double p, const IndexSet& W,
                             std::size_t d) {
  check_p(p, 0.25);
  if (theta.size() != d) throw std::invalid_argument("theta dimension differs from d");
  check_set(W, d);
  std::vector<bool> in_w(d, false);
  for (std::size_t j : W) in_w[j] = true;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  CompensatedSum sq, inner;
  for (std::size_t j = 0; j < d; ++j) {
    sq.add(theta[j] * theta[j]);
    inner.add(in_w[j] ? theta[j] * scale : -theta[j] * scale);
  }
  const double align = 2.0 * p * inner.value() - 1.0;
  return sq.value() * (1.0 - 4.0 * p * p) / static_cast<double>(d) + align * align;
}

PlantedMinimizer ridge_population_minimizer(std::size_t d, const IndexSet& W) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  check_set(W, d);
  PlantedMinimizer out;
  out.regime = NormRegime::L2;
  out.v = 1.0 / std::sqrt(static_cast<double>(d));
  out.theta_star.assign(d, -out.v);
  for (std::size_t j : W) out.theta_star[j] = out.v;
  return out;
}

}  // namespace qlb
