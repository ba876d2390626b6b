#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

double naive_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<double>& theta) {
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    long double r = -static_cast<long double>(y(i));
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      r += static_cast<long double>(X(i, j)) * theta[static_cast<std::size_t>(j)];
    }
    total += r * r;
  }
  return static_cast<double>(total / X.rows());
}

std::vector<double> naive_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   const std::vector<double>& theta) {
  std::vector<long double> residual(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    long double r = -static_cast<long double>(y(i));
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      r += static_cast<long double>(X(i, j)) * theta[static_cast<std::size_t>(j)];
    }
    residual[static_cast<std::size_t>(i)] = r;
  }
  std::vector<double> g(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    long double s = 0.0L;
    for (Eigen::Index i = 0; i < X.rows(); ++i) s += X(i, j) * residual[static_cast<std::size_t>(i)];
    g[static_cast<std::size_t>(j)] = static_cast<double>(2.0L * s / X.rows());
  }
  return g;
}

std::vector<double> finite_difference(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double keep = x[j];
    x[j] = keep + h;
    const double up = f(x);
    x[j] = keep - h;
    const double down = f(x);
    x[j] = keep;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double r) {
  if (v.lpNorm<1>() <= r) return v;
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - r) / static_cast<double>(k + 1);
    if (u[k] > candidate) shift = candidate;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v(i)) - shift, 0.0);
    out(i) = v(i) < 0 ? -mag : mag;
  }
  return out;
}

QuadraticMinimum lasso_minimum(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               std::size_t pgd_steps, std::size_t fw_steps) {
  const double n = static_cast<double>(X.rows());
  const Eigen::MatrixXd G = X.transpose() * X / n;
  const Eigen::VectorXd c = X.transpose() * y / n;
  const double yy = y.squaredNorm() / n;
  auto loss = [&](const Eigen::VectorXd& t) { return t.dot(G * t) - 2.0 * c.dot(t) + yy; };
  const double lipschitz = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().maxCoeff();
  const Eigen::Index d = X.cols();

  Eigen::VectorXd best = Eigen::VectorXd::Zero(d);
  double best_loss = loss(best);
  if (lipschitz > 0.0) {
    Eigen::VectorXd x = best, z = best;
    double t = 1.0;
    for (std::size_t k = 0; k < pgd_steps; ++k) {
      const Eigen::VectorXd next = project_l1(z - (2.0 * (G * z - c)) / lipschitz);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = next + ((t - 1.0) / t_next) * (next - x);
      x = next;
      t = t_next;
    }
    if (loss(x) < best_loss) {
      best = x;
      best_loss = loss(x);
    }
  }

  // Exact Frank-Wolfe from the best point with short steps.
  Eigen::VectorXd theta = best;
  Eigen::VectorXd q = G * theta;
  for (std::size_t k = 0; k < fw_steps; ++k) {
    const Eigen::VectorXd g = 2.0 * (q - c);
    Eigen::Index j = 0;
    g.cwiseAbs().maxCoeff(&j);
    const double sign = g(j) > 0 ? -1.0 : 1.0;
    // Exact line search on the segment toward sign * e_j.
    Eigen::VectorXd dir = -theta;
    dir(j) += sign;
    const Eigen::VectorXd Gdir = sign * G.col(j) - q;
    const double curv = dir.dot(Gdir);
    const double slope = g.dot(dir);
    if (slope >= 0.0 || curv <= 0.0) break;
    const double step = std::min(1.0, -slope / (2.0 * curv));
    theta += step * dir;
    q += step * Gdir;
  }
  if (loss(theta) < best_loss) {
    best = theta;
    best_loss = loss(theta);
  }
  const Eigen::VectorXd g = 2.0 * (G * best - c);
  const double gap = g.dot(best) + g.cwiseAbs().maxCoeff();
  return {best_loss, best_loss - std::max(gap, 0.0), best};
}

double brute_force_curvature(const Eigen::MatrixXd& X) {
  const Eigen::Index d = X.cols();
  double best = 0.0;
  for (Eigen::Index a = 0; a < 2 * d; ++a) {
    for (Eigen::Index b = 0; b < 2 * d; ++b) {
      Eigen::VectorXd diff = Eigen::VectorXd::Zero(d);
      diff(a / 2) += a % 2 == 0 ? 1.0 : -1.0;
      diff(b / 2) -= b % 2 == 0 ? 1.0 : -1.0;
      best = std::max(best, 2.0 * (X * diff).squaredNorm() / static_cast<double>(X.rows()));
    }
  }
  return best;
}

namespace {

long double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0L;
  k = std::min(k, n - k);
  long double out = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<long double>(n - k + i) / i;
  return out;
}

}  // namespace

std::vector<double> hypergeometric(std::size_t N, std::size_t L, std::size_t m) {
  std::vector<double> pmf(m + 1, 0.0);
  const long double total = choose(N, m);
  for (std::size_t k = 0; k <= m; ++k) {
    if (k > L || m - k > N - L) continue;
    pmf[k] = static_cast<double>(choose(L, k) * choose(N - L, m - k) / total);
  }
  return pmf;
}

std::vector<double> binomial(std::size_t m, double q) {
  std::vector<double> pmf(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    pmf[k] = static_cast<double>(choose(m, k) * std::pow(static_cast<long double>(q), k) *
                                 std::pow(1.0L - q, m - k));
  }
  return pmf;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
  double bc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

double chi_square_sf(double stat, double k) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(k), stat));
}

double frequency_bound(double rate, std::size_t n) {
  return rate + 3.0 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

Eigen::MatrixXd random_sign_matrix(std::size_t N, std::size_t d, std::mt19937_64& gen) {
  Eigen::MatrixXd X(N, d);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = (gen() & 1) ? 1.0 : -1.0;
  }
  return X;
}

}  // namespace oracle
