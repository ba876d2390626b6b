// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "qlb/dataset.hpp"
#include "qlb/frank_wolfe.hpp"
#include "qlb/kp_tree.hpp"
#include "qlb/loss.hpp"
#include "qlb/lower_bound.hpp"
#include "qlb/oracles.hpp"
#include "qlb/rng.hpp"
#include "qlb/scaling.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qlb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

SampleSet sign_instance(std::size_t N, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  SampleSet S;
  S.regime = NormRegime::LInf;
  S.X = oracle::random_sign_matrix(N, d, gen);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  S.y.resize(static_cast<Eigen::Index>(N));
  for (Eigen::Index i = 0; i < S.y.size(); ++i) S.y(i) = u(gen);
  return S;
}

// 1. Envelope 3C/(t+2) over t in [1, 200] on 20 random instances.
Outcome fw_envelope() {
  double worst_margin = -1e300;
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto S = sign_instance(100, 50, 1000 + seed);
    const double C = curvature_exact(S);
    const auto ref = oracle::lasso_minimum(S.X, S.y, 20000, 1000000);
    const auto r = lasso_fw_with_guess(S, C, C / 34.0, SolveMode::classical(), seed);
    for (std::size_t t = 1; t <= 200; ++t) {
      const double margin = *r.trace[t].objective - ref.lower_bound - 3.0 * C / (t + 2.0);
      worst_margin = std::max(worst_margin, margin);
      if (margin > 1e-9) ++violations;
    }
  }
  return {violations == 0,
          fmt("violations %.0f; max of gap - 3C/(t+2) = %.3g", violations, worst_margin)};
}

// 2. Curvature never exceeds 8 and reaches it on the all-ones set.
Outcome curvature_cap() {
  double worst = 0.0;
  double brute_diff = 0.0;
  std::mt19937_64 gen(2);
  for (int k = 0; k < 100; ++k) {
    SampleSet S;
    S.regime = NormRegime::LInf;
    S.X = oracle::random_sign_matrix(20, 12, gen);
    S.y = Eigen::VectorXd::Zero(20);
    const double c = curvature_exact(S);
    worst = std::max(worst, c);
    brute_diff = std::max(brute_diff, std::abs(c - oracle::brute_force_curvature(S.X)));
  }
  SampleSet ones;
  ones.regime = NormRegime::LInf;
  ones.X = Eigen::MatrixXd::Ones(20, 12);
  ones.y = Eigen::VectorXd::Zero(20);
  const double c1 = curvature_exact(ones);
  const bool pass = worst <= 8.0 && std::abs(c1 - 8.0) <= 1e-12 && brute_diff <= 1e-12;
  return {pass, fmt("max over random %.6f; all-ones %.15g; brute-force diff %.2g", worst, c1,
                    brute_diff)};
}

// 3. 1e4 random updates at d = 1024 against a dense replay.
Outcome kp_tree_equivalence() {
  const std::size_t d = 1024;
  Rng rng(3);
  KPTree tree(d);
  std::vector<double> dense(d, 0.0);
  const std::size_t bound = 4 * (10 + 1);
  double worst_rel = 0.0;
  double worst_norm = 0.0;
  std::size_t max_touch = 0;
  bool audit_ok = true;
  // Scales near 1 in magnitude keep the dense replay itself clear of underflow.
  for (int step = 0; step < 10000; ++step) {
    const double a = rng.bernoulli(0.5) ? rng.uniform(0.9, 1.1) : -rng.uniform(0.9, 1.1);
    const std::size_t j = rng.below(d);
    const double b = rng.uniform(-1.0, 1.0);
    tree.update(a, b, j);
    max_touch = std::max(max_touch, tree.last_touched());
    for (auto& v : dense) v *= a;
    dense[j] += b;
    if (tree.audit()) audit_ok = false;
    const double read = tree.read_entry(j);
    max_touch = std::max(max_touch, tree.last_touched());
    worst_rel = std::max(worst_rel, std::abs(read - dense[j]) / std::max(std::abs(dense[j]), 1e-300));
    if (step % 100 == 99) {
      double norm = 0.0;
      for (const auto& amp : tree.amplitudes()) norm += amp.magnitude * amp.magnitude;
      worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
    }
  }
  const auto out = tree.to_dense();
  for (std::size_t j = 0; j < d; ++j) {
    if (dense[j] != 0.0) worst_rel = std::max(worst_rel, std::abs(out[j] - dense[j]) / std::abs(dense[j]));
  }
  const bool pass = audit_ok && worst_rel <= 1e-9 && max_touch <= bound && worst_norm <= 1e-12;
  return {pass, fmt("max rel err %.2g; max touched %.0f (bound %.0f); amplitude norm err %.2g",
                    worst_rel, max_touch, bound, worst_norm) +
                    (audit_ok ? "; audits clean" : "; audit failure")};
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Streams 1e6 samples in chunks and returns the mean squared residual per theta.
std::vector<MeanSe> monte_carlo_losses(bool ridge, std::size_t d, std::size_t w, double p,
                                       const IndexSet& W, const std::vector<std::vector<double>>& thetas) {
  const std::size_t chunks = 10, per_chunk = 100000;
  std::vector<double> sum(thetas.size(), 0.0), sumsq(thetas.size(), 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto S = ridge ? gen_ridge_hidden(d, w, p, per_chunk, 400 + c, W).samples
                         : gen_lasso_hidden(d, w, p, per_chunk, 400 + c, W).samples;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const Eigen::Map<const Eigen::VectorXd> th(thetas[k].data(), static_cast<Eigen::Index>(d));
      const Eigen::ArrayXd r = ((S.X * th) - S.y).array().square();
      sum[k] += r.sum();
      sumsq[k] += r.square().sum();
    }
  }
  const double n = static_cast<double>(chunks * per_chunk);
  std::vector<MeanSe> out(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    out[k].mean = sum[k] / n;
    const double var = sumsq[k] / n - out[k].mean * out[k].mean;
    out[k].se = std::sqrt(std::max(var, 0.0) / n);
  }
  return out;
}

std::vector<double> random_ball_point(std::size_t d, double radius, bool l1, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(d);
  for (auto& x : v) x = n(rng);
  double norm = 0.0;
  for (double x : v) norm += l1 ? std::abs(x) : x * x;
  if (!l1) norm = std::sqrt(norm);
  for (auto& x : v) x *= radius / norm;
  return v;
}

// 4. Closed-form population losses against Monte Carlo and finite differences.
Outcome population_losses() {
  const std::size_t d = 40, w = 10;
  const double p = 0.05;
  Rng rng(4);
  const IndexSet W = random_subset(d, w, rng);
  const auto star = lasso_population_minimizer(d, p, W).theta_star;
  std::vector<std::vector<double>> lasso_thetas{std::vector<double>(d, 0.0), star,
                                                random_ball_point(d, 0.7, true, rng),
                                                random_ball_point(d, 1.0, true, rng)};
  const auto rstar = ridge_population_minimizer(d, W).theta_star;
  std::vector<std::vector<double>> ridge_thetas{std::vector<double>(d, 0.0), rstar,
                                                random_ball_point(d, 0.5, false, rng),
                                                random_ball_point(d, 1.0, false, rng)};
  double worst_z = 0.0;
  const auto lmc = monte_carlo_losses(false, d, w, p, W, lasso_thetas);
  for (std::size_t k = 0; k < lasso_thetas.size(); ++k) {
    worst_z = std::max(worst_z, std::abs(population_loss_lasso(lasso_thetas[k], p, W) - lmc[k].mean) / lmc[k].se);
  }
  const auto rmc = monte_carlo_losses(true, d, w, p, W, ridge_thetas);
  for (std::size_t k = 0; k < ridge_thetas.size(); ++k) {
    worst_z = std::max(worst_z, std::abs(population_loss_ridge(ridge_thetas[k], p, W, d) - rmc[k].mean) / rmc[k].se);
  }
  double fd_err = 0.0;
  for (const auto& th : {lasso_thetas[2], lasso_thetas[3]}) {
    const auto g = population_gradient_lasso(th, p, W);
    const auto fd = oracle::finite_difference(
        [&](const std::vector<double>& x) { return population_loss_lasso(x, p, W); }, th, 1e-5);
    for (std::size_t j = 0; j < d; ++j) fd_err = std::max(fd_err, std::abs(g[j] - fd[j]));
  }
  double ridge_margin = 0.0;
  {
    // The ridge loss has no gradient routine; check it is minimized at theta* on the sphere.
    const double at_star = population_loss_ridge(rstar, p, W, d);
    for (int k = 0; k < 200; ++k) {
      const auto th = random_ball_point(d, 1.0, false, rng);
      ridge_margin = std::max(ridge_margin, at_star - population_loss_ridge(th, p, W, d));
    }
  }
  double grad_star = 0.0;
  for (double g : population_gradient_lasso(star, p, W)) grad_star = std::max(grad_star, std::abs(g));
  const bool pass = worst_z <= 4.0 && fd_err <= 1e-5 && grad_star <= 1e-12 && ridge_margin <= 0.0;
  return {pass, fmt("max |z| %.2f; max FD err %.2g; |grad(theta*)| %.2g; ridge theta* margin %.2g",
                    worst_z, fd_err, grad_star, ridge_margin)};
}

// 5. Thresholding recovers W at theta* and from near-optimal perturbations.
Outcome recovery_geometry() {
  bool exact_ok = true;
  std::size_t worst_sd = 0;
  std::size_t accepted_total = 0;
  Rng rng(5);
  for (double eps : {0.05, 0.1, 0.2}) {
    const auto k = static_cast<std::size_t>(std::floor(1.0 / eps));
    const double p = 1.0 / (2.0 * static_cast<double>(k));
    for (std::size_t w : {k, k - 1}) {
      const std::size_t d = 64;
      const IndexSet W = random_subset(d, w, rng);
      const auto m = lasso_population_minimizer(d, p, W);
      if (recover_set_lasso(m.theta_star, eps) != W) exact_ok = false;
      const double base = population_loss_lasso(m.theta_star, p, W);
      const double budget = eps / 8000.0;
      // Radius at which an average direction reaches the gap budget.
      double curv = 0.0;
      for (int s = 0; s < 20; ++s) {
        auto th = m.theta_star;
        const auto u = random_ball_point(d, 1.0, false, rng);
        for (std::size_t j = 0; j < d; ++j) th[j] += u[j];
        curv += population_loss_lasso(th, p, W) - base;
      }
      curv /= 20.0;
      const double R = 2.0 * std::sqrt(budget / curv);
      std::size_t accepted = 0;
      while (accepted < 100) {
        const auto u = random_ball_point(d, rng.uniform(0.0, R), false, rng);
        auto th = m.theta_star;
        for (std::size_t j = 0; j < d; ++j) th[j] += u[j];
        double l1 = 0.0;
        for (double v : th) l1 += std::abs(v);
        if (l1 > 1.0) continue;
        if (population_loss_lasso(th, p, W) - base > budget) continue;
        ++accepted;
        worst_sd = std::max(worst_sd, sym_diff(W, recover_set_lasso(th, eps)));
        if (static_cast<double>(sym_diff(W, recover_set_lasso(th, eps))) > w / 200.0) exact_ok = false;
      }
      accepted_total += accepted;
    }
  }
  return {exact_ok, std::string("theta* thresholds to W in all 6 settings: ") + (exact_ok ? "yes" : "no") +
                        fmt("; %.0f perturbed points, max sym_diff %.0f",
                            static_cast<double>(accepted_total), static_cast<double>(worst_sd))};
}

// 6. End-to-end recovery at d = 128, eps = 0.1 in both modes.
Outcome end_to_end_recovery() {
  std::size_t ok[2] = {0, 0};
  for (int m = 0; m < 2; ++m) {
    const SolveMode mode = m == 0 ? SolveMode::classical() : SolveMode::quantum();
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const auto planted = gen_lasso_hidden(128, 10, 0.05, 20000, s);
      const auto r = lasso_solve(planted.samples, 0.1, mode, mix_seed(s, 1));
      ok[m] += score_recovery(planted.W, recover_set_lasso(r.theta_dense, 0.1)).pass;
    }
  }
  return {ok[0] >= 8 && ok[1] >= 7,
          fmt("classical %.0f/10 (need 8); quantum %.0f/10 (need 7)", ok[0], ok[1])};
}

// 7. Log-log slopes of charged queries.
Outcome query_scaling() {
  const std::vector<std::size_t> dims{256, 512, 1024, 2048, 4096};
  std::vector<double> xs, q_in, q_tot, c_in;
  for (std::size_t d : dims) {
    const auto q = ledger_report(scaling_point(d, 0.2, SolveMode::quantum(), {}, 7).ledger);
    const auto c = ledger_report(scaling_point(d, 0.2, SolveMode::classical(), {}, 7).ledger);
    xs.push_back(static_cast<double>(d));
    q_in.push_back(static_cast<double>(q.input_queries));
    q_tot.push_back(static_cast<double>(q.total_queries));
    c_in.push_back(static_cast<double>(c.input_queries));
  }
  const auto fq = fit_loglog(xs, q_in);
  const auto fq_tot = fit_loglog(xs, q_tot);
  const auto fc = fit_loglog(xs, c_in);
  std::vector<double> inv_eps, e_in;
  for (double eps : {0.4, 0.2, 0.1}) {
    const auto q = ledger_report(scaling_point(1024, eps, SolveMode::quantum(), {}, 7).ledger);
    inv_eps.push_back(1.0 / eps);
    e_in.push_back(static_cast<double>(q.input_queries));
  }
  const auto fe = fit_loglog(inv_eps, e_in, 3);
  const bool pass = fq.slope >= 0.45 && fq.slope <= 0.55 && fq.r2 >= 0.99 && fc.slope >= 0.95 &&
                    fc.slope <= 1.05 && fe.slope >= 1.8 && fe.slope <= 2.2;
  return {pass, fmt("quantum input-query d-slope %.4f (R2 %.5f); classical d-slope %.4f; quantum 1/eps-slope %.4f",
                    fq.slope, fq.r2, fc.slope, fe.slope) +
                    fmt("; quantum input+tree d-slope %.4f (reported only)", fq_tot.slope)};
}

// 8. Frequency tests of the emulators and the min-finding soundness audit.
Outcome emulator_rates() {
  const std::size_t n = 100000;
  Rng rng(8);
  QueryLedger ledger;
  std::string detail;
  bool pass = true;

  {
    const double a = 0.3;
    const std::uint64_t M = 20;
    const double acc = amp_estimate_accuracy(a, M);
    std::size_t misses = 0;
    for (std::size_t t = 0; t < n; ++t) misses += std::abs(amp_estimate(a, M, rng, ledger) - a) > acc;
    const double rate = static_cast<double>(misses) / n;
    pass = pass && rate <= oracle::frequency_bound(0.1, n);
    detail += fmt("amp_estimate miss rate %.4f (advertised 0.1)", rate);
  }
  const auto S = gen_lasso_hidden(8, 2, 0.1, 50, 8).samples;
  KPTree theta(8);
  theta.update(1.0, 0.4, 1);
  theta.update(1.0, -0.3, 5);
  {
    const double delta = 0.05, beta = 0.02;
    const auto exact = empirical_gradient(S, theta);
    std::size_t misses = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t j = t % 8;
      misses += std::abs(noisy_gradient_entry(S, theta, j, beta, delta, rng, ledger) - exact[j]) > beta;
    }
    const double rate = static_cast<double>(misses) / n;
    pass = pass && rate <= oracle::frequency_bound(delta, n);
    detail += fmt("; gradient miss rate %.4f (advertised %.2f)", rate, delta);
  }
  {
    const double delta = 0.05, beta = 0.02;
    const double exact = empirical_loss(S, theta);
    std::size_t misses = 0;
    for (std::size_t t = 0; t < n; ++t) misses += std::abs(noisy_loss(S, theta, beta, delta, rng, ledger) - exact) > beta;
    const double rate = static_cast<double>(misses) / n;
    pass = pass && rate <= oracle::frequency_bound(delta, n);
    detail += fmt("; loss miss rate %.4f (advertised %.2f)", rate, delta);
  }
  {
    const double eps = 0.05;
    std::size_t audited = 0, unsound = 0;
    for (std::size_t m = 1; m <= 64; ++m) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> truth(m);
        for (auto& t : truth) t = rng.uniform(-1.0, 1.0);
        const NoisyValues noisy = [&](std::size_t k, QueryLedger& l) {
          l.q_X += 1;
          return truth[k] + rng.uniform(-eps, eps);
        };
        const auto r = approx_min_find(noisy, m, eps, 1e-2, 0.0, rng, ledger);
        if (r.failure_injected) continue;
        ++audited;
        if (truth[r.index] > *std::min_element(truth.begin(), truth.end()) + 2.0 * eps) ++unsound;
      }
    }
    pass = pass && unsound == 0;
    detail += fmt("; min-find audited %.0f success runs, %.0f unsound", audited, unsound);
  }
  return {pass, detail};
}

// 9. Distance audits over the grid plus random Hellinger sandwiches.
Outcome distance_audits() {
  std::size_t audits = 0, failures = 0;
  double worst_ratio = 0.0;
  for (std::size_t N : {100u, 1000u}) {
    for (std::size_t m = 1; m <= 50; ++m) {
      for (double p : {0.01, 0.05, 0.1}) {
        const auto a = distance_bound_audit(N, m, p);
        ++audits;
        if (!a.all_pass()) ++failures;
        if (a.bound_holmes > 0) worst_ratio = std::max(worst_ratio, a.tv_planted / a.bound_holmes);
      }
    }
  }
  std::mt19937_64 gen(9);
  std::exponential_distribution<double> e(1.0);
  std::size_t sandwich_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> p(20), q(20);
    double sp = 0, sq = 0;
    for (int k = 0; k < 20; ++k) {
      sp += p[k] = e(gen);
      sq += q[k] = e(gen);
    }
    for (int k = 0; k < 20; ++k) {
      p[k] /= sp;
      q[k] /= sq;
    }
    if (!hellinger_sandwich_holds(DiscreteDistribution(p), DiscreteDistribution(q))) ++sandwich_fail;
  }
  return {failures == 0 && sandwich_fail == 0,
          fmt("%.0f grid audits, %.0f failing; 1000 random sandwiches, %.0f failing; max TV/Holmes %.3f",
              audits, failures, sandwich_fail, worst_ratio)};
}

// 10. Sign recovery near theta* at d = 1000, then the Ridge baseline end to end.
Outcome ridge_recovery() {
  const std::size_t d = 1000;
  Rng rng(10);
  const IndexSet W = random_subset(d, d / 2, rng);
  const auto star = ridge_population_minimizer(d, W).theta_star;
  std::size_t worst = 0;
  double min_align = 1.0;
  for (int k = 0; k < 100; ++k) {
    const double alpha = rng.uniform(0.999, 1.0);
    auto u = random_ball_point(d, 1.0, false, rng);
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) dot += u[j] * star[j];
    for (std::size_t j = 0; j < d; ++j) u[j] -= dot * star[j];
    const double un = l2(u);
    std::vector<double> th(d);
    for (std::size_t j = 0; j < d; ++j) th[j] = alpha * star[j] + std::sqrt(1 - alpha * alpha) * u[j] / un;
    double align = 0.0;
    for (std::size_t j = 0; j < d; ++j) align += th[j] * star[j];
    min_align = std::min(min_align, align);
    worst = std::max(worst, sym_diff(W, recover_set_ridge(th)));
  }
  std::size_t ok = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto planted = gen_ridge_hidden(128, 64, 0.05, 100000, s);
    const auto r = ridge_solve_baseline(planted.samples, 0.1, 10000);
    ok += score_recovery(planted.W, recover_set_ridge(r.theta_dense)).pass;
  }
  return {worst <= 2 && min_align >= 0.999 - 1e-12 && ok >= 8,
          fmt("sampled alignment >= %.5f, max sign mismatches %.0f (bound 2); end-to-end %.0f/10 (need 8)",
              min_align, static_cast<double>(worst), static_cast<double>(ok))};
}

// 11. Reduction from the worst-case matrix with oracle solvers and the real solver.
Outcome esf_reduction() {
  const Rational p{1, 20};
  const double pv = p.value();
  const auto Xw = gen_worst_case(128, 10, p, 20000, WorstCaseVariant::WSF, 11);
  const LassoSolverFn perfect = [&](const SampleSet& S, double, std::uint64_t) {
    std::vector<double> theta(S.dim(), 0.0);
    for (std::size_t j = 0; j < S.dim(); ++j) {
      if (S.X.col(static_cast<Eigen::Index>(j)).mean() > pv) theta[j] = 2.0 * pv;
    }
    return theta;
  };
  const LassoSolverFn null = [](const SampleSet& S, double, std::uint64_t) {
    return std::vector<double>(S.dim(), 0.0);
  };
  const auto rp = esf_via_lasso(Xw, perfect, 0.1, 20000, 1, 15);
  const auto rn = esf_via_lasso(Xw, null, 0.1, 20000, 1, 15);
  const bool oracle_ok = rp.sym_diff == 0 && rn.sym_diff == Xw.W.size();

  const LassoSolverFn solver = [](const SampleSet& S, double eps, std::uint64_t seed) {
    return lasso_solve(S, eps, SolveMode::classical(), seed).theta_dense;
  };
  std::size_t exact = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto X = gen_worst_case(128, 10, p, 20000, WorstCaseVariant::WSF, s);
    exact += esf_via_lasso(X, solver, 0.1, 20000, mix_seed(s, 2), 15).sym_diff == 0;
  }
  return {oracle_ok && exact >= 8,
          fmt("perfect solver sym_diff %.0f; null solver sym_diff %.0f (w = 10); end-to-end exact %.0f/10 (need 8)",
              static_cast<double>(rp.sym_diff), static_cast<double>(rn.sym_diff),
              static_cast<double>(exact))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"FW convergence envelope", fw_envelope},
      {"curvature cap", curvature_cap},
      {"KP-tree equivalence", kp_tree_equivalence},
      {"closed-form population losses", population_losses},
      {"recovery geometry", recovery_geometry},
      {"end-to-end hidden-set recovery", end_to_end_recovery},
      {"query-count scaling", query_scaling},
      {"emulator guarantee rates", emulator_rates},
      {"distance audits", distance_audits},
      {"ridge recovery", ridge_recovery},
      {"worst-case reduction", esf_reduction},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
