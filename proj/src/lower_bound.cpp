#include "qlb/lower_bound.hpp"

#include "qlb/loss.hpp"
#include "qlb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlb {

namespace {

// pmfs are accurate to about 1e-12; inequalities are audited with that slack.
constexpr double kPmfTolerance = 1e-12;

constexpr std::uint64_t kRoundStream = 3;

DiscreteDistribution normalize_log(std::size_t size, std::size_t first,
                                   const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> pmf(size, 0.0);
  CompensatedSum total;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    pmf[first + k] = std::exp(log_weights[k] - top);
    total.add(pmf[first + k]);
  }
  const double z = total.value();
  for (double& v : pmf) v /= z;
  return DiscreteDistribution(std::move(pmf));
}

}  // namespace

IndexSet recover_set_lasso(const std::vector<double>& theta, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double threshold = eps / 3.0;
  IndexSet out;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (std::abs(theta[j]) >= threshold) out.push_back(j);
  }
  return out;
}

IndexSet recover_set_ridge(const std::vector<double>& theta) {
  IndexSet out;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] > 0.0) out.push_back(j);
  }
  return out;
}

std::size_t sym_diff(const IndexSet& a, const IndexSet& b) {
  IndexSet sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  IndexSet out;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::back_inserter(out));
  return out.size();
}

RecoveryResult score_recovery(const IndexSet& W, IndexSet W_hat) {
  std::sort(W_hat.begin(), W_hat.end());
  RecoveryResult r;
  r.sym_diff = sym_diff(W, W_hat);
  r.budget = static_cast<double>(W.size()) / 200.0;
  r.pass = static_cast<double>(r.sym_diff) <= r.budget;
  r.W_hat = std::move(W_hat);
  return r;
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw std::invalid_argument("distribution has empty support");
  CompensatedSum total;
  for (double v : pmf_) {
    if (!(v >= 0.0)) throw std::invalid_argument("distribution has a negative or NaN entry");
    total.add(v);
  }
  if (std::abs(total.value() - 1.0) > kPmfTolerance) {
    throw std::invalid_argument("distribution does not sum to 1");
  }
}

double hellinger(const DiscreteDistribution& P, const DiscreteDistribution& Q) {
  if (P.size() != Q.size()) throw std::invalid_argument("hellinger: support sizes differ");
  CompensatedSum affinity;
  for (std::size_t k = 0; k < P.size(); ++k) affinity.add(std::sqrt(P[k] * Q[k]));
  return std::sqrt(std::max(0.0, 1.0 - affinity.value()));
}

double tv(const DiscreteDistribution& P, const DiscreteDistribution& Q) {
  if (P.size() != Q.size()) throw std::invalid_argument("tv: support sizes differ");
  CompensatedSum total;
  for (std::size_t k = 0; k < P.size(); ++k) total.add(std::abs(P[k] - Q[k]));
  return std::min(1.0, 0.5 * total.value());
}

DiscreteDistribution hyp_pmf(std::size_t N, std::size_t L, std::size_t m) {
  if (L > N || m > N) throw std::invalid_argument("hyp_pmf: requires L <= N and m <= N");
  const std::size_t lo = m > N - L ? m - (N - L) : 0;
  const std::size_t hi = std::min(m, L);
  // log pmf(k+1) - log pmf(k) = log((L-k)(m-k)) - log((k+1)(N-L-m+k+1)).
  std::vector<double> logw{0.0};
  for (std::size_t k = lo; k < hi; ++k) {
    const double num = static_cast<double>(L - k) * static_cast<double>(m - k);
    const double den = static_cast<double>(k + 1) * static_cast<double>(N - L - m + k + 1);
    logw.push_back(logw.back() + std::log(num) - std::log(den));
  }
  return normalize_log(m + 1, lo, logw);
}

DiscreteDistribution bin_pmf(std::size_t m, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("bin_pmf: q must lie in [0, 1]");
  std::vector<double> pmf(m + 1, 0.0);
  if (q == 0.0 || q == 1.0) {
    pmf[q == 0.0 ? 0 : m] = 1.0;
    return DiscreteDistribution(std::move(pmf));
  }
  std::vector<double> logw{0.0};
  const double odds = std::log(q) - std::log1p(-q);
  for (std::size_t k = 0; k < m; ++k) {
    logw.push_back(logw.back() + std::log(static_cast<double>(m - k)) -
                   std::log(static_cast<double>(k + 1)) + odds);
  }
  return normalize_log(m + 1, 0, logw);
}

bool hellinger_sandwich_holds(const DiscreteDistribution& P, const DiscreteDistribution& Q) {
  const double h = hellinger(P, Q);
  const double t = tv(P, Q);
  return h * h <= t + kPmfTolerance && t <= std::sqrt(2.0) * h + kPmfTolerance;
}

DistanceAudit distance_bound_audit(std::size_t N, std::size_t m, double p) {
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("N must be even and at least 2");
  if (m < 1 || m > N / 2) throw std::invalid_argument("m must lie in [1, N/2]");
  if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
  const double pN = p * static_cast<double>(N);
  if (std::abs(pN - std::round(pN)) > 1e-9) throw std::invalid_argument("pN must be an integer");
  const auto shift = static_cast<std::size_t>(std::llround(pN));
  const std::size_t half = N / 2;

  DistanceAudit a;
  a.N = N;
  a.m = m;
  a.p = p;
  const double md = static_cast<double>(m);
  a.bound_holmes = (md - 1.0) / (static_cast<double>(N) - 1.0);
  a.bound_b4 = 2.0 * a.bound_holmes + p * std::sqrt(3.0 * md);

  const auto hyp_balanced = hyp_pmf(N, half, m);
  const auto hyp_planted = hyp_pmf(N, half + shift, m);
  const auto bin_balanced = bin_pmf(m, 0.5);
  const auto bin_planted =
      bin_pmf(m, static_cast<double>(half + shift) / static_cast<double>(N));

  a.tv_balanced = tv(hyp_balanced, bin_balanced);
  a.hellinger_balanced = hellinger(hyp_balanced, bin_balanced);
  a.tv_planted = tv(hyp_planted, bin_planted);
  a.hellinger_planted = hellinger(hyp_planted, bin_planted);
  a.tv_hyp_hyp = tv(hyp_balanced, hyp_planted);
  a.hellinger_hyp_hyp = hellinger(hyp_balanced, hyp_planted);

  a.pass_holmes_balanced = a.tv_balanced <= a.bound_holmes + kPmfTolerance;
  a.pass_holmes_planted = a.tv_planted <= a.bound_holmes + kPmfTolerance;
  a.pass_sandwich_balanced = hellinger_sandwich_holds(hyp_balanced, bin_balanced);
  a.pass_sandwich_planted = hellinger_sandwich_holds(hyp_planted, bin_planted);
  a.pass_sandwich_hyp_hyp = hellinger_sandwich_holds(hyp_balanced, hyp_planted);
  a.pass_b4 = a.tv_hyp_hyp <= a.bound_b4 + kPmfTolerance;
  return a;
}

LassoSolverFn repeat_best(LassoSolverFn solver, std::size_t reps) {
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  return [solver = std::move(solver), reps](const SampleSet& samples, double eps,
                                            std::uint64_t seed) {
    std::vector<double> best;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < reps; ++r) {
      auto theta = solver(samples, eps, mix_seed(seed, r));
      const double l = empirical_loss(samples, theta);
      if (l < best_loss) {
        best_loss = l;
        best = std::move(theta);
      }
    }
    return best;
  };
}

std::size_t default_vote_rounds(std::size_t d) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(100.0 * std::log2(static_cast<double>(d)))));
}

RecoveryResult esf_via_lasso(const WorstCaseMatrix& Xw, const LassoSolverFn& solver, double eps,
                             std::size_t M, std::uint64_t seed,
                             std::optional<std::size_t> rounds) {
  if (Xw.variant != WorstCaseVariant::WSF) throw std::invalid_argument("esf_via_lasso needs a WSF matrix");
  if (!solver) throw std::invalid_argument("esf_via_lasso: solver is required");
  const std::size_t d = Xw.dim();
  const std::size_t U = rounds.value_or(default_vote_rounds(d));
  if (U < 1) throw std::invalid_argument("at least one voting round is required");
  const double threshold = 2.0 * Xw.p.value() / 3.0;

  std::vector<std::size_t> votes(d, 0);
  std::vector<IndexSet> per_round;
  std::uint64_t reads = 0;
  for (std::size_t u = 0; u < U; ++u) {
    Rng rng = Rng::stream(seed, kRoundStream, u);
    const auto perm = random_permutation(d, rng);
    const auto resampled = worst_to_average_permuted(Xw, M, perm, rng.split());
    for (std::size_t c : resampled.distinct_reads) reads += c;
    std::vector<double> theta;
    try {
      theta = solver(resampled.samples, eps, rng.split());
    } catch (const std::exception& e) {
      throw std::runtime_error("esf_via_lasso round " + std::to_string(u) + ": " + e.what());
    }
    if (theta.size() != d) {
      throw std::runtime_error("esf_via_lasso round " + std::to_string(u) +
                               ": solver returned a vector of the wrong dimension");
    }
    IndexSet found;
    for (std::size_t jp = 0; jp < d; ++jp) {
      if (std::abs(theta[jp]) >= threshold) found.push_back(perm[jp]);
    }
    std::sort(found.begin(), found.end());
    for (std::size_t j : found) ++votes[j];
    per_round.push_back(std::move(found));
  }
  const std::size_t needed = (U + 1) / 2;
  IndexSet W_hat;
  for (std::size_t j = 0; j < d; ++j) {
    if (votes[j] >= needed) W_hat.push_back(j);
  }
  RecoveryResult result = score_recovery(Xw.W, std::move(W_hat));
  result.rounds = std::move(per_round);
  result.source_reads = reads;
  return result;
}

}  // namespace qlb
