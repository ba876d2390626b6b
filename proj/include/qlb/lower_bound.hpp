#pragma once

#include "qlb/dataset.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qlb {

/// {j : |theta_j| >= eps / 3}.
IndexSet recover_set_lasso(const std::vector<double>& theta, double eps);

/// {j : theta_j > 0}.
IndexSet recover_set_ridge(const std::vector<double>& theta);

/// |a symmetric-difference b|; inputs need not be sorted.
std::size_t sym_diff(const IndexSet& a, const IndexSet& b);

struct RecoveryResult {
  IndexSet W_hat;
  std::size_t sym_diff = 0;
  double budget = 0.0;  ///< w / 200
  bool pass = false;    ///< sym_diff <= budget
  /// Per-round recovered sets (esf_via_lasso only).
  std::vector<IndexSet> rounds;
  /// Distinct source-matrix entries read across all rounds.
  std::uint64_t source_reads = 0;
};

/// Scores W_hat against the planted W.
RecoveryResult score_recovery(const IndexSet& W, IndexSet W_hat);

/// Probability vector over {0, ..., K-1}.
class DiscreteDistribution {
 public:
  /// Validates non-negativity and a total of 1 within 1e-12.
  explicit DiscreteDistribution(std::vector<double> pmf);
  const std::vector<double>& pmf() const { return pmf_; }
  std::size_t size() const { return pmf_.size(); }
  double operator[](std::size_t k) const { return pmf_[k]; }

 private:
  std::vector<double> pmf_;
};

double hellinger(const DiscreteDistribution& P, const DiscreteDistribution& Q);
double tv(const DiscreteDistribution& P, const DiscreteDistribution& Q);

/// Number of marked balls among m drawn without replacement from N with L marked.
DiscreteDistribution hyp_pmf(std::size_t N, std::size_t L, std::size_t m);
DiscreteDistribution bin_pmf(std::size_t m, double q);

struct DistanceAudit {
  std::size_t N = 0;
  std::size_t m = 0;
  double p = 0.0;
  double bound_holmes = 0.0;  ///< (m-1)/(N-1)
  double bound_b4 = 0.0;      ///< 2(m-1)/(N-1) + p sqrt(3m)
  /// Hyp(N, N/2, m) vs Bin(m, 1/2).
  double tv_balanced = 0.0;
  double hellinger_balanced = 0.0;
  /// Hyp(N, N/2 + pN, m) vs Bin(m, 1/2 + p).
  double tv_planted = 0.0;
  double hellinger_planted = 0.0;
  /// Hyp(N, N/2, m) vs Hyp(N, N/2 + pN, m).
  double tv_hyp_hyp = 0.0;
  double hellinger_hyp_hyp = 0.0;

  bool pass_holmes_balanced = false;
  bool pass_holmes_planted = false;
  bool pass_sandwich_balanced = false;
  bool pass_sandwich_planted = false;
  bool pass_sandwich_hyp_hyp = false;
  bool pass_b4 = false;

  bool all_pass() const {
    return pass_holmes_balanced && pass_holmes_planted && pass_sandwich_balanced &&
           pass_sandwich_planted && pass_sandwich_hyp_hyp && pass_b4;
  }
};

/// d_H^2 <= d_TV <= sqrt(2) d_H, checked with the pmf accuracy as slack.
bool hellinger_sandwich_holds(const DiscreteDistribution& P, const DiscreteDistribution& Q);

/// Exact distances against the Holmes and Hyp-vs-Hyp bounds. Requires m <= N/2
/// and pN integral.
DistanceAudit distance_bound_audit(std::size_t N, std::size_t m, double p);

/// Dense coefficients from a Lasso solve on the given samples.
using LassoSolverFn =
    std::function<std::vector<double>(const SampleSet& samples, double eps, std::uint64_t seed)>;

/// Runs `reps` independent solves and keeps the one with the lowest empirical loss.
LassoSolverFn repeat_best(LassoSolverFn solver, std::size_t reps);

/// ceil(100 log2 d) voting rounds.
std::size_t default_vote_rounds(std::size_t d);

/// Majority vote over rounds of permute, resample, solve, threshold at 2p/3.
RecoveryResult esf_via_lasso(const WorstCaseMatrix& Xw, const LassoSolverFn& solver, double eps,
                             std::size_t M, std::uint64_t seed,
                             std::optional<std::size_t> rounds = std::nullopt);

}  // namespace qlb
