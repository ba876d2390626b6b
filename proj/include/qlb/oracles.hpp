#pragma once

#include "qlb/dataset.hpp"
#include "qlb/kp_tree.hpp"
#include "qlb/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qlb {

/// Charged-query counters. Additions saturate instead of wrapping.
struct QueryLedger {
  std::uint64_t q_X = 0;
  std::uint64_t q_y = 0;
  std::uint64_t q_tree = 0;
  std::uint64_t gates = 0;

  QueryLedger& operator+=(const QueryLedger& other);
  /// Every counter multiplied by `times` (saturating).
  QueryLedger scaled(std::uint64_t times) const;
  void reset() { *this = QueryLedger{}; }
  bool operator==(const QueryLedger&) const = default;
};

struct LedgerReport {
  std::uint64_t q_X, q_y, q_tree, gates;
  std::uint64_t input_queries;  ///< q_X + q_y
  std::uint64_t total_queries;  ///< q_X + q_y + q_tree
};

LedgerReport ledger_report(const QueryLedger& ledger);

/// Saturating helpers used by the cost model.
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
/// ceil(x) clamped into the uint64 range.
std::uint64_t sat_ceil(double x);

enum class LedgerField { X, Y, Tree };

/// Emulator constants and confidence levels.
struct EmulatorConfig {
  double c_ae = 1.0;
  double c_mf = 8.0;
  double c_grad = 1.0;
  /// Constant of the min-finding failure term c_fail * log(1/delta1) * sqrt(2 m delta2).
  double c_fail = 1000.0;
  /// Per-call failure probability of gradient-entry estimates inside min-finding.
  double delta_grad = 1e-18;
  /// Min-finding failure probability during Frank-Wolfe steps.
  double delta_min_find = 1e-3;
  /// Per-call failure probability of the one-step candidate loss estimates.
  double delta_loss_step = 1e-18;
  /// Min-finding failure probability for the one-step candidate.
  double delta_min_find_step = 1e-3;
  /// Failure probability of each final candidate loss estimate.
  double delta_loss_final = 1e-6;
  /// Charge depth gates per tree query when the QRAM-free construction is modelled.
  bool qram_free = false;

  /// Constants used by the analysis for target accuracy eps in dimension d.
  static EmulatorConfig analysis(double eps, std::size_t d);
  void validate() const;
};

/// Additive accuracy of amplitude estimation with M applications.
double amp_estimate_accuracy(double a, std::uint64_t M);

/// Emulated amplitude estimation: in-band uniform with probability 9/10,
/// uniform on [0,1] otherwise. Charges ceil(c_ae * M) to `field`.
double amp_estimate(double a, std::uint64_t M, Rng& rng, QueryLedger& ledger,
                    const EmulatorConfig& cfg = {}, LedgerField field = LedgerField::X);

/// Exact set {j < d : predicate(j)}; charges ceil(pi/2 sqrt(d u) + u) X-queries.
/// Throws std::logic_error when more than u indices qualify.
std::vector<std::size_t> grover_find_all(const std::function<bool(std::size_t)>& predicate,
                                         std::size_t d, std::size_t u, QueryLedger& ledger);

/// Charge of one beta-accurate, delta-confident estimate on an N x d instance.
QueryLedger estimate_cost(double beta, double delta, std::size_t N, std::size_t d,
                          const EmulatorConfig& cfg);

/// Success with probability 1 - delta: center + U(-beta, beta); otherwise a draw
/// from U(garbage_lo, garbage_hi). Shared noise model of the estimators.
double emulate_estimate(double center, double beta, double delta, double garbage_lo,
                        double garbage_hi, Rng& rng, bool* failed = nullptr);

/// Noisy estimate of the j-th gradient entry at theta.
double noisy_gradient_entry(const SampleSet& S, const KPTree& theta, std::size_t j, double beta,
                            double delta, Rng& rng, QueryLedger& ledger,
                            const EmulatorConfig& cfg = {});

/// Noisy estimate of L_S(theta).
double noisy_loss(const SampleSet& S, const KPTree& theta, double beta, double delta, Rng& rng,
                  QueryLedger& ledger, const EmulatorConfig& cfg = {});

/// Noisy evaluation of index k; charges its own cost to the ledger it is given.
using NoisyValues = std::function<double(std::size_t k, QueryLedger& ledger)>;

struct MinFindResult {
  std::size_t index = 0;
  bool failure_injected = false;
  /// Per-application cost measured from the evaluations.
  QueryLedger per_application;
};

/// Emulated approximate minimum finding over m noisy values. `delta2` is the
/// closures' per-call failure probability, used by the injected failure rate.
MinFindResult approx_min_find(const NoisyValues& values, std::size_t m, double eps, double delta1,
                              double delta2, Rng& rng, QueryLedger& ledger,
                              const EmulatorConfig& cfg = {});

/// Number of closure applications charged by approx_min_find.
std::uint64_t min_find_applications(std::size_t m, double delta1, const EmulatorConfig& cfg);

/// Probability that approx_min_find replaces its answer with a random index.
double min_find_failure_probability(std::size_t m, double delta1, double delta2,
                                    const EmulatorConfig& cfg);

}  // namespace qlb
