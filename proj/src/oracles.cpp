#include "qlb/oracles.hpp"

#include "qlb/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qlb {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t ceil_log2_at_least_one(std::size_t n) {
  std::uint64_t bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return std::max<std::uint64_t>(1, bits);
}

void check_beta_delta(double beta, double delta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

// Slack on the l1 precondition for iterates built by floating-point convex combinations.
constexpr double kL1Slack = 1e-9;

}  // namespace

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kMax / b ? kMax : a * b;
}

std::uint64_t sat_ceil(double x) {
  if (!(x > 0.0)) return 0;
  const double c = std::ceil(x);
  if (c >= 18446744073709551615.0) return kMax;
  return static_cast<std::uint64_t>(c);
}

QueryLedger& QueryLedger::operator+=(const QueryLedger& other) {
  q_X = sat_add(q_X, other.q_X);
  q_y = sat_add(q_y, other.q_y);
  q_tree = sat_add(q_tree, other.q_tree);
  gates = sat_add(gates, other.gates);
  return *this;
}

QueryLedger QueryLedger::scaled(std::uint64_t times) const {
  return {sat_mul(q_X, times), sat_mul(q_y, times), sat_mul(q_tree, times),
          sat_mul(gates, times)};
}

LedgerReport ledger_report(const QueryLedger& ledger) {
  const std::uint64_t input = sat_add(ledger.q_X, ledger.q_y);
  return {ledger.q_X, ledger.q_y, ledger.q_tree, ledger.gates, input,
          sat_add(input, ledger.q_tree)};
}

EmulatorConfig EmulatorConfig::analysis(double eps, std::size_t d) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  const double L = std::log2(1.0 / eps);
  const double dd = static_cast<double>(d);
  EmulatorConfig cfg;
  cfg.c_ae = 1.0;
  cfg.c_mf = 1000.0;
  cfg.c_grad = 1.0;
  cfg.c_fail = 1000.0;
  cfg.delta_grad = eps * eps / (2.0 * dd * 1e20 * std::pow(L, 6));
  cfg.delta_min_find = eps / (10000.0 * L);
  cfg.delta_loss_step = 1.0 / (2.0 * dd * 1e16);
  cfg.delta_min_find_step = 1e-4;
  cfg.delta_loss_final = 1.0 / (40.0 * L);
  return cfg;
}

void EmulatorConfig::validate() const {
  if (!(c_ae >= 1.0) || !(c_mf >= 1.0) || !(c_grad >= 1.0) || !(c_fail >= 1.0)) {
    throw std::invalid_argument("emulator constants must be at least 1");
  }
  for (double delta : {delta_grad, delta_min_find, delta_loss_step, delta_min_find_step,
                       delta_loss_final}) {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("emulator failure probabilities must lie in (0, 1)");
    }
  }
}

double amp_estimate_accuracy(double a, std::uint64_t M) {
  const double m = static_cast<double>(M);
  return std::sqrt(a * (1.0 - a)) / m + 1.0 / (m * m);
}

double amp_estimate(double a, std::uint64_t M, Rng& rng, QueryLedger& ledger,
                    const EmulatorConfig& cfg, LedgerField field) {
  if (M == 0) throw std::invalid_argument("amp_estimate: M must be positive");
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("amp_estimate: a must lie in [0, 1]");
  const std::uint64_t cost = sat_ceil(cfg.c_ae * static_cast<double>(M));
  QueryLedger charge;
  switch (field) {
    case LedgerField::X: charge.q_X = cost; break;
    case LedgerField::Y: charge.q_y = cost; break;
    case LedgerField::Tree: charge.q_tree = cost; break;
  }
  ledger += charge;
  if (rng.uniform() < 0.9) {
    const double eps = amp_estimate_accuracy(a, M);
    const double lo = std::max(0.0, a - eps);
    const double hi = std::min(1.0, a + eps);
    return rng.uniform(lo, hi);
  }
  return rng.uniform();
}

std::vector<std::size_t> grover_find_all(const std::function<bool(std::size_t)>& predicate,
                                         std::size_t d, std::size_t u, QueryLedger& ledger) {
  std::vector<std::size_t> found;
  for (std::size_t j = 0; j < d; ++j) {
    if (predicate(j)) found.push_back(j);
  }
  if (found.size() > u) {
    throw std::logic_error("grover_find_all: " + std::to_string(found.size()) +
                           " marked indices exceed the bound u = " + std::to_string(u));
  }
  const double du = static_cast<double>(d) * static_cast<double>(u);
  ledger.q_X = sat_add(ledger.q_X, sat_ceil(std::numbers::pi / 2.0 * std::sqrt(du) +
                                            static_cast<double>(u)));
  return found;
}

QueryLedger estimate_cost(double beta, double delta, std::size_t N, std::size_t d,
                          const EmulatorConfig& cfg) {
  check_beta_delta(beta, delta);
  const std::uint64_t K = sat_ceil(cfg.c_grad * std::log2(1.0 / delta) / beta);
  const std::uint64_t Ld = ceil_log2_at_least_one(d);
  const std::uint64_t LN = ceil_log2_at_least_one(N);
  QueryLedger cost;
  cost.q_tree = sat_mul(K, Ld);
  cost.q_X = sat_mul(K, (LN + 1) / 2);
  cost.q_y = sat_mul(K, LN / 2);
  cost.gates = sat_mul(K, Ld + LN);
  if (cfg.qram_free) cost.gates = sat_add(cost.gates, sat_mul(cost.q_tree, Ld));
  return cost;
}

double emulate_estimate(double center, double beta, double delta, double garbage_lo,
                        double garbage_hi, Rng& rng, bool* failed) {
  const bool fail = rng.uniform() < delta;
  if (failed) *failed = fail;
  if (fail) return rng.uniform(garbage_lo, garbage_hi);
  return center + rng.uniform(-beta, beta);
}

double noisy_gradient_entry(const SampleSet& S, const KPTree& theta, std::size_t j, double beta,
                            double delta, Rng& rng, QueryLedger& ledger,
                            const EmulatorConfig& cfg) {
  check_beta_delta(beta, delta);
  if (j >= S.dim()) throw std::out_of_range("noisy_gradient_entry: index out of range");
  if (theta.l1_norm() > 1.0 + kL1Slack) {
    throw std::invalid_argument("noisy_gradient_entry: theta lies outside the l1 ball");
  }
  const double exact = empirical_gradient(S, theta)[j];
  ledger += estimate_cost(beta, delta, S.rows(), S.dim(), cfg);
  return emulate_estimate(exact, beta, delta, exact - 8.0, exact + 8.0, rng);
}

double noisy_loss(const SampleSet& S, const KPTree& theta, double beta, double delta, Rng& rng,
                  QueryLedger& ledger, const EmulatorConfig& cfg) {
  check_beta_delta(beta, delta);
  if (theta.l1_norm() > 1.0 + kL1Slack) {
    throw std::invalid_argument("noisy_loss: theta lies outside the l1 ball");
  }
  const double exact = empirical_loss(S, theta);
  ledger += estimate_cost(beta, delta, S.rows(), S.dim(), cfg);
  return emulate_estimate(exact, beta, delta, 0.0, 4.0, rng);
}

std::uint64_t min_find_applications(std::size_t m, double delta1, const EmulatorConfig& cfg) {
  return sat_ceil(cfg.c_mf * std::sqrt(static_cast<double>(m)) * std::log2(1.0 / delta1));
}

double min_find_failure_probability(std::size_t m, double delta1, double delta2,
                                    const EmulatorConfig& cfg) {
  const double term =
      cfg.c_fail * std::log2(1.0 / delta1) * std::sqrt(2.0 * static_cast<double>(m) * delta2);
  return std::min(1.0, delta1 + std::min(1.0, term));
}

MinFindResult approx_min_find(const NoisyValues& values, std::size_t m, double eps, double delta1,
                              double delta2, Rng& rng, QueryLedger& ledger,
                              const EmulatorConfig& cfg) {
  if (m == 0) throw std::invalid_argument("approx_min_find: m must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("approx_min_find: eps must be positive");
  if (!(delta1 > 0.0 && delta1 < 1.0)) {
    throw std::invalid_argument("approx_min_find: delta1 must lie in (0, 1)");
  }
  if (!(delta2 >= 0.0 && delta2 < 1.0)) {
    throw std::invalid_argument("approx_min_find: delta2 must lie in [0, 1)");
  }
  MinFindResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    QueryLedger scratch;
    const double v = values(k, scratch);
    result.per_application.q_X = std::max(result.per_application.q_X, scratch.q_X);
    result.per_application.q_y = std::max(result.per_application.q_y, scratch.q_y);
    result.per_application.q_tree = std::max(result.per_application.q_tree, scratch.q_tree);
    result.per_application.gates = std::max(result.per_application.gates, scratch.gates);
    if (v < best) {
      best = v;
      result.index = k;
    }
  }
  if (rng.uniform() < min_find_failure_probability(m, delta1, delta2, cfg)) {
    result.failure_injected = true;
    result.index = static_cast<std::size_t>(rng.below(m));
  }
  const std::uint64_t apps = min_find_applications(m, delta1, cfg);
  QueryLedger charge = result.per_application.scaled(apps);
  charge.gates = sat_add(charge.gates, sat_mul(apps, ceil_log2_at_least_one(m)));
  ledger += charge;
  return result;
}

}  // namespace qlb
