#include "qlb/frank_wolfe.hpp"

#include "qlb/loss.hpp"
#include "qlb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlb {

namespace {

// Exact recomputation period for the incrementally maintained moments.
constexpr std::size_t kRefreshPeriod = 512;

// Relative slack for the subproblem audit, absorbing rounding in <s, g>.
constexpr double kAuditSlack = 1e-12;

constexpr std::uint64_t kSelectionStream = 0xf1a1;

std::vector<std::pair<std::size_t, double>> entries(const KPTree& theta) {
  std::vector<std::pair<std::size_t, double>> nz;
  nz.reserve(theta.support_size());
  theta.for_each_entry([&](std::size_t j, double v) { nz.emplace_back(j, v); });
  return nz;
}

Vertex vertex_of(std::size_t k) { return {k / 2, k % 2 == 0 ? 1 : -1}; }

void check_lasso_input(const SampleSet& S) {
  if (S.regime != NormRegime::LInf) throw std::invalid_argument("Lasso requires an LInf sample set");
  if (!validate(S).empty()) throw std::invalid_argument("sample set violates the LInf regime");
}

// Moments of the iterate: q = G theta, a = theta' G theta, b = c' theta.
class FwState {
 public:
  explicit FwState(const LassoProblem& problem)
      : problem_(problem), q_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.dim()))) {}

  double loss() const { return a_ - 2.0 * b_ + problem_.target_energy(); }

  std::vector<double> gradient() const {
    std::vector<double> g(problem_.dim());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      g[j] = 2.0 * (q_(jj) - problem_.moment()(jj));
    }
    return g;
  }

  // Mirrors theta <- (1 - tau) theta + tau * s; `theta` is the updated tree.
  void step(const KPTree& theta, const Vertex& s, double tau) {
    if (++steps_ % kRefreshPeriod == 0) {
      refresh(theta);
      return;
    }
    const auto j = static_cast<Eigen::Index>(s.index);
    const double sigma = s.sign;
    const double keep = 1.0 - tau;
    const auto& G = problem_.gram();
    a_ = keep * keep * a_ + 2.0 * keep * tau * sigma * q_(j) + tau * tau * G(j, j);
    b_ = keep * b_ + tau * sigma * problem_.moment()(j);
    q_ = keep * q_ + (tau * sigma) * G.col(j);
  }

  void refresh(const KPTree& theta) {
    const auto& G = problem_.gram();
    const auto nz = entries(theta);
    q_.setZero();
    b_ = 0.0;
    for (const auto& [j, v] : nz) {
      const auto jj = static_cast<Eigen::Index>(j);
      q_ += v * G.col(jj);
      b_ += v * problem_.moment()(jj);
    }
    a_ = 0.0;
    for (const auto& [j, v] : nz) a_ += v * q_(static_cast<Eigen::Index>(j));
  }

 private:
  const LassoProblem& problem_;
  Eigen::VectorXd q_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::size_t steps_ = 0;
};

}  // namespace

const char* to_string(ModeKind kind) {
  return kind == ModeKind::ClassicalExact ? "classical" : "quantum";
}

Vertex lmo_l1_exact(const std::vector<double>& g) {
  if (g.empty()) throw std::invalid_argument("lmo_l1_exact: empty gradient");
  std::size_t best = 0;
  for (std::size_t j = 1; j < g.size(); ++j) {
    if (std::abs(g[j]) > std::abs(g[best])) best = j;
  }
  return {best, g[best] >= 0.0 ? -1 : 1};
}

SolveReport fw_generic(const FwOracles& oracles, std::size_t T, double C, KPTree theta0) {
  if (!oracles.direction) throw std::invalid_argument("fw_generic: direction oracle is required");
  if (!(C > 0.0)) throw std::invalid_argument("fw_generic: C must be positive");
  SolveReport report;
  report.theta = std::move(theta0);
  report.trace.reserve(T + 1);
  KPTree& theta = report.theta;
  for (std::size_t t = 0; t < T; ++t) {
    TraceEntry entry;
    entry.t = t;
    entry.tau = 2.0 / static_cast<double>(t + 2);
    entry.tolerance = oracles.tolerance ? oracles.tolerance(t) : entry.tau * C / 4.0;
    if (oracles.objective) entry.objective = oracles.objective(theta);
    const Vertex s = oracles.direction(theta, t, entry.tolerance);
    if (s.index >= theta.dim() || (s.sign != 1 && s.sign != -1)) {
      throw std::logic_error("fw_generic: direction oracle returned an invalid vertex");
    }
    entry.direction = s;
    if (oracles.exact_gradient) {
      const auto g = oracles.exact_gradient(theta);
      double gmax = 0.0;
      for (double v : g) gmax = std::max(gmax, std::abs(v));
      const double value = s.sign * g[s.index];
      const bool ok = value <= -gmax + entry.tolerance + kAuditSlack * (1.0 + gmax);
      entry.within_tolerance = ok;
      if (!ok) ++report.subproblem_violations;
    }
    if (entry.tau == 1.0) {
      theta = KPTree(theta.dim());
      theta.update(1.0, static_cast<double>(s.sign), s.index);
    } else {
      theta.update(1.0 - entry.tau, entry.tau * s.sign, s.index);
    }
    if (oracles.on_step) oracles.on_step(theta, s, entry.tau);
    report.trace.push_back(entry);
  }
  TraceEntry last;
  last.t = T;
  if (oracles.objective) last.objective = oracles.objective(theta);
  report.trace.push_back(last);
  report.iterations = T;
  report.theta_dense = theta.to_dense();
  report.objective =
      last.objective ? *last.objective : std::numeric_limits<double>::quiet_NaN();
  return report;
}

SolveReport fw_generic(const std::function<std::vector<double>(const KPTree&)>& grad_oracle,
                       const std::function<Vertex(const std::vector<double>&, double)>& lmo,
                       std::size_t T, double C, KPTree theta0) {
  FwOracles oracles;
  oracles.direction = [&](const KPTree& theta, std::size_t, double tolerance) {
    return lmo(grad_oracle(theta), tolerance);
  };
  return fw_generic(oracles, T, C, std::move(theta0));
}

LassoProblem::LassoProblem(const SampleSet& S) : N_(S.rows()), d_(S.dim()) {
  if (N_ < 1 || d_ < 1) throw std::invalid_argument("LassoProblem: empty sample set");
  if (static_cast<std::size_t>(S.y.size()) != N_) {
    throw std::invalid_argument("LassoProblem: y length differs from the number of rows");
  }
  const double inv_n = 1.0 / static_cast<double>(N_);
  const auto d = static_cast<Eigen::Index>(d_);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(d, d);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(S.X.transpose(), inv_n);
  G_ = lower.selfadjointView<Eigen::Lower>();
  c_ = inv_n * (S.X.transpose() * S.y);
  yy_ = inv_n * S.y.squaredNorm();
}

double LassoProblem::loss(const KPTree& theta) const {
  if (theta.dim() != d_) throw std::invalid_argument("LassoProblem::loss: dimension mismatch");
  const auto nz = entries(theta);
  double quad = 0.0;
  double lin = 0.0;
  for (const auto& [j, v] : nz) {
    const auto jj = static_cast<Eigen::Index>(j);
    lin += v * c_(jj);
    double row = 0.0;
    for (const auto& [k, u] : nz) row += G_(jj, static_cast<Eigen::Index>(k)) * u;
    quad += v * row;
  }
  return quad - 2.0 * lin + yy_;
}

double LassoProblem::loss(const std::vector<double>& theta) const {
  if (theta.size() != d_) throw std::invalid_argument("LassoProblem::loss: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> t(theta.data(), static_cast<Eigen::Index>(d_));
  return t.dot(G_ * t) - 2.0 * c_.dot(t) + yy_;
}

double LassoProblem::vertex_loss(std::size_t j, int sign, double scale) const {
  const auto jj = static_cast<Eigen::Index>(j);
  return scale * scale * G_(jj, jj) - 2.0 * sign * scale * c_(jj) + yy_;
}

std::vector<double> LassoProblem::gradient(const KPTree& theta) const {
  Eigen::VectorXd q = -c_;
  for (const auto& [j, v] : entries(theta)) q += v * G_.col(static_cast<Eigen::Index>(j));
  std::vector<double> g(d_);
  for (std::size_t j = 0; j < d_; ++j) g[j] = 2.0 * q(static_cast<Eigen::Index>(j));
  return g;
}

std::size_t fw_iterations(double C, double eps) {
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  return 6 * static_cast<std::size_t>(std::ceil(C / eps));
}

std::vector<double> curvature_ladder(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const int last = -static_cast<int>(std::ceil(std::log2(1.0 / eps))) - 1;
  std::vector<double> ladder;
  for (int e = 3; e >= last; --e) ladder.push_back(std::ldexp(1.0, e));
  return ladder;
}

SolveReport lasso_fw_with_guess(const SampleSet& S, double C, double eps, const SolveMode& mode,
                                std::uint64_t seed) {
  check_lasso_input(S);
  return lasso_fw_with_guess(LassoProblem(S), C, eps, mode, seed);
}

SolveReport lasso_fw_with_guess(const LassoProblem& problem, double C, double eps,
                                const SolveMode& mode, std::uint64_t seed) {
  const std::size_t T = fw_iterations(C, eps);
  const std::size_t d = problem.dim();
  const std::size_t N = problem.rows();
  const bool quantum = mode.kind == ModeKind::QuantumEmulated;
  if (quantum) mode.config.validate();

  FwState state(problem);
  QueryLedger ledger;
  Rng rng(seed);
  const double beta = eps / 20.0;
  const QueryLedger entry_cost =
      quantum ? estimate_cost(beta, mode.config.delta_grad, N, d, mode.config) : QueryLedger{};
  const std::uint64_t gradient_reads = sat_mul(N, d + 1);
  if (!quantum) ledger.q_y = N;

  FwOracles oracles;
  oracles.tolerance = [C](std::size_t t) { return C / static_cast<double>(8 * t + 16); };
  oracles.objective = [&](const KPTree&) { return state.loss(); };
  oracles.exact_gradient = [&](const KPTree&) { return state.gradient(); };
  oracles.on_step = [&](const KPTree& theta, const Vertex& s, double tau) {
    state.step(theta, s, tau);
    ledger.gates = sat_add(ledger.gates, theta.last_touched());
  };
  if (!quantum) {
    oracles.direction = [&](const KPTree&, std::size_t, double) {
      ledger.q_X = sat_add(ledger.q_X, gradient_reads);
      ledger.gates = sat_add(ledger.gates, gradient_reads);
      return lmo_l1_exact(state.gradient());
    };
  } else {
    oracles.direction = [&](const KPTree&, std::size_t, double) {
      const auto g = state.gradient();
      const NoisyValues values = [&](std::size_t k, QueryLedger& charged) {
        const Vertex s = vertex_of(k);
        const double center = s.sign * g[s.index];
        charged += entry_cost;
        return emulate_estimate(center, beta, mode.config.delta_grad, center - 8.0, center + 8.0,
                                rng);
      };
      const auto found = approx_min_find(values, 2 * d, beta, mode.config.delta_min_find,
                                         mode.config.delta_grad, rng, ledger, mode.config);
      return vertex_of(found.index);
    };
  }

  SolveReport report = fw_generic(oracles, T, C, KPTree(d));
  report.mode = mode.kind;
  report.seed = seed;
  report.ledger = ledger;
  report.params = {{"C", C}, {"eps", eps}, {"T", static_cast<double>(T)}};
  if (quantum) report.params.emplace_back("beta", beta);
  return report;
}

SolveReport lasso_solve(const SampleSet& S, double eps, const SolveMode& mode, std::uint64_t seed) {
  check_lasso_input(S);
  return lasso_solve(LassoProblem(S), eps, mode, seed);
}

SolveReport lasso_solve(const LassoProblem& problem, double eps, const SolveMode& mode,
                        std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  const bool quantum = mode.kind == ModeKind::QuantumEmulated;
  if (quantum) mode.config.validate();
  const std::size_t d = problem.dim();
  const std::size_t N = problem.rows();
  QueryLedger ledger;
  std::vector<SolveReport> runs;

  // One-step candidate: the best of +-e_j / 3.
  {
    constexpr double kScale = 1.0 / 3.0;
    std::size_t best = 0;
    if (!quantum) {
      double best_loss = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < 2 * d; ++k) {
        const Vertex s = vertex_of(k);
        const double v = problem.vertex_loss(s.index, s.sign, kScale);
        if (v < best_loss) {
          best_loss = v;
          best = k;
        }
      }
      ledger.q_X = sat_add(ledger.q_X, sat_mul(N, d));
      ledger.q_y = sat_add(ledger.q_y, N);
      ledger.gates = sat_add(ledger.gates, sat_mul(N, d));
    } else {
      Rng rng(mix_seed(seed, 0));
      const double beta = eps / 20.0;
      const QueryLedger cost =
          estimate_cost(beta, mode.config.delta_loss_step, N, d, mode.config);
      const NoisyValues values = [&](std::size_t k, QueryLedger& charged) {
        const Vertex s = vertex_of(k);
        charged += cost;
        return emulate_estimate(problem.vertex_loss(s.index, s.sign, kScale), beta,
                                mode.config.delta_loss_step, 0.0, 4.0, rng);
      };
      best = approx_min_find(values, 2 * d, beta, mode.config.delta_min_find_step,
                             mode.config.delta_loss_step, rng, ledger, mode.config)
                 .index;
    }
    const Vertex s = vertex_of(best);
    SolveReport one;
    one.theta = KPTree(d);
    one.theta.update(1.0, s.sign * kScale, s.index);
    one.theta_dense = one.theta.to_dense();
    one.objective = problem.loss(one.theta);
    TraceEntry entry;
    entry.objective = one.objective;
    one.trace.push_back(entry);
    one.params = {{"C", 0.0}};
    runs.push_back(std::move(one));
  }

  const auto ladder = curvature_ladder(eps);
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    auto run = lasso_fw_with_guess(problem, ladder[k], eps / 10.0, mode, mix_seed(seed, k + 1));
    ledger += run.ledger;
    runs.push_back(std::move(run));
  }

  // Select the candidate with the smallest (estimated) loss.
  Rng select_rng(mix_seed(seed, kSelectionStream));
  std::vector<CandidateSummary> summaries;
  std::size_t chosen = 0;
  double chosen_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    CandidateSummary summary;
    summary.kind = k == 0 ? "one_step" : "fw";
    summary.C = k == 0 ? 0.0 : ladder[k - 1];
    summary.iterations = run.iterations;
    summary.objective = run.objective;
    if (!quantum) {
      summary.estimate = run.objective;
      const std::uint64_t reads = sat_mul(N, std::max<std::size_t>(1, run.theta.support_size()));
      ledger.q_X = sat_add(ledger.q_X, reads);
      ledger.gates = sat_add(ledger.gates, reads);
    } else {
      const double beta = eps / 10.0;
      ledger += estimate_cost(beta, mode.config.delta_loss_final, N, d, mode.config);
      summary.estimate = emulate_estimate(run.objective, beta, mode.config.delta_loss_final, 0.0,
                                          4.0, select_rng);
    }
    if (summary.estimate < chosen_value) {
      chosen_value = summary.estimate;
      chosen = k;
    }
    summaries.push_back(summary);
  }

  SolveReport report = std::move(runs[chosen]);
  report.candidates = std::move(summaries);
  report.selected = chosen;
  report.ledger = ledger;
  report.mode = mode.kind;
  report.seed = seed;
  report.subproblem_violations = 0;
  for (const auto& run : runs) report.subproblem_violations += run.subproblem_violations;
  report.params = {{"eps", eps}, {"C_selected", report.candidates[chosen].C},
                   {"ladder_size", static_cast<double>(ladder.size())}};
  return report;
}

SolveReport ridge_solve_baseline(const SampleSet& S, double eps, std::size_t max_iter) {
  if (S.regime != NormRegime::L2) throw std::invalid_argument("Ridge requires an L2 sample set");
  if (!validate(S).empty()) throw std::invalid_argument("sample set violates the L2 regime");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const LassoProblem problem(S);
  const auto& G = problem.gram();
  const auto& c = problem.moment();
  const auto d = static_cast<Eigen::Index>(problem.dim());

  // Largest eigenvalue of G by power iteration.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd Gu = G * u;
    lambda = u.dot(Gu);
    const double norm = Gu.norm();
    if (norm == 0.0) break;
    u = Gu / norm;
  }

  SolveReport report;
  report.mode = ModeKind::ClassicalExact;
  report.params = {{"eps", eps}, {"max_iter", static_cast<double>(max_iter)}};
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  auto quad_loss = [&](const Eigen::VectorXd& t) {
    return t.dot(G * t) - 2.0 * c.dot(t) + problem.target_energy();
  };
  Eigen::VectorXd best = theta;
  double best_loss = quad_loss(theta);
  report.converged = false;
  if (!(lambda > 0.0)) {
    report.converged = true;
  } else {
    const double eta = 1.0 / (2.0 * lambda);
    report.params.emplace_back("step", eta);
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
      TraceEntry entry;
      entry.t = it;
      entry.tau = eta;
      entry.objective = quad_loss(theta);
      report.trace.push_back(entry);
      const Eigen::VectorXd g = 2.0 * (G * theta - c);
      Eigen::VectorXd next = theta - eta * g;
      const double norm = next.norm();
      if (norm > 1.0) next /= norm;
      const double pg = (theta - next).norm() / eta;
      if (pg < eps / 10.0) {
        report.converged = true;
        break;
      }
      theta = next;
      const double l = quad_loss(theta);
      if (l < best_loss) {
        best_loss = l;
        best = theta;
      }
    }
    report.iterations = it;
    if (!report.converged) {
      TraceEntry last;
      last.t = it;
      last.objective = quad_loss(theta);
      report.trace.push_back(last);
    }
  }
  if (report.trace.empty()) {
    TraceEntry entry;
    entry.objective = best_loss;
    report.trace.push_back(entry);
  }
  report.theta_dense.assign(best.data(), best.data() + best.size());
  report.theta = KPTree::from_dense(report.theta_dense);
  report.objective = empirical_loss(S, report.theta_dense);
  return report;
}

}  // namespace qlb
