#pragma once

#include "qlb/dataset.hpp"
#include "qlb/kp_tree.hpp"
#include "qlb/oracles.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qlb {

/// A vertex of the l1 ball: sign * e_index.
struct Vertex {
  std::size_t index = 0;
  int sign = 1;
  bool operator==(const Vertex&) const = default;
};

/// argmin over the l1 ball of <s, g>: -sign(g_j) e_j at the largest |g_j|,
/// lowest index on ties; -e_0 for the zero gradient.
Vertex lmo_l1_exact(const std::vector<double>& g);

enum class ModeKind { ClassicalExact, QuantumEmulated };

const char* to_string(ModeKind kind);

struct SolveMode {
  ModeKind kind = ModeKind::ClassicalExact;
  EmulatorConfig config;

  static SolveMode classical() { return {ModeKind::ClassicalExact, {}}; }
  static SolveMode quantum(const EmulatorConfig& cfg = {}) {
    return {ModeKind::QuantumEmulated, cfg};
  }
};

struct TraceEntry {
  std::size_t t = 0;
  double tau = 0.0;                 ///< step size used from this iterate (0 at the end)
  std::optional<Vertex> direction;  ///< chosen vertex, absent for the final iterate
  double tolerance = 0.0;           ///< allowed subproblem error at this step
  std::optional<double> objective;
  std::optional<bool> within_tolerance;  ///< audit with exact gradients when available
};

/// One entry of the candidate set assembled by lasso_solve.
struct CandidateSummary {
  std::string kind;  ///< "one_step" or "fw"
  double C = 0.0;
  std::size_t iterations = 0;
  double objective = 0.0;  ///< exact empirical loss
  double estimate = 0.0;   ///< value used for selection (noisy in quantum mode)
};

struct SolveReport {
  KPTree theta{1};
  std::vector<double> theta_dense;
  double objective = 0.0;
  std::vector<TraceEntry> trace;
  QueryLedger ledger;
  ModeKind mode = ModeKind::ClassicalExact;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::size_t iterations = 0;
  std::size_t subproblem_violations = 0;
  bool converged = true;
  std::vector<CandidateSummary> candidates;
  std::size_t selected = 0;
};

/// Oracles for the generic loop. Only `direction` is required.
struct FwOracles {
  /// Chooses the step vertex at iterate t given the allowed subproblem error.
  std::function<Vertex(const KPTree& theta, std::size_t t, double tolerance)> direction;
  /// Exact gradient for the post-hoc subproblem audit.
  std::function<std::vector<double>(const KPTree& theta)> exact_gradient;
  std::function<double(const KPTree& theta)> objective;
  /// Notified after each update with the new iterate, the vertex and the step size.
  std::function<void(const KPTree& theta, const Vertex& s, double tau)> on_step;
  /// Allowed error at step t; defaults to tau_t * C / 4.
  std::function<double(std::size_t t)> tolerance;
};

/// Frank-Wolfe over the l1 ball with tau_t = 2/(t+2) and KP-tree updates.
SolveReport fw_generic(const FwOracles& oracles, std::size_t T, double C, KPTree theta0);

/// Convenience form: a gradient oracle and a tolerance-aware LMO.
SolveReport fw_generic(const std::function<std::vector<double>(const KPTree&)>& grad_oracle,
                       const std::function<Vertex(const std::vector<double>&, double)>& lmo,
                       std::size_t T, double C, KPTree theta0);

/// Precomputed second moments of a sample set: G = X^T X / N, c = X^T y / N.
class LassoProblem {
 public:
  explicit LassoProblem(const SampleSet& S);

  std::size_t rows() const { return N_; }
  std::size_t dim() const { return d_; }
  const Eigen::MatrixXd& gram() const { return G_; }
  const Eigen::VectorXd& moment() const { return c_; }
  double target_energy() const { return yy_; }

  /// Exact L_S(theta) for sparse theta, O(t^2).
  double loss(const KPTree& theta) const;
  double loss(const std::vector<double>& theta) const;
  /// L_S(scale * sign * e_j).
  double vertex_loss(std::size_t j, int sign, double scale) const;
  std::vector<double> gradient(const KPTree& theta) const;

 private:
  std::size_t N_;
  std::size_t d_;
  Eigen::MatrixXd G_;
  Eigen::VectorXd c_;
  double yy_;
};

/// T = 6 * ceil(C / eps).
std::size_t fw_iterations(double C, double eps);

/// C = 8, 4, ..., 2^(-ceil(log2(1/eps)) - 1).
std::vector<double> curvature_ladder(double eps);

/// Frank-Wolfe with curvature guess C and target eps from theta = 0.
SolveReport lasso_fw_with_guess(const SampleSet& S, double C, double eps, const SolveMode& mode,
                                std::uint64_t seed);
SolveReport lasso_fw_with_guess(const LassoProblem& problem, double C, double eps,
                                const SolveMode& mode, std::uint64_t seed);

/// Best of the one-step vertex candidate and the curvature-ladder runs.
SolveReport lasso_solve(const SampleSet& S, double eps, const SolveMode& mode, std::uint64_t seed);
SolveReport lasso_solve(const LassoProblem& problem, double eps, const SolveMode& mode,
                        std::uint64_t seed);

/// Projected gradient descent onto the l2 ball.
SolveReport ridge_solve_baseline(const SampleSet& S, double eps, std::size_t max_iter);

}  // namespace qlb
