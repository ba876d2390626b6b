#include "qlb/report.hpp"

#include <cstdio>

namespace qlb {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const QueryLedger& ledger) {
  const auto r = ledger_report(ledger);
  return {{"q_X", r.q_X},
          {"q_y", r.q_y},
          {"q_tree", r.q_tree},
          {"gates", r.gates},
          {"input_queries", r.input_queries},
          {"total_queries", r.total_queries}};
}

json to_json(const EmulatorConfig& cfg) {
  return {{"c_ae", cfg.c_ae},
          {"c_mf", cfg.c_mf},
          {"c_grad", cfg.c_grad},
          {"c_fail", cfg.c_fail},
          {"delta_grad", cfg.delta_grad},
          {"delta_min_find", cfg.delta_min_find},
          {"delta_loss_step", cfg.delta_loss_step},
          {"delta_min_find_step", cfg.delta_min_find_step},
          {"delta_loss_final", cfg.delta_loss_final},
          {"qram_free", cfg.qram_free}};
}

json to_json(const SolveReport& report, bool include_trace) {
  json params = json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  json theta = json::array();
  for (std::size_t j = 0; j < report.theta_dense.size(); ++j) {
    if (report.theta_dense[j] != 0.0) theta.push_back(json::array({j, report.theta_dense[j]}));
  }
  json out = {{"mode", to_string(report.mode)},
              {"params", params},
              {"objective", report.objective},
              {"theta_sparse", theta},
              {"ledger", to_json(report.ledger)},
              {"seed", report.seed},
              {"iterations", report.iterations},
              {"subproblem_violations", report.subproblem_violations},
              {"converged", report.converged}};
  if (!report.candidates.empty()) {
    json cands = json::array();
    for (const auto& c : report.candidates) {
      cands.push_back({{"kind", c.kind},
                       {"C", c.C},
                       {"iterations", c.iterations},
                       {"objective", c.objective},
                       {"estimate", c.estimate}});
    }
    out["candidates"] = cands;
    out["selected"] = report.selected;
  }
  if (include_trace) {
    json trace = json::array();
    for (const auto& e : report.trace) {
      json row = {{"t", e.t}, {"tau", e.tau}, {"tolerance", e.tolerance}};
      if (e.direction) row["direction"] = json::array({e.direction->index, e.direction->sign});
      if (e.objective) row["objective"] = *e.objective;
      if (e.within_tolerance) row["within_tolerance"] = *e.within_tolerance;
      trace.push_back(row);
    }
    out["trace"] = trace;
  }
  return out;
}

json to_json(const DistanceAudit& a) {
  return {{"N", a.N},
          {"m", a.m},
          {"p", a.p},
          {"tv_exact",
           {{"hyp_bin_balanced", a.tv_balanced},
            {"hyp_bin_planted", a.tv_planted},
            {"hyp_hyp", a.tv_hyp_hyp}}},
          {"bound_holmes", a.bound_holmes},
          {"bound_thmB4", a.bound_b4},
          {"hellinger",
           {{"hyp_bin_balanced", a.hellinger_balanced},
            {"hyp_bin_planted", a.hellinger_planted},
            {"hyp_hyp", a.hellinger_hyp_hyp}}},
          {"pass_flags",
           {{"holmes_balanced", a.pass_holmes_balanced},
            {"holmes_planted", a.pass_holmes_planted},
            {"sandwich_balanced", a.pass_sandwich_balanced},
            {"sandwich_planted", a.pass_sandwich_planted},
            {"sandwich_hyp_hyp", a.pass_sandwich_hyp_hyp},
            {"thmB4", a.pass_b4}}}};
}

json to_json(const RecoveryResult& r) {
  json out = {{"W_hat", r.W_hat},
              {"sym_diff", r.sym_diff},
              {"budget", r.budget},
              {"pass", r.pass}};
  if (!r.rounds.empty()) {
    out["rounds"] = r.rounds;
    out["source_reads"] = r.source_reads;
  }
  return out;
}

json to_json(const LogLogFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r2", fit.r2},
          {"slope_stderr", fit.slope_stderr},
          {"slope_ci95", json::array({fit.ci_low, fit.ci_high})},
          {"points", fit.points}};
}

json to_json(const ScalingPoint& p) {
  return {{"d", p.d},
          {"eps", p.eps},
          {"N", p.N},
          {"mode", to_string(p.mode)},
          {"seed", p.seed},
          {"ledger", to_json(p.ledger)},
          {"objective", p.objective}};
}

std::string trace_csv(const SolveReport& report) {
  std::string out = "t,tau,index,sign,tolerance,objective,within_tolerance\n";
  for (const auto& e : report.trace) {
    out += std::to_string(e.t) + "," + fmt(e.tau) + ",";
    if (e.direction) {
      out += std::to_string(e.direction->index) + "," + std::to_string(e.direction->sign);
    } else {
      out += ",";
    }
    out += "," + fmt(e.tolerance) + ",";
    if (e.objective) out += fmt(*e.objective);
    out += ",";
    if (e.within_tolerance) out += *e.within_tolerance ? "1" : "0";
    out += "\n";
  }
  return out;
}

}  // namespace qlb
