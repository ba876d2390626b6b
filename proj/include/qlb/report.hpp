#pragma once

#include "qlb/frank_wolfe.hpp"
#include "qlb/lower_bound.hpp"
#include "qlb/oracles.hpp"
#include "qlb/scaling.hpp"

#include <json.hpp>

namespace qlb {

nlohmann::json to_json(const QueryLedger& ledger);
nlohmann::json to_json(const EmulatorConfig& cfg);
nlohmann::json to_json(const SolveReport& report, bool include_trace = true);
nlohmann::json to_json(const DistanceAudit& audit);
nlohmann::json to_json(const RecoveryResult& result);
nlohmann::json to_json(const LogLogFit& fit);
nlohmann::json to_json(const ScalingPoint& point);

/// Trace as CSV: t,tau,index,sign,tolerance,objective,within_tolerance.
std::string trace_csv(const SolveReport& report);

}  // namespace qlb
