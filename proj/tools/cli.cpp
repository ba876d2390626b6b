#include "cli.hpp"

#include "qlb/dataset.hpp"
#include "qlb/frank_wolfe.hpp"
#include "qlb/lower_bound.hpp"
#include "qlb/report.hpp"
#include "qlb/rng.hpp"
#include "qlb/scaling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

namespace qlb::cli {

using nlohmann::json;

namespace {

/// A bad flag value; reported with exit code 1.
struct FlagError : std::runtime_error {
  FlagError(const std::string& flag, const std::string& what)
      : std::runtime_error(flag + ": " + what) {}
};

void require(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw FlagError(flag, what);
}

struct Common {
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
  std::string out;
  unsigned jobs = 1;
};

struct EmulatorFlags {
  double c_ae = 1.0;
  double c_mf = 8.0;
  double c_grad = 1.0;
  bool analysis = false;
  bool qram_free = false;
  CLI::Option* c_ae_opt = nullptr;
  CLI::Option* c_mf_opt = nullptr;
  CLI::Option* c_grad_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed (falls back to QLB_SEED, then 1)");
  sub->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp from JSON output");
  sub->add_option("--out", c.out, "Write the JSON result to this path instead of stdout");
  sub->add_option("--jobs", c.jobs, "Parallel workers for independent runs")
      ->check(CLI::PositiveNumber);
}

void add_emulator(CLI::App* sub, EmulatorFlags& e) {
  e.c_ae_opt = sub->add_option("--c-ae", e.c_ae, "Amplitude-estimation cost constant")
                   ->check(CLI::Range(1.0, 1e12));
  e.c_mf_opt = sub->add_option("--c-mf", e.c_mf, "Min-finding repetition constant")
                   ->check(CLI::Range(1.0, 1e12));
  e.c_grad_opt = sub->add_option("--c-grad", e.c_grad, "Gradient-oracle cost constant")
                     ->check(CLI::Range(1.0, 1e12));
  sub->add_flag("--paper-constants", e.analysis, "Use the constants of the analysis");
  sub->add_flag("--qram-free", e.qram_free, "Charge tree-query gates for the QRAM-free model");
}

SolveMode resolve_mode(const std::string& mode, const EmulatorFlags& e, double eps,
                       std::size_t d) {
  if (mode == "classical") return SolveMode::classical();
  EmulatorConfig cfg = e.analysis ? EmulatorConfig::analysis(eps, d) : EmulatorConfig{};
  if (!e.analysis || e.c_ae_opt->count() > 0) cfg.c_ae = e.c_ae;
  if (!e.analysis || e.c_mf_opt->count() > 0) cfg.c_mf = e.c_mf;
  if (!e.analysis || e.c_grad_opt->count() > 0) cfg.c_grad = e.c_grad;
  cfg.qram_free = e.qram_free;
  return SolveMode::quantum(cfg);
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("QLB_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    require(errno == 0 && end != env && *end == '\0', "QLB_SEED", "not an unsigned integer");
    return v;
  }
  return 1;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void emit(const Common& c, const std::string& command, json config, json result,
          std::ostream& out) {
  json doc = {{"command", command}, {"config", std::move(config)}, {"result", std::move(result)}};
  if (!c.no_timestamp) doc["timestamp"] = utc_timestamp();
  const std::string text = doc.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    write_text(c.out, text);
  }
}

/// Evaluates fn(0..n-1) on up to `jobs` threads; results keep index order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, F fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// "a/b" or a terminating decimal, as an exact fraction.
Rational parse_rational(const std::string& text, const std::string& flag) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used_n = 0, used_d = 0;
      const std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
      const long long n = std::stoll(ns, &used_n);
      const long long d = std::stoll(ds, &used_d);
      require(used_n == ns.size() && used_d == ds.size() && d > 0 && n >= 0, flag,
              "expected a non-negative fraction a/b");
      return {n, d};
    }
    const auto dot = text.find('.');
    std::string digits = text;
    long long den = 1;
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      require(frac.size() <= 12, flag, "too many decimal digits");
      digits = text.substr(0, dot) + frac;
      for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    }
    std::size_t used = 0;
    const long long num = std::stoll(digits, &used);
    require(used == digits.size() && num >= 0, flag, "expected a non-negative number");
    return {num, den};
  } catch (const std::logic_error&) {
    throw FlagError(flag, "cannot parse '" + text + "'");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      } else {
        out.push_back(static_cast<T>(std::stoull(item, &used)));
      }
      require(used == item.size(), flag, "cannot parse '" + item + "'");
    } catch (const std::logic_error&) {
      throw FlagError(flag, "cannot parse '" + item + "'");
    }
  }
  require(!out.empty(), flag, "empty list");
  return out;
}

// ---- gen -------------------------------------------------------------------

struct GenFlags {
  std::string kind = "lasso";
  std::size_t d = 0;
  std::optional<std::size_t> w;
  std::string p = "0.05";
  std::size_t rows = 0;
  std::string csv;
};

int cmd_gen(const GenFlags& g, const Common& c, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(c);
  require(g.d >= 1, "--d", "must be at least 1");
  require(g.rows >= 1, "--rows", "must be at least 1");
  const std::size_t w = g.w.value_or(std::min<std::size_t>(g.d, 10));
  require(w <= g.d, "--w", "must not exceed --d");
  const Rational p = parse_rational(g.p, "--p");
  json config = {{"kind", g.kind}, {"d", g.d},     {"w", w},
                 {"p", g.p},       {"rows", g.rows}, {"seed", seed},
                 {"csv", g.csv}};
  json result;
  if (g.kind == "lasso" || g.kind == "ridge") {
    const double pv = p.value();
    if (g.kind == "lasso") {
      require(pv > 0.0 && pv < 0.5, "--p", "must lie in (0, 1/2)");
    } else {
      require(pv > 0.0 && pv < 0.25, "--p", "must lie in (0, 1/4)");
    }
    const auto planted = g.kind == "lasso" ? gen_lasso_hidden(g.d, w, pv, g.rows, seed)
                                           : gen_ridge_hidden(g.d, w, pv, g.rows, seed);
    save_csv(planted.samples, g.csv);
    result = {{"W", planted.W}, {"regime", to_string(planted.samples.regime)}};
  } else if (g.kind == "wsf" || g.kind == "wssf") {
    require(g.rows % 2 == 0, "--rows", "must be even for worst-case matrices");
    require((static_cast<long long>(g.rows) * p.num) % p.den == 0, "--p",
            "p * rows must be an integer");
    require(2 * p.num <= p.den, "--p", "must not exceed 1/2");
    const auto variant = g.kind == "wsf" ? WorstCaseVariant::WSF : WorstCaseVariant::WSSF;
    const auto Xw = gen_worst_case(g.d, w, p, g.rows, variant, seed);
    SampleSet S;
    S.X = Xw.X;
    S.y = Eigen::VectorXd::Ones(Xw.X.rows());
    S.regime = Xw.regime();
    save_csv(S, g.csv);
    result = {{"W", Xw.W}, {"regime", to_string(S.regime)}, {"variant", to_string(variant)}};
  } else {
    throw FlagError("--kind", "must be one of lasso, ridge, wsf, wssf");
  }
  emit(c, "gen", config, result, out);
  return kSuccess;
}

// ---- solve-lasso / solve-ridge ------------------------------------------

struct SolveFlags {
  std::string csv;
  double eps = 0.1;
  std::string mode = "classical";
  std::optional<double> curvature;
  std::string trace_csv;
  bool omit_trace = false;
  std::size_t max_iter = 10000;
};

SampleSet load_checked(const std::string& path, NormRegime regime) {
  SampleSet S = load_csv(path);
  require(S.regime == regime, "--csv",
          std::string("expected a ") + to_string(regime) + " sample set");
  const auto violations = validate(S);
  require(violations.empty(), "--csv",
          "sample set violates its regime: " +
              (violations.empty() ? std::string() : violations.front().describe()));
  return S;
}

int cmd_solve_lasso(const SolveFlags& f, const EmulatorFlags& e, const Common& c,
                    std::ostream& out) {
  const std::uint64_t seed = resolve_seed(c);
  require(f.mode == "classical" || f.mode == "quantum", "--mode", "must be classical or quantum");
  if (f.curvature) {
    require(*f.curvature > 0.0, "--curvature", "must be positive");
    require(f.eps > 0.0 && f.eps < 1.0, "--eps", "must lie in (0, 1)");
  } else {
    require(f.eps > 0.0 && f.eps < 0.5, "--eps", "must lie in (0, 1/2)");
  }
  require(!(e.analysis && f.eps >= 0.5), "--eps", "--paper-constants needs eps < 1/2");
  const SampleSet S = load_checked(f.csv, NormRegime::LInf);
  const SolveMode mode = resolve_mode(f.mode, e, f.eps, S.dim());
  const SolveReport report = f.curvature ? lasso_fw_with_guess(S, *f.curvature, f.eps, mode, seed)
                                         : lasso_solve(S, f.eps, mode, seed);
  if (!f.trace_csv.empty()) write_text(f.trace_csv, trace_csv(report));
  json config = {{"csv", f.csv},   {"eps", f.eps},   {"mode", f.mode},
                 {"seed", seed},   {"N", S.rows()}, {"d", S.dim()}};
  if (f.curvature) config["curvature"] = *f.curvature;
  if (mode.kind == ModeKind::QuantumEmulated) config["emulator"] = to_json(mode.config);
  emit(c, "solve-lasso", config, to_json(report, !f.omit_trace), out);
  return kSuccess;
}

int cmd_solve_ridge(const SolveFlags& f, const Common& c, std::ostream& out) {
  require(f.eps > 0.0, "--eps", "must be positive");
  require(f.max_iter >= 1, "--max-iter", "must be at least 1");
  const SampleSet S = load_checked(f.csv, NormRegime::L2);
  const SolveReport report = ridge_solve_baseline(S, f.eps, f.max_iter);
  if (!f.trace_csv.empty()) write_text(f.trace_csv, trace_csv(report));
  json config = {{"csv", f.csv}, {"eps", f.eps}, {"max_iter", f.max_iter},
                 {"N", S.rows()}, {"d", S.dim()}};
  emit(c, "solve-ridge", config, to_json(report, !f.omit_trace), out);
  return report.converged ? kSuccess : kRuntimeFailure;
}

// ---- recover ---------------------------------------------------------------

struct RecoverFlags {
  std::string kind = "lasso";
  std::size_t d = 128;
  std::optional<std::size_t> w;
  std::optional<std::string> p;
  std::optional<std::size_t> M;
  std::optional<std::size_t> N;
  double eps = 0.1;
  std::string mode = "classical";
  std::size_t seeds = 1;
  std::optional<std::size_t> rounds;
  std::size_t max_iter = 10000;
};

int cmd_recover(const RecoverFlags& r, const EmulatorFlags& e, const Common& c,
                std::ostream& out) {
  const std::uint64_t seed = resolve_seed(c);
  require(r.kind == "lasso" || r.kind == "ridge" || r.kind == "esf", "--kind",
          "must be one of lasso, ridge, esf");
  require(r.mode == "classical" || r.mode == "quantum", "--mode", "must be classical or quantum");
  require(r.d >= 1, "--d", "must be at least 1");
  require(r.seeds >= 1, "--seeds", "must be at least 1");
  const bool ridge = r.kind == "ridge";
  if (ridge) {
    require(r.eps > 0.0, "--eps", "must be positive");
  } else {
    require(r.eps > 0.0 && r.eps < 0.5, "--eps", "must lie in (0, 1/2)");
  }
  const auto inv = static_cast<std::size_t>(std::floor(1.0 / r.eps));
  const std::size_t w = r.w.value_or(ridge ? r.d / 2 : std::min(r.d, inv));
  require(w <= r.d, "--w", "must not exceed --d");
  const Rational p = r.p ? parse_rational(*r.p, "--p")
                         : (ridge ? Rational{1, 20} : Rational{1, static_cast<std::int64_t>(2 * inv)});
  const double pv = p.value();
  require(pv > 0.0 && pv < (ridge ? 0.25 : 0.5), "--p", ridge ? "must lie in (0, 1/4)" : "must lie in (0, 1/2)");
  const std::size_t M = r.M.value_or(ridge ? 100000 : 20000);
  require(M >= 1, "--M", "must be at least 1");
  const std::size_t N = r.N.value_or(M);
  if (r.kind == "esf") {
    require(N % 2 == 0 && (static_cast<long long>(N) * p.num) % p.den == 0, "--N",
            "must be even with p * N integral");
  }
  const SolveMode mode = resolve_mode(r.mode, e, r.eps, r.d);

  auto one = [&](std::size_t i) -> json {
    const std::uint64_t s = seed + i;
    RecoveryResult res;
    IndexSet W;
    double objective = 0.0;
    json ledger;
    if (r.kind == "lasso") {
      const auto planted = gen_lasso_hidden(r.d, w, pv, M, s);
      const auto report = lasso_solve(planted.samples, r.eps, mode, mix_seed(s, 1));
      res = score_recovery(planted.W, recover_set_lasso(report.theta_dense, r.eps));
      W = planted.W;
      objective = report.objective;
      ledger = to_json(report.ledger);
    } else if (ridge) {
      const auto planted = gen_ridge_hidden(r.d, w, pv, M, s);
      const auto report = ridge_solve_baseline(planted.samples, r.eps, r.max_iter);
      res = score_recovery(planted.W, recover_set_ridge(report.theta_dense));
      W = planted.W;
      objective = report.objective;
    } else {
      const auto Xw = gen_worst_case(r.d, w, p, N, WorstCaseVariant::WSF, s);
      const LassoSolverFn solver = [&](const SampleSet& S, double eps, std::uint64_t rs) {
        return lasso_solve(S, eps, mode, rs).theta_dense;
      };
      res = esf_via_lasso(Xw, solver, r.eps, M, mix_seed(s, 2), r.rounds);
      W = Xw.W;
    }
    json row = {{"seed", s}, {"W", W}, {"recovery", to_json(res)}};
    if (r.kind != "esf") row["objective"] = objective;
    if (!ledger.is_null()) row["ledger"] = ledger;
    return row;
  };
  const auto rows = parallel_map<json>(r.seeds, c.jobs, one);
  std::size_t passes = 0;
  for (const auto& row : rows) passes += row["recovery"]["pass"].get<bool>() ? 1 : 0;
  json config = {{"kind", r.kind}, {"d", r.d},       {"w", w},         {"p", pv},
                 {"M", M},         {"eps", r.eps},   {"mode", r.mode}, {"seeds", r.seeds},
                 {"seed", seed}};
  if (r.kind == "esf") {
    config["N"] = N;
    config["rounds"] = r.rounds.value_or(default_vote_rounds(r.d));
  }
  if (mode.kind == ModeKind::QuantumEmulated) config["emulator"] = to_json(mode.config);
  emit(c, "recover", config, {{"runs", rows}, {"passes", passes}}, out);
  return kSuccess;
}

// ---- scaling ---------------------------------------------------------------

struct ScalingFlags {
  std::string dims = "256,512,1024,2048";
  std::string eps = "0.2";
  std::string mode = "quantum";
  std::size_t N = 256;
  std::size_t w = 5;
  double p = 0.1;
  std::string csv_out;
  std::string fit_csv;
  std::string x_col = "d";
  std::string cost_col = "input_queries";
  std::size_t min_points = 4;
};

int cmd_scaling(const ScalingFlags& f, const EmulatorFlags& e, const Common& c,
                std::ostream& out) {
  if (!f.fit_csv.empty()) {
    const LogLogFit fit = fit_scaling_csv(f.fit_csv, f.x_col, f.cost_col, f.min_points);
    json config = {{"fit_csv", f.fit_csv}, {"x_col", f.x_col}, {"cost_col", f.cost_col}};
    emit(c, "scaling", config, {{"fit", to_json(fit)}}, out);
    return kSuccess;
  }
  const std::uint64_t seed = resolve_seed(c);
  const auto dims = parse_list<std::size_t>(f.dims, "--dims");
  const auto epss = parse_list<double>(f.eps, "--eps");
  for (double eps : epss) require(eps > 0.0 && eps < 0.5, "--eps", "must lie in (0, 1/2)");
  for (std::size_t d : dims) require(d >= 1, "--dims", "must be at least 1");
  require(f.mode == "classical" || f.mode == "quantum" || f.mode == "both", "--mode",
          "must be classical, quantum or both");
  require(f.N >= 1, "--N", "must be at least 1");
  require(f.p > 0.0 && f.p < 0.5, "--p", "must lie in (0, 1/2)");
  std::vector<std::string> modes;
  if (f.mode != "quantum") modes.push_back("classical");
  if (f.mode != "classical") modes.push_back("quantum");

  struct Task {
    std::string mode;
    double eps;
    std::size_t d;
  };
  std::vector<Task> tasks;
  for (const auto& m : modes) {
    for (double eps : epss) {
      for (std::size_t d : dims) tasks.push_back({m, eps, d});
    }
  }
  const ScalingInstance instance{f.N, f.w, f.p};
  const auto points = parallel_map<ScalingPoint>(tasks.size(), c.jobs, [&](std::size_t i) {
    const auto& t = tasks[i];
    return scaling_point(t.d, t.eps, resolve_mode(t.mode, e, t.eps, t.d), instance, seed);
  });

  std::string csv = scaling_csv_header() + "\n";
  json rows = json::array();
  for (const auto& pt : points) {
    csv += scaling_csv_row(pt) + "\n";
    rows.push_back(to_json(pt));
  }
  if (!f.csv_out.empty()) write_text(f.csv_out, csv);

  json fits = json::array();
  auto add_fit = [&](const std::string& mode, const std::string& axis, double fixed,
                     const std::vector<double>& xs, const std::vector<const ScalingPoint*>& pts) {
    if (xs.size() < f.min_points) return;
    std::vector<double> input, total;
    for (const auto* pt : pts) {
      const auto r = ledger_report(pt->ledger);
      input.push_back(static_cast<double>(r.input_queries));
      total.push_back(static_cast<double>(r.total_queries));
    }
    json entry = {{"mode", mode},
                  {"axis", axis},
                  {"input_queries", to_json(fit_loglog(xs, input, f.min_points))},
                  {"total_queries", to_json(fit_loglog(xs, total, f.min_points))}};
    entry[axis == "d" ? "eps" : "d"] = fixed;
    fits.push_back(entry);
  };
  for (const auto& m : modes) {
    for (double eps : epss) {
      std::vector<double> xs;
      std::vector<const ScalingPoint*> pts;
      for (const auto& pt : points) {
        if (to_string(pt.mode) == m && pt.eps == eps) {
          xs.push_back(static_cast<double>(pt.d));
          pts.push_back(&pt);
        }
      }
      add_fit(m, "d", eps, xs, pts);
    }
    for (std::size_t d : dims) {
      std::vector<double> xs;
      std::vector<const ScalingPoint*> pts;
      for (const auto& pt : points) {
        if (to_string(pt.mode) == m && pt.d == d) {
          xs.push_back(1.0 / pt.eps);
          pts.push_back(&pt);
        }
      }
      add_fit(m, "inv_eps", static_cast<double>(d), xs, pts);
    }
  }
  json config = {{"dims", dims}, {"eps", epss}, {"mode", f.mode}, {"N", f.N},
                 {"w", f.w},     {"p", f.p},    {"seed", seed},   {"min_points", f.min_points}};
  if (f.mode != "classical") config["emulator"] = to_json(resolve_mode("quantum", e, epss.front(), dims.front()).config);
  if (c.out.empty() && f.csv_out.empty()) {
    out << csv;
    return kSuccess;
  }
  emit(c, "scaling", config, {{"points", rows}, {"fits", fits}}, out);
  return kSuccess;
}

// ---- distances ---------------------------------------------------------------

struct DistanceFlags {
  std::string N = "1000";
  std::size_t m_min = 1;
  std::size_t m_max = 50;
  std::string p = "0.05";
};

int cmd_distances(const DistanceFlags& f, const Common& c, std::ostream& out) {
  const auto Ns = parse_list<std::size_t>(f.N, "--N");
  const auto ps = parse_list<double>(f.p, "--p");
  require(f.m_min >= 1 && f.m_min <= f.m_max, "--m-min", "must lie in [1, --m-max]");
  for (std::size_t N : Ns) {
    require(N >= 2 && N % 2 == 0, "--N", "must be even and at least 2");
    require(f.m_max <= N / 2, "--m-max", "must not exceed N/2");
    for (double p : ps) {
      require(p >= 0.0 && p < 0.5, "--p", "must lie in [0, 1/2)");
      const double pN = p * static_cast<double>(N);
      require(std::abs(pN - std::round(pN)) <= 1e-9, "--p", "p * N must be an integer");
    }
  }
  json rows = json::array();
  bool all = true;
  for (std::size_t N : Ns) {
    for (double p : ps) {
      for (std::size_t m = f.m_min; m <= f.m_max; ++m) {
        const auto audit = distance_bound_audit(N, m, p);
        all = all && audit.all_pass();
        rows.push_back(to_json(audit));
      }
    }
  }
  json config = {{"N", Ns}, {"p", ps}, {"m_min", f.m_min}, {"m_max", f.m_max}};
  emit(c, "distances", config, {{"rows", rows}, {"all_pass", all}}, out);
  return kSuccess;
}

// ---- validate --------------------------------------------------------------

int cmd_validate(const std::string& csv, const Common& c, std::ostream& out) {
  const SampleSet S = load_csv(csv);
  const auto violations = validate(S);
  json list = json::array();
  for (const auto& v : violations) {
    json item = {{"row", v.row}, {"value", v.value}, {"message", v.describe()}};
    if (v.col) item["col"] = *v.col;
    if (v.target) item["target"] = true;
    list.push_back(item);
  }
  json config = {{"csv", csv}};
  emit(c, "validate", config,
       {{"valid", violations.empty()},
        {"N", S.rows()},
        {"d", S.dim()},
        {"regime", to_string(S.regime)},
        {"violations", list}},
       out);
  return violations.empty() ? kSuccess : kValidationError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frank-Wolfe Lasso solver with emulated quantum subroutines and query ledgers"};
  app.name("qlb");
  app.require_subcommand(1);

  Common common;
  EmulatorFlags emulator;
  GenFlags gen;
  SolveFlags solve;
  RecoverFlags recover;
  ScalingFlags scaling;
  DistanceFlags distances;
  std::string validate_csv;

  auto* g = app.add_subcommand("gen", "Generate a planted or worst-case sample set");
  add_common(g, common);
  g->add_option("--kind", gen.kind, "lasso, ridge, wsf or wssf");
  g->add_option("--d", gen.d, "Dimension")->required();
  g->add_option("--w", gen.w, "Planted set size");
  g->add_option("--p", gen.p, "Bias, as a decimal or a fraction a/b");
  g->add_option("--rows,--M,--N", gen.rows, "Number of rows")->required();
  g->add_option("--csv", gen.csv, "Output CSV path")->required();

  auto* sl = app.add_subcommand("solve-lasso", "Solve Lasso on a CSV sample set");
  add_common(sl, common);
  add_emulator(sl, emulator);
  sl->add_option("--csv", solve.csv, "Input CSV")->required();
  sl->add_option("--eps", solve.eps, "Target accuracy");
  sl->add_option("--mode", solve.mode, "classical or quantum");
  sl->add_option("--curvature", solve.curvature, "Run a single curvature guess");
  sl->add_option("--trace-csv", solve.trace_csv, "Write the iteration trace as CSV");
  sl->add_flag("--omit-trace", solve.omit_trace, "Leave the trace out of the JSON");

  auto* sr = app.add_subcommand("solve-ridge", "Projected gradient baseline for Ridge");
  add_common(sr, common);
  sr->add_option("--csv", solve.csv, "Input CSV")->required();
  sr->add_option("--eps", solve.eps, "Target accuracy");
  sr->add_option("--max-iter", solve.max_iter, "Iteration cap");
  sr->add_option("--trace-csv", solve.trace_csv, "Write the iteration trace as CSV");
  sr->add_flag("--omit-trace", solve.omit_trace, "Leave the trace out of the JSON");

  auto* rc = app.add_subcommand("recover", "Hidden-set recovery experiments over seeds");
  add_common(rc, common);
  add_emulator(rc, emulator);
  rc->add_option("--kind", recover.kind, "lasso, ridge or esf");
  rc->add_option("--d", recover.d, "Dimension");
  rc->add_option("--w", recover.w, "Planted set size");
  rc->add_option("--p", recover.p, "Bias, as a decimal or a fraction a/b");
  rc->add_option("--M", recover.M, "Samples per solve");
  rc->add_option("--N", recover.N, "Rows of the worst-case matrix (esf)");
  rc->add_option("--eps", recover.eps, "Target accuracy");
  rc->add_option("--mode", recover.mode, "classical or quantum");
  rc->add_option("--seeds", recover.seeds, "Number of seeds (seed, seed+1, ...)");
  rc->add_option("--rounds", recover.rounds, "Voting rounds (esf)");
  rc->add_option("--max-iter", recover.max_iter, "Iteration cap (ridge)");

  auto* sc = app.add_subcommand("scaling", "Charged-query scaling sweeps and log-log fits");
  add_common(sc, common);
  add_emulator(sc, emulator);
  sc->add_option("--dims", scaling.dims, "Comma-separated dimensions");
  sc->add_option("--eps", scaling.eps, "Comma-separated accuracies");
  sc->add_option("--mode", scaling.mode, "classical, quantum or both");
  sc->add_option("--N", scaling.N, "Samples per instance");
  sc->add_option("--w", scaling.w, "Planted set size of the instances");
  sc->add_option("--p", scaling.p, "Bias of the instances");
  sc->add_option("--csv-out", scaling.csv_out, "Write the sweep CSV here");
  sc->add_option("--fit-csv", scaling.fit_csv, "Only fit columns of an existing CSV");
  sc->add_option("--x-col", scaling.x_col, "x column for --fit-csv");
  sc->add_option("--cost-col", scaling.cost_col, "cost column for --fit-csv");
  sc->add_option("--min-points", scaling.min_points, "Minimum points per fit")
      ->check(CLI::Range(2, 1000));

  auto* ds = app.add_subcommand("distances", "Hypergeometric/binomial distance audits");
  add_common(ds, common);
  ds->add_option("--N", distances.N, "Comma-separated population sizes");
  ds->add_option("--m-min", distances.m_min, "Smallest draw count");
  ds->add_option("--m-max", distances.m_max, "Largest draw count");
  ds->add_option("--p", distances.p, "Comma-separated biases");

  auto* va = app.add_subcommand("validate", "Check a CSV sample set against its regime");
  add_common(va, common);
  va->add_option("--csv", validate_csv, "Input CSV")->required();

  std::vector<const char*> argv{"qlb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationError;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, common, out);
    if (sl->parsed()) return cmd_solve_lasso(solve, emulator, common, out);
    if (sr->parsed()) return cmd_solve_ridge(solve, common, out);
    if (rc->parsed()) return cmd_recover(recover, emulator, common, out);
    if (sc->parsed()) return cmd_scaling(scaling, emulator, common, out);
    if (ds->parsed()) return cmd_distances(distances, common, out);
    if (va->parsed()) return cmd_validate(validate_csv, common, out);
  } catch (const FlagError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kValidationError;
}

}  // namespace qlb::cli
