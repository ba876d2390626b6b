#include "qlb/dataset.hpp"
#include "qlb/frank_wolfe.hpp"
#include "qlb/kp_tree.hpp"
#include "qlb/loss.hpp"
#include "qlb/lower_bound.hpp"
#include "qlb/oracles.hpp"
#include "qlb/report.hpp"
#include "qlb/scaling.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qlb;

namespace {

SolveMode make_mode(const std::string& mode, const EmulatorConfig& cfg) {
  if (mode == "classical") return SolveMode::classical();
  if (mode == "quantum") return SolveMode::quantum(cfg);
  throw std::invalid_argument("mode must be 'classical' or 'quantum'");
}

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string report_text(const SolveReport& r, bool trace) { return to_json(r, trace).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frank-Wolfe Lasso with emulated quantum subroutines";

  py::class_<SampleSet>(m, "SampleSet")
      .def(py::init([](Eigen::MatrixXd X, Eigen::VectorXd y, const std::string& regime) {
             if (X.rows() != y.size()) throw std::invalid_argument("X and y row counts differ");
             return SampleSet{std::move(X), std::move(y), parse_regime(regime)};
           }),
           py::arg("X"), py::arg("y"), py::arg("regime") = "linf")
      .def_readonly("X", &SampleSet::X)
      .def_readonly("y", &SampleSet::y)
      .def_property_readonly("regime", [](const SampleSet& s) { return to_string(s.regime); })
      .def_property_readonly("rows", &SampleSet::rows)
      .def_property_readonly("dim", &SampleSet::dim)
      .def("violations", [](const SampleSet& s) {
        std::vector<std::string> out;
        for (const auto& v : validate(s)) out.push_back(v.describe());
        return out;
      });

  m.def("gen_lasso_hidden", [](std::size_t d, std::size_t w, double p, std::size_t M,
                               std::uint64_t seed) {
    auto r = gen_lasso_hidden(d, w, p, M, seed);
    return py::make_tuple(std::move(r.samples), r.W);
  }, py::arg("d"), py::arg("w"), py::arg("p"), py::arg("M"), py::arg("seed"));
  m.def("gen_ridge_hidden", [](std::size_t d, std::size_t w, double p, std::size_t M,
                               std::uint64_t seed) {
    auto r = gen_ridge_hidden(d, w, p, M, seed);
    return py::make_tuple(std::move(r.samples), r.W);
  }, py::arg("d"), py::arg("w"), py::arg("p"), py::arg("M"), py::arg("seed"));
  m.def("load_csv", &load_csv, py::arg("path"));
  m.def("save_csv", &save_csv, py::arg("samples"), py::arg("path"));

  py::class_<KPTree>(m, "KPTree")
      .def(py::init<std::size_t>(), py::arg("d"))
      .def_static("from_dense", &KPTree::from_dense, py::arg("theta"))
      .def_property_readonly("dim", &KPTree::dim)
      .def_property_readonly("depth", &KPTree::depth)
      .def_property_readonly("support_size", &KPTree::support_size)
      .def("update", &KPTree::update, py::arg("a"), py::arg("b"), py::arg("j"))
      .def("read_entry", &KPTree::read_entry, py::arg("j"))
      .def("l1_norm", &KPTree::l1_norm)
      .def("to_dense", &KPTree::to_dense)
      .def("sample_weights", [](const KPTree& t) {
        std::vector<std::tuple<std::size_t, double, int>> out;
        for (const auto& a : t.amplitudes()) out.emplace_back(a.index, a.magnitude, a.sign);
        return out;
      })
      .def("audit", &KPTree::audit);

  m.def("empirical_loss",
        py::overload_cast<const SampleSet&, const std::vector<double>&>(&empirical_loss),
        py::arg("samples"), py::arg("theta"));
  m.def("empirical_gradient",
        py::overload_cast<const SampleSet&, const std::vector<double>&>(&empirical_gradient),
        py::arg("samples"), py::arg("theta"));
  m.def("curvature_exact", &curvature_exact, py::arg("samples"));

  py::class_<EmulatorConfig>(m, "EmulatorConfig")
      .def(py::init<>())
      .def_static("analysis", &EmulatorConfig::analysis, py::arg("eps"), py::arg("d"))
      .def_readwrite("c_ae", &EmulatorConfig::c_ae)
      .def_readwrite("c_mf", &EmulatorConfig::c_mf)
      .def_readwrite("c_grad", &EmulatorConfig::c_grad)
      .def_readwrite("c_fail", &EmulatorConfig::c_fail)
      .def_readwrite("delta_grad", &EmulatorConfig::delta_grad)
      .def_readwrite("delta_min_find", &EmulatorConfig::delta_min_find)
      .def_readwrite("delta_loss_step", &EmulatorConfig::delta_loss_step)
      .def_readwrite("delta_min_find_step", &EmulatorConfig::delta_min_find_step)
      .def_readwrite("delta_loss_final", &EmulatorConfig::delta_loss_final)
      .def_readwrite("qram_free", &EmulatorConfig::qram_free)
      .def("validate", &EmulatorConfig::validate);

  m.def("_lasso_solve", [](const SampleSet& s, double eps, const std::string& mode,
                           std::uint64_t seed, const EmulatorConfig& cfg, bool trace) {
    return report_text(lasso_solve(s, eps, make_mode(mode, cfg), seed), trace);
  });
  m.def("_lasso_fw_with_guess", [](const SampleSet& s, double C, double eps,
                                   const std::string& mode, std::uint64_t seed,
                                   const EmulatorConfig& cfg, bool trace) {
    return report_text(lasso_fw_with_guess(s, C, eps, make_mode(mode, cfg), seed), trace);
  });
  m.def("_ridge_solve_baseline", [](const SampleSet& s, double eps, std::size_t max_iter,
                                    bool trace) {
    return report_text(ridge_solve_baseline(s, eps, max_iter), trace);
  });

  m.def("recover_set_lasso", &recover_set_lasso, py::arg("theta"), py::arg("eps"));
  m.def("recover_set_ridge", &recover_set_ridge, py::arg("theta"));
  m.def("sym_diff", &sym_diff, py::arg("a"), py::arg("b"));
  m.def("_distance_bound_audit", [](std::size_t N, std::size_t mm, double p) {
    return to_json(distance_bound_audit(N, mm, p)).dump();
  });
  m.def("_esf_via_lasso", [](std::size_t d, std::size_t w, std::int64_t p_num, std::int64_t p_den,
                             std::size_t N, double eps, std::size_t M, std::uint64_t seed,
                             std::size_t rounds) {
    const auto Xw = gen_worst_case(d, w, Rational{p_num, p_den}, N, WorstCaseVariant::WSF, seed);
    const LassoSolverFn solver = [](const SampleSet& s, double e, std::uint64_t rs) {
      return lasso_solve(s, e, SolveMode::classical(), rs).theta_dense;
    };
    auto json = to_json(esf_via_lasso(Xw, solver, eps, M, mix_seed(seed, 2), rounds));
    json["W"] = Xw.W;
    return json.dump();
  });

  m.def("_fit_loglog", [](const std::vector<double>& x, const std::vector<double>& cost,
                          std::size_t min_points) {
    return to_json(fit_loglog(x, cost, min_points)).dump();
  });
  m.def("_scaling_point", [](std::size_t d, double eps, const std::string& mode,
                             std::size_t N, std::size_t w, double p, std::uint64_t seed,
                             const EmulatorConfig& cfg) {
    return to_json(scaling_point(d, eps, make_mode(mode, cfg), ScalingInstance{N, w, p}, seed))
        .dump();
  });

  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
}
