#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qem/checks.hpp"
#include "qem/curvature.hpp"
#include "qem/report.hpp"

namespace py = pybind11;
using namespace qem;

namespace {

py::dict check_to_dict(const CheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["residual"] = c.residual;
  d["tolerance"] = c.tolerance;
  d["passed"] = c.passed;
  d["points"] = c.points;
  d["paper_anchor"] = c.anchor;
  d["notes"] = c.notes;
  return d;
}

std::vector<std::vector<double>> as_matrix(const std::vector<double>& flat, int n) {
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = flat[i * n + j];
  return out;
}

} // namespace

PYBIND11_MODULE(qem, mod) {
  mod.doc() = "numerical curvature laboratory for quasi-Einstein metrics";
  mod.attr("__version__") = kEngineVersion;

  py::register_exception<Error>(mod, "QemError");

  py::class_<QEInstance>(mod, "Model")
      .def_readonly("m", &QEInstance::m)
      .def_readonly("lam", &QEInstance::lambda)
      .def_readonly("mu", &QEInstance::mu)
      .def_readonly("rho", &QEInstance::rho)
      .def_readonly("expected_scalar", &QEInstance::expected_scalar)
      .def_readonly("expected_k", &QEInstance::expected_k)
      .def_readonly("label", &QEInstance::label)
      .def_property_readonly("dim", [](const QEInstance& q) { return q.dim(); })
      .def(
          "sample_points",
          [](const QEInstance& q, int count) {
            std::vector<std::vector<double>> out;
            for (const auto& x : sample_points(q, count)) out.push_back(x.coords);
            return out;
          },
          py::arg("count") = 10)
      .def(
          "curvature_at",
          [](const QEInstance& q, const std::vector<double>& coords) {
            PointData pd(q, ChartPoint{coords});
            auto sp = spectral_profile(pd);
            py::dict d;
            int n = q.dim();
            d["g"] = as_matrix(pd.b.g_v, n);
            d["ricci"] = as_matrix(pd.b.ric_v, n);
            d["scalar"] = pd.b.scal_v;
            d["u"] = pd.u_v;
            d["grad_u_norm_sq"] = pd.gradsq_v;
            d["laplacian_u"] = pd.lap_u;
            d["ricci_eigenvalues"] = sp.ric_eigenvalues;
            d["p_eigenvalues"] = sp.p_eigenvalues;
            return d;
          },
          py::arg("coords"))
      .def("__repr__", [](const QEInstance& q) { return "<Model " + q.label + ">"; });

  mod.def(
      "make_model",
      [](const std::string& name, const py::kwargs& kwargs) {
        std::map<std::string, double> params;
        for (auto item : kwargs)
          params[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
        return build_model(name, params);
      },
      "construct a catalog model by name; parameters as keyword arguments");

  mod.def("list_models", [] {
    std::vector<std::string> names;
    for (const auto& e : model_catalog()) names.push_back(e.name);
    return names;
  });

  mod.def("list_checks", [] {
    py::list out;
    for (const auto& c : check_catalog()) {
      py::dict d;
      d["name"] = c.name;
      d["suite"] = c.suite;
      d["tolerance"] = c.tolerance;
      d["paper_anchor"] = c.anchor;
      out.append(d);
    }
    return out;
  });

  mod.def(
      "admissible_scalars",
      [](int n, double m, double lam) {
        py::list out;
        for (const auto& e : admissible_scalar_set(n, m, lam)) {
          py::dict d;
          d["k"] = e.k;
          d["R"] = e.R;
          d["excluded"] = e.excluded;
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("lam"));

  mod.def(
      "classify_scalar",
      [](double R, int n, double m, double lam, double tol) -> py::object {
        auto k = classify_scalar(R, n, m, lam, tol);
        if (!k) return py::none();
        return py::int_(*k);
      },
      py::arg("R"), py::arg("n"), py::arg("m"), py::arg("lam"), py::arg("tol") = 1e-8);

  mod.def(
      "pairwise_product_bound",
      [](const std::vector<double>& a) {
        auto r = lemsum_check(a);
        py::dict d;
        d["b"] = r.b;
        d["min_pair_product"] = r.min_pair_product;
        d["bound_ok"] = r.bound_ok;
        d["sign_ok"] = r.sign_ok;
        return d;
      },
      py::arg("sorted_non_increasing"));

  mod.def(
      "run_checks",
      [](py::object model, const std::vector<std::string>& suites, int points) {
        RunConfig cfg;
        cfg.suites = suites;
        cfg.points = points;
        Report rep;
        if (model.is_none()) {
          rep = run(cfg);
        } else if (py::isinstance<py::str>(model)) {
          cfg.model = py::cast<std::string>(model);
          rep = run(cfg);
        } else {
          const QEInstance& inst = py::cast<const QEInstance&>(model);
          rep.calibration = calibration_check();
          SuiteOptions opts;
          opts.points = points;
          for (const auto& s : suites) {
            auto results = run_suite(&inst, s, opts);
            rep.checks.insert(rep.checks.end(), results.begin(), results.end());
          }
          std::sort(rep.checks.begin(), rep.checks.end(),
                    [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
          for (const auto& c : rep.checks) (c.passed ? rep.passed : rep.failed) += 1;
        }
        py::dict d;
        d["calibration"] = check_to_dict(rep.calibration);
        py::list checks;
        for (const auto& c : rep.checks) checks.append(check_to_dict(c));
        d["checks"] = checks;
        d["passed"] = rep.passed;
        d["failed"] = rep.failed;
        return d;
      },
      py::arg("model") = py::none(), py::arg("suites") = std::vector<std::string>{},
      py::arg("points") = 20);
}
