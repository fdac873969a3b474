#include "qem/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace qem {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<ModelEntry>& model_catalog() {
  static const std::vector<ModelEntry> catalog = {
      {"hemisphere", "round hemisphere, u = cos r, lambda = m + n - 1",
       {"n=3", "m=2"}},
      {"cylinder", "interval times a round sphere of fixed radius, u = sin(sqrt(lambda/m) t)",
       {"n=3", "m=2", "lambda=1"}},
      {"doubly-warped", "half-sphere block warped over r with a fixed-scale fiber, u = cos r",
       {"p=1", "q=2", "m=2"}},
      {"product-excg", "interval times two fixed-scale sphere factors, u = sin(sqrt(lambda/m) t)",
       {"p=2", "q=2", "m=2", "lambda=1"}},
      {"cone", "linear warping over an Einstein fiber; scalar curvature cannot be constant",
       {"n=4", "kappa=2", "alpha=1"}},
      {"hyperbolic-warped", "sinh/cosh warping over an Einstein fiber; non-existence profile",
       {"n=4", "kappa=2", "beta=1", "a=0", "b=1"}},
  };
  return catalog;
}

bool is_quasi_einstein_model(const std::string& name) {
  return name == "hemisphere" || name == "cylinder" || name == "doubly-warped" ||
         name == "product-excg";
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int iparam_or(const std::map<std::string, double>& params, const std::string& key,
              int fallback) {
  return static_cast<int>(param_or(params, key, fallback));
}

} // namespace

QEInstance build_model(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "hemisphere")
    return hemisphere(iparam_or(params, "n", 3), param_or(params, "m", 2.0));
  if (name == "cylinder")
    return cylinder(iparam_or(params, "n", 3), param_or(params, "m", 2.0),
                    param_or(params, "lambda", 1.0));
  if (name == "doubly-warped")
    return doubly_warped(iparam_or(params, "p", 1), iparam_or(params, "q", 2),
                         param_or(params, "m", 2.0));
  if (name == "product-excg")
    return product_excg(iparam_or(params, "p", 2), iparam_or(params, "q", 2),
                        param_or(params, "m", 2.0), param_or(params, "lambda", 1.0));
  fail(ErrorKind::ConfigError, "unknown model: " + name);
}

InexParams build_inex_params(const std::string& name,
                             const std::map<std::string, double>& params) {
  InexParams p;
  p.n = iparam_or(params, "n", 4);
  p.kappa = param_or(params, "kappa", 2.0);
  if (p.n < 3) fail(ErrorKind::ConfigError, "warped profiles need n >= 3");
  if (name == "cone") {
    p.alpha = param_or(params, "alpha", 1.0);
  } else if (name == "hyperbolic-warped") {
    p.beta = param_or(params, "beta", 1.0);
    p.a = param_or(params, "a", 0.0);
    p.b = param_or(params, "b", 1.0);
  } else {
    fail(ErrorKind::ConfigError, "unknown warped profile model: " + name);
  }
  return p;
}

Report run(const RunConfig& config) {
  Report report;
  report.config = config;
  report.calibration = calibration_check();

  std::vector<std::string> suites = config.suites;
  bool warped_profile = config.model == "cone" || config.model == "hyperbolic-warped";

  if (config.model.empty()) {
    if (suites.empty()) suites = {"algebraic", "classification", "engine-selftest"};
  } else if (warped_profile) {
    if (suites.empty()) suites = {"defining"};
  } else if (suites.empty()) {
    suites = kSuiteNames;
  }

  SuiteOptions opts;
  opts.points = config.points;

  if (warped_profile) {
    InexKind kind = config.model == "cone" ? InexKind::Cone : InexKind::Hyperbolic;
    auto results = run_profile_checks(kind, build_inex_params(config.model, config.params),
                                      config.points);
    report.checks.insert(report.checks.end(), results.begin(), results.end());
    report.model_label = config.model;
    for (const auto& s : suites) {
      if (s == "algebraic" || s == "classification") {
        auto extra = run_suite(nullptr, s, opts);
        report.checks.insert(report.checks.end(), extra.begin(), extra.end());
      }
    }
  } else {
    std::optional<QEInstance> inst;
    if (!config.model.empty()) {
      inst = build_model(config.model, config.params);
      report.model_label = inst->label;
      if (config.suites.empty() && inst->dim() < 3) // conformal tensors need n >= 3
        suites.erase(std::remove(suites.begin(), suites.end(), "tensors"), suites.end());
    }
    for (const auto& s : suites) {
      if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end())
        fail(ErrorKind::ConfigError, "unknown suite: " + s);
      bool model_free = s == "algebraic" || s == "classification" || s == "engine-selftest";
      if (!inst && !model_free)
        fail(ErrorKind::ConfigError, "suite '" + s + "' needs --model");
      auto results = run_suite(inst ? &*inst : nullptr, s, opts);
      report.checks.insert(report.checks.end(), results.begin(), results.end());
    }
  }

  for (const auto& [name, tol] : config.tol_overrides) {
    bool found = false;
    for (auto& c : report.checks) {
      if (c.name == name) {
        c.tolerance = tol;
        c.passed = c.residual <= tol;
        found = true;
      }
    }
    if (!found) fail(ErrorKind::ConfigError, "tolerance override for unknown check: " + name);
  }

  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  for (const auto& c : report.checks) (c.passed ? report.passed : report.failed) += 1;
  return report;
}

namespace {

ordered_json check_to_json(const CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["passed"] = c.passed;
  j["points"] = c.points;
  j["paper_anchor"] = c.anchor;
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

} // namespace

std::string render_json(const Report& report) {
  ordered_json j;
  ordered_json cfg;
  cfg["model"] = report.config.model;
  cfg["model_label"] = report.model_label;
  cfg["params"] = report.config.params;
  cfg["suites"] = report.config.suites;
  cfg["points"] = report.config.points;
  cfg["tolerance_overrides"] = report.config.tol_overrides;
  cfg["engine_version"] = kEngineVersion;
  j["config"] = cfg;
  j["calibration"] = check_to_json(report.calibration);
  j["checks"] = ordered_json::array();
  for (const auto& c : report.checks) j["checks"].push_back(check_to_json(c));
  j["summary"] = {{"passed", report.passed},
                  {"failed", report.failed},
                  {"total", report.passed + report.failed}};
  return j.dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof(line), "model: %s   points: %d   engine: %s\n",
                report.model_label.empty() ? "(none)" : report.model_label.c_str(),
                report.config.points, kEngineVersion);
  out += line;
  std::snprintf(line, sizeof(line), "calibration %-28s %s  residual %.3e (tol %.1e)\n",
                report.calibration.name.c_str(), report.calibration.passed ? "pass" : "FAIL",
                report.calibration.residual, report.calibration.tolerance);
  out += line;
  out += "\n";
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof(line), "%-30s %s  residual %.3e (tol %.1e)  %s\n", c.name.c_str(),
                  c.passed ? "pass" : "FAIL", c.residual, c.tolerance, c.anchor.c_str());
    out += line;
    if (!c.notes.empty()) {
      std::snprintf(line, sizeof(line), "%-30s       %s\n", "", c.notes.c_str());
      out += line;
    }
  }
  std::snprintf(line, sizeof(line), "\nsummary: %d passed, %d failed, %d total\n", report.passed,
                report.failed, report.passed + report.failed);
  out += line;
  return out;
}

std::string render_scalar_table(int n, double m, double lambda, const std::string& format) {
  auto set = admissible_scalar_set(n, m, lambda);
  if (format == "json") {
    ordered_json j;
    j["n"] = n;
    j["m"] = m;
    j["lambda"] = lambda;
    j["values"] = ordered_json::array();
    for (const auto& e : set)
      j["values"].push_back({{"k", e.k}, {"R", e.R}, {"excluded", e.excluded}});
    return j.dump(2) + "\n";
  }
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "admissible scalar curvatures, n=%d m=%g lambda=%g\n", n, m,
                lambda);
  out += line;
  for (const auto& e : set) {
    std::snprintf(line, sizeof(line), "  k=%d  R=%.10g%s\n", e.k, e.R,
                  e.excluded ? "  (excluded)" : "");
    out += line;
  }
  return out;
}

std::string render_model_list(const std::string& format) {
  if (format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& e : model_catalog())
      j.push_back({{"name", e.name}, {"summary", e.summary}, {"params", e.params}});
    return j.dump(2) + "\n";
  }
  std::string out = "models:\n";
  for (const auto& e : model_catalog()) {
    out += "  " + e.name + "  (";
    for (size_t i = 0; i < e.params.size(); ++i) out += (i ? ", " : "") + e.params[i];
    out += ")\n      " + e.summary + "\n";
  }
  return out;
}

std::string render_check_list(const std::string& format) {
  if (format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& c : check_catalog())
      j.push_back({{"name", c.name},
                   {"suite", c.suite},
                   {"tolerance", c.tolerance},
                   {"paper_anchor", c.anchor}});
    return j.dump(2) + "\n";
  }
  std::string out = "checks:\n";
  char line[512];
  for (const auto& c : check_catalog()) {
    std::snprintf(line, sizeof(line), "  %-30s %-16s tol %.1e  %s\n", c.name.c_str(),
                  c.suite.c_str(), c.tolerance, c.anchor.c_str());
    out += line;
  }
  return out;
}

} // namespace qem
