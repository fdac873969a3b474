#pragma once

#include <map>
#include <string>
#include <vector>

#include "qem/checks.hpp"

namespace qem {

inline constexpr const char* kEngineVersion = "0.1.0";

struct RunConfig {
  std::string model; // empty runs only model-free suites
  std::map<std::string, double> params;
  std::vector<std::string> suites; // empty = every applicable suite
  int points = 50;
  std::map<std::string, double> tol_overrides;
  std::string format = "text"; // or "json"
};

struct Report {
  RunConfig config;
  std::string model_label;
  CheckResult calibration;
  std::vector<CheckResult> checks; // sorted by name
  int passed = 0;
  int failed = 0;
};

struct ModelEntry {
  std::string name;
  std::string summary;
  std::vector<std::string> params; // accepted parameters with defaults baked in
};
const std::vector<ModelEntry>& model_catalog();

bool is_quasi_einstein_model(const std::string& name);

// Builds the requested catalog model; throws ConfigError for bad names/params.
QEInstance build_model(const std::string& name, const std::map<std::string, double>& params);
InexParams build_inex_params(const std::string& name, const std::map<std::string, double>& params);

Report run(const RunConfig& config);

std::string render_json(const Report& report);
std::string render_text(const Report& report);

std::string render_scalar_table(int n, double m, double lambda, const std::string& format);
std::string render_model_list(const std::string& format);
std::string render_check_list(const std::string& format);

} // namespace qem
