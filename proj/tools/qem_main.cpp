#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qem/report.hpp"

namespace {

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open output file: " << output << "\n";
    std::exit(2);
  }
  f << text;
}

std::map<std::string, double> parse_tols(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& item : raw) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--tol expects name=value, got '" + item + "'");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Einstein metric laboratory"};
  app.require_subcommand(1);

  std::string model, format = "text", output;
  std::vector<std::string> suites, tols;
  int points = 50;
  double m = -1.0, lambda = -1.0;
  int n = -1, p = -1, q = -1;

  auto* check = app.add_subcommand("check", "run verification suites on a model");
  check->add_option("--model", model, "model name (see list-models)");
  check->add_option("--suite", suites, "suite to run, repeatable (default: all applicable)");
  check->add_option("--points", points, "sample points per check")->check(CLI::PositiveNumber);
  check->add_option("--n", n, "dimension");
  check->add_option("--m", m, "quasi-Einstein parameter m (> 1)");
  check->add_option("--lambda", lambda, "Einstein-type constant (> 0)");
  check->add_option("--p", p, "first factor dimension");
  check->add_option("--q", q, "second factor dimension");
  check->add_option("--tol", tols, "tolerance override name=value, repeatable");
  check->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  check->add_option("--output", output, "write the report to a file");

  auto* lm = app.add_subcommand("list-models", "print the model catalog");
  lm->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  lm->add_option("--output", output, "write to a file");

  auto* lc = app.add_subcommand("list-checks", "print the check catalog");
  lc->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  lc->add_option("--output", output, "write to a file");

  int ls_n = 4;
  double ls_m = 2.0, ls_lambda = 1.0;
  auto* ls = app.add_subcommand("list-scalars", "admissible constant scalar curvatures");
  ls->add_option("--n", ls_n, "dimension")->check(CLI::Range(2, 8));
  ls->add_option("--m", ls_m, "quasi-Einstein parameter m (> 1)");
  ls->add_option("--lambda", ls_lambda, "Einstein-type constant (> 0)");
  ls->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  ls->add_option("--output", output, "write to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lm->parsed()) {
      emit(qem::render_model_list(format), output);
      return 0;
    }
    if (lc->parsed()) {
      emit(qem::render_check_list(format), output);
      return 0;
    }
    if (ls->parsed()) {
      if (ls_m <= 1.0) {
        std::cerr << "error: m must exceed 1\n";
        return 2;
      }
      if (ls_lambda <= 0.0) {
        std::cerr << "error: lambda must be positive\n";
        return 2;
      }
      emit(qem::render_scalar_table(ls_n, ls_m, ls_lambda, format), output);
      return 0;
    }

    qem::RunConfig config;
    config.model = model;
    config.suites = suites;
    config.points = points;
    config.format = format;
    config.tol_overrides = parse_tols(tols);
    if (m > 0 || check->count("--m")) {
      if (m <= 1.0) {
        std::cerr << "error: m must exceed 1\n";
        return 2;
      }
      config.params["m"] = m;
    }
    if (check->count("--lambda")) {
      if (lambda <= 0.0) {
        std::cerr << "error: lambda must be positive\n";
        return 2;
      }
      config.params["lambda"] = lambda;
    }
    if (check->count("--n")) config.params["n"] = n;
    if (check->count("--p")) config.params["p"] = p;
    if (check->count("--q")) config.params["q"] = q;

    auto t0 = std::chrono::steady_clock::now();
    qem::Report report = qem::run(config);
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    emit(format == "json" ? qem::render_json(report) : qem::render_text(report), output);
    std::cerr << "wall time: " << wall_ms << " ms\n";
    return (report.failed == 0 && report.calibration.passed) ? 0 : 1;
  } catch (const qem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
