#include <cmath>

#include <doctest.h>

#include "qem/checks.hpp"
#include "qem/report.hpp"

using namespace qem;

namespace {

double residual_of(const std::vector<CheckResult>& results, const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return r.residual;
  FAIL("missing check ", name);
  return -1.0;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

} // namespace

TEST_CASE("admissible scalar set matches the printed values") {
  auto set = admissible_scalar_set(4, 2.0, 1.0);
  REQUIRE(set.size() == 4);
  CHECK(set[0].R == doctest::Approx(2.4).epsilon(1e-14)); // 12/(m+3)
  CHECK(set[1].R == doctest::Approx(2.5).epsilon(1e-14)); // (m+8)/(m+2)
  CHECK(set[1].excluded);
  CHECK(set[2].R == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(set[3].R == doctest::Approx(3.0).epsilon(1e-14));

  // endpoint collapses for general n
  for (int n : {3, 4, 5, 6}) {
    for (double m : {1.5, 2.0, 5.0}) {
      auto s = admissible_scalar_set(n, m, 1.0);
      CHECK(s.front().R == doctest::Approx(n * (n - 1.0) / (m + n - 1.0)).epsilon(1e-14));
      CHECK(s.back().R == doctest::Approx(n - 1.0).epsilon(1e-14));
      for (const auto& e : s) CHECK(e.R < n * 1.0);
    }
  }
}

TEST_CASE("classification inverts the enumerator and pins the models") {
  for (int n = 3; n <= 6; ++n)
    for (double m : {1.5, 2.0, 3.0, 10.0}) {
      auto set = admissible_scalar_set(n, m, 1.3);
      for (const auto& e : set) {
        auto k = classify_scalar(e.R, n, m, 1.3, 1e-9);
        REQUIRE(k.has_value());
        CHECK(*k == e.k);
      }
    }
  CHECK(*classify_scalar(12.0, 4, 3.0, 6.0, 1e-9) == 0);   // hemisphere(4,3)
  CHECK(*classify_scalar(3.0, 4, 2.0, 1.0, 1e-9) == 3);    // cylinder(4)
  CHECK(*classify_scalar(8.0, 4, 2.0, 3.0, 1e-9) == 2);    // split model, lambda = m+1
  CHECK(!classify_scalar(100.0, 4, 2.0, 1.0, 1e-9).has_value());
  CHECK_THROWS_AS(classify_scalar(2.4, 4, 2.0, 1.0, -1.0), Error);
  CHECK_THROWS_AS(classify_scalar(2.45, 4, 2.0, 1.0, 0.05), Error); // matches k=0 and k=1
}

TEST_CASE("pairwise product bound") {
  auto r = lemsum_check({1.0, 1.0});
  CHECK(r.b == doctest::Approx(2.0));
  CHECK(r.min_pair_product == doctest::Approx(1.0));
  CHECK(r.bound_ok); // equality case

  // the split-model pattern (t, t, 0, 0): b = -2t^2 < 0, every product >= bound
  double t = 1.7;
  auto r2 = lemsum_check({t, t, 0.0, 0.0});
  CHECK(r2.b == doctest::Approx(4 * t * t - 3 * 2 * t * t));
  CHECK(r2.b < 0.0);
  CHECK(r2.bound_ok);

  CHECK_THROWS_AS(lemsum_check({0.0, 1.0}), Error);
  CHECK_THROWS_AS(lemsum_check({1.0}), Error);
}

TEST_CASE("symmetric sum identities on the constrained family") {
  double m = 2.0, rho = 1.0;
  auto r = symmetric_sum_identities({m * rho, m * rho, 0.0}, m, rho);
  CHECK(r.cubic_product < 1e-12);
  CHECK(r.quartic_sum < 1e-12);
  CHECK(r.cubic_expansion < 1e-12);

  // violating the norm constraint is rejected
  double a = 2.0 * m * rho / 3.0;
  CHECK_THROWS_AS(symmetric_sum_identities({a, a, a}, m, rho), Error);
}

TEST_CASE("suite runs pass on every built-in model") {
  SuiteOptions opts;
  opts.points = 10;
  for (const QEInstance& inst :
       {hemisphere(3, 2.0), cylinder(3, 2.0, 1.0), doubly_warped(1, 2, 2.0)}) {
    for (const std::string suite : {"defining", "lemmafund", "tensors", "dim4"}) {
      auto results = run_suite(&inst, suite, opts);
      CHECK(!results.empty());
      for (const auto& r : results) {
        INFO(inst.label, " ", r.name, " residual ", r.residual);
        CHECK(r.passed);
      }
    }
  }
}

TEST_CASE("model-free suites pass") {
  SuiteOptions opts;
  opts.points = 10;
  for (const std::string suite : {"algebraic", "classification", "engine-selftest"}) {
    auto results = run_suite(nullptr, suite, opts);
    CHECK(!results.empty());
    for (const auto& r : results) {
      INFO(r.name, " residual ", r.residual);
      CHECK(r.passed);
    }
  }
  CHECK_THROWS_AS(run_suite(nullptr, "defining", opts), Error);
  CHECK_THROWS_AS(run_suite(nullptr, "no-such-suite", opts), Error);
}

TEST_CASE("negative control: wrong lambda breaks the defining system") {
  QEInstance wrong = hemisphere(3, 2.0);
  wrong.lambda += 0.1;
  SuiteOptions opts;
  opts.points = 10;
  auto results = run_suite(&wrong, "defining", opts);
  CHECK(residual_of(results, "defining-hessian") > 1e-3);
}

TEST_CASE("negative control: shifted potential breaks the transnormal relation") {
  QEInstance bad = cylinder(3, 2.0, 1.0);
  ScalarField u0 = bad.u;
  bad.u = [u0](const std::vector<Jet>& v) { return u0(v) + 0.01; };
  SuiteOptions opts;
  opts.points = 10;
  auto results = run_suite(&bad, "lemmafund", opts);
  CHECK(residual_of(results, "transnormal-relation") > 1e-4);
}

TEST_CASE("negative controls: perturbed coefficients break each derivative identity") {
  QEInstance dw = doubly_warped(1, 2, 2.0);
  SuiteOptions opts;
  opts.points = 6;

  auto faithful = run_suite(&dw, "dim4", opts);
  CHECK(all_passed(faithful));

  struct Control {
    const char* check;
    Dim4Perturbation pert;
  };
  std::vector<Control> controls;
  {
    Dim4Perturbation p;
    p.ricci_square_term = (2.0 + 1.1) / 3.0; // (m+1.1)/(m+1) on the printed coefficient
    controls.push_back({"ricci-laplacian-diff", p});
  }
  {
    Dim4Perturbation p;
    p.riemann_ricci_term = 1.05;
    controls.push_back({"ricci-laplacian-diff", p});
  }
  {
    Dim4Perturbation p;
    p.ricci_quartic_term = 1.02;
    controls.push_back({"ricci-cubic-drift-diff", p});
  }
  {
    Dim4Perturbation p;
    p.p_quartic_term = 1.01;
    controls.push_back({"p-cubic-laplacian-diff", p});
  }
  {
    Dim4Perturbation p;
    p.drift_constant_term = 1.05;
    controls.push_back({"p-cubic-drift-diff", p});
  }
  {
    Dim4Perturbation p;
    p.drift_leading_term = 1.03;
    controls.push_back({"p-cubic-drift-reduced-diff", p});
  }
  {
    Dim4Perturbation p;
    p.p_norm_term = 1.1;
    controls.push_back({"p-riemann-contraction", p});
  }
  for (const auto& c : controls) {
    SuiteOptions perturbed = opts;
    perturbed.perturb = &c.pert;
    auto results = run_suite(&dw, "dim4", perturbed);
    INFO("control on ", std::string(c.check));
    CHECK(residual_of(results, c.check) > 1e-3);
  }
}

TEST_CASE("inequality slack stays nonnegative on the rigid model") {
  QEInstance dw = doubly_warped(1, 2, 2.0);
  SuiteOptions opts;
  opts.points = 4;
  auto results = run_suite(&dw, "dim4", opts);
  CHECK(residual_of(results, "p-cubic-drift-bound") <= 1e-6);
  CHECK(residual_of(results, "h-nonnegative") <= 1e-10);
}

TEST_CASE("trivial instance: constant potential over an Einstein metric") {
  QEInstance trivial = hemisphere(3, 2.0); // unit round chart, Ric = 2g
  trivial.u = constant_field(1.0);
  trivial.lambda = 2.0; // the Einstein constant
  trivial.mu = 2.0;     // (m-1)|du|^2 + u^2((R-n lambda)/m + lambda)
  trivial.rho = ((3 - 1) * trivial.lambda - 6.0) / (trivial.m - 1.0);
  for (const auto& x : sample_points(trivial, 10)) {
    PointData pd(trivial, x);
    for (int i = 0; i < 9; ++i) {
      double rhs = pd.u_v / trivial.m * (pd.b.ric_v[i] - trivial.lambda * pd.b.g_v[i]);
      CHECK(std::fabs(pd.hess_u[i].value() - rhs) < 1e-12);
    }
  }
}

TEST_CASE("boundary trace relation with frozen values") {
  // cylinder n=3, lambda=1: boundary sphere of radius 1 has intrinsic R = 2
  // hemisphere n=3: equator sphere, R = 2 = 6 - 2*2
  // split model m=2: boundary circle x sphere, R = 6 = 8 - 2*1
  struct Case {
    QEInstance inst;
    double boundary_R;
  };
  std::vector<Case> cases;
  cases.push_back({cylinder(3, 2.0, 1.0), 2.0});
  cases.push_back({hemisphere(3, 2.0), 2.0});
  cases.push_back({doubly_warped(1, 2, 2.0), 6.0});
  for (const auto& c : cases) {
    REQUIRE(c.inst.boundary_scalar.has_value());
    CHECK(*c.inst.boundary_scalar == doctest::Approx(c.boundary_R).epsilon(1e-14));
    PointData pd(c.inst, sample_points(c.inst, 1).front());
    CHECK(std::fabs(boundary_scalar_residual(pd)) < 1e-8);
  }

  QEInstance no_data = hemisphere(3, 2.0);
  no_data.boundary_scalar.reset();
  PointData pd(no_data, sample_points(no_data, 1).front());
  CHECK_THROWS_AS(boundary_scalar_residual(pd), Error);
}

TEST_CASE("split-scalar guard rejects the wrong instances") {
  QEInstance dw = doubly_warped(1, 2, 2.0);
  require_split_scalar(dw, dw.expected_scalar); // fine
  CHECK_THROWS_AS(require_split_scalar(dw, dw.expected_scalar + 0.1), Error);
  QEInstance cyl = cylinder(4, 2.0, 1.0);
  CHECK_THROWS_AS(require_split_scalar(cyl, cyl.expected_scalar), Error);
  try {
    require_split_scalar(cyl, cyl.expected_scalar);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongScalarCurvature);
  }
}

TEST_CASE("profile checks pass for both warped families") {
  for (auto kind : {InexKind::Cone, InexKind::Hyperbolic}) {
    InexParams p;
    p.n = 4;
    p.kappa = 2.0;
    auto results = run_profile_checks(kind, p, 20);
    CHECK(!results.empty());
    for (const auto& r : results) {
      INFO(r.name, " residual ", r.residual);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("spectral profile traces match the eigenvalues") {
  QEInstance dw = doubly_warped(1, 2, 2.0);
  PointData pd(dw, sample_points(dw, 1).front());
  auto sp = spectral_profile(pd);
  double sum = 0.0, sum2 = 0.0;
  for (double e : sp.p_eigenvalues) {
    sum += e;
    sum2 += e * e;
  }
  CHECK(sp.traceP == doctest::Approx(sum).epsilon(1e-10));
  CHECK(sp.normP2 == doctest::Approx(sum2).epsilon(1e-10));
  // rigid-model pattern {0, 0, m rho, m rho}
  CHECK(sp.p_eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(sp.p_eigenvalues[3] == doctest::Approx(dw.m * dw.rho).epsilon(1e-8));
}

TEST_CASE("reports are deterministic and json renders round-trip") {
  RunConfig cfg;
  cfg.model = "hemisphere";
  cfg.params = {{"n", 3}, {"m", 2}};
  cfg.suites = {"defining"};
  cfg.points = 6;
  cfg.format = "json";
  Report a = run(cfg);
  Report b = run(cfg);
  CHECK(render_json(a) == render_json(b));
  CHECK(render_text(a) == render_text(b));
  CHECK(a.failed == 0);

  // tolerance overrides change pass status and unknown names are rejected
  cfg.tol_overrides = {{"defining-hessian", 1e-30}};
  Report c = run(cfg);
  CHECK(c.failed == 1);
  cfg.tol_overrides = {{"no-such-check", 1.0}};
  CHECK_THROWS_AS(run(cfg), Error);
}

TEST_CASE("two-dimensional hemisphere runs everything but the conformal tensors") {
  QEInstance h2 = hemisphere(2, 2.0);
  SuiteOptions opts;
  opts.points = 6;
  for (const std::string suite : {"defining", "lemmafund", "dim4"}) {
    auto results = run_suite(&h2, suite, opts);
    for (const auto& r : results) {
      INFO(r.name, " residual ", r.residual);
      CHECK(r.passed);
    }
  }
  CHECK_THROWS_AS(run_suite(&h2, "tensors", opts), Error);

  RunConfig cfg;
  cfg.model = "hemisphere";
  cfg.params = {{"n", 2}, {"m", 2}};
  cfg.points = 6;
  Report rep = run(cfg); // default suites drop the tensors set for n = 2
  CHECK(rep.failed == 0);
  for (const auto& c : rep.checks) CHECK(c.name != "p-annihilates-gradient");
}

TEST_CASE("calibration check is mandatory and tight") {
  auto cal = calibration_check();
  CHECK(cal.name == "calibration-sphere-ricci");
  CHECK(cal.passed);
  CHECK(cal.residual < 1e-12);
}
