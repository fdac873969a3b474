#include <cmath>

#include <doctest.h>

#include "qem/checks.hpp"
#include "qem/curvature.hpp"
#include "qem/linalg.hpp"
#include "qem/models.hpp"

using namespace qem;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("hemisphere structure constants") {
  auto h32 = hemisphere(3, 2.0);
  CHECK(h32.lambda == doctest::Approx(4.0));
  CHECK(h32.expected_scalar == doctest::Approx(6.0));
  CHECK(h32.expected_k == 0);
  CHECK(h32.expected_scalar ==
        doctest::Approx(3 * 2 * h32.lambda / (h32.m + 3 - 1))); // n(n-1) lambda/(m+n-1)

  auto h43 = hemisphere(4, 3.0);
  CHECK(h43.lambda == doctest::Approx(6.0));
  CHECK(h43.expected_scalar == doctest::Approx(12.0));
  CHECK(h43.expected_k == 0);
}

TEST_CASE("cylinder structure constants and Ricci spectrum") {
  auto c321 = cylinder(3, 2.0, 1.0);
  CHECK(c321.expected_scalar == doctest::Approx(2.0));
  CHECK(c321.expected_k == 2);

  auto c421 = cylinder(4, 2.0, 1.0);
  CHECK(c421.expected_scalar == doctest::Approx(3.0));
  for (const auto& x : sample_points(c421, 10)) {
    auto b = curvature_bundle(c421.metric, x, 2);
    auto eig = generalized_sym_eigenvalues(b.ric_v, b.g_v, 4);
    CHECK(std::fabs(eig[0]) < 1e-8);
    for (int i = 1; i < 4; ++i) CHECK(eig[i] == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("split model structure constants and spectrum") {
  for (double m : {1.5, 2.0, 3.0}) {
    auto dw = doubly_warped(1, 2, m);
    CHECK(dw.lambda == doctest::Approx(m + 1.0));
    CHECK(dw.expected_scalar == doctest::Approx(2.0 * (m + 2.0)));
    CHECK(dw.expected_scalar ==
          doctest::Approx(2.0 * (m + 2.0) * dw.lambda / (m + 1.0))); // 2(m+2)lambda/(m+1)
    CHECK(dw.expected_k == 2);
  }
  auto dw = doubly_warped(1, 2, 2.0);
  CHECK(dw.expected_scalar == doctest::Approx(8.0));
  for (const auto& x : sample_points(dw, 10)) {
    auto b = curvature_bundle(dw.metric, x, 2);
    auto eig = generalized_sym_eigenvalues(b.ric_v, b.g_v, 4);
    CHECK(eig[0] == doctest::Approx(dw.lambda / (dw.m + 1)).epsilon(1e-8));
    CHECK(eig[1] == doctest::Approx(dw.lambda / (dw.m + 1)).epsilon(1e-8));
    CHECK(eig[2] == doctest::Approx(dw.lambda).epsilon(1e-8));
    CHECK(eig[3] == doctest::Approx(dw.lambda).epsilon(1e-8));
  }
}

TEST_CASE("product model potential and boundary zeros") {
  auto pe = product_excg(2, 2, 2.0, 1.0);
  CHECK(pe.dim() == 5);
  CHECK(pe.expected_scalar == doctest::Approx(4.0));
  CHECK(pe.expected_k == 4);

  // hess u + (lambda/m) u dt^2 = 0
  for (const auto& x : sample_points(pe, 20)) {
    auto b = curvature_bundle(pe.metric, x, 4);
    auto u = pe.u(seed_point(x, 5, 4));
    auto H = hessian(b, u);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        double expect = (i == 0 && j == 0) ? -(pe.lambda / pe.m) * u.value() : 0.0;
        CHECK(std::fabs(H[id2(5, i, j)].value() - expect) < 1e-8);
      }
  }

  // u vanishes at both ends of the interval
  double span = std::sqrt(pe.m / pe.lambda) * kPi;
  for (double t : {0.0, span}) {
    std::vector<Jet> vars = seed_point({{t, 1.0, 1.0, 1.0, 1.0}}, 5, 0);
    CHECK(std::fabs(pe.u(vars).value()) < 1e-12);
  }
}

TEST_CASE("defining system residual on every built-in") {
  for (const QEInstance& inst :
       {hemisphere(3, 2.0), hemisphere(4, 3.0), cylinder(3, 2.0, 1.0),
        doubly_warped(1, 2, 2.0), product_excg(2, 2, 2.0, 1.0)}) {
    for (const auto& x : sample_points(inst, 50)) {
      PointData pd(inst, x);
      int n = inst.dim();
      for (int i = 0; i < n * n; ++i) {
        double rhs = pd.u_v / inst.m * (pd.b.ric_v[i] - inst.lambda * pd.b.g_v[i]);
        CHECK(std::fabs(pd.hess_u[i].value() - rhs) < 1e-8);
      }
    }
  }
}

TEST_CASE("integrability constant stays constant across the chart") {
  auto hs = hemisphere(3, 2.0);
  for (const auto& x : sample_points(hs, 30)) {
    PointData pd(hs, x);
    double mu = (pd.u_v * pd.u_v / hs.m) * (pd.b.scal_v - hs.lambda * 3) +
                (hs.m - 1.0) * pd.gradsq_v + hs.lambda * pd.u_v * pd.u_v;
    CHECK(std::fabs(mu - hs.mu) < 1e-10);
  }
  // closed forms: hemisphere mu = 1, cylinder mu = lambda (m-1)/m
  CHECK(hs.mu == doctest::Approx(1.0).epsilon(1e-12));
  auto cyl = cylinder(3, 2.0, 1.0);
  CHECK(cyl.mu == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("warped product closed-form Ricci") {
  // constant warping: Ricci splits as {0} + fiber
  WarpedSpec flat;
  flat.base = {0.0, 2.0};
  flat.phi = [](const Jet& t) { return 1.0 + 0.0 * t; };
  flat.fiber_dim = 3;
  flat.fiber_einstein = 2.0;
  auto r = warped_ricci_analytic(flat, 1.0);
  CHECK(r.horizontal == doctest::Approx(0.0));
  CHECK(r.vertical == doctest::Approx(2.0));

  // phi = sin t with a round fiber rebuilds the round sphere
  for (int n : {3, 4}) {
    WarpedSpec sph;
    sph.base = {0.0, kPi / 2};
    sph.phi = [](const Jet& t) { return sin(t); };
    sph.fiber_dim = n - 1;
    sph.fiber_einstein = n - 2.0;
    sph.label = "warped-sphere";
    for (double t : {0.5, 0.9, 1.3}) {
      auto wr = warped_ricci_analytic(sph, t);
      CHECK(wr.horizontal == doctest::Approx(n - 1.0).epsilon(1e-12));
      CHECK(wr.vertical == doctest::Approx(n - 1.0).epsilon(1e-12));
      CHECK(wr.scalar == doctest::Approx(n * (n - 1.0)).epsilon(1e-12));
    }
    if (n >= 3) {
      MetricSpec chart = warped_chart(sph);
      ChartPoint x;
      x.coords.assign(n, 1.0);
      x.coords[0] = 0.9;
      auto b = curvature_bundle(chart, x, 2);
      auto wr = warped_ricci_analytic(sph, 0.9);
      CHECK(std::fabs(b.scal_v - wr.scalar) < 1e-8);
    }
  }

  // cosh warping reproduces the hyperbolic-profile scalar curvature
  InexParams hp;
  hp.n = 4;
  hp.kappa = 2.0;
  hp.beta = 0.8;
  hp.a = 0.3;
  hp.b = 1.0;
  WarpedSpec spec = inex_warped_spec(InexKind::Hyperbolic, hp);
  MetricSpec chart = warped_chart(spec);
  for (double t : {0.4, 0.9, 1.5}) {
    auto prof = inex_scalar_profile(InexKind::Hyperbolic, hp, {t});
    ChartPoint x{{t, 1.2, 1.0, 2.0}};
    auto b = curvature_bundle(chart, x, 2);
    CHECK(std::fabs(b.scal_v - prof[0]) < 1e-6);
    auto wr = warped_ricci_analytic(spec, t);
    CHECK(std::fabs(wr.scalar - prof[0]) < 1e-10);
  }
}

TEST_CASE("non-existence profiles") {
  // cone with kappa = (n-2) alpha^2 flattens to zero
  InexParams cone;
  cone.n = 4;
  cone.alpha = 1.0;
  cone.kappa = 2.0; // = (n-2) alpha^2
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.6 + 0.02 * i);
  for (double r : inex_scalar_profile(InexKind::Cone, cone, grid))
    CHECK(std::fabs(r) < 1e-14);

  // generic cone and cosh profiles move around
  cone.kappa = 3.0;
  auto prof = inex_scalar_profile(InexKind::Cone, cone, grid);
  double lo = 1e300, hi = -1e300;
  for (double r : prof) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi - lo > 1e-3);

  InexParams hyp;
  hyp.n = 4;
  hyp.beta = 1.0;
  hyp.kappa = 2.0;
  hyp.a = 0.0;
  hyp.b = 1.0;
  auto hprof = inex_scalar_profile(InexKind::Hyperbolic, hyp, grid);
  lo = 1e300;
  hi = -1e300;
  for (double r : hprof) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi - lo > 1e-3);

  // degenerate branch: constant and equal to -n(n-1) beta < 0
  hyp.a = inex_forced_sinh_coefficient(4, hyp.beta, hyp.b, hyp.kappa);
  for (double r : inex_scalar_profile(InexKind::Hyperbolic, hyp, grid)) {
    CHECK(r == doctest::Approx(-12.0 * hyp.beta).epsilon(1e-12));
    CHECK(r < 0.0);
  }

  // profiles refuse a sign-changing warping
  InexParams bad = hyp;
  bad.a = -2.0;
  bad.b = 1.0;
  CHECK_THROWS_AS(inex_scalar_profile(InexKind::Hyperbolic, bad, grid), Error);
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(hemisphere(7, 2.0), Error);
  CHECK_THROWS_AS(hemisphere(3, 1.0), Error);
  CHECK_THROWS_AS(cylinder(2, 2.0, 1.0), Error);
  CHECK_THROWS_AS(cylinder(3, 2.0, -1.0), Error);
  CHECK_THROWS_AS(doubly_warped(0, 2, 2.0), Error);
  CHECK_THROWS_AS(doubly_warped(1, 1, 2.0), Error);
  CHECK_THROWS_AS(doubly_warped(2, 4, 2.0), Error); // n = 7
  CHECK_THROWS_AS(product_excg(1, 2, 2.0, 1.0), Error);
  try {
    hemisphere(3, 0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
  }
  try {
    hemisphere(8, 2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("sample points respect domains and the potential floor") {
  for (const QEInstance& inst : {cylinder(3, 10.0, 1.0), product_excg(2, 2, 2.0, 1.0)}) {
    for (const auto& x : sample_points(inst, 40)) {
      CHECK(inst.metric.contains(x));
      auto u = inst.u(seed_point(x, inst.dim(), 0));
      CHECK(u.value() >= 0.05 * inst.u_max - 1e-12);
    }
  }
}
