#include <cmath>

#include <doctest.h>

#include "qem/curvature.hpp"
#include "qem/fd_oracle.hpp"
#include "qem/models.hpp"

using namespace qem;

namespace {

constexpr double kPi = 3.14159265358979323846;

MetricSpec flat_space(int n) {
  std::vector<ScalarField> diag(n, constant_field(1.0));
  std::vector<Interval> dom(n, Interval{-1.0, 1.0});
  return diagonal_metric(n, std::move(diag), std::move(dom), "flat");
}

// round sphere chart scaled by a constant factor c (radius^2)
MetricSpec scaled_sphere(int n, double c) {
  QEInstance hs = hemisphere(n, 2.0);
  MetricSpec spec = hs.metric;
  for (auto& f : spec.comp) {
    ScalarField inner = f;
    f = [inner, c](const std::vector<Jet>& v) { return c * inner(v); };
  }
  spec.label = "scaled-sphere";
  return spec;
}

} // namespace

TEST_CASE("flat space has no curvature") {
  auto b = curvature_bundle(flat_space(3), {{0.2, -0.1, 0.4}}, 4);
  for (const auto& v : b.gamma) CHECK(v.value() == 0.0);
  for (double v : b.riem_v) CHECK(v == 0.0);
  for (double v : b.ric_v) CHECK(v == 0.0);
  CHECK(b.scal_v == 0.0);
}

TEST_CASE("sphere chart connection and sectional curvature") {
  QEInstance s2 = hemisphere(2, 2.0);
  auto b = curvature_bundle(s2.metric, {{kPi / 3, 1.0}}, 4);
  double th = kPi / 3;
  CHECK(b.gamma[id3(2, 0, 1, 1)].value() ==
        doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-13));
  CHECK(b.gamma[id3(2, 1, 0, 1)].value() ==
        doctest::Approx(1.0 / std::tan(th)).epsilon(1e-13));
  CHECK(b.riem_v[id4(2, 0, 1, 0, 1)] ==
        doctest::Approx(std::sin(th) * std::sin(th)).epsilon(1e-13));
  // orthonormal sectional curvature is +1
  double K = b.riem_v[id4(2, 0, 1, 0, 1)] / (b.g_v[0] * b.g_v[3]);
  CHECK(K == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("product metrics drop every connection coefficient with a base index") {
  QEInstance cyl = cylinder(3, 2.0, 1.0);
  auto b = curvature_bundle(cyl.metric, {{1.0, 1.2, 2.5}}, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::fabs(b.gamma[id3(3, 0, i, j)].value()) < 1e-15);
      CHECK(std::fabs(b.gamma[id3(3, i, 0, j)].value()) < 1e-15);
      CHECK(std::fabs(b.gamma[id3(3, i, j, 0)].value()) < 1e-15);
    }
}

TEST_CASE("unit spheres calibrate to Ric = (n-1) g") {
  for (int n : {3, 4, 5}) {
    QEInstance hs = hemisphere(n, 2.0);
    for (const auto& x : sample_points(hs, 5)) {
      auto b = curvature_bundle(hs.metric, x, 2);
      for (int i = 0; i < n * n; ++i)
        CHECK(std::fabs(b.ric_v[i] - (n - 1.0) * b.g_v[i]) < 1e-10);
      CHECK(b.scal_v == doctest::Approx(n * (n - 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaling the metric scales curvature the right way") {
  // g -> c g: Gamma unchanged, Ric unchanged, R -> R/c
  double c = 4.0;
  auto base = hemisphere(3, 2.0).metric;
  auto scaled = scaled_sphere(3, c);
  ChartPoint x{{0.8, 1.0, 2.1}};
  auto b0 = curvature_bundle(base, x, 2);
  auto b1 = curvature_bundle(scaled, x, 2);
  for (size_t i = 0; i < b0.gamma.size(); ++i)
    CHECK(std::fabs(b0.gamma[i].value() - b1.gamma[i].value()) < 1e-10);
  for (int i = 0; i < 9; ++i) CHECK(std::fabs(b0.ric_v[i] - b1.ric_v[i]) < 1e-10);
  CHECK(b1.scal_v == doctest::Approx(b0.scal_v / c).epsilon(1e-10));
  // sectional curvature of a radius-a sphere is 1/a^2
  double K = b1.riem_v[id4(3, 0, 1, 0, 1)] / (b1.g_v[0] * b1.g_v[4]);
  CHECK(K == doctest::Approx(1.0 / c).epsilon(1e-10));
}

TEST_CASE("hessian examples") {
  // linear function on flat space
  auto flat = flat_space(2);
  auto b = curvature_bundle(flat, {{0.1, 0.2}}, 4);
  auto vars = seed_point({{0.1, 0.2}}, 2, 4);
  Jet lin = 3.0 * vars[0] - 2.0 * vars[1] + 1.0;
  for (const auto& h : hessian(b, lin)) CHECK(std::fabs(h.value()) < 1e-15);

  // u = cos r on the round sphere: hess u = -cos r g
  QEInstance hs = hemisphere(3, 2.0);
  for (const auto& x : sample_points(hs, 10)) {
    auto bs = curvature_bundle(hs.metric, x, 4);
    auto u = hs.u(seed_point(x, 3, 4));
    auto H = hessian(bs, u);
    for (int i = 0; i < 9; ++i)
      CHECK(std::fabs(H[i].value() + std::cos(x.coords[0]) * bs.g_v[i]) < 1e-8);
  }

  // cylinder potential: hess u = -(lambda/m) u dt^2
  QEInstance cyl = cylinder(3, 2.0, 1.0);
  for (const auto& x : sample_points(cyl, 10)) {
    auto bc = curvature_bundle(cyl.metric, x, 4);
    auto u = cyl.u(seed_point(x, 3, 4));
    auto H = hessian(bc, u);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double expect = (i == 0 && j == 0) ? -(cyl.lambda / cyl.m) * u.value() : 0.0;
        CHECK(std::fabs(H[id2(3, i, j)].value() - expect) < 1e-12);
      }
  }
}

TEST_CASE("covariant derivative: metricity and parallel Ricci") {
  QEInstance hs = hemisphere(3, 2.0);
  ChartPoint x{{0.7, 1.2, 2.0}};
  auto b = curvature_bundle(hs.metric, x, 4);

  // grad(f g) = df (x) g
  auto vars = seed_point(x, 3, 4);
  Jet f = sin(vars[0]) * cosh(vars[1]);
  std::vector<Jet> fg(9);
  for (int i = 0; i < 9; ++i) fg[i] = f * b.g[i];
  auto dfg = covariant_derivative(b, fg, 2);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::fabs(dfg[id3(3, a, i, j)].value() - f.partial(a) * b.g_v[id2(3, i, j)]) <
              1e-10);

  // every built-in has parallel Ricci
  for (const QEInstance& inst :
       {hemisphere(3, 2.0), cylinder(3, 2.0, 1.0), doubly_warped(1, 2, 2.0),
        product_excg(2, 2, 2.0, 1.0)}) {
    for (const auto& pt : sample_points(inst, 6)) {
      auto bi = curvature_bundle(inst.metric, pt, 3);
      auto dric = covariant_derivative(bi, bi.ric, 2);
      for (const auto& v : dric) CHECK(std::fabs(v.value()) < 1e-8);
    }
  }
}

TEST_CASE("covariant derivative of Ricci against finite differences of the pipeline") {
  // cosh-warped metric: not quasi-Einstein, Ricci genuinely non-parallel
  WarpedSpec spec;
  spec.base = {0.0, 2.0};
  spec.phi = [](const Jet& t) { return cosh(0.7 * t); };
  spec.fiber_dim = 2;
  spec.fiber_einstein = 1.0;
  spec.label = "cosh-warped";
  MetricSpec ms = warped_chart(spec);

  ChartPoint x{{0.9, 1.3, 2.0}};
  auto b = curvature_bundle(ms, x, 4);
  auto dric = covariant_derivative(b, b.ric, 2);

  double worst_nonzero = 0.0;
  for (const auto& v : dric) worst_nonzero = std::max(worst_nonzero, std::fabs(v.value()));
  CHECK(worst_nonzero > 1e-3);

  int n = 3;
  double h = 0.01;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto ric_at = [&](double t) {
          auto c = x;
          c.coords[a] = t;
          return curvature_bundle(ms, c, 2).ric_v[id2(n, i, j)];
        };
        double dpart = fd_derivative(ric_at, x.coords[a], h);
        double covar = dpart;
        for (int c = 0; c < n; ++c)
          covar -= b.gamma[id3(n, c, a, i)].value() * b.ric_v[id2(n, c, j)] +
                   b.gamma[id3(n, c, a, j)].value() * b.ric_v[id2(n, i, c)];
        CHECK(std::fabs(dric[id3(n, a, i, j)].value() - covar) < 1e-4);
      }
}

TEST_CASE("tensor laplacian: metric, parallel Ricci, and a genuine field") {
  QEInstance hs = hemisphere(3, 2.0);
  ChartPoint x{{0.7, 1.2, 2.0}};
  auto b = curvature_bundle(hs.metric, x, 4);
  auto lap_g = tensor_laplacian_t2(b, b.g);
  for (double v : lap_g) CHECK(std::fabs(v) < 1e-12);

  for (const QEInstance& inst :
       {hemisphere(3, 2.0), cylinder(3, 2.0, 1.0), doubly_warped(1, 2, 2.0)}) {
    for (const auto& pt : sample_points(inst, 5)) {
      auto bi = curvature_bundle(inst.metric, pt, 4);
      for (double v : tensor_laplacian_t2(bi, bi.ric)) CHECK(std::fabs(v) < 1e-7);
    }
  }

  // non-parallel case: outer derivative by finite differences of grad Ric
  WarpedSpec spec;
  spec.base = {0.0, 2.0};
  spec.phi = [](const Jet& t) { return cosh(0.7 * t); };
  spec.fiber_dim = 2;
  spec.fiber_einstein = 1.0;
  spec.label = "cosh-warped";
  MetricSpec ms = warped_chart(spec);
  ChartPoint y{{0.9, 1.3, 2.0}};
  auto bw = curvature_bundle(ms, y, 4);
  auto lap = tensor_laplacian_t2(bw, bw.ric);

  int n = 3;
  double h = 0.01;
  auto dric_at = [&](const ChartPoint& pt) {
    auto bb = curvature_bundle(ms, pt, 3);
    return values_of(covariant_derivative(bb, bb.ric, 2));
  };
  auto base_dric = dric_at(y);
  std::vector<double> dd(n * n * n * n, 0.0); // [a][b][i][j] = partial_a (grad Ric)_{b i j}
  for (int a = 0; a < n; ++a) {
    auto shift = [&](double s) {
      auto c = y;
      c.coords[a] += s;
      return dric_at(c);
    };
    auto up2 = shift(2 * h), up1 = shift(h), dn1 = shift(-h), dn2 = shift(-2 * h);
    for (int r = 0; r < n * n * n; ++r)
      dd[a * n * n * n + r] = (-up2[r] + 8 * up1[r] - 8 * dn1[r] + dn2[r]) / (12 * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          double second = dd[id4(n, a, c, i, j)];
          for (int e = 0; e < n; ++e)
            second -= bw.gamma[id3(n, e, a, c)].value() * base_dric[id3(n, e, i, j)] +
                      bw.gamma[id3(n, e, a, i)].value() * base_dric[id3(n, c, e, j)] +
                      bw.gamma[id3(n, e, a, j)].value() * base_dric[id3(n, c, i, e)];
          sum += bw.up(a, c) * second;
        }
      CHECK(std::fabs(lap[id2(n, i, j)] - sum) < 1e-3);
    }
}

TEST_CASE("kulkarni-nomizu product basics") {
  int n = 4;
  std::vector<double> g(n * n, 0.0);
  for (int i = 0; i < n; ++i) g[i * n + i] = 1.0;
  auto gg = kulkarni_nomizu(g, g, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double expect = 2.0 * ((i == k && j == l ? 1.0 : 0.0) -
                                 (i == l && j == k ? 1.0 : 0.0));
          CHECK(gg[id4(n, i, j, k, l)] == doctest::Approx(expect));
        }

  // symmetry S o T = T o S on random pairs
  unsigned long long state = 99;
  auto next = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 11) & 0xFFFFFF) / double(0xFFFFFF) - 0.5;
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> S(n * n), T(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S[i * n + j] = S[j * n + i] = next();
        T[i * n + j] = T[j * n + i] = next();
      }
    auto st = kulkarni_nomizu(S, T, n);
    auto ts = kulkarni_nomizu(T, S, n);
    for (int i = 0; i < n * n * n * n; ++i) CHECK(st[i] == doctest::Approx(ts[i]));
  }
}

TEST_CASE("weyl vanishes on constant curvature and is trace-free elsewhere") {
  QEInstance s4 = hemisphere(4, 2.0);
  ChartPoint x{{0.8, 1.0, 1.4, 2.0}};
  auto b = curvature_bundle(s4.metric, x, 2);
  for (const auto& w : weyl_jets(b)) CHECK(std::fabs(w.value()) < 1e-11);

  // |W|^2 constant and positive on the split model
  QEInstance dw = doubly_warped(1, 2, 2.0);
  double first = -1.0;
  for (const auto& pt : sample_points(dw, 50)) {
    auto bd = curvature_bundle(dw.metric, pt, 2);
    auto W = values_of(weyl_jets(bd));
    double norm2 = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double wU = 0.0;
            for (int a = 0; a < 4; ++a)
              for (int c = 0; c < 4; ++c)
                for (int e = 0; e < 4; ++e)
                  for (int f = 0; f < 4; ++f)
                    wU += bd.up(i, a) * bd.up(j, c) * bd.up(k, e) * bd.up(l, f) *
                          W[id4(4, a, c, e, f)];
            norm2 += W[id4(4, i, j, k, l)] * wU;
          }
    CHECK(norm2 > 0.1);
    if (first < 0)
      first = norm2;
    else
      CHECK(std::fabs(norm2 - first) < 1e-8);
  }

  // the round cylinder is conformally flat, so W = 0 and W(.,.,.,grad u) = 0
  QEInstance cyl = cylinder(4, 2.0, 1.0);
  for (const auto& pt : sample_points(cyl, 10)) {
    auto bc = curvature_bundle(cyl.metric, pt, 2);
    auto W = values_of(weyl_jets(bc));
    for (double w : W) CHECK(std::fabs(w) < 1e-10);
    auto u = cyl.u(seed_point(pt, 4, 1));
    std::vector<double> duU(4, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 4; ++a) duU[i] += bc.up(i, a) * u.partial(a);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) s += W[id4(4, i, j, k, l)] * duU[l];
          CHECK(std::fabs(s) < 1e-8);
        }
  }
}

TEST_CASE("weyl needs dimension three or more") {
  auto flat2 = flat_space(2);
  auto b2 = curvature_bundle(flat2, {{0.1, 0.1}}, 2);
  CHECK_THROWS_AS(weyl_jets(b2), Error);

  QEInstance s3 = hemisphere(3, 2.0);
  auto b3 = curvature_bundle(s3.metric, {{0.8, 1.0, 2.0}}, 2);
  for (const auto& w : weyl_jets(b3)) CHECK(w.value() == 0.0);
}

TEST_CASE("cotton vanishes on all built-in models") {
  for (const QEInstance& inst :
       {hemisphere(3, 2.0), cylinder(4, 2.0, 1.0), doubly_warped(1, 2, 2.0),
        product_excg(2, 2, 2.0, 1.0)}) {
    for (const auto& pt : sample_points(inst, 5)) {
      auto b = curvature_bundle(inst.metric, pt, 3);
      for (double c : cotton_values(b)) CHECK(std::fabs(c) < 1e-8);
    }
  }
}

TEST_CASE("universal identities on random warped metrics") {
  for (unsigned seed : {1u, 2u, 3u}) {
    MetricSpec ms = random_warped_metric(seed);
    for (const auto& x : sample_points(ms, 8)) {
      auto b = curvature_bundle(ms, x, 4);
      auto r = bianchi_selftests(b);
      CHECK(r.metric_compatibility < 1e-10);
      CHECK(r.riemann_symmetries < 1e-10);
      CHECK(r.bianchi_twice_contracted < 1e-6);
      CHECK(r.bianchi_first_contracted < 1e-6);
      CHECK(r.ricci_commutation < 1e-6);
      CHECK(r.cotton_skew < 1e-6);
      CHECK(r.cotton_trace < 1e-6);
      CHECK(r.weyl_trace < 1e-6);
      CHECK(r.cotton_weyl_divergence < 1e-6);
    }
  }
  // they also hold on spheres, where curvature is parallel
  QEInstance s4 = hemisphere(4, 2.0);
  auto b = curvature_bundle(s4.metric, {{0.8, 1.0, 1.4, 2.0}}, 4);
  auto r = bianchi_selftests(b);
  CHECK(r.bianchi_twice_contracted < 1e-9);
  CHECK(r.bianchi_first_contracted < 1e-9);
  CHECK(r.ricci_commutation < 1e-9);

  // and vanish identically on flat space
  auto bf = curvature_bundle(flat_space(4), {{0.1, 0.2, 0.3, 0.4}}, 4);
  auto rf = bianchi_selftests(bf);
  CHECK(rf.bianchi_twice_contracted == 0.0);
  CHECK(rf.bianchi_first_contracted == 0.0);
  CHECK(rf.ricci_commutation == 0.0);
  CHECK(rf.cotton_weyl_divergence == 0.0);
}

TEST_CASE("cotton to weyl divergence on a non-diagonal perturbed metric") {
  // analytic non-diagonal perturbation of the flat metric
  int n = 4;
  MetricSpec ms;
  ms.dim = n;
  ms.domain.assign(n, Interval{0.0, 2.0});
  ms.label = "perturbed-flat";
  ms.comp.resize(n * n);
  auto wave = [](int a, int b, double amp) {
    return [=](const std::vector<Jet>& v) {
      return amp * sin(v[a] + 0.7 * v[b]) * cos(0.3 * v[(a + 1) % 4]);
    };
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField f;
      if (i == j) {
        auto base = wave(i, (i + 2) % 4, 0.15);
        f = [base](const std::vector<Jet>& v) { return 1.0 + base(v); };
      } else {
        f = wave(i, j, 0.08);
      }
      ms.comp[i * n + j] = f;
      ms.comp[j * n + i] = f;
    }
  for (const auto& x : sample_points(ms, 5)) {
    auto b = curvature_bundle(ms, x, 4);
    auto r = bianchi_selftests(b);
    CHECK(r.bianchi_twice_contracted < 1e-6);
    CHECK(r.bianchi_first_contracted < 1e-6);
    CHECK(r.ricci_commutation < 1e-6);
    CHECK(r.cotton_weyl_divergence < 1e-6);
  }
}

TEST_CASE("dual path: jets against the finite-difference pipeline") {
  for (const QEInstance& inst :
       {hemisphere(3, 2.0), cylinder(3, 2.0, 1.0), doubly_warped(1, 2, 2.0),
        product_excg(2, 2, 2.0, 1.0)}) {
    for (const auto& x : sample_points(inst, 4)) {
      auto b = curvature_bundle(inst.metric, x, 2);
      auto fd = fd_curvature(inst.metric, x);
      int n = inst.dim();
      for (int i = 0; i < n * n * n; ++i)
        CHECK(std::fabs(b.gamma[i].value() - fd.gamma[i]) < 1e-5);
      for (int i = 0; i < n * n * n * n; ++i)
        CHECK(std::fabs(b.riem_v[i] - fd.riem[i]) < 1e-5);
      for (int i = 0; i < n * n; ++i) CHECK(std::fabs(b.ric_v[i] - fd.ric[i]) < 1e-5);
    }
  }
}

TEST_CASE("insufficient order fails fast") {
  QEInstance hs = hemisphere(3, 2.0);
  auto b = curvature_bundle(hs.metric, {{0.7, 1.0, 2.0}}, 2);
  CHECK_THROWS_AS(covariant_derivative(b, b.ric, 2), Error);
  CHECK_THROWS_AS(cotton_values(b), Error);
  CHECK_THROWS_AS(bianchi_selftests(b), Error);
}
