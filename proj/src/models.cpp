#include "qem/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qem/curvature.hpp"

namespace qem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Diagonal components of a round sphere block of dimension k sitting at
// coordinate offset `off`, with conformal scale field `scale`:
// g_{off+j} = scale * prod_{i<j} sin^2(x_{off+i}).
void append_sphere_block(std::vector<ScalarField>& diag, std::vector<Interval>& domain,
                         int off, int k, ScalarField scale) {
  for (int j = 0; j < k; ++j) {
    diag.push_back([off, j, scale](const std::vector<Jet>& v) {
      Jet out = scale(v);
      for (int i = 0; i < j; ++i) {
        Jet s = sin(v[off + i]);
        out = out * (s * s);
      }
      return out;
    });
    domain.push_back(j == k - 1 ? Interval{0.0, 2.0 * kPi} : Interval{0.0, kPi});
  }
}

double grad_norm_sq(const QEInstance& inst, const ChartPoint& x) {
  MetricJet mj = metric_jet(inst.metric, x, 1);
  auto vars = seed_point(x, inst.dim(), 1);
  Jet uj = inst.u(vars);
  double sum = 0.0;
  for (int a = 0; a < inst.dim(); ++a)
    for (int c = 0; c < inst.dim(); ++c)
      sum += mj.ginv_val(a, c) * uj.partial(a) * uj.partial(c);
  return sum;
}

ChartPoint midpoint(const QEInstance& inst) {
  ChartPoint x;
  x.coords.resize(inst.dim());
  for (int i = 0; i < inst.dim(); ++i) {
    double lo = inst.metric.domain[i].lo + inst.metric.margin;
    double hi = inst.metric.domain[i].hi - inst.metric.margin;
    if (inst.sample_clip) {
      lo = std::max(lo, (*inst.sample_clip)[i].lo);
      hi = std::min(hi, (*inst.sample_clip)[i].hi);
    }
    x.coords[i] = 0.5 * (lo + hi);
  }
  return x;
}

// mu from the integrability relation, evaluated once; the checks later
// assert its constancy over the whole sample set.
void finish_instance(QEInstance& inst, int n) {
  inst.rho = ((n - 1) * inst.lambda - inst.expected_scalar) / (inst.m - 1.0);
  ChartPoint mid = midpoint(inst);
  auto vars = seed_point(mid, n, 0);
  double u0 = inst.u(vars).value();
  double gsq = grad_norm_sq(inst, mid);
  inst.mu = (u0 * u0 / inst.m) * (inst.expected_scalar - inst.lambda * n) +
            (inst.m - 1.0) * gsq + inst.lambda * u0 * u0;
}

void clip_for_sine_potential(QEInstance& inst, double m, double lambda) {
  // keep u >= 0.05 so drift-operator checks stay away from the boundary
  double w = std::sqrt(lambda / m);
  double tmin = std::asin(0.05) / w;
  double tmax = kPi / w - tmin;
  std::vector<Interval> clip(inst.dim(), Interval{-1e300, 1e300});
  clip[0] = {tmin, tmax};
  inst.sample_clip = clip;
}

} // namespace

std::vector<ChartPoint> sample_points(const QEInstance& inst, int count) {
  return qem::sample_points(inst.metric, count,
                            inst.sample_clip ? &*inst.sample_clip : nullptr);
}

QEInstance hemisphere(int n, double m) {
  if (n < 2 || n > 6) fail(ErrorKind::UnsupportedDimension, "hemisphere needs 2 <= n <= 6");
  if (m <= 1.0) fail(ErrorKind::ConfigError, "m must exceed 1");

  std::vector<ScalarField> diag{constant_field(1.0)};
  std::vector<Interval> domain{{0.0, kPi / 2.0}};
  append_sphere_block(diag, domain, 1, n - 1,
                      [](const std::vector<Jet>& v) {
                        Jet s = sin(v[0]);
                        return s * s;
                      });

  QEInstance inst;
  inst.metric = diagonal_metric(n, std::move(diag), std::move(domain),
                                "hemisphere(n=" + std::to_string(n) + ")");
  inst.u = [](const std::vector<Jet>& v) { return cos(v[0]); };
  inst.m = m;
  inst.lambda = m + n - 1;
  inst.expected_scalar = static_cast<double>(n) * (n - 1);
  inst.expected_k = 0;
  inst.boundary_scalar = static_cast<double>(n - 1) * (n - 2);
  inst.expected_ric_eigenvalues.assign(n, static_cast<double>(n - 1));
  inst.label = "hemisphere(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")";
  finish_instance(inst, n);
  return inst;
}

QEInstance cylinder(int n, double m, double lambda) {
  if (n < 3 || n > 6) fail(ErrorKind::UnsupportedDimension, "cylinder needs 3 <= n <= 6");
  if (m <= 1.0) fail(ErrorKind::ConfigError, "m must exceed 1");
  if (lambda <= 0.0) fail(ErrorKind::ConfigError, "lambda must be positive");

  double span = std::sqrt(m / lambda) * kPi;
  std::vector<ScalarField> diag{constant_field(1.0)};
  std::vector<Interval> domain{{0.0, span}};
  append_sphere_block(diag, domain, 1, n - 1, constant_field((n - 2) / lambda));

  QEInstance inst;
  inst.metric = diagonal_metric(n, std::move(diag), std::move(domain),
                                "cylinder(n=" + std::to_string(n) + ")");
  double w = std::sqrt(lambda / m);
  inst.u = [w](const std::vector<Jet>& v) { return sin(w * v[0]); };
  inst.m = m;
  inst.lambda = lambda;
  inst.expected_scalar = (n - 1) * lambda;
  inst.expected_k = n - 1;
  inst.boundary_scalar = (n - 1) * lambda;
  inst.expected_ric_eigenvalues.assign(n, lambda);
  inst.expected_ric_eigenvalues[0] = 0.0;
  inst.label = "cylinder(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
               ",lambda=" + std::to_string(lambda) + ")";
  clip_for_sine_potential(inst, m, lambda);
  finish_instance(inst, n);
  return inst;
}

QEInstance doubly_warped(int p, int q, double m) {
  int n = p + q + 1;
  if (p < 1 || q <= 1) fail(ErrorKind::ConfigError, "doubly_warped needs p >= 1, q > 1");
  if (n > 6) fail(ErrorKind::UnsupportedDimension, "doubly_warped needs p + q + 1 <= 6");
  if (m <= 1.0) fail(ErrorKind::ConfigError, "m must exceed 1");

  double lambda = p + m;
  std::vector<ScalarField> diag{constant_field(1.0)};
  std::vector<Interval> domain{{0.0, kPi / 2.0}};
  append_sphere_block(diag, domain, 1, p,
                      [](const std::vector<Jet>& v) {
                        Jet s = sin(v[0]);
                        return s * s;
                      });
  append_sphere_block(diag, domain, 1 + p, q, constant_field((q - 1) / lambda));

  QEInstance inst;
  inst.metric = diagonal_metric(n, std::move(diag), std::move(domain),
                                "doubly-warped(p=" + std::to_string(p) + ",q=" +
                                    std::to_string(q) + ")");
  inst.u = [](const std::vector<Jet>& v) { return cos(v[0]); };
  inst.m = m;
  inst.lambda = lambda;
  inst.expected_scalar = (q * (m - n) + n * (n - 1)) * lambda / (m + n - q - 1);
  inst.expected_k = q;
  inst.boundary_scalar = static_cast<double>(p) * (p - 1) + q * lambda;
  inst.expected_ric_eigenvalues.assign(p + 1, static_cast<double>(p));
  inst.expected_ric_eigenvalues.insert(inst.expected_ric_eigenvalues.end(), q, lambda);
  std::sort(inst.expected_ric_eigenvalues.begin(), inst.expected_ric_eigenvalues.end());
  inst.label = "doubly-warped(p=" + std::to_string(p) + ",q=" + std::to_string(q) +
               ",m=" + std::to_string(m) + ")";
  finish_instance(inst, n);
  return inst;
}

QEInstance product_excg(int p, int q, double m, double lambda) {
  int n = 1 + p + q;
  if (p < 2 || q < 2) fail(ErrorKind::ConfigError, "product_excg needs p, q >= 2");
  if (n > 7) fail(ErrorKind::UnsupportedDimension, "product_excg needs 1 + p + q <= 7");
  if (m <= 1.0) fail(ErrorKind::ConfigError, "m must exceed 1");
  if (lambda <= 0.0) fail(ErrorKind::ConfigError, "lambda must be positive");

  double span = std::sqrt(m / lambda) * kPi;
  std::vector<ScalarField> diag{constant_field(1.0)};
  std::vector<Interval> domain{{0.0, span}};
  append_sphere_block(diag, domain, 1, p, constant_field((p - 1) / lambda));
  append_sphere_block(diag, domain, 1 + p, q, constant_field((q - 1) / lambda));

  QEInstance inst;
  inst.metric = diagonal_metric(n, std::move(diag), std::move(domain),
                                "product-excg(p=" + std::to_string(p) + ",q=" +
                                    std::to_string(q) + ")");
  double w = std::sqrt(lambda / m);
  inst.u = [w](const std::vector<Jet>& v) { return sin(w * v[0]); };
  inst.m = m;
  inst.lambda = lambda;
  inst.expected_scalar = (n - 1) * lambda;
  inst.expected_k = n - 1;
  inst.boundary_scalar = (n - 1) * lambda;
  inst.expected_ric_eigenvalues.assign(n, lambda);
  inst.expected_ric_eigenvalues[0] = 0.0;
  inst.label = "product-excg(p=" + std::to_string(p) + ",q=" + std::to_string(q) +
               ",m=" + std::to_string(m) + ",lambda=" + std::to_string(lambda) + ")";
  clip_for_sine_potential(inst, m, lambda);
  finish_instance(inst, n);
  return inst;
}

WarpedRicci warped_ricci_analytic(const WarpedSpec& spec, double t) {
  Jet tj = Jet::variable(1, 2, 0, t);
  Jet ph = spec.phi(tj);
  double phi = ph.value();
  if (phi <= 0.0) fail(ErrorKind::NonPositiveWarping, "warping must be positive");
  double dphi = ph.partial(0);
  double d2phi = ph.partial(0, 0);

  int l = spec.fiber_dim;
  double kappa = spec.fiber_einstein;
  WarpedRicci out;
  out.horizontal = -l * d2phi / phi;
  out.vertical = (kappa - (phi * d2phi + (l - 1) * dphi * dphi)) / (phi * phi);
  out.scalar = out.horizontal + l * out.vertical;
  return out;
}

MetricSpec warped_chart(const WarpedSpec& spec) {
  int l = spec.fiber_dim;
  if (l < 2) fail(ErrorKind::UnsupportedDimension, "chart fiber needs dimension >= 2");
  double c = (l - 1) / spec.fiber_einstein; // round fiber scale with the requested constant
  auto phi = spec.phi;
  std::vector<ScalarField> diag{constant_field(1.0)};
  std::vector<Interval> domain{spec.base};
  append_sphere_block(diag, domain, 1, l, [phi, c](const std::vector<Jet>& v) {
    Jet p = phi(v[0]);
    return c * (p * p);
  });
  return diagonal_metric(l + 1, std::move(diag), std::move(domain), spec.label);
}

WarpedSpec inex_warped_spec(InexKind kind, const InexParams& p) {
  WarpedSpec spec;
  spec.fiber_dim = p.n - 1;
  spec.fiber_einstein = p.kappa;
  if (kind == InexKind::Cone) {
    if (p.alpha <= 0.0) fail(ErrorKind::ConfigError, "cone slope must be positive");
    double alpha = p.alpha;
    spec.phi = [alpha](const Jet& t) { return alpha * t; };
    spec.base = {0.5, 3.0};
    spec.label = "cone(alpha=" + std::to_string(alpha) + ")";
  } else {
    if (p.beta <= 0.0) fail(ErrorKind::ConfigError, "hyperbolic rate must be positive");
    double sb = std::sqrt(p.beta), a = p.a, b = p.b;
    spec.phi = [sb, a, b](const Jet& t) { return a * sinh(sb * t) + b * cosh(sb * t); };
    spec.base = {0.0, 2.0};
    spec.label = "hyperbolic-warped(beta=" + std::to_string(p.beta) + ")";
  }
  return spec;
}

std::vector<double> inex_scalar_profile(InexKind kind, const InexParams& p,
                                        const std::vector<double>& tgrid) {
  int n = p.n;
  std::vector<double> out;
  out.reserve(tgrid.size());
  for (double t : tgrid) {
    if (kind == InexKind::Cone) {
      double phi = p.alpha * t;
      if (phi <= 0.0) fail(ErrorKind::NonPositiveWarping, "warping must be positive");
      out.push_back((n - 1) * (p.kappa - (n - 2) * p.alpha * p.alpha) /
                    (p.alpha * p.alpha * t * t));
    } else {
      double sb = std::sqrt(p.beta);
      double phi = p.a * std::sinh(sb * t) + p.b * std::cosh(sb * t);
      if (phi <= 0.0) fail(ErrorKind::NonPositiveWarping, "warping must be positive");
      double dphi = sb * (p.a * std::cosh(sb * t) + p.b * std::sinh(sb * t));
      out.push_back(-2.0 * (n - 1) * p.beta +
                    (n - 1) * (p.kappa - (n - 2) * dphi * dphi) / (phi * phi));
    }
  }
  return out;
}

double inex_forced_sinh_coefficient(int n, double beta, double b, double kappa) {
  // (n-2)((phi')^2 - beta phi^2) = kappa collapses the profile to -n(n-1)beta
  double a2 = b * b + kappa / ((n - 2) * beta);
  return std::sqrt(a2);
}

MetricSpec random_warped_metric(unsigned seed) {
  auto next = [state = static_cast<unsigned long long>(seed) * 2654435769ull + 1ull]() mutable {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 11) & ((1ull << 53) - 1)) / (1ull << 53);
  };
  auto coeffs = [&]() {
    double c0 = 1.5 + next();            // keeps the warping positive
    double c1 = 0.2 + 0.3 * next();
    double w = 0.5 + 0.8 * next();
    double ph = 2.0 * kPi * next();
    return std::array<double, 4>{c0, c1, w, ph};
  };
  auto f1 = coeffs(), f2 = coeffs();
  auto warp = [](std::array<double, 4> c) {
    return [c](const Jet& t) { return c[0] + c[1] * sin(c[2] * t + c[3]); };
  };
  auto phi1 = warp(f1), phi2 = warp(f2);

  std::vector<ScalarField> diag{
      constant_field(1.0),
      [phi1](const std::vector<Jet>& v) {
        Jet p = phi1(v[0]);
        return p * p;
      },
      [phi2](const std::vector<Jet>& v) {
        Jet p = phi2(v[0]);
        return p * p;
      },
      [phi2](const std::vector<Jet>& v) {
        Jet p = phi2(v[0]);
        Jet s = sin(v[2]);
        return p * p * (s * s);
      }};
  std::vector<Interval> domain{{0.0, 2.0}, {0.0, 2.0 * kPi}, {0.0, kPi}, {0.0, 2.0 * kPi}};
  return diagonal_metric(4, std::move(diag), std::move(domain),
                         "random-warped(seed=" + std::to_string(seed) + ")");
}

} // namespace qem
