#include "qem/chart.hpp"

#include <cmath>

#include "qem/linalg.hpp"

namespace qem {

ScalarField constant_field(double c) {
  return [c](const std::vector<Jet>& vars) {
    return Jet::constant(vars[0].dim(), vars[0].order(), c);
  };
}

bool MetricSpec::contains(const ChartPoint& x) const {
  if (static_cast<int>(x.coords.size()) != dim) return false;
  for (int i = 0; i < dim; ++i) {
    if (x.coords[i] < domain[i].lo + margin || x.coords[i] > domain[i].hi - margin)
      return false;
  }
  return true;
}

MetricSpec diagonal_metric(int dim, std::vector<ScalarField> diag,
                           std::vector<Interval> domain, std::string label) {
  MetricSpec spec;
  spec.dim = dim;
  spec.domain = std::move(domain);
  spec.label = std::move(label);
  spec.comp.resize(dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      spec.comp[i * dim + j] = (i == j) ? diag[i] : constant_field(0.0);
  return spec;
}

std::vector<Jet> seed_point(const ChartPoint& x, int dim, int order) {
  std::vector<Jet> vars;
  vars.reserve(dim);
  for (int i = 0; i < dim; ++i) vars.push_back(Jet::variable(dim, order, i, x.coords[i]));
  return vars;
}

Jet jet_eval(const ScalarField& field, const MetricSpec& spec, const ChartPoint& x, int order) {
  if (order < 0 || order > kMaxJetOrder)
    fail(ErrorKind::OrderUnsupported, "jet order must lie in 0..4");
  if (!spec.contains(x))
    fail(ErrorKind::DomainViolation, "point outside sampling domain of " + spec.label);
  return field(seed_point(x, spec.dim, order));
}

namespace {

constexpr int kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};
constexpr int kHaltonBurnIn = 17; // fixed so reports reproduce bit-for-bit

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

} // namespace

std::vector<ChartPoint> sample_points(const MetricSpec& spec, int count,
                                      const std::vector<Interval>* clip) {
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    ChartPoint p;
    p.coords.resize(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      double lo = spec.domain[i].lo + spec.margin;
      double hi = spec.domain[i].hi - spec.margin;
      if (clip) {
        lo = std::max(lo, (*clip)[i].lo);
        hi = std::min(hi, (*clip)[i].hi);
      }
      double t = halton(k + kHaltonBurnIn, kHaltonBases[i % 8]);
      p.coords[i] = lo + t * (hi - lo);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Jet> invert_jet_matrix(const std::vector<Jet>& m, int n) {
  int dim = m[0].dim();
  int order = m[0].order();

  std::vector<double> vals(n * n);
  for (int i = 0; i < n * n; ++i) vals[i] = m[i].value();
  std::vector<double> inv0 = invert_matrix(vals, n);

  auto to_jets = [&](const std::vector<double>& a) {
    std::vector<Jet> out(n * n);
    for (int i = 0; i < n * n; ++i) out[i] = Jet::constant(dim, order, a[i]);
    return out;
  };
  auto matmul = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
    std::vector<Jet> out(n * n, Jet::constant(dim, order, 0.0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          out[i * n + j] += a[i * n + k] * b[k * n + j];
    return out;
  };

  // m = m0 + h with h of degree >= 1, so inv(m) = sum_k (-inv0 h)^k inv0,
  // exact after `order` terms.
  std::vector<Jet> inv0j = to_jets(inv0);
  std::vector<Jet> h(n * n);
  for (int i = 0; i < n * n; ++i) {
    h[i] = m[i];
    h[i] -= m[i].value();
  }
  std::vector<Jet> term = inv0j;
  std::vector<Jet> result = inv0j;
  for (int k = 1; k <= order; ++k) {
    term = matmul(inv0j, matmul(h, term));
    for (int i = 0; i < n * n; ++i) {
      term[i] *= -1.0;
      result[i] += term[i];
    }
  }
  return result;
}

MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& x, int order) {
  MetricJet mj;
  mj.n = spec.dim;
  mj.order = order;
  auto vars = seed_point(x, spec.dim, order);
  if (!spec.contains(x))
    fail(ErrorKind::DomainViolation, "point outside sampling domain of " + spec.label);

  mj.g.resize(mj.n * mj.n);
  for (int i = 0; i < mj.n; ++i) {
    for (int j = i; j < mj.n; ++j) {
      Jet gij = spec.component(i, j)(vars);
      mj.g[i * mj.n + j] = gij;
      if (j != i) mj.g[j * mj.n + i] = gij;
    }
  }

  std::vector<double> vals(mj.n * mj.n);
  for (int i = 0; i < mj.n * mj.n; ++i) vals[i] = mj.g[i].value();
  if (!is_positive_definite(vals, mj.n))
    fail(ErrorKind::SingularMetric, "metric not positive definite at sample point");

  mj.ginv = invert_jet_matrix(mj.g, mj.n);
  return mj;
}

} // namespace qem
