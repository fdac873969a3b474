#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qem/jet.hpp"

namespace qem {

struct ChartPoint {
  std::vector<double> coords;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A scalar field written in jet arithmetic: it receives the seeded coordinate
// jets and returns the field's jet at that point, valid at any order.
using ScalarField = std::function<Jet(const std::vector<Jet>&)>;

ScalarField constant_field(double c);

struct MetricSpec {
  int dim = 0;
  std::vector<ScalarField> comp; // n*n row-major, g_ij = g_ji by construction
  std::vector<Interval> domain;  // chart box, prior to the singularity margin
  double margin = 0.1;
  std::string label;

  const ScalarField& component(int i, int j) const { return comp[i * dim + j]; }
  bool contains(const ChartPoint& x) const;
};

// Diagonal metrics cover every built-in chart; off-diagonal entries are zero.
MetricSpec diagonal_metric(int dim, std::vector<ScalarField> diag,
                           std::vector<Interval> domain, std::string label);

std::vector<Jet> seed_point(const ChartPoint& x, int dim, int order);

Jet jet_eval(const ScalarField& field, const MetricSpec& spec, const ChartPoint& x, int order);

// Quasi-random interior samples (Halton sequence, fixed bases, fixed burn-in)
// so every run visits the same points.
std::vector<ChartPoint> sample_points(const MetricSpec& spec, int count,
                                      const std::vector<Interval>* clip = nullptr);

// Metric and inverse-metric jets at a point. Derivative arrays up to the jet
// order are read straight off the jets; no finite differencing anywhere.
struct MetricJet {
  int n = 0;
  int order = 0;
  std::vector<Jet> g;    // n*n
  std::vector<Jet> ginv; // n*n

  double g_val(int i, int j) const { return g[i * n + j].value(); }
  double ginv_val(int i, int j) const { return ginv[i * n + j].value(); }
  double dg(int k, int i, int j) const { return g[i * n + j].partial(k); }
  double d2g(int k, int l, int i, int j) const { return g[i * n + j].partial(k, l); }
  double dginv(int k, int i, int j) const { return ginv[i * n + j].partial(k); }
  double d2ginv(int k, int l, int i, int j) const { return ginv[i * n + j].partial(k, l); }
};

MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& x, int order);

// Inverse of a symmetric jet-valued matrix, built from the value-level
// inverse plus the geometric series of the higher-degree remainder.
std::vector<Jet> invert_jet_matrix(const std::vector<Jet>& m, int n);

} // namespace qem
