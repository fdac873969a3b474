#pragma once

#include <functional>
#include <vector>

#include "qem/chart.hpp"

namespace qem {

// Independent finite-difference route to the curvature, kept deliberately
// free of jet machinery: metric values on stencils, fourth-order central
// differences, then the same index algebra in plain doubles. Used to
// cross-check the analytic pipeline, never to feed it.

double fd_derivative(const std::function<double(double)>& f, double x, double h = 0.02);
double fd_second_derivative(const std::function<double(double)>& f, double x, double h = 0.02);

struct FdCurvature {
  int n = 0;
  std::vector<double> gamma; // [k][i][j]
  std::vector<double> riem;  // [i][j][k][l]
  std::vector<double> ric;   // [i][j]
  double scal = 0.0;
};

FdCurvature fd_curvature(const MetricSpec& spec, const ChartPoint& x, double h = 0.02);

} // namespace qem
