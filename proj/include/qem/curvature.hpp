#pragma once

#include <utility>
#include <vector>

#include "qem/chart.hpp"

namespace qem {

// Flat index helpers for dense covariant tensors of dimension n.
inline int id2(int n, int i, int j) { return i * n + j; }
inline int id3(int n, int a, int i, int j) { return (a * n + i) * n + j; }
inline int id4(int n, int a, int b, int i, int j) { return ((a * n + b) * n + i) * n + j; }
inline int id5(int n, int a, int b, int c, int i, int j) {
  return (((a * n + b) * n + c) * n + i) * n + j;
}

std::vector<double> values_of(const std::vector<Jet>& jets);

// Levi-Civita connection coefficients Gamma^k_{ij}, laid out [k][i][j].
// Jet order drops by one relative to the metric.
std::vector<Jet> christoffel(const MetricJet& mj);

// Fully covariant curvature tensor R_{ijkl}, signed so that the unit round
// sphere has R_{ijij} > 0 (sectional curvature +1) in orthonormal directions.
std::vector<Jet> riemann(const MetricJet& mj, const std::vector<Jet>& gamma);

// Ricci tensor Ric_{ik} = g^{jl} R_{ijkl} and scalar curvature.
std::pair<std::vector<Jet>, Jet> ricci_scalar(const MetricJet& mj, const std::vector<Jet>& riem);

// Everything the identity checks consume, evaluated at one chart point.
// All tensors are stored fully covariant; indices are raised explicitly with
// ginv at the point of use.
struct CurvatureBundle {
  int n = 0;
  int order = 0; // metric jet order
  ChartPoint x;
  std::vector<Jet> g;     // n^2
  std::vector<Jet> ginv;  // n^2
  std::vector<Jet> gamma; // n^3
  std::vector<Jet> riem;  // n^4
  std::vector<Jet> ric;   // n^2
  Jet scal;

  std::vector<double> g_v, ginv_v, riem_v, ric_v;
  double scal_v = 0.0;

  double up(int i, int j) const { return ginv_v[i * n + j]; }
};

CurvatureBundle curvature_bundle(const MetricSpec& spec, const ChartPoint& x, int order);

// Covariant derivative of a covariant tensor given as jets; the derivative
// index comes first in the output layout. Output jets drop one order.
std::vector<Jet> covariant_derivative(const CurvatureBundle& b, const std::vector<Jet>& T,
                                      int rank);

// Covariant Hessian of a scalar jet: H_ij = d_i d_j f - Gamma^c_{ij} d_c f.
std::vector<Jet> hessian(const CurvatureBundle& b, const Jet& f);
Jet laplacian(const CurvatureBundle& b, const Jet& f);

// Rough Laplacian of a symmetric 2-tensor field, value level.
std::vector<double> tensor_laplacian_t2(const CurvatureBundle& b, const std::vector<Jet>& T);

// Kulkarni-Nomizu product of symmetric 2-tensors.
template <class S>
std::vector<S> kulkarni_nomizu(const std::vector<S>& A, const std::vector<S>& B, int n) {
  std::vector<S> out(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out[id4(n, i, j, k, l)] = A[id2(n, i, k)] * B[id2(n, j, l)] +
                                    A[id2(n, j, l)] * B[id2(n, i, k)] -
                                    A[id2(n, i, l)] * B[id2(n, j, k)] -
                                    A[id2(n, j, k)] * B[id2(n, i, l)];
  return out;
}

// Schouten tensor A = Ric - R/(2(n-1)) g as jets.
std::vector<Jet> schouten_jets(const CurvatureBundle& b);

// Weyl tensor W = Rm - (A o g)/(n-2); identically zero in dimension 3.
std::vector<Jet> weyl_jets(const CurvatureBundle& b);

// Cotton tensor C_ijk (needs metric order >= 3).
std::vector<double> cotton_values(const CurvatureBundle& b);

// div W contracted on the last slot: g^{la} (grad W)_{a i j k l}.
std::vector<double> weyl_divergence_values(const CurvatureBundle& b);

// Universal identities that hold for every metric; the primary correctness
// oracle for the differentiation pipeline. Residuals are scaled by the
// magnitude of the terms entering each identity.
struct EngineResiduals {
  double metric_compatibility = 0.0;
  double riemann_symmetries = 0.0;
  double bianchi_twice_contracted = 0.0;
  double bianchi_first_contracted = 0.0;
  double ricci_commutation = 0.0;
  double cotton_skew = 0.0;
  double cotton_trace = 0.0;
  double weyl_trace = 0.0;
  double cotton_weyl_divergence = 0.0; // n >= 4 only
};

EngineResiduals bianchi_selftests(const CurvatureBundle& b);

} // namespace qem
