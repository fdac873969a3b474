#include "qem/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qem/errors.hpp"

namespace qem {

std::vector<double> invert_matrix(const std::vector<double>& m, int n) {
  std::vector<double> a = m;
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;

  double max_abs = 0.0;
  for (double v : a) max_abs = std::max(max_abs, std::fabs(v));

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) pivot = r;
    if (std::fabs(a[pivot * n + col]) < 1e-12 * std::max(max_abs, 1.0))
      fail(ErrorKind::SingularMetric, "matrix not invertible to condition 1e12");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[pivot * n + c], a[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    }
    double d = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

std::vector<double> sym_eigenvalues(std::vector<double> m, int n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m[i * n + j] * m[i * n + j];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double app = m[p * n + p], aqq = m[q * n + q];
        double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
        double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          double mkp = m[k * n + p], mkq = m[k * n + q];
          m[k * n + p] = c * mkp - s * mkq;
          m[k * n + q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m[p * n + k], mqk = m[q * n + k];
          m[p * n + k] = c * mpk - s * mqk;
          m[q * n + k] = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> generalized_sym_eigenvalues(const std::vector<double>& a,
                                                const std::vector<double>& g, int n) {
  // Cholesky g = L L^T, then eigenvalues of L^-1 A L^-T
  std::vector<double> L(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = g[i * n + j];
      for (int k = 0; k < j; ++k) sum -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (sum <= 0.0) fail(ErrorKind::SingularMetric, "metric not positive definite");
        L[i * n + i] = std::sqrt(sum);
      } else {
        L[i * n + j] = sum / L[j * n + j];
      }
    }
  }
  // X = L^-1 A  (forward substitution per column)
  std::vector<double> X(n * n, 0.0);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i) {
      double sum = a[i * n + c];
      for (int k = 0; k < i; ++k) sum -= L[i * n + k] * X[k * n + c];
      X[i * n + c] = sum / L[i * n + i];
    }
  // B = X L^-T, i.e. solve B L^T = X row-wise
  std::vector<double> B(n * n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      double sum = X[r * n + j];
      for (int k = 0; k < j; ++k) sum -= B[r * n + k] * L[j * n + k];
      B[r * n + j] = sum / L[j * n + j];
    }
  return sym_eigenvalues(B, n);
}

bool is_positive_definite(const std::vector<double>& m, int n) {
  auto eig = sym_eigenvalues(m, n);
  return eig.front() > 0.0;
}

} // namespace qem
