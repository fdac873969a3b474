#include "qem/fd_oracle.hpp"

#include "qem/curvature.hpp"
#include "qem/linalg.hpp"

namespace qem {

double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd_second_derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

namespace {

double eval_component(const MetricSpec& spec, const std::vector<double>& coords, int i, int j) {
  std::vector<Jet> vars;
  vars.reserve(spec.dim);
  for (int v = 0; v < spec.dim; ++v) vars.push_back(Jet::variable(spec.dim, 0, v, coords[v]));
  return spec.component(i, j)(vars).value();
}

} // namespace

FdCurvature fd_curvature(const MetricSpec& spec, const ChartPoint& x, double h) {
  int n = spec.dim;
  FdCurvature out;
  out.n = n;

  auto g_at = [&](const std::vector<double>& c, int i, int j) {
    return eval_component(spec, c, i, j);
  };

  std::vector<double> g(n * n), dg(n * n * n), d2g(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g[id2(n, i, j)] = g[id2(n, j, i)] = g_at(x.coords, i, j);
      for (int a = 0; a < n; ++a) {
        auto slice = [&](double t) {
          auto c = x.coords;
          c[a] = t;
          return g_at(c, i, j);
        };
        double d = fd_derivative(slice, x.coords[a], h);
        dg[id3(n, a, i, j)] = dg[id3(n, a, j, i)] = d;
      }
      for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
          double d;
          if (a == b) {
            auto slice = [&](double t) {
              auto c = x.coords;
              c[a] = t;
              return g_at(c, i, j);
            };
            d = fd_second_derivative(slice, x.coords[a], h);
          } else {
            auto slice = [&](double t) {
              auto c = x.coords;
              c[b] = t;
              auto inner = [&](double s) {
                auto cc = c;
                cc[a] = s;
                return g_at(cc, i, j);
              };
              return fd_derivative(inner, c[a], h);
            };
            d = fd_derivative(slice, x.coords[b], h);
          }
          d2g[id4(n, a, b, i, j)] = d2g[id4(n, b, a, i, j)] = d;
          d2g[id4(n, a, b, j, i)] = d2g[id4(n, b, a, j, i)] = d;
        }
      }
    }

  std::vector<double> ginv = invert_matrix(g, n);
  std::vector<double> dginv(n * n * n, 0.0); // -ginv dg ginv
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            sum -= ginv[id2(n, i, p)] * dg[id3(n, a, p, q)] * ginv[id2(n, q, j)];
        dginv[id3(n, a, i, j)] = sum;
      }

  out.gamma.assign(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv[id2(n, k, l)] *
                 (dg[id3(n, i, j, l)] + dg[id3(n, j, i, l)] - dg[id3(n, l, i, j)]);
        out.gamma[id3(n, k, i, j)] = 0.5 * sum;
      }

  // d_a Gamma^k_{ij}
  std::vector<double> dgamma(n * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l) {
            sum += dginv[id3(n, a, k, l)] *
                   (dg[id3(n, i, j, l)] + dg[id3(n, j, i, l)] - dg[id3(n, l, i, j)]);
            sum += ginv[id2(n, k, l)] *
                   (d2g[id4(n, a, i, j, l)] + d2g[id4(n, a, j, i, l)] - d2g[id4(n, a, l, i, j)]);
          }
          dgamma[id4(n, a, k, i, j)] = 0.5 * sum;
        }

  out.riem.assign(n * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double sum = 0.0;
          for (int m = 0; m < n; ++m) {
            double a = dgamma[id4(n, j, m, i, k)] - dgamma[id4(n, i, m, j, k)];
            for (int p = 0; p < n; ++p)
              a += out.gamma[id3(n, p, i, k)] * out.gamma[id3(n, m, j, p)] -
                   out.gamma[id3(n, p, j, k)] * out.gamma[id3(n, m, i, p)];
            sum += g[id2(n, l, m)] * a;
          }
          out.riem[id4(n, i, j, k, l)] = sum;
        }

  out.ric.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) sum += ginv[id2(n, j, l)] * out.riem[id4(n, i, j, k, l)];
      out.ric[id2(n, i, k)] = sum;
    }

  out.scal = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out.scal += ginv[id2(n, i, k)] * out.ric[id2(n, i, k)];
  return out;
}

} // namespace qem
