#include "qem/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace qem {

std::vector<double> values_of(const std::vector<Jet>& jets) {
  std::vector<double> out(jets.size());
  for (size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].value();
  return out;
}

std::vector<Jet> christoffel(const MetricJet& mj) {
  if (mj.order < 1)
    fail(ErrorKind::InsufficientOrder, "christoffel needs metric order >= 1");
  int n = mj.n;
  int dim = mj.g[0].dim();
  int ord = mj.order - 1;

  // d_i g_jl, computed once
  std::vector<Jet> dg(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = j; l < n; ++l) {
        dg[id3(n, i, j, l)] = mj.g[id2(n, j, l)].derivative(i);
        if (l != j) dg[id3(n, i, l, j)] = dg[id3(n, i, j, l)];
      }

  std::vector<Jet> gamma(n * n * n, Jet::constant(dim, ord, 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet sum = Jet::constant(dim, ord, 0.0);
        for (int l = 0; l < n; ++l) {
          Jet inner = dg[id3(n, i, j, l)] + dg[id3(n, j, i, l)] - dg[id3(n, l, i, j)];
          sum += mj.ginv[id2(n, k, l)] * inner;
        }
        sum *= 0.5;
        gamma[id3(n, k, i, j)] = sum;
        if (j != i) gamma[id3(n, k, j, i)] = sum;
      }
  return gamma;
}

std::vector<Jet> riemann(const MetricJet& mj, const std::vector<Jet>& gamma) {
  if (mj.order < 2)
    fail(ErrorKind::InsufficientOrder, "riemann needs metric order >= 2");
  int n = mj.n;
  int dim = mj.g[0].dim();
  int ord = mj.order - 2;

  // A^m_{jik} = d_j Gamma^m_{ik} + Gamma^p_{ik} Gamma^m_{jp}
  std::vector<Jet> A(n * n * n * n, Jet::constant(dim, ord, 0.0));
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) {
          Jet sum = gamma[id3(n, m, i, k)].derivative(j);
          for (int p = 0; p < n; ++p)
            sum += gamma[id3(n, p, i, k)] * gamma[id3(n, m, j, p)];
          A[id4(n, m, j, i, k)] = sum;
          if (k != i) A[id4(n, m, j, k, i)] = sum;
        }

  std::vector<Jet> riem(n * n * n * n, Jet::constant(dim, ord, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet sum = Jet::constant(dim, ord, 0.0);
          for (int m = 0; m < n; ++m)
            sum += mj.g[id2(n, l, m)] * (A[id4(n, m, j, i, k)] - A[id4(n, m, i, j, k)]);
          riem[id4(n, i, j, k, l)] = sum;
          riem[id4(n, j, i, k, l)] = -sum;
        }
  return riem;
}

std::pair<std::vector<Jet>, Jet> ricci_scalar(const MetricJet& mj, const std::vector<Jet>& riem) {
  int n = mj.n;
  int dim = mj.g[0].dim();
  int ord = riem.empty() ? 0 : riem[0].order();

  std::vector<Jet> ric(n * n, Jet::constant(dim, ord, 0.0));
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      Jet sum = Jet::constant(dim, ord, 0.0);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          sum += mj.ginv[id2(n, j, l)] * riem[id4(n, i, j, k, l)];
      ric[id2(n, i, k)] = sum;
      if (k != i) ric[id2(n, k, i)] = sum;
    }

  Jet scal = Jet::constant(dim, ord, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) scal += mj.ginv[id2(n, i, k)] * ric[id2(n, i, k)];
  return {ric, scal};
}

CurvatureBundle curvature_bundle(const MetricSpec& spec, const ChartPoint& x, int order) {
  CurvatureBundle b;
  b.n = spec.dim;
  b.order = order;
  b.x = x;
  MetricJet mj = metric_jet(spec, x, order);
  b.g = std::move(mj.g);
  b.ginv = std::move(mj.ginv);
  MetricJet view;
  view.n = b.n;
  view.order = order;
  view.g = b.g;
  view.ginv = b.ginv;
  b.gamma = christoffel(view);
  b.riem = riemann(view, b.gamma);
  auto rs = ricci_scalar(view, b.riem);
  b.ric = std::move(rs.first);
  b.scal = rs.second;

  b.g_v = values_of(b.g);
  b.ginv_v = values_of(b.ginv);
  b.riem_v = values_of(b.riem);
  b.ric_v = values_of(b.ric);
  b.scal_v = b.scal.value();
  return b;
}

std::vector<Jet> covariant_derivative(const CurvatureBundle& b, const std::vector<Jet>& T,
                                      int rank) {
  int n = b.n;
  if (T.empty() || T[0].order() < 1)
    fail(ErrorKind::InsufficientOrder, "covariant derivative needs jets of order >= 1");
  int dim = T[0].dim();
  int ord = T[0].order() - 1;

  int sz = 1;
  for (int r = 0; r < rank; ++r) sz *= n;
  std::vector<Jet> out(n * sz, Jet::constant(dim, ord, 0.0));

  std::vector<int> idx(rank, 0);
  for (int flat = 0; flat < sz; ++flat) {
    int rem = flat;
    for (int r = rank - 1; r >= 0; --r) {
      idx[r] = rem % n;
      rem /= n;
    }
    for (int a = 0; a < n; ++a) {
      Jet sum = T[flat].derivative(a);
      for (int r = 0; r < rank; ++r) {
        int stride = 1;
        for (int s = r + 1; s < rank; ++s) stride *= n;
        int base = flat - idx[r] * stride;
        for (int c = 0; c < n; ++c)
          sum -= b.gamma[id3(n, c, a, idx[r])] * T[base + c * stride];
      }
      out[a * sz + flat] = sum;
    }
  }
  return out;
}

std::vector<Jet> hessian(const CurvatureBundle& b, const Jet& f) {
  int n = b.n;
  if (f.order() < 2) fail(ErrorKind::InsufficientOrder, "hessian needs a jet of order >= 2");
  std::vector<Jet> df(n);
  for (int i = 0; i < n; ++i) df[i] = f.derivative(i);
  std::vector<Jet> H(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet sum = df[i].derivative(j);
      for (int c = 0; c < n; ++c) sum -= b.gamma[id3(n, c, i, j)] * df[c];
      H[id2(n, i, j)] = sum;
      if (j != i) H[id2(n, j, i)] = sum;
    }
  return H;
}

Jet laplacian(const CurvatureBundle& b, const Jet& f) {
  auto H = hessian(b, f);
  int n = b.n;
  Jet sum = Jet::constant(f.dim(), H[0].order(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += b.ginv[id2(n, i, j)] * H[id2(n, i, j)];
  return sum;
}

std::vector<double> tensor_laplacian_t2(const CurvatureBundle& b, const std::vector<Jet>& T) {
  int n = b.n;
  if (T[0].order() < 2)
    fail(ErrorKind::InsufficientOrder, "tensor laplacian needs jets of order >= 2");
  auto dT = covariant_derivative(b, T, 2);
  auto ddT = covariant_derivative(b, dT, 3);
  std::vector<double> out(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          sum += b.up(a, c) * ddT[id4(n, a, c, i, j)].value();
      out[id2(n, i, j)] = sum;
    }
  return out;
}

std::vector<Jet> schouten_jets(const CurvatureBundle& b) {
  int n = b.n;
  if (n < 3) fail(ErrorKind::DimensionTooSmall, "schouten needs n >= 3");
  std::vector<Jet> A(n * n);
  Jet c = b.scal * (1.0 / (2.0 * (n - 1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[id2(n, i, j)] = b.ric[id2(n, i, j)] - c * b.g[id2(n, i, j)];
  return A;
}

std::vector<Jet> weyl_jets(const CurvatureBundle& b) {
  int n = b.n;
  if (n < 3) fail(ErrorKind::DimensionTooSmall, "weyl needs n >= 3");
  int ord = b.ric[0].order();
  if (n == 3) {
    return std::vector<Jet>(n * n * n * n,
                            Jet::constant(b.g[0].dim(), ord, 0.0));
  }
  auto A = schouten_jets(b);
  auto Ag = kulkarni_nomizu(A, b.g, n);
  std::vector<Jet> W(n * n * n * n);
  double f = 1.0 / (n - 2);
  for (int i = 0; i < n * n * n * n; ++i) W[i] = b.riem[i] - f * Ag[i];
  return W;
}

std::vector<double> cotton_values(const CurvatureBundle& b) {
  int n = b.n;
  if (n < 3) fail(ErrorKind::DimensionTooSmall, "cotton needs n >= 3");
  if (b.order < 3) fail(ErrorKind::InsufficientOrder, "cotton needs metric order >= 3");
  auto dRic = covariant_derivative(b, b.ric, 2);
  std::vector<double> dR(n);
  for (int i = 0; i < n; ++i) dR[i] = b.scal.partial(i);
  std::vector<double> C(n * n * n, 0.0);
  double f = 1.0 / (2.0 * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C[id3(n, i, j, k)] = dRic[id3(n, i, j, k)].value() - dRic[id3(n, j, i, k)].value() -
                             f * (dR[i] * b.g_v[id2(n, j, k)] - dR[j] * b.g_v[id2(n, i, k)]);
  return C;
}

std::vector<double> weyl_divergence_values(const CurvatureBundle& b) {
  int n = b.n;
  if (n < 4) fail(ErrorKind::DimensionTooSmall, "weyl divergence needs n >= 4");
  auto W = weyl_jets(b);
  auto dW = covariant_derivative(b, W, 4);
  std::vector<double> div(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a)
          for (int l = 0; l < n; ++l)
            sum += b.up(l, a) * dW[id5(n, a, i, j, k, l)].value();
        div[id3(n, i, j, k)] = sum;
      }
  return div;
}

namespace {

double scaled(double resid, double scale) { return resid / std::max(1.0, scale); }

} // namespace

EngineResiduals bianchi_selftests(const CurvatureBundle& b) {
  int n = b.n;
  if (b.order < 4)
    fail(ErrorKind::InsufficientOrder, "self-tests need metric order 4");
  EngineResiduals r;

  // nabla g = 0
  {
    auto dg = covariant_derivative(b, b.g, 2);
    double worst = 0.0;
    for (const auto& j : dg) worst = std::max(worst, std::fabs(j.value()));
    r.metric_compatibility = worst;
  }

  // pair symmetries of Rm
  {
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = b.riem_v[id4(n, i, j, k, l)];
            scale = std::max(scale, std::fabs(v));
            worst = std::max(worst, std::fabs(v + b.riem_v[id4(n, j, i, k, l)]));
            worst = std::max(worst, std::fabs(v + b.riem_v[id4(n, i, j, l, k)]));
            worst = std::max(worst, std::fabs(v - b.riem_v[id4(n, k, l, i, j)]));
          }
    r.riemann_symmetries = scaled(worst, scale);
  }

  auto dRic = covariant_derivative(b, b.ric, 2);
  std::vector<double> dR(n);
  for (int i = 0; i < n; ++i) dR[i] = b.scal.partial(i);

  // g^{ja} (grad Ric)_{a j k} = d_k R / 2
  {
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < n; ++k) {
      double div = 0.0;
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) div += b.up(j, a) * dRic[id3(n, a, j, k)].value();
      scale = std::max(scale, std::fabs(div));
      worst = std::max(worst, std::fabs(div - 0.5 * dR[k]));
    }
    r.bianchi_twice_contracted = scaled(worst, scale);
  }

  // g^{ja} (grad Rm)_{a j i k l} = (grad Ric)_{k i l} - (grad Ric)_{l i k}
  {
    auto dRm = covariant_derivative(b, b.riem, 4);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double div = 0.0;
          for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a) div += b.up(j, a) * dRm[id5(n, a, j, i, k, l)].value();
          double rhs = dRic[id3(n, k, i, l)].value() - dRic[id3(n, l, i, k)].value();
          scale = std::max({scale, std::fabs(div), std::fabs(rhs)});
          worst = std::max(worst, std::fabs(div - rhs));
        }
    r.bianchi_first_contracted = scaled(worst, scale);
  }

  // commuting the contracted second derivatives of Ric against curvature
  {
    auto ddRic = covariant_derivative(b, dRic, 3);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double lhs = 0.0, mid = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) {
            lhs += b.up(a, c) * ddRic[id4(n, a, i, c, k)].value();
            mid += b.up(a, c) * ddRic[id4(n, i, a, c, k)].value();
          }
        double curv = 0.0;
        for (int j = 0; j < n; ++j)
          for (int a = 0; a < n; ++a)
            for (int s = 0; s < n; ++s)
              for (int t = 0; t < n; ++t) {
                curv += b.up(j, a) * b.up(s, t) *
                        (b.riem_v[id4(n, j, i, a, s)] * b.ric_v[id2(n, t, k)] +
                         b.riem_v[id4(n, j, i, k, s)] * b.ric_v[id2(n, a, t)]);
              }
        scale = std::max({scale, std::fabs(lhs), std::fabs(mid), std::fabs(curv)});
        worst = std::max(worst, std::fabs(lhs - mid - curv));
      }
    r.ricci_commutation = scaled(worst, scale);
  }

  // Cotton symmetries and conformal divergence identity
  if (n >= 3) {
    auto C = cotton_values(b);
    double skew = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          scale = std::max(scale, std::fabs(C[id3(n, i, j, k)]));
          skew = std::max(skew, std::fabs(C[id3(n, i, j, k)] + C[id3(n, j, i, k)]));
        }
    r.cotton_skew = scaled(skew, scale);

    double tr = 0.0;
    for (int k = 0; k < n; ++k) {
      double t12 = 0.0, t13 = 0.0, t23 = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          t12 += b.up(a, c) * C[id3(n, a, c, k)];
          t13 += b.up(a, c) * C[id3(n, a, k, c)];
          t23 += b.up(a, c) * C[id3(n, k, a, c)];
        }
      tr = std::max({tr, std::fabs(t12), std::fabs(t13), std::fabs(t23)});
    }
    r.cotton_trace = scaled(tr, scale);

    if (n >= 4) {
      auto W = weyl_jets(b);
      double wtr = 0.0, wscale = 0.0;
      for (const auto& w : W) wscale = std::max(wscale, std::fabs(w.value()));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          double t12 = 0.0, t13 = 0.0, t14 = 0.0;
          for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
              t12 += b.up(a, c) * W[id4(n, a, c, i, k)].value();
              t13 += b.up(a, c) * W[id4(n, a, i, c, k)].value();
              t14 += b.up(a, c) * W[id4(n, a, i, k, c)].value();
            }
          wtr = std::max({wtr, std::fabs(t12), std::fabs(t13), std::fabs(t14)});
        }
      r.weyl_trace = scaled(wtr, wscale);

      auto divW = weyl_divergence_values(b);
      double worst = 0.0, cscale = 0.0;
      double f = static_cast<double>(n - 2) / (n - 3);
      for (int i = 0; i < n * n * n; ++i) {
        cscale = std::max({cscale, std::fabs(C[i]), std::fabs(f * divW[i])});
        worst = std::max(worst, std::fabs(C[i] + f * divW[i]));
      }
      r.cotton_weyl_divergence = scaled(worst, cscale);
    }
  }

  return r;
}

} // namespace qem
