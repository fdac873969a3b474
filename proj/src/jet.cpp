#include "qem/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace qem {

namespace {

void enumerate_exps(int dim, int degree, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim - 1) {
    cur.push_back(degree);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur.push_back(e);
    enumerate_exps(dim, degree - e, cur, out);
    cur.pop_back();
  }
}

} // namespace

JetSpace::JetSpace(int dim) : dim_(dim) {
  degree_offset_.assign(kMaxJetOrder + 2, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    std::vector<std::vector<int>> level;
    std::vector<int> cur;
    enumerate_exps(dim, d, cur, level);
    for (auto& e : level) {
      exps_.push_back(std::move(e));
      degree_.push_back(d);
    }
    degree_offset_[d + 1] = static_cast<int>(exps_.size());
  }

  factorial_.resize(exps_.size());
  for (size_t idx = 0; idx < exps_.size(); ++idx) {
    double f = 1.0;
    for (int e : exps_[idx])
      for (int k = 2; k <= e; ++k) f *= k;
    factorial_[idx] = f;
  }

  std::map<std::vector<int>, int> lookup;
  for (size_t idx = 0; idx < exps_.size(); ++idx) lookup[exps_[idx]] = static_cast<int>(idx);

  shift_up_.assign(dim, std::vector<int>(exps_.size(), -1));
  for (size_t idx = 0; idx < exps_.size(); ++idx) {
    if (degree_[idx] == kMaxJetOrder) continue;
    for (int v = 0; v < dim; ++v) {
      auto e = exps_[idx];
      e[v] += 1;
      shift_up_[v][idx] = lookup.at(e);
    }
  }

  // convolution pairs grouped by result degree so products truncate cheaply
  triple_offset_.assign(kMaxJetOrder + 2, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    for (int a = degree_offset_[0]; a < degree_offset_[kMaxJetOrder + 1]; ++a) {
      if (degree_[a] > d) continue;
      for (int b = degree_offset_[d - degree_[a]]; b < degree_offset_[d - degree_[a] + 1]; ++b) {
        std::vector<int> e(dim);
        for (int v = 0; v < dim; ++v) e[v] = exps_[a][v] + exps_[b][v];
        triples_.push_back({a, b, lookup.at(e)});
      }
    }
    triple_offset_[d + 1] = static_cast<int>(triples_.size());
  }
}

const JetSpace& JetSpace::get(int dim) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it == cache.end())
    it = cache.emplace(dim, std::unique_ptr<JetSpace>(new JetSpace(dim))).first;
  return *it->second;
}

int JetSpace::index_of(std::span<const int> exps) const {
  int deg = 0;
  for (int e : exps) deg += e;
  if (deg > kMaxJetOrder) fail(ErrorKind::OrderUnsupported, "multi-index degree above max order");
  for (int idx = degree_offset_[deg]; idx < degree_offset_[deg + 1]; ++idx) {
    if (std::equal(exps.begin(), exps.end(), exps_[idx].begin())) return idx;
  }
  fail(ErrorKind::OrderUnsupported, "bad multi-index");
}

Jet Jet::constant(int dim, int order, double value) {
  if (order < 0 || order > kMaxJetOrder)
    fail(ErrorKind::OrderUnsupported, "jet order must lie in 0..4");
  Jet j(&JetSpace::get(dim), order);
  j.coef_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int var, double value) {
  Jet j = constant(dim, order, value);
  if (order >= 1) j.coef_[1 + var] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> exps) const {
  int idx = space_->index_of(exps);
  if (space_->degree(idx) > order_)
    fail(ErrorKind::InsufficientOrder, "jet does not carry the requested order");
  return coef_[idx] * space_->factorial(idx);
}

double Jet::partial(int i) const {
  std::vector<int> e(dim(), 0);
  e[i] = 1;
  return partial(e);
}

double Jet::partial(int i, int j) const {
  std::vector<int> e(dim(), 0);
  e[i] += 1;
  e[j] += 1;
  return partial(e);
}

Jet Jet::derivative(int var) const {
  if (order_ == 0)
    fail(ErrorKind::InsufficientOrder, "derivative of an order-0 jet");
  Jet out(space_, order_ - 1);
  for (int idx = 0; idx < space_->size_at(order_ - 1); ++idx) {
    int up = space_->shift_up(var, idx);
    out.coef_[idx] = coef_[up] * (space_->exponents(idx)[var] + 1);
  }
  return out;
}

void Jet::check_same(const Jet& o) const {
  if (space_ != o.space_)
    fail(ErrorKind::DomainViolation, "jet dimension mismatch");
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& c : out.coef_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same(o);
  if (o.order_ < order_) {
    order_ = o.order_;
    coef_.resize(space_->size_at(order_));
  }
  for (size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same(o);
  if (o.order_ < order_) {
    order_ = o.order_;
    coef_.resize(space_->size_at(order_));
  }
  for (size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  coef_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  coef_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_same(b);
  int order = std::min(a.order_, b.order_);
  Jet out(a.space_, order);
  int na = a.space_->size_at(a.order_);
  int nb = a.space_->size_at(b.order_);
  for (const auto& t : a.space_->product_triples(order)) {
    if (t.a >= na || t.b >= nb) continue;
    out.coef_[t.c] += a.coef_[t.a] * b.coef_[t.b];
  }
  return out;
}

Jet Jet::compose(std::span<const double> derivs) const {
  // Horner evaluation of sum_k derivs[k]/k! hat^k with hat = this - value()
  Jet hat = *this;
  hat.coef_[0] = 0.0;
  double fact = 1.0;
  std::vector<double> coeffs(order_ + 1);
  for (int k = 0; k <= order_; ++k) {
    if (k > 1) fact *= k;
    coeffs[k] = derivs[k] / fact;
  }
  Jet out = Jet::constant(dim(), order_, coeffs[order_]);
  for (int k = order_ - 1; k >= 0; --k) {
    out = out * hat;
    out.coef_[0] += coeffs[k];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  double b0 = b.value();
  if (b0 == 0.0) fail(ErrorKind::DomainViolation, "jet division by zero value part");
  std::vector<double> d(b.order_ + 1);
  double p = 1.0 / b0;
  for (int k = 0; k <= b.order_; ++k) {
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    d[k] = (k % 2 == 0 ? 1.0 : -1.0) * fact * p;
    p /= b0;
  }
  return a * b.compose(d);
}

Jet operator/(double s, const Jet& b) {
  return Jet::constant(b.dim(), b.order(), s) / b;
}

namespace {

Jet trig_compose(const Jet& f, double even, double odd, bool flip) {
  // derivative cycle for sin/cos: (even, odd) hold the two base values
  std::vector<double> d(f.order() + 1);
  double cycle[4];
  if (!flip) {
    cycle[0] = even;
    cycle[1] = odd;
    cycle[2] = -even;
    cycle[3] = -odd;
  } else {
    cycle[0] = even;
    cycle[1] = -odd;
    cycle[2] = -even;
    cycle[3] = odd;
  }
  for (int k = 0; k <= f.order(); ++k) d[k] = cycle[k % 4];
  return f.compose(d);
}

} // namespace

Jet sin(const Jet& f) { return trig_compose(f, std::sin(f.value()), std::cos(f.value()), false); }

Jet cos(const Jet& f) { return trig_compose(f, std::cos(f.value()), std::sin(f.value()), true); }

Jet sinh(const Jet& f) {
  double s = std::sinh(f.value()), c = std::cosh(f.value());
  std::vector<double> d(f.order() + 1);
  for (int k = 0; k <= f.order(); ++k) d[k] = (k % 2 == 0) ? s : c;
  return f.compose(d);
}

Jet cosh(const Jet& f) {
  double s = std::sinh(f.value()), c = std::cosh(f.value());
  std::vector<double> d(f.order() + 1);
  for (int k = 0; k <= f.order(); ++k) d[k] = (k % 2 == 0) ? c : s;
  return f.compose(d);
}

Jet exp(const Jet& f) {
  std::vector<double> d(f.order() + 1, std::exp(f.value()));
  return f.compose(d);
}

Jet log(const Jet& f) {
  double f0 = f.value();
  if (f0 <= 0.0) fail(ErrorKind::DomainViolation, "log of non-positive jet value");
  std::vector<double> d(f.order() + 1);
  d[0] = std::log(f0);
  double p = 1.0 / f0;
  for (int k = 1; k <= f.order(); ++k) {
    double fact = 1.0;
    for (int j = 2; j <= k - 1; ++j) fact *= j;
    d[k] = (k % 2 == 1 ? 1.0 : -1.0) * fact * p;
    p /= f0;
  }
  return f.compose(d);
}

Jet pow(const Jet& f, double a) {
  double f0 = f.value();
  if (f0 <= 0.0) fail(ErrorKind::DomainViolation, "pow of non-positive jet value");
  std::vector<double> d(f.order() + 1);
  double c = 1.0;
  for (int k = 0; k <= f.order(); ++k) {
    d[k] = c * std::pow(f0, a - k);
    c *= (a - k);
  }
  return f.compose(d);
}

Jet sqrt(const Jet& f) { return pow(f, 0.5); }

} // namespace qem
