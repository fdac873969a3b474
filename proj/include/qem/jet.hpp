#pragma once

#include <span>
#include <vector>

#include "qem/errors.hpp"

namespace qem {

// Truncated multivariate Taylor arithmetic. A Jet holds the Taylor
// coefficients of a smooth function about a base point, complete through
// total degree `order` (at most kMaxJetOrder). Sums, products, quotients and
// compositions with elementary functions stay inside the algebra and are
// exact to floating-point rounding, so partial derivatives read off a Jet
// carry no truncation error.
inline constexpr int kMaxJetOrder = 4;

// Shared per-dimension tables: multi-index enumeration (graded, so indices of
// degree <= q form a prefix), the product convolution list, and the
// index-shift maps used by derivative().
class JetSpace {
public:
  static const JetSpace& get(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(exps_.size()); }
  int size_at(int order) const { return degree_offset_[order + 1]; }

  const std::vector<int>& exponents(int idx) const { return exps_[idx]; }
  int degree(int idx) const { return degree_[idx]; }
  double factorial(int idx) const { return factorial_[idx]; }
  int index_of(std::span<const int> exps) const;
  // index of the multi-index alpha + e_var, or -1 past max order
  int shift_up(int var, int idx) const { return shift_up_[var][idx]; }

  struct Triple {
    int a, b, c; // coef[c] += lhs[a] * rhs[b]
  };
  std::span<const Triple> product_triples(int order) const {
    return {triples_.data(), static_cast<size_t>(triple_offset_[order + 1])};
  }

private:
  explicit JetSpace(int dim);

  int dim_;
  std::vector<std::vector<int>> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<int> degree_offset_; // size kMaxJetOrder+2
  std::vector<std::vector<int>> shift_up_;
  std::vector<Triple> triples_;
  std::vector<int> triple_offset_;
};

class Jet {
public:
  Jet() = default;

  static Jet constant(int dim, int order, double value);
  static Jet variable(int dim, int order, int var, double value);

  int dim() const { return space_->dim(); }
  int order() const { return order_; }
  double value() const { return coef_.empty() ? 0.0 : coef_[0]; }

  // partial derivative for the multi-index `exps` (coefficient times alpha!)
  double partial(std::span<const int> exps) const;
  double partial(int i) const;
  double partial(int i, int j) const;

  double coef(int idx) const { return coef_[idx]; }

  // exact derivative field: order drops by one
  Jet derivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator/(double s, const Jet& b);

  // composition with a univariate analytic map given by its derivatives at
  // value(): out = sum_k derivs[k]/k! (this - value())^k
  Jet compose(std::span<const double> derivs) const;

private:
  Jet(const JetSpace* space, int order)
      : space_(space), order_(order), coef_(space->size_at(order), 0.0) {}

  void check_same(const Jet& o) const;

  const JetSpace* space_ = nullptr;
  int order_ = 0;
  std::vector<double> coef_;

  friend Jet sin(const Jet&);
  friend Jet cos(const Jet&);
  friend Jet sinh(const Jet&);
  friend Jet cosh(const Jet&);
  friend Jet exp(const Jet&);
  friend Jet log(const Jet&);
  friend Jet sqrt(const Jet&);
  friend Jet pow(const Jet&, double);
};

Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet sinh(const Jet& f);
Jet cosh(const Jet& f);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sqrt(const Jet& f);
Jet pow(const Jet& f, double a);

} // namespace qem
