#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qem/chart.hpp"

namespace qem {

// A quasi-Einstein instance: chart metric, potential, structure constants
// and the values the classification predicts for it.
struct QEInstance {
  MetricSpec metric;
  ScalarField u;
  double m = 2.0;
  double lambda = 1.0;
  double mu = 0.0;  // integrability constant, fixed at the domain midpoint
  double rho = 0.0; // ((n-1) lambda - R) / (m-1)
  double expected_scalar = 0.0;
  int expected_k = 0;
  double u_max = 1.0;
  std::optional<double> boundary_scalar; // intrinsic scalar curvature of the boundary
  std::optional<std::vector<Interval>> sample_clip; // keeps u >= 0.05 u_max
  std::vector<double> expected_ric_eigenvalues;     // sorted ascending, w.r.t. g
  std::string label;

  int dim() const { return metric.dim; }
};

std::vector<ChartPoint> sample_points(const QEInstance& inst, int count);

// round hemisphere, u = cos r, lambda = m + n - 1
QEInstance hemisphere(int n, double m);

// flat interval times a round fiber of constant scale, u = sin(sqrt(lambda/m) t)
QEInstance cylinder(int n, double m, double lambda);

// half-sphere block warped over r plus a fixed-scale fiber, u = cos r
QEInstance doubly_warped(int p, int q, double m);

// interval times two fixed-scale sphere factors, u = sin(sqrt(lambda/m) t)
QEInstance product_excg(int p, int q, double m, double lambda);

// One-dimensional base warped over an Einstein fiber; carries the closed-form
// Ricci so the chart pipeline can be cross-checked independently.
struct WarpedSpec {
  Interval base;
  std::function<Jet(const Jet&)> phi; // warping, of the base variable only
  int fiber_dim = 0;                  // l
  double fiber_einstein = 0.0;        // kappa > 0
  std::string label;
};

struct WarpedRicci {
  double horizontal = 0.0; // Ric(dt, dt)
  double vertical = 0.0;   // Ricci eigenvalue on fiber directions, w.r.t. g
  double scalar = 0.0;
};

WarpedRicci warped_ricci_analytic(const WarpedSpec& spec, double t);

// Chart realization dt^2 + phi^2(t) * ((l-1)/kappa) * g_sphere; needs l >= 2.
MetricSpec warped_chart(const WarpedSpec& spec);

struct InexParams {
  int n = 4;
  double kappa = 2.0; // fiber Einstein constant
  double alpha = 1.0; // cone warping slope
  double beta = 1.0;  // hyperbolic warping rate
  double a = 0.0;     // sinh coefficient
  double b = 1.0;     // cosh coefficient
};

enum class InexKind { Cone, Hyperbolic };

WarpedSpec inex_warped_spec(InexKind kind, const InexParams& p);

// Closed-form scalar-curvature profile along the base.
std::vector<double> inex_scalar_profile(InexKind kind, const InexParams& p,
                                        const std::vector<double>& tgrid);

// sinh coefficient that pins the degenerate branch with constant R = -n(n-1) beta
double inex_forced_sinh_coefficient(int n, double beta, double b, double kappa);

// Deterministic pseudo-random doubly warped metric on dimension 4, used by
// the engine self-tests. Not part of the model catalog.
MetricSpec random_warped_metric(unsigned seed);

} // namespace qem
