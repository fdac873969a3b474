#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qem/curvature.hpp"
#include "qem/models.hpp"

namespace qem {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  int points = 0;
  std::string anchor; // which identity or value the check pins down
  std::string notes;
};

// ---- classification arithmetic -------------------------------------------

struct ScalarEntry {
  int k = 0;
  double R = 0.0;
  bool excluded = false; // the k = 1 slot is known to carry no instance
};

// admissible constant scalar curvatures R_k = (k(m-n)+n(n-1)) lambda / (m+n-k-1)
std::vector<ScalarEntry> admissible_scalar_set(int n, double m, double lambda);

std::optional<int> classify_scalar(double R, int n, double m, double lambda, double tol);

// ---- raw algebraic identities --------------------------------------------

struct LemsumResult {
  double b = 0.0;
  double min_pair_product = 0.0;
  bool bound_ok = false;
  bool sign_ok = false; // b >= 0 forces a single sign
};

// pairwise bound a_i a_j >= b / (2(n-1)) for non-increasing sequences
LemsumResult lemsum_check(const std::vector<double>& a);

struct SymmetricSumResiduals {
  double cubic_product = 0.0; // 3 mu2 mu3 mu4 = Tr(P^3) - 2 m^3 rho^3
  double quartic_sum = 0.0;   // sum mu^4 = -10 m^4 rho^4 / 3 + 8 m rho Tr(P^3) / 3
  double cubic_expansion = 0.0;
};

// the inputs must satisfy sum mu = 2 m rho and sum mu^2 = 2 m^2 rho^2
SymmetricSumResiduals symmetric_sum_identities(const std::array<double, 3>& mu, double m,
                                               double rho);

// ---- per-point evaluation context ----------------------------------------

struct PointData {
  PointData(const QEInstance& inst, const ChartPoint& x, int order = 4);

  const QEInstance* inst;
  int n;
  CurvatureBundle b;

  Jet u;
  std::vector<Jet> du;     // coordinate partials of u, jets
  std::vector<Jet> hess_u; // covariant Hessian jets
  Jet gradsq;              // |grad u|^2 jet
  double u_v = 0.0, lap_u = 0.0, gradsq_v = 0.0;
  std::vector<double> du_v, duU; // partials, raised partials

  std::vector<Jet> dRic;      // [a][i][j] jets
  std::vector<double> dRic_v; // values
  std::vector<double> dR;     // partials of R
  std::vector<double> hessR;  // covariant Hessian of R, values
  double lapR = 0.0;
  std::vector<double> lapRic; // rough Laplacian of Ric

  std::vector<Jet> P_jets; // Ric - rho(x) g with rho the scalar field
  std::vector<double> P_v, dP_v;
  Jet trP3_jet, trRic3_jet;

  double rho() const { return inst->rho; }
};

struct SpectralProfile {
  std::vector<double> ric_eigenvalues; // sorted ascending, w.r.t. g
  std::vector<double> p_eigenvalues;
  double traceP = 0.0, normP2 = 0.0, trP3 = 0.0, trP4 = 0.0;
};

SpectralProfile spectral_profile(const PointData& pd);

// Guard for the dimension-four drift identities: the instance must be
// four-dimensional with the split-model scalar curvature 2(m+2)lambda/(m+1).
void require_split_scalar(const QEInstance& inst, double sampled_scalar);

// Residual of R - 2 Ric(nu, nu) against the boundary factor's intrinsic
// scalar curvature; throws NoBoundaryData when the instance declares none.
double boundary_scalar_residual(const PointData& pd);

// ---- suites ---------------------------------------------------------------

// multipliers on printed coefficients; anything != 1 is a negative control
struct Dim4Perturbation {
  double ricci_square_term = 1.0;      // (m+1)/m u Ric^2
  double riemann_ricci_term = 1.0;     // 2u Rm : Ric
  double ricci_quartic_term = 1.0;     // 3(m+1)/m Ric^2 : Ric^2
  double p_quartic_term = 1.0;         // 3(m+1)/m Tr(P^4)
  double drift_constant_term = 1.0;    // 12 rho^4 m^2 (m+1) u
  double drift_leading_term = 1.0;     // 8(m+1) rho u Tr(P^3)
  double p_norm_term = 1.0;            // (m+1) rho u |P|^2 in the contraction identity
};

struct SuiteOptions {
  int points = 50;
  const Dim4Perturbation* perturb = nullptr;
};

extern const std::vector<std::string> kSuiteNames;

// Catalog row for list-checks.
struct CheckInfo {
  std::string name;
  std::string suite;
  double tolerance = 0.0;
  std::string anchor;
};
const std::vector<CheckInfo>& check_catalog();

// Mandatory convention calibration: unit spheres must report Ric = (n-1) g.
CheckResult calibration_check();

// Runs one suite. Model-independent suites (algebraic, classification,
// engine-selftest) accept inst == nullptr; the rest require an instance.
std::vector<CheckResult> run_suite(const QEInstance* inst, const std::string& suite,
                                   const SuiteOptions& opts);

// Profile checks for the non-existence warpings (cone / hyperbolic).
std::vector<CheckResult> run_profile_checks(InexKind kind, const InexParams& params,
                                            int points);

} // namespace qem
