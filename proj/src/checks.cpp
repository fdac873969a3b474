#include "qem/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "qem/fd_oracle.hpp"
#include "qem/linalg.hpp"

namespace qem {

namespace {

// deterministic generator for the algebraic property suites
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed * 2654435769ull + 88172645463325252ull) {}
  double uniform() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 11) & ((1ull << 53) - 1)) / (1ull << 53);
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
};

double maxabs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// M[i][j] = g^{ia} A_{aj}
std::vector<double> mixed(const std::vector<double>& up, const std::vector<double>& A, int n) {
  std::vector<double> M(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) M[i * n + j] += up[i * n + a] * A[a * n + j];
  return M;
}

std::vector<double> matmul(const std::vector<double>& A, const std::vector<double>& B, int n) {
  std::vector<double> M(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) M[i * n + j] += A[i * n + k] * B[k * n + j];
  return M;
}

double trace(const std::vector<double>& M, int n) {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += M[i * n + i];
  return t;
}

} // namespace

// ---- classification arithmetic -------------------------------------------

std::vector<ScalarEntry> admissible_scalar_set(int n, double m, double lambda) {
  if (n < 2) fail(ErrorKind::DimensionTooSmall, "admissible set needs n >= 2");
  if (m <= 1.0) fail(ErrorKind::ConfigError, "m must exceed 1");
  if (lambda <= 0.0) fail(ErrorKind::ConfigError, "lambda must be positive");
  std::vector<ScalarEntry> out;
  out.reserve(n);
  double prev = -1e300;
  for (int k = 0; k < n; ++k) {
    double R = (k * (m - n) + n * (n - 1.0)) * lambda / (m + n - k - 1.0);
    if (R <= prev)
      fail(ErrorKind::AmbiguousClassification, "admissible values must increase in k");
    prev = R;
    out.push_back({k, R, k == 1});
  }
  return out;
}

std::optional<int> classify_scalar(double R, int n, double m, double lambda, double tol) {
  if (tol <= 0.0) fail(ErrorKind::ConfigError, "classification tolerance must be positive");
  auto set = admissible_scalar_set(n, m, lambda);
  std::optional<int> hit;
  for (const auto& e : set) {
    if (std::fabs(R - e.R) <= tol * std::fabs(e.R)) {
      if (hit) fail(ErrorKind::AmbiguousClassification, "two admissible values match");
      hit = e.k;
    }
  }
  return hit;
}

// ---- raw algebraic identities --------------------------------------------

LemsumResult lemsum_check(const std::vector<double>& a) {
  int n = static_cast<int>(a.size());
  if (n < 2) fail(ErrorKind::DimensionTooSmall, "needs at least two entries");
  for (int i = 0; i + 1 < n; ++i)
    if (a[i] < a[i + 1]) fail(ErrorKind::NotSorted, "sequence must be non-increasing");

  double sum = 0.0, sum2 = 0.0;
  for (double x : a) {
    sum += x;
    sum2 += x * x;
  }
  LemsumResult out;
  out.b = sum * sum - (n - 1) * sum2;
  out.min_pair_product = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.min_pair_product = std::min(out.min_pair_product, a[i] * a[j]);
  out.bound_ok = out.min_pair_product >= out.b / (2.0 * (n - 1)) - 1e-12;
  out.sign_ok = true;
  if (out.b >= 0.0) {
    bool all_nonneg = true, all_nonpos = true;
    for (double x : a) {
      if (x < -1e-12) all_nonneg = false;
      if (x > 1e-12) all_nonpos = false;
    }
    out.sign_ok = all_nonneg || all_nonpos;
  }
  return out;
}

SymmetricSumResiduals symmetric_sum_identities(const std::array<double, 3>& mu, double m,
                                               double rho) {
  double s1 = mu[0] + mu[1] + mu[2];
  double s2 = mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2];
  double mr = m * rho;
  double scale = std::max(1.0, mr * mr);
  if (std::fabs(s1 - 2.0 * mr) > 1e-10 * std::max(1.0, std::fabs(mr)) ||
      std::fabs(s2 - 2.0 * mr * mr) > 1e-10 * scale)
    fail(ErrorKind::ConstraintViolation, "inputs must satisfy the two trace constraints");

  double s3 = 0.0, s4 = 0.0;
  for (double x : mu) {
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  SymmetricSumResiduals out;
  out.cubic_product = std::fabs(3.0 * mu[0] * mu[1] * mu[2] - (s3 - 2.0 * mr * mr * mr));
  out.quartic_sum = std::fabs(s4 - (-10.0 * mr * mr * mr * mr / 3.0 + 8.0 * mr * s3 / 3.0));
  double lhs = s1 * s1 * s1;
  double rhs = 3.0 * s1 * s2 - 2.0 * s3 + 6.0 * mu[0] * mu[1] * mu[2];
  out.cubic_expansion = std::fabs(lhs - rhs);
  return out;
}

// ---- per-point evaluation context ----------------------------------------

PointData::PointData(const QEInstance& qe, const ChartPoint& x, int order)
    : inst(&qe), n(qe.dim()), b(curvature_bundle(qe.metric, x, order)) {
  auto vars = seed_point(x, n, order);
  u = qe.u(vars);
  u_v = u.value();

  du.resize(n);
  du_v.resize(n);
  for (int i = 0; i < n; ++i) {
    du[i] = u.derivative(i);
    du_v[i] = du[i].value();
  }
  duU.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) duU[i] += b.up(i, a) * du_v[a];

  hess_u = hessian(b, u);
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += b.up(i, j) * hess_u[id2(n, i, j)].value();
  lap_u = lap;

  gradsq = Jet::constant(n, du[0].order(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) gradsq += b.ginv[id2(n, a, c)] * du[a] * du[c];
  gradsq_v = gradsq.value();

  dRic = covariant_derivative(b, b.ric, 2);
  dRic_v = values_of(dRic);
  dR.resize(n);
  for (int i = 0; i < n; ++i) dR[i] = b.scal.partial(i);
  auto hR = hessian(b, b.scal);
  hessR = values_of(hR);
  lapR = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lapR += b.up(i, j) * hessR[id2(n, i, j)];
  if (order >= 4) lapRic = tensor_laplacian_t2(b, b.ric);

  double m = qe.m, lambda = qe.lambda;
  Jet rho_field = ((n - 1) * lambda - b.scal) * (1.0 / (m - 1.0));
  P_jets.resize(n * n);
  for (int i = 0; i < n * n; ++i) P_jets[i] = b.ric[i] - rho_field * b.g[i];
  P_v = values_of(P_jets);
  dP_v = values_of(covariant_derivative(b, P_jets, 2));

  // traces of the mixed powers as jets, for the drift Laplacians
  auto mixed_jets = [&](const std::vector<Jet>& A) {
    std::vector<Jet> M(n * n, Jet::constant(n, A[0].order(), 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) M[id2(n, i, j)] += b.ginv[id2(n, i, a)] * A[id2(n, a, j)];
    return M;
  };
  auto tr3 = [&](const std::vector<Jet>& M) {
    Jet t = Jet::constant(n, M[0].order(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          t += M[id2(n, i, j)] * M[id2(n, j, k)] * M[id2(n, k, i)];
    return t;
  };
  trP3_jet = tr3(mixed_jets(P_jets));
  trRic3_jet = tr3(mixed_jets(b.ric));
}

void require_split_scalar(const QEInstance& inst, double sampled_scalar) {
  double want = 2.0 * (inst.m + 2.0) * inst.lambda / (inst.m + 1.0);
  if (inst.dim() != 4 || std::fabs(sampled_scalar - want) > 1e-6 * std::fabs(want))
    fail(ErrorKind::WrongScalarCurvature,
         "needs a four-dimensional instance with R = 2(m+2)lambda/(m+1)");
}

double boundary_scalar_residual(const PointData& pd) {
  const QEInstance& qe = *pd.inst;
  if (!qe.boundary_scalar)
    fail(ErrorKind::NoBoundaryData, "instance declares no boundary geometry");
  int n = pd.n;
  double ric_nn = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) ric_nn += pd.b.ric_v[id2(n, a, c)] * pd.duU[a] * pd.duU[c];
  ric_nn /= pd.gradsq_v;
  return pd.b.scal_v - 2.0 * ric_nn - *qe.boundary_scalar;
}

SpectralProfile spectral_profile(const PointData& pd) {
  int n = pd.n;
  SpectralProfile out;
  out.ric_eigenvalues = generalized_sym_eigenvalues(pd.b.ric_v, pd.b.g_v, n);
  out.p_eigenvalues = generalized_sym_eigenvalues(pd.P_v, pd.b.g_v, n);
  auto pM = mixed(pd.b.ginv_v, pd.P_v, n);
  out.traceP = trace(pM, n);
  auto p2 = matmul(pM, pM, n);
  out.normP2 = trace(p2, n);
  out.trP3 = trace(matmul(p2, pM, n), n);
  out.trP4 = trace(matmul(p2, p2, n), n);
  return out;
}

// ---- catalog ---------------------------------------------------------------

const std::vector<std::string> kSuiteNames = {
    "defining", "lemmafund", "tensors", "dim4", "algebraic", "engine-selftest",
    "classification"};

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = {
      {"defining-hessian", "defining", 1e-8, "defining system, Hessian form"},
      {"defining-trace", "defining", 1e-8, "defining system, trace form"},
      {"scalar-constancy", "defining", 1e-8, "constant scalar curvature"},
      {"scalar-expected", "defining", 1e-8, "scalar curvature value from the admissible family"},
      {"ricci-eigenvalue-spread", "defining", 1e-8, "Ricci spectrum rigidity"},
      {"ricci-eigenvalue-expected", "defining", 1e-8, "Ricci spectrum of the model"},
      {"boundary-scalar", "defining", 1e-8, "totally geodesic boundary trace relation"},
      {"potential-positive", "defining", 0.0, "potential positive in the interior"},

      {"gradient-scalar-exchange", "lemmafund", 1e-8,
       "gradient of scalar curvature vs Ricci of the gradient"},
      {"integrability-constant", "lemmafund", 1e-8, "integrability constant stays constant"},
      {"scalar-laplacian-balance", "lemmafund", 1e-6, "Laplacian of scalar curvature balance"},
      {"traceless-ricci-norm", "lemmafund", 1e-8,
       "traceless Ricci norm forced by constant scalar curvature"},
      {"curl-ricci-exchange", "lemmafund", 1e-8,
       "antisymmetrized Ricci derivative vs curvature contraction"},
      {"transnormal-relation", "lemmafund", 1e-8, "potential is transnormal"},

      {"p-annihilates-gradient", "tensors", 1e-8, "P kills the potential gradient"},
      {"cotton-weyl-split", "tensors", 1e-8, "Cotton splits into Weyl contraction plus T"},
      {"t-tensor-vanishing", "tensors", 1e-8, "T vanishes on two-eigenvalue models"},
      {"t-tensor-dichotomy", "tensors", 0.0,
       "split Ricci spectrum forces a nonzero T"},
      {"t-norm-contraction", "tensors", 1e-8, "norm of T via traceless Ricci contraction"},
      {"weyl-potential-contraction", "tensors", 1e-8,
       "Weyl contracted with the potential gradient"},
      {"p-curl-q-identity", "tensors", 1e-8, "antisymmetrized P derivative vs Q contraction"},
      {"p-curl-q-reduced", "tensors", 1e-8, "constant-R reduction of the P-Q exchange"},
      {"p-gradient-contraction", "tensors", 1e-8, "P derivative contracted with the gradient"},
      {"p-derivative-projection", "tensors", 1e-8, "P derivative projected along the gradient"},

      {"ricci-laplacian-lhs", "dim4", 1e-6, "Laplacian of Ricci under the defining system"},
      {"ricci-laplacian-rhs", "dim4", 1e-6, "Laplacian of Ricci under the defining system"},
      {"ricci-laplacian-diff", "dim4", 1e-6, "Laplacian of Ricci under the defining system"},
      {"ricci-cubic-drift-lhs", "dim4", 1e-6, "drift Laplacian of the Ricci cubic trace"},
      {"ricci-cubic-drift-rhs", "dim4", 1e-6, "drift Laplacian of the Ricci cubic trace"},
      {"ricci-cubic-drift-diff", "dim4", 1e-6, "drift Laplacian of the Ricci cubic trace"},
      {"p-cubic-laplacian-lhs", "dim4", 1e-6, "Laplacian of the P cubic trace"},
      {"p-cubic-laplacian-rhs", "dim4", 1e-6, "Laplacian of the P cubic trace"},
      {"p-cubic-laplacian-diff", "dim4", 1e-6, "Laplacian of the P cubic trace"},
      {"p-cubic-drift-lhs", "dim4", 1e-6, "drift Laplacian of the P cubic trace, dimension four"},
      {"p-cubic-drift-rhs", "dim4", 1e-6, "drift Laplacian of the P cubic trace, dimension four"},
      {"p-cubic-drift-diff", "dim4", 1e-6, "drift Laplacian of the P cubic trace, dimension four"},
      {"p-cubic-drift-reduced-diff", "dim4", 1e-6, "reduced drift identity for the P cubic trace"},
      {"p-cubic-drift-bound", "dim4", 1e-6, "lower bound for the drift of the P cubic trace"},
      {"p-riemann-contraction", "dim4", 1e-6, "curvature contraction of P forced by constant |P|"},
      {"p-trace-values", "dim4", 1e-8, "trace and norm of P on the rigid model"},
      {"drift-h-lhs", "dim4", 1e-7, "drift of the gradient-weighted cubic deviation"},
      {"drift-h-rhs", "dim4", 1e-7, "drift of the gradient-weighted cubic deviation"},
      {"drift-h-bound", "dim4", 1e-7, "drift inequality for the cubic deviation"},
      {"h-nonnegative", "dim4", 1e-10, "nonnegativity of the cubic deviation"},
      {"p-eigenvalue-pattern", "dim4", 1e-8, "P eigenvalue pattern of the rigid model"},

      {"pairwise-product-bound", "algebraic", 1e-12,
       "pairwise product bound for non-increasing tuples"},
      {"cubic-product-identity", "algebraic", 1e-10,
       "product of nonzero eigenvalues from the cubic trace"},
      {"quartic-power-sum", "algebraic", 1e-10, "quartic power sum under the trace constraints"},
      {"cubic-symmetric-expansion", "algebraic", 1e-12, "symmetric cubic expansion"},
      {"ricci-cubic-shift", "algebraic", 1e-10, "cubic trace under the shift Ric = P + rho g"},
      {"ricci-quartic-shift", "algebraic", 1e-10, "quartic contraction under the shift"},
      {"kn-contraction", "algebraic", 1e-10, "metric contraction of the Kulkarni-Nomizu product"},
      {"t-norm-synthetic", "algebraic", 1e-10, "T norm identity on synthetic spectra"},

      {"calibration-sphere-ricci", "engine-selftest", 1e-10,
       "round sphere normalization Ric = (n-1) g"},
      {"bianchi-second-contracted", "engine-selftest", 1e-6,
       "twice contracted second Bianchi identity"},
      {"bianchi-first-contracted", "engine-selftest", 1e-6, "contracted second Bianchi identity"},
      {"ricci-commutation", "engine-selftest", 1e-6, "commutation of Ricci second derivatives"},
      {"cotton-skew", "engine-selftest", 1e-6, "Cotton skew symmetry"},
      {"cotton-trace-free", "engine-selftest", 1e-6, "Cotton trace freeness"},
      {"weyl-trace-free", "engine-selftest", 1e-6, "Weyl trace freeness"},
      {"cotton-weyl-divergence", "engine-selftest", 1e-6, "Cotton as Weyl divergence"},
      {"metric-compatibility", "engine-selftest", 1e-10, "metric compatibility of the connection"},
      {"riemann-symmetries", "engine-selftest", 1e-10, "curvature tensor symmetries"},
      {"dual-path-ricci", "engine-selftest", 1e-5, "jet vs finite-difference Ricci"},

      {"admissible-set-values", "classification", 1e-12,
       "printed admissible scalar set in dimension four"},
      {"admissible-below-upper", "classification", 1e-12,
       "admissible scalars stay below n lambda"},
      {"classify-roundtrip", "classification", 0.0, "classification inverts the enumerator"},
      {"model-scalar-class", "classification", 0.0,
       "model scalar curvature classifies to its critical dimension"},

      {"warped-profile-agreement", "profile", 1e-6, "closed-form scalar profile vs chart pipeline"},
      {"warped-ricci-agreement", "profile", 1e-6, "closed-form warped Ricci vs chart pipeline"},
      {"scalar-nonconstancy", "profile", 0.0, "scalar curvature is not constant"},
      {"forced-constant-negative", "profile", 1e-8,
       "degenerate branch pins R = -n(n-1) beta"},
  };
  return catalog;
}

namespace {

const CheckInfo& info_for(const std::string& name) {
  for (const auto& c : check_catalog())
    if (c.name == name) return c;
  fail(ErrorKind::ConfigError, "unknown check name: " + name);
}

// accumulates max residuals across points, then freezes CheckResults
struct Accum {
  std::map<std::string, double> worst;
  std::map<std::string, std::string> notes;
  int points = 0;

  void note(const std::string& name, double r) {
    auto& w = worst[name];
    w = std::max(w, std::fabs(r));
  }
  void note_signed(const std::string& name, double r) { // for one-sided bounds
    auto& w = worst[name];
    w = std::max(w, r);
  }
  void annotate(const std::string& name, const std::string& text) { notes[name] = text; }

  std::vector<CheckResult> finish() const {
    std::vector<CheckResult> out;
    for (const auto& [name, resid] : worst) {
      const CheckInfo& ci = info_for(name);
      CheckResult r;
      r.name = name;
      r.residual = std::max(0.0, resid);
      r.tolerance = ci.tolerance;
      r.passed = r.residual <= r.tolerance;
      r.points = points;
      r.anchor = ci.anchor;
      auto it = notes.find(name);
      if (it != notes.end()) r.notes = it->second;
      out.push_back(std::move(r));
    }
    return out;
  }
};

// ---- defining suite --------------------------------------------------------

void eval_defining(const PointData& pd, Accum& acc,
                   std::vector<std::vector<double>>& eig_track) {
  int n = pd.n;
  const QEInstance& qe = *pd.inst;
  double m = qe.m, lambda = qe.lambda;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double rhs = pd.u_v / m * (pd.b.ric_v[id2(n, i, j)] - lambda * pd.b.g_v[id2(n, i, j)]);
      acc.note("defining-hessian", pd.hess_u[id2(n, i, j)].value() - rhs);
    }
  acc.note("defining-trace", pd.lap_u - pd.u_v / m * (pd.b.scal_v - n * lambda));
  acc.note("scalar-expected",
           (pd.b.scal_v - qe.expected_scalar) / std::max(1.0, std::fabs(qe.expected_scalar)));

  auto eig = generalized_sym_eigenvalues(pd.b.ric_v, pd.b.g_v, n);
  eig_track.push_back(eig);
  for (int i = 0; i < n; ++i)
    acc.note("ricci-eigenvalue-expected", eig[i] - qe.expected_ric_eigenvalues[i]);

  if (qe.boundary_scalar) acc.note("boundary-scalar", boundary_scalar_residual(pd));
  acc.note_signed("potential-positive", -pd.u_v);
}

// ---- lemmafund suite -------------------------------------------------------

void eval_lemmafund(const PointData& pd, Accum& acc) {
  int n = pd.n;
  const QEInstance& qe = *pd.inst;
  double m = qe.m, lambda = qe.lambda;
  double R = pd.b.scal_v, u = pd.u_v;

  for (int i = 0; i < n; ++i) {
    double ric_du = 0.0;
    for (int a = 0; a < n; ++a) ric_du += pd.b.ric_v[id2(n, i, a)] * pd.duU[a];
    acc.note("gradient-scalar-exchange",
             0.5 * u * pd.dR[i] + (m - 1.0) * ric_du + (R - (n - 1) * lambda) * pd.du_v[i]);
  }

  double mu_here = (u * u / m) * (R - lambda * n) + (m - 1.0) * pd.gradsq_v + lambda * u * u;
  acc.note("integrability-constant", mu_here - qe.mu);

  // traceless Ricci norm
  double ring2 = 0.0;
  {
    std::vector<double> ring(n * n);
    for (int i = 0; i < n * n; ++i) ring[i] = pd.b.ric_v[i] - (R / n) * pd.b.g_v[i];
    auto rM = mixed(pd.b.ginv_v, ring, n);
    ring2 = trace(matmul(rM, rM, n), n);
  }
  double quad = ((n + m - 1.0) / (m * n)) * (R - n * lambda) *
                (R - n * (n - 1.0) * lambda / (n + m - 1.0));
  acc.note("traceless-ricci-norm", ((m - 1.0) / m) * ring2 + quad);

  double du_dR = 0.0;
  for (int a = 0; a < n; ++a) du_dR += pd.duU[a] * pd.dR[a];
  acc.note("scalar-laplacian-balance",
           0.5 * pd.lapR + ((m + 2.0) / (2.0 * u)) * du_dR + ((m - 1.0) / m) * ring2 + quad);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double rm_du = 0.0;
        for (int l = 0; l < n; ++l) rm_du += pd.b.riem_v[id4(n, i, j, k, l)] * pd.duU[l];
        double res = u * (pd.dRic_v[id3(n, i, j, k)] - pd.dRic_v[id3(n, j, i, k)]) -
                     m * rm_du -
                     lambda * (pd.du_v[i] * pd.b.g_v[id2(n, j, k)] -
                               pd.du_v[j] * pd.b.g_v[id2(n, i, k)]) +
                     (pd.du_v[i] * pd.b.ric_v[id2(n, j, k)] -
                      pd.du_v[j] * pd.b.ric_v[id2(n, i, k)]);
        acc.note("curl-ricci-exchange", res);
      }

  acc.note("transnormal-relation", pd.gradsq_v - qe.mu / (m - 1.0) +
                                       (R + (m - n) * lambda) / (m * (m - 1.0)) * u * u);
}

// ---- tensors suite ---------------------------------------------------------

void eval_tensors(const PointData& pd, Accum& acc) {
  int n = pd.n;
  const QEInstance& qe = *pd.inst;
  double m = qe.m, lambda = qe.lambda;
  double R = pd.b.scal_v, u = pd.u_v;
  double rho_x = ((n - 1) * lambda - R) / (m - 1.0);

  std::vector<double> PDu(n, 0.0); // (P grad u)_l
  for (int l = 0; l < n; ++l)
    for (int s = 0; s < n; ++s) PDu[l] += pd.P_v[id2(n, s, l)] * pd.duU[s];
  for (int l = 0; l < n; ++l) acc.note("p-annihilates-gradient", PDu[l]);

  // T tensor, traceless-Ricci form
  std::vector<double> ring(n * n);
  for (int i = 0; i < n * n; ++i) ring[i] = pd.b.ric_v[i] - (R / n) * pd.b.g_v[i];
  std::vector<double> ringDu(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) ringDu[j] += ring[id2(n, j, l)] * pd.duU[l];

  double c1 = (m + n - 2.0) / (n - 2.0);
  double c2 = m / (n - 2.0);
  double c3 = (n * (n - 1.0) * lambda - (m + n - 1.0) * R) / (n * (n - 1.0));
  double c4 = u / (2.0 * (n - 1.0));
  std::vector<double> T(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        T[id3(n, i, j, k)] =
            c1 * (ring[id2(n, i, k)] * pd.du_v[j] - ring[id2(n, j, k)] * pd.du_v[i]) +
            c2 * (ringDu[j] * pd.b.g_v[id2(n, i, k)] - ringDu[i] * pd.b.g_v[id2(n, j, k)]) +
            c3 * (pd.du_v[i] * pd.b.g_v[id2(n, j, k)] - pd.du_v[j] * pd.b.g_v[id2(n, i, k)]) -
            c4 * (pd.dR[i] * pd.b.g_v[id2(n, j, k)] - pd.dR[j] * pd.b.g_v[id2(n, i, k)]);

  // T vanishes exactly when one Ricci eigenvalue has multiplicity n-1 with
  // eigenspace orthogonal to grad u; otherwise the dichotomy forces T != 0.
  bool dichotomy = true;
  {
    std::vector<double> rest = qe.expected_ric_eigenvalues;
    for (size_t i = 0; i < rest.size(); ++i) {
      if (std::fabs(rest[i] - qe.rho) < 1e-9) {
        rest.erase(rest.begin() + i);
        break;
      }
    }
    for (double e : rest)
      if (std::fabs(e - rest.front()) > 1e-9) dichotomy = false;
  }
  if (dichotomy) {
    for (double t : T) acc.note("t-tensor-vanishing", t);
  } else {
    acc.note_signed("t-tensor-dichotomy", 1e-3 - maxabs(T));
  }

  // Cotton and the Weyl split
  std::vector<double> C(n * n * n, 0.0);
  double cf = 1.0 / (2.0 * (n - 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C[id3(n, i, j, k)] = pd.dRic_v[id3(n, i, j, k)] - pd.dRic_v[id3(n, j, i, k)] -
                             cf * (pd.dR[i] * pd.b.g_v[id2(n, j, k)] -
                                   pd.dR[j] * pd.b.g_v[id2(n, i, k)]);

  auto W = values_of(weyl_jets(pd.b));
  std::vector<double> WDu(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += W[id4(n, i, j, k, l)] * pd.duU[l];
        WDu[id3(n, i, j, k)] = s;
        if (dichotomy) acc.note("weyl-potential-contraction", s);
      }
  for (int idx = 0; idx < n * n * n; ++idx)
    acc.note("cotton-weyl-split", u * C[idx] - m * WDu[idx] - T[idx]);

  // both routes to the T norm
  {
    std::vector<double> ringUU(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            s += pd.b.up(i, a) * pd.b.up(k, c) * ring[id2(n, a, c)];
        ringUU[id2(n, i, k)] = s;
      }
    double lhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) lhs += ringUU[id2(n, i, k)] * T[id3(n, i, j, k)] * pd.duU[j];

    auto rM = mixed(pd.b.ginv_v, ring, n);
    double ring_norm2 = trace(matmul(rM, rM, n), n);
    double ring2_uu = 0.0; // traceless Ricci squared applied to the gradient
    {
      auto ring2low = matmul(ring, mixed(pd.b.ginv_v, ring, n), n); // ring . ginv . ring
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) ring2_uu += ring2low[id2(n, a, c)] * pd.duU[a] * pd.duU[c];
    }
    double xi_num = n * (n - 1.0) * lambda - (m + n - 1.0) * R;
    double expr1 = c1 * ring_norm2 * pd.gradsq_v -
                   ((2.0 * m + n - 2.0) / (n - 2.0)) * ring2_uu +
                   xi_num * xi_num / (n * n * (n - 1.0) * (m - 1.0)) * pd.gradsq_v;
    double t_norm2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double tU = 0.0;
          for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
              for (int e = 0; e < n; ++e)
                tU += pd.b.up(i, a) * pd.b.up(j, c) * pd.b.up(k, e) * T[id3(n, a, c, e)];
          t_norm2 += T[id3(n, i, j, k)] * tU;
        }
    double expr2 = (n - 2.0) / (2.0 * (m + n - 2.0)) * t_norm2;
    acc.note("t-norm-contraction", lhs - expr1);
    acc.note("t-norm-contraction", lhs - expr2);
  }

  // Q tensor and the P exchange identities
  auto KNpg = kulkarni_nomizu(pd.P_v, pd.b.g_v, n);
  auto KNgg = kulkarni_nomizu(pd.b.g_v, pd.b.g_v, n);
  double qc = ((n - m) * lambda - R) / (2.0 * m * (m - 1.0));
  std::vector<double> Q(n * n * n * n);
  for (int i = 0; i < n * n * n * n; ++i)
    Q[i] = pd.b.riem_v[i] + KNpg[i] / m + qc * KNgg[i];

  std::vector<double> QDu(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += Q[id4(n, i, j, k, l)] * pd.duU[l];
        QDu[id3(n, i, j, k)] = s;
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double curl = pd.dP_v[id3(n, i, j, k)] - pd.dP_v[id3(n, j, i, k)];
        double half_gg = PDu[j] * pd.b.g_v[id2(n, i, k)] - PDu[i] * pd.b.g_v[id2(n, j, k)];
        acc.note("p-curl-q-identity", u * curl - m * QDu[id3(n, i, j, k)] - half_gg);
        acc.note("p-curl-q-reduced", (u / m) * curl - QDu[id3(n, i, j, k)]);
      }

  // P^2 with one raising
  auto P2 = matmul(pd.P_v, mixed(pd.b.ginv_v, pd.P_v, n), n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double lhs = 0.0;
      for (int i = 0; i < n; ++i) lhs += pd.dP_v[id3(n, i, j, k)] * pd.duU[i];
      double qterm = 0.0;
      for (int i = 0; i < n; ++i) qterm += QDu[id3(n, i, j, k)] * pd.duU[i];
      double rhs = (u / m) * ((lambda - rho_x) * pd.P_v[id2(n, j, k)] - P2[id2(n, k, j)]);
      acc.note("p-gradient-contraction", (u / m) * lhs - (u / m) * rhs - qterm);
    }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double lhs = 0.0;
      for (int s = 0; s < n; ++s) lhs += pd.dP_v[id3(n, i, s, j)] * pd.duU[s];
      acc.note("p-derivative-projection",
               lhs + (u / m) * P2[id2(n, i, j)] - ((lambda - rho_x) / m) * u * pd.P_v[id2(n, i, j)]);
    }
}

// ---- dim4 / order-4 suite --------------------------------------------------

struct RaisedCache {
  std::vector<double> ricM, ric2low, ricUU, ric2UU, DU;
  std::vector<double> pM, p2low, pUU, p2UU, DPU;
  double trP, trP3, trP4, normP2, trRic3, normRic2, tr_ric4;
};

RaisedCache build_raised(const PointData& pd) {
  int n = pd.n;
  RaisedCache rc;
  const auto& up = pd.b.ginv_v;

  rc.ricM = mixed(up, pd.b.ric_v, n);
  rc.ric2low = matmul(pd.b.ric_v, rc.ricM, n); // R . ginv . R, both indices low
  rc.ricUU.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          rc.ricUU[id2(n, i, j)] += up[id2(n, i, a)] * up[id2(n, j, c)] * pd.b.ric_v[id2(n, a, c)];
  rc.ric2UU.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          rc.ric2UU[id2(n, i, j)] += up[id2(n, i, a)] * up[id2(n, j, c)] * rc.ric2low[id2(n, a, c)];

  rc.DU.assign(n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a2 = 0; a2 < n; ++a2)
          for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2)
              s += up[id2(n, a, a2)] * up[id2(n, i, i2)] * up[id2(n, j, j2)] *
                   pd.dRic_v[id3(n, a2, i2, j2)];
        rc.DU[id3(n, a, i, j)] = s;
      }

  rc.pM = mixed(up, pd.P_v, n);
  rc.p2low = matmul(pd.P_v, rc.pM, n);
  rc.pUU.assign(n * n, 0.0);
  rc.p2UU.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          rc.pUU[id2(n, i, j)] += up[id2(n, i, a)] * up[id2(n, j, c)] * pd.P_v[id2(n, a, c)];
          rc.p2UU[id2(n, i, j)] += up[id2(n, i, a)] * up[id2(n, j, c)] * rc.p2low[id2(n, a, c)];
        }
  rc.DPU.assign(n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a2 = 0; a2 < n; ++a2)
          for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2)
              s += up[id2(n, a, a2)] * up[id2(n, i, i2)] * up[id2(n, j, j2)] *
                   pd.dP_v[id3(n, a2, i2, j2)];
        rc.DPU[id3(n, a, i, j)] = s;
      }

  auto p2m = matmul(rc.pM, rc.pM, n);
  rc.trP = trace(rc.pM, n);
  rc.normP2 = trace(p2m, n);
  rc.trP3 = trace(matmul(p2m, rc.pM, n), n);
  rc.trP4 = trace(matmul(p2m, p2m, n), n);
  auto r2m = matmul(rc.ricM, rc.ricM, n);
  rc.normRic2 = trace(r2m, n);
  rc.trRic3 = trace(matmul(r2m, rc.ricM, n), n);
  rc.tr_ric4 = trace(matmul(r2m, r2m, n), n);
  return rc;
}

void eval_order4(const PointData& pd, const RaisedCache& rc, Accum& acc,
                 const Dim4Perturbation& pert) {
  int n = pd.n;
  const QEInstance& qe = *pd.inst;
  double m = qe.m, lambda = qe.lambda;
  double R = pd.b.scal_v, u = pd.u_v;
  double rho = qe.rho;

  // Laplacian-of-Ricci identity
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double lhs = u * pd.lapRic[id2(n, i, k)];
      double t_grad_i = 0.0, t_grad_k = 0.0, t_grad_s = 0.0;
      for (int s = 0; s < n; ++s) {
        t_grad_i += pd.dRic_v[id3(n, i, s, k)] * pd.duU[s];
        t_grad_k += pd.dRic_v[id3(n, k, i, s)] * pd.duU[s];
        t_grad_s += pd.dRic_v[id3(n, s, i, k)] * pd.duU[s];
      }
      double ric2 = 0.0; // (Ric^2)_{ik}, one raising
      for (int s = 0; s < n; ++s) ric2 += pd.b.ric_v[id2(n, i, s)] * rc.ricM[id2(n, s, k)];
      double rm_ric = 0.0; // Rm contracted with Ric on slots 1 and 4
      for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s)
          rm_ric += pd.b.riem_v[id4(n, j, i, k, s)] * rc.ricUU[id2(n, j, s)];
      double rhs = t_grad_i + m * t_grad_k + 0.5 * u * pd.hessR[id2(n, i, k)] +
                   0.5 * pd.du_v[i] * pd.dR[k] +
                   pert.ricci_square_term * ((m + 1.0) / m) * u * ric2 +
                   pert.riemann_ricci_term * 2.0 * u * rm_ric - (m + 2.0) * t_grad_s -
                   (u / m) * (R - (m + n - 2.0) * lambda) * pd.b.ric_v[id2(n, i, k)] +
                   (lambda * u / m) * (R - (n - 1.0) * lambda) * pd.b.g_v[id2(n, i, k)];
      acc.note("ricci-laplacian-lhs", lhs);
      acc.note("ricci-laplacian-rhs", rhs);
      acc.note("ricci-laplacian-diff", lhs - rhs);
    }

  // drift Laplacian of the Ricci cubic trace
  {
    double lapf = laplacian(pd.b, pd.trRic3_jet).value();
    double grad_term = 0.0;
    for (int s = 0; s < n; ++s) grad_term += pd.duU[s] * pd.trRic3_jet.partial(s);
    double lhs = u * lapf + (m + 2.0) * grad_term;

    double S1 = 0.0; // grad Ric : Ric^2 : grad u
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int j = 0; j < n; ++j)
          S1 += rc.DU[id3(n, i, s, j)] * pd.du_v[s] * rc.ric2low[id2(n, j, i)];
    double S3 = 0.0; // Ric : Rm : Ric^2
    for (int d = 0; d < n; ++d)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int s = 0; s < n; ++s)
            S3 += pd.b.riem_v[id4(n, d, i, j, s)] * rc.ricUU[id2(n, d, s)] *
                  rc.ric2UU[id2(n, j, i)];
    double S4 = 0.0; // grad Ric : grad Ric : Ric
    for (int s = 0; s < n; ++s)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            S4 += rc.DU[id3(n, s, i, j)] * pd.dRic_v[id3(n, s, j, l)] * rc.ricM[id2(n, l, i)];

    double rhs = 3.0 * (m + 1.0) * S1 +
                 pert.ricci_quartic_term * (3.0 * (m + 1.0) * u / m) * rc.tr_ric4 +
                 6.0 * u * S3 -
                 (3.0 * u / m) * (R - (m + n - 2.0) * lambda) * rc.trRic3 +
                 (3.0 * lambda * u / m) * (R - (n - 1.0) * lambda) * rc.normRic2 + 6.0 * u * S4;
    acc.note("ricci-cubic-drift-lhs", lhs);
    acc.note("ricci-cubic-drift-rhs", rhs);
    acc.note("ricci-cubic-drift-diff", lhs - rhs);
  }

  // Laplacian of the P cubic trace
  double T1 = 0.0, T2 = 0.0, T3 = 0.0, T4 = 0.0, T5 = 0.0, gradP2 = 0.0;
  {
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int j = 0; j < n; ++j) {
          T1 += rc.DPU[id3(n, i, s, j)] * pd.du_v[s] * rc.p2low[id2(n, j, i)];
          T2 += rc.DPU[id3(n, i, s, j)] * pd.du_v[s] * pd.P_v[id2(n, i, j)];
        }
    for (int s = 0; s < n; ++s)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          gradP2 += rc.DPU[id3(n, s, i, j)] * pd.dP_v[id3(n, s, i, j)];
          for (int l = 0; l < n; ++l)
            T3 += rc.DPU[id3(n, s, i, j)] * pd.dP_v[id3(n, s, j, l)] * rc.pM[id2(n, l, i)];
        }
    for (int d = 0; d < n; ++d)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int s = 0; s < n; ++s) {
            double w = pd.b.riem_v[id4(n, d, i, j, s)] * rc.pUU[id2(n, d, s)];
            T4 += w * rc.p2UU[id2(n, j, i)];
            T5 += w * rc.pUU[id2(n, i, j)];
          }
  }
  double lap_trP3 = laplacian(pd.b, pd.trP3_jet).value();
  std::vector<double> dtrP3(n);
  for (int s = 0; s < n; ++s) dtrP3[s] = pd.trP3_jet.partial(s);
  double grad_trP3_du = 0.0;
  for (int s = 0; s < n; ++s) grad_trP3_du += pd.duU[s] * dtrP3[s];

  {
    double lhs = u * lap_trP3;
    double rhs = 3.0 * (m + 1.0) * (T1 + 2.0 * rho * T2) +
                 6.0 * u * (T3 + rho * gradP2) + 6.0 * u * (T4 + 2.0 * rho * T5) -
                 (m + 2.0) * grad_trP3_du +
                 pert.p_quartic_term * (3.0 * (m + 1.0) * u / m) * rc.trP4 +
                 (3.0 * u / m) * (3.0 * (m + 1.0) * rho + (m - 1.0) * lambda) * rc.trP3 +
                 (3.0 * rho * u / m) * ((m + 3.0) * rho + 2.0 * (m - 1.0) * lambda) * rc.normP2 +
                 (3.0 * rho * rho * u / m) * ((m + 1.0) * rho + (m - 1.0) * lambda) * rc.trP +
                 6.0 * rho * rho * rho * u * ((m + n - 1.0) * rho - (n - 1.0) * lambda);
    acc.note("p-cubic-laplacian-lhs", lhs);
    acc.note("p-cubic-laplacian-rhs", rhs);
    acc.note("p-cubic-laplacian-diff", lhs - rhs);
  }

  // dimension-four block, only on the split scalar curvature; an instance
  // that claims that value but samples a different one is broken data
  double split_R = 2.0 * (m + 2.0) * lambda / (m + 1.0);
  bool claims_split =
      n == 4 && std::fabs(qe.expected_scalar - split_R) <= 1e-9 * std::fabs(split_R);
  if (!claims_split) return;
  require_split_scalar(qe, R);

  double drift = u * lap_trP3 + (m + 2.0) * grad_trP3_du;
  {
    double rhs = 6.0 * u * lambda * rc.trP3 + 6.0 * (lambda * lambda / (m + 1.0)) * u * rc.normP2 +
                 6.0 * u * (T3 + rho * gradP2) + 6.0 * u * (T4 + 2.0 * rho * T5) +
                 pert.drift_constant_term * 12.0 * std::pow(rho, 4) * m * m * (m + 1.0) * u;
    acc.note("p-cubic-drift-lhs", drift);
    acc.note("p-cubic-drift-rhs", rhs);
    acc.note("p-cubic-drift-diff", drift - rhs);
  }
  {
    double rhs = pert.drift_leading_term * 8.0 * (m + 1.0) * rho * u * rc.trP3 + 6.0 * u * T3 -
                 3.0 * m * rho * u * gradP2 - 16.0 * std::pow(m, 3) * (m + 1.0) *
                                                  std::pow(rho, 4) * u;
    acc.note("p-cubic-drift-reduced-diff", drift - rhs);
    double lower = 8.0 * (m + 1.0) * rho * u * rc.trP3 - 3.0 * m * rho * u * gradP2 -
                   16.0 * std::pow(m, 3) * (m + 1.0) * std::pow(rho, 4) * u;
    acc.note_signed("p-cubic-drift-bound", lower - drift);
  }
  {
    double E = 0.0; // P : Rm : P
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int s = 0; s < n; ++s)
            E += pd.b.riem_v[id4(n, j, i, k, s)] * rc.pUU[id2(n, i, k)] * rc.pUU[id2(n, j, s)];
    acc.note("p-riemann-contraction",
             u * E + 0.5 * u * gradP2 + pert.p_norm_term * (m + 1.0) * rho * u * rc.normP2);
  }
  acc.note("p-trace-values", rc.trP - 2.0 * m * rho);
  acc.note("p-trace-values", rc.normP2 - 2.0 * m * m * rho * rho);

  // drift inequality for h = |grad u|^2 (Tr P^3 - 2 m^3 rho^3)
  {
    Jet h = pd.gradsq * (pd.trP3_jet - 2.0 * std::pow(m * rho, 3));
    double h_v = h.value();
    double laph = laplacian(pd.b, h).value();
    double gh = 0.0;
    for (int s = 0; s < n; ++s) gh += pd.duU[s] * h.partial(s);
    double lhs = u * laph + (m + 2.0) * gh;
    double rhs = 2.0 * (9.0 * m + 7.0) * rho * u * h_v;
    acc.note("drift-h-lhs", lhs);
    acc.note("drift-h-rhs", rhs);
    acc.note_signed("drift-h-bound", rhs - lhs);
    acc.note_signed("h-nonnegative", -h_v);
  }
  {
    auto eig = generalized_sym_eigenvalues(pd.P_v, pd.b.g_v, n);
    std::vector<double> expect{0.0, 0.0, m * rho, m * rho};
    for (int i = 0; i < 4; ++i) acc.note("p-eigenvalue-pattern", eig[i] - expect[i]);
  }
}

// ---- algebraic suite -------------------------------------------------------

std::vector<double> random_symmetric(Rng& rng, int n) {
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.range(-1.0, 1.0);
  return a;
}

void eval_algebraic(Accum& acc) {
  Rng rng(20240901);

  // pairwise product bound, brute-force pair scan
  for (int trial = 0; trial < 10000; ++trial) {
    int n = rng.integer(2, 6);
    std::vector<double> a(n);
    for (auto& x : a) x = rng.range(-2.0, 2.0);
    std::sort(a.begin(), a.end(), std::greater<double>());
    auto res = lemsum_check(a);
    acc.note_signed("pairwise-product-bound",
                    res.b / (2.0 * (n - 1)) - res.min_pair_product);
    if (!res.sign_ok) acc.note("pairwise-product-bound", 1.0);
  }

  // constrained one-parameter family
  {
    double m = 2.0, rho = 0.7, mr = m * rho;
    for (int t = 0; t < 50; ++t) {
      double a = (4.0 * mr / 3.0) * (t + 0.5) / 50.0;
      double rest = 2.0 * mr - a;
      double disc = 2.0 * (2.0 * mr * mr - a * a) - rest * rest;
      disc = std::max(disc, 0.0);
      double mu3 = 0.5 * (rest + std::sqrt(disc));
      double mu4 = 0.5 * (rest - std::sqrt(disc));
      auto res = symmetric_sum_identities({a, mu3, mu4}, m, rho);
      acc.note("cubic-product-identity", res.cubic_product);
      acc.note("quartic-power-sum", res.quartic_sum);
    }
  }

  // plain cubic expansion on random triples
  for (int t = 0; t < 100; ++t) {
    double x = rng.range(-2, 2), y = rng.range(-2, 2), z = rng.range(-2, 2);
    double lhs = std::pow(x + y + z, 3);
    double rhs = 3.0 * (x + y + z) * (x * x + y * y + z * z) -
                 2.0 * (x * x * x + y * y * y + z * z * z) + 6.0 * x * y * z;
    acc.note("cubic-symmetric-expansion", lhs - rhs);
  }

  // shift identities against brute-force index sums (orthonormal frame)
  for (int t = 0; t < 100; ++t) {
    int n = rng.integer(3, 6);
    auto ric = random_symmetric(rng, n);
    double rho = rng.range(-1.0, 1.0);
    std::vector<double> P(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P[i * n + j] = ric[i * n + j] - rho * (i == j ? 1.0 : 0.0);

    double tr_ric3 = 0.0, tr_ric2_sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          tr_ric3 += ric[i * n + j] * ric[j * n + l] * ric[l * n + i];
          for (int k = 0; k < n; ++k)
            tr_ric2_sq += ric[i * n + k] * ric[k * n + j] * ric[i * n + l] * ric[l * n + j];
        }
    double trP = 0.0, normP2 = 0.0, trP3 = 0.0, trP4 = 0.0;
    for (int i = 0; i < n; ++i) trP += P[i * n + i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        normP2 += P[i * n + j] * P[i * n + j];
        for (int l = 0; l < n; ++l) {
          trP3 += P[i * n + j] * P[j * n + l] * P[l * n + i];
          for (int k = 0; k < n; ++k)
            trP4 += P[i * n + j] * P[j * n + l] * P[l * n + k] * P[k * n + i];
        }
      }
    acc.note("ricci-cubic-shift",
             tr_ric3 - (trP3 + 3.0 * rho * normP2 + 3.0 * rho * rho * trP + n * rho * rho * rho));
    acc.note("ricci-quartic-shift",
             tr_ric2_sq - (trP4 + 4.0 * rho * trP3 + 6.0 * rho * rho * normP2 +
                           4.0 * rho * rho * rho * trP + n * std::pow(rho, 4)));
  }

  // Kulkarni-Nomizu metric contraction
  for (int t = 0; t < 50; ++t) {
    int n = rng.integer(3, 6);
    auto S = random_symmetric(rng, n);
    auto g = random_symmetric(rng, n);
    for (int i = 0; i < n; ++i) g[i * n + i] += n + 1.0; // make it SPD
    auto up = invert_matrix(g, n);
    auto KN = kulkarni_nomizu(S, g, n);
    double trS = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) trS += up[a * n + c] * S[a * n + c];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double contracted = 0.0;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) contracted += up[j * n + l] * KN[id4(n, i, j, k, l)];
        acc.note("kn-contraction",
                 contracted - ((n - 2.0) * S[i * n + k] + trS * g[i * n + k]));
      }
  }

  // T norm identity on synthetic spectra, orthonormal frame, grad u along e1
  for (int t = 0; t < 20; ++t) {
    int n = rng.integer(4, 6);
    double m = rng.range(1.5, 4.0), lambda = rng.range(0.5, 2.0), R = rng.range(-1.0, 4.0);
    double s = rng.range(0.2, 1.5); // |grad u|
    double xi1 = (n * (n - 1.0) * lambda - (m + n - 1.0) * R) / (n * (m - 1.0));
    std::vector<double> xi(n);
    xi[0] = xi1;
    double sum = xi1;
    for (int i = 1; i + 1 < n; ++i) {
      xi[i] = rng.range(-1.0, 1.0);
      sum += xi[i];
    }
    xi[n - 1] = -sum;
    std::vector<double> du(n, 0.0);
    du[0] = -s;

    std::vector<double> T(n * n * n, 0.0);
    double c1 = (m + n - 2.0) / (n - 2.0);
    double c2 = m / (n - 2.0);
    double c3 = xi1 * (m - 1.0) / (n - 1.0); // (n(n-1)L-(m+n-1)R)/(n(n-1))
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double rik = (i == k) ? xi[i] : 0.0;
          double rjk = (j == k) ? xi[j] : 0.0;
          double gik = (i == k) ? 1.0 : 0.0;
          double gjk = (j == k) ? 1.0 : 0.0;
          T[id3(n, i, j, k)] = c1 * (rik * du[j] - rjk * du[i]) +
                               c2 * (xi[j] * du[j] * gik - xi[i] * du[i] * gjk) +
                               c3 * (du[i] * gjk - du[j] * gik);
        }
    double lhs = 0.0, t2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double rik = (i == k) ? xi[i] : 0.0;
          lhs += rik * T[id3(n, i, j, k)] * du[j];
          t2 += T[id3(n, i, j, k)] * T[id3(n, i, j, k)];
        }
    double ring2 = 0.0, ring2_du = xi1 * xi1 * s * s;
    for (double x : xi) ring2 += x * x;
    double expr1 = c1 * ring2 * s * s - ((2.0 * m + n - 2.0) / (n - 2.0)) * ring2_du +
                   xi1 * xi1 * (m - 1.0) / (n - 1.0) * s * s;
    double expr2 = (n - 2.0) / (2.0 * (m + n - 2.0)) * t2;
    acc.note("t-norm-synthetic", lhs - expr1);
    acc.note("t-norm-synthetic", lhs - expr2);
  }
}

// ---- engine self-test suite ------------------------------------------------

void eval_engine(const QEInstance* inst, int points, Accum& acc) {
  // sphere calibration
  for (int n : {3, 4}) {
    QEInstance sph = hemisphere(n, 2.0);
    for (const auto& x : sample_points(sph, 5)) {
      auto b = curvature_bundle(sph.metric, x, 2);
      for (int i = 0; i < n * n; ++i)
        acc.note("calibration-sphere-ricci", b.ric_v[i] - (n - 1.0) * b.g_v[i]);
    }
  }

  int per_metric = std::max(4, points / 2);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    MetricSpec ms = random_warped_metric(seed);
    for (const auto& x : qem::sample_points(ms, std::min(per_metric, 20))) {
      auto b = curvature_bundle(ms, x, 4);
      auto r = bianchi_selftests(b);
      acc.note("metric-compatibility", r.metric_compatibility);
      acc.note("riemann-symmetries", r.riemann_symmetries);
      acc.note("bianchi-second-contracted", r.bianchi_twice_contracted);
      acc.note("bianchi-first-contracted", r.bianchi_first_contracted);
      acc.note("ricci-commutation", r.ricci_commutation);
      acc.note("cotton-skew", r.cotton_skew);
      acc.note("cotton-trace-free", r.cotton_trace);
      acc.note("weyl-trace-free", r.weyl_trace);
      acc.note("cotton-weyl-divergence", r.cotton_weyl_divergence);
    }
  }

  // dual path: jet pipeline vs finite differences
  auto dual = [&](const MetricSpec& ms, const std::vector<ChartPoint>& pts) {
    for (const auto& x : pts) {
      auto b = curvature_bundle(ms, x, 2);
      auto fd = fd_curvature(ms, x);
      double scale = std::max(1.0, maxabs(b.ric_v));
      for (int i = 0; i < ms.dim * ms.dim; ++i)
        acc.note("dual-path-ricci", (b.ric_v[i] - fd.ric[i]) / scale);
    }
  };
  if (inst) {
    dual(inst->metric, sample_points(*inst, std::min(points, 20)));
  }
  MetricSpec ms = random_warped_metric(11);
  dual(ms, qem::sample_points(ms, 10));
}

// ---- classification suite --------------------------------------------------

void eval_classification(const QEInstance* inst, Accum& acc) {
  // closed forms for dimension four
  for (double m : {1.5, 2.0, 3.0, 10.0}) {
    for (double lambda : {1.0, 2.0}) {
      auto set = admissible_scalar_set(4, m, lambda);
      double expect[4] = {12.0 * lambda / (m + 3.0), (m + 8.0) * lambda / (m + 2.0),
                          2.0 * (m + 2.0) * lambda / (m + 1.0), 3.0 * lambda};
      for (int k = 0; k < 4; ++k) acc.note("admissible-set-values", set[k].R - expect[k]);
      if (!set[1].excluded) acc.note("admissible-set-values", 1.0);
    }
  }
  for (int n = 3; n <= 6; ++n)
    for (double m : {1.5, 2.0, 3.0, 10.0})
      for (double lambda : {1.0, 2.0}) {
        auto set = admissible_scalar_set(n, m, lambda);
        for (const auto& e : set) {
          acc.note_signed("admissible-below-upper", e.R - n * lambda);
          auto back = classify_scalar(e.R, n, m, lambda, 1e-9);
          if (!back || *back != e.k) acc.note("classify-roundtrip", 1.0);
        }
      }
  acc.note("classify-roundtrip", 0.0);

  if (inst) {
    auto k = classify_scalar(inst->expected_scalar, inst->dim(), inst->m, inst->lambda, 1e-8);
    acc.note("model-scalar-class", (k && *k == inst->expected_k) ? 0.0 : 1.0);
  }
}

} // namespace

CheckResult calibration_check() {
  Accum acc;
  acc.points = 10;
  for (int n : {3, 4}) {
    QEInstance sph = hemisphere(n, 2.0);
    for (const auto& x : sample_points(sph, 5)) {
      auto b = curvature_bundle(sph.metric, x, 2);
      for (int i = 0; i < n * n; ++i)
        acc.note("calibration-sphere-ricci", b.ric_v[i] - (n - 1.0) * b.g_v[i]);
    }
  }
  return acc.finish().front();
}

std::vector<CheckResult> run_suite(const QEInstance* inst, const std::string& suite,
                                   const SuiteOptions& opts) {
  Accum acc;
  acc.points = opts.points;
  Dim4Perturbation faithful;
  const Dim4Perturbation& pert = opts.perturb ? *opts.perturb : faithful;

  bool needs_instance = suite == "defining" || suite == "lemmafund" || suite == "tensors" ||
                        suite == "dim4";
  if (needs_instance && !inst)
    fail(ErrorKind::ConfigError, "suite '" + suite + "' needs a quasi-Einstein model");
  if (suite == "tensors" && inst->dim() < 3)
    fail(ErrorKind::ConfigError, "tensors suite needs dimension >= 3");

  if (suite == "algebraic") {
    eval_algebraic(acc);
    return acc.finish();
  }
  if (suite == "engine-selftest") {
    eval_engine(inst, opts.points, acc);
    return acc.finish();
  }
  if (suite == "classification") {
    eval_classification(inst, acc);
    return acc.finish();
  }
  if (!needs_instance)
    fail(ErrorKind::ConfigError, "unknown suite: " + suite);

  auto pts = sample_points(*inst, opts.points);
  std::vector<std::vector<double>> eig_track;
  std::vector<double> scal_track;
  for (const auto& x : pts) {
    PointData pd(*inst, x, 4);
    scal_track.push_back(pd.b.scal_v);
    if (suite == "defining") {
      eval_defining(pd, acc, eig_track);
    } else if (suite == "lemmafund") {
      eval_lemmafund(pd, acc);
    } else if (suite == "tensors") {
      eval_tensors(pd, acc);
    } else if (suite == "dim4") {
      auto rc = build_raised(pd);
      eval_order4(pd, rc, acc, pert);
    }
  }
  if (suite == "defining") {
    for (double s : scal_track) acc.note("scalar-constancy", s - scal_track.front());
    int n = inst->dim();
    for (int i = 0; i < n; ++i) {
      double lo = 1e300, hi = -1e300;
      for (const auto& e : eig_track) {
        lo = std::min(lo, e[i]);
        hi = std::max(hi, e[i]);
      }
      acc.note("ricci-eigenvalue-spread", hi - lo);
    }
  }
  return acc.finish();
}

std::vector<CheckResult> run_profile_checks(InexKind kind, const InexParams& params,
                                            int points) {
  Accum acc;
  acc.points = points;
  WarpedSpec spec = inex_warped_spec(kind, params);
  MetricSpec chart = warped_chart(spec);

  std::vector<double> tgrid;
  {
    double lo = spec.base.lo + chart.margin, hi = spec.base.hi - chart.margin;
    int count = std::max(points, 16);
    for (int i = 0; i < count; ++i) tgrid.push_back(lo + (hi - lo) * (i + 0.5) / count);
  }
  auto profile = inex_scalar_profile(kind, params, tgrid);

  // chart pipeline vs closed form, on a diagonal slice of the chart
  ChartPoint x;
  x.coords.assign(chart.dim, 0.0);
  for (int i = 1; i < chart.dim; ++i)
    x.coords[i] = 0.5 * (chart.domain[i].lo + chart.domain[i].hi);
  for (size_t i = 0; i < tgrid.size(); i += 4) {
    x.coords[0] = tgrid[i];
    auto b = curvature_bundle(chart, x, 2);
    acc.note("warped-profile-agreement", b.scal_v - profile[i]);

    auto wr = warped_ricci_analytic(spec, tgrid[i]);
    acc.note("warped-ricci-agreement", b.ric_v[0] - wr.horizontal);
    auto eig = generalized_sym_eigenvalues(b.ric_v, b.g_v, chart.dim);
    std::vector<double> expect(chart.dim, wr.vertical);
    expect[0] = wr.horizontal;
    std::sort(expect.begin(), expect.end());
    for (int j = 0; j < chart.dim; ++j) acc.note("warped-ricci-agreement", eig[j] - expect[j]);
    acc.note("warped-profile-agreement", wr.scalar - profile[i]);
  }

  double lo = 1e300, hi = -1e300;
  for (double r : profile) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  bool degenerate = false;
  if (kind == InexKind::Cone)
    degenerate = std::fabs(params.kappa - (params.n - 2) * params.alpha * params.alpha) < 1e-12;
  if (kind == InexKind::Hyperbolic) {
    double invariant = (params.n - 2) * params.beta * (params.a * params.a - params.b * params.b);
    degenerate = std::fabs(invariant - params.kappa) < 1e-12;
  }
  if (degenerate) {
    acc.note("scalar-nonconstancy", 0.0);
  } else {
    acc.note_signed("scalar-nonconstancy", 1e-3 - (hi - lo));
    acc.annotate("scalar-nonconstancy", "profile spread " + std::to_string(hi - lo));
  }

  if (kind == InexKind::Hyperbolic) {
    InexParams forced = params;
    forced.a = inex_forced_sinh_coefficient(params.n, params.beta, params.b, params.kappa);
    auto fp = inex_scalar_profile(InexKind::Hyperbolic, forced, tgrid);
    double expect = -params.n * (params.n - 1.0) * params.beta;
    for (double r : fp) acc.note("forced-constant-negative", r - expect);
    if (expect >= 0.0) acc.note("forced-constant-negative", 1.0);
  }
  return acc.finish();
}

} // namespace qem
