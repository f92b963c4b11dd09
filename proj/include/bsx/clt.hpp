// Complex and vector central limit theorems: laws on C given by a sampler and
// characteristic function, coefficient schemes, the Lyapunov quantities, the
// quantitative gap |log phi_N + (1/2) beta^2 |xi|^2| against its proof bound,
// the small inequality toolbox, and a Monte Carlo engine for T_N.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsx/numeric.hpp"
#include "bsx/rng.hpp"

namespace bsx::clt {

struct ComplexLaw {
  std::string name;
  std::function<cplx(Philox&)> sample;
  std::function<cplx(cplx)> cf;  // E exp(i Re(conj(xi) z))
  double beta = 0.0;             // E|z|^2 = 2 beta^2
  double rho3 = 0.0;             // E|z|^3
  double second_analytic = 0.0;  // |E z^2|, zero for admissible laws

  double rho() const { return std::cbrt(rho3); }
};

// Uniform law on the unit circle; cf = J_0(|xi|) by angular quadrature.
ComplexLaw haar_circle_law();
// (e1 + i e2)/sqrt(2) with independent signs: the product law dE x dE.
ComplexLaw rademacher_square_law();
// beta (N_1 + i N_2).
ComplexLaw complex_gaussian_law(double beta);

// (1/2pi) integral of exp(i r cos theta) by the midpoint rule on `nodes` points.
double haar_cf(double r, int nodes = 64);
// |J_0 estimate at 64 nodes - at 128 nodes|.
double haar_cf_error(double r);

cplx complex_cf(const ComplexLaw& law, cplx xi);

// b_j for j >= 1. log_abs, when present, gives log|b_j| so that rapidly
// growing schemes stay finite.
struct ScalarScheme {
  std::function<cplx(int)> b;
  std::function<double(int)> log_abs;
};

// Rows b_n in C^J for n >= 1 with a caller-supplied normalizer sigma_N.
struct VectorScheme {
  int J = 1;
  std::function<std::vector<cplx>(int)> row;
  std::function<double(int)> sigma;
  std::vector<double> beta_targets;
};

ScalarScheme constant_scheme(cplx c = 1.0);
ScalarScheme linear_scheme();       // b_j = j
ScalarScheme geometric_scheme();    // b_j = 2^j
// J = 2: (1, 0) for odd n, (0, 1) for even n; sigma_N = sqrt(N); targets 1/2.
VectorScheme alternating_scheme();

struct ScalarStats {
  double s_N = 0.0;       // may overflow to inf; log_s_N stays finite
  double log_s_N = 0.0;
  double lyapunov_sum = 0.0;  // sum |b_j|^3 / s_N^3
  double ratio = 0.0;         // B_N / s_N
};

struct VectorStats {
  double sigma_N = 0.0;
  double lyapunov_sum = 0.0;     // sum_n sum_j |b_nj|^3 / sigma_N^3
  double proof_sum = 0.0;        // sum_n C_n^3 / sigma_N^3 with C_n = ||b_n||_1
  double matrix_residual = 0.0;  // max-entry norm of sigma^-2 sum b_n b_n^* - diag(beta_j)
  double ratio = 0.0;            // D_N / sigma_N
};

ScalarStats lyapunov_normalizer(const ScalarScheme& s, int N);
VectorStats lyapunov_normalizer(const VectorScheme& s, int N);

struct GapReport {
  double gap = 0.0;
  double bound = 0.0;            // (2/3) rho^3 A^3 (Lyapunov-type sum)
  double admissibility = 0.0;    // must be < 1
  bool admissible = false;
  bool branch_ok = true;         // every |1 - phi(U)| < 1
  double quadratic_gap = 0.0;    // vector mode: |Q_N(xi) - sum beta_j |xi_j|^2| times beta^2 / 2
  bool holds() const { return !admissible || gap <= bound; }
};

// Requires |xi| <= A (each |xi_j| <= A in vector mode).
GapReport gaussian_limit_gap(const ComplexLaw& law, const ScalarScheme& s, int N, cplx xi, double A = 1.0);
GapReport gaussian_limit_gap(const ComplexLaw& law, const VectorScheme& s, int N, std::span<const cplx> xi,
                             double A = 1.0);

// ---------------------------------------------------------------------------
// Inequality toolbox

enum class Ineq { taylor, taylor_min, log1p, power_means, lyapunov, taylor_frac, norm_ratio, exp_decay, power_ratio };

struct IneqInputs {
  double t = 0.0;
  int n = 0;
  double omega = 0.5;   // taylor_frac, in [0, 1)
  double beta = 1.0;    // exp_decay
  double q = 3.0;       // exp_decay, > 1
  double lambda = 2.0;  // power_means, norm_ratio
  double psi = 1.0;     // power_ratio
  cplx z = 0.0;         // log1p, |z| <= 1/2
  std::vector<double> x;  // power_means, lyapunov (nonnegative), power_ratio (the t_j)
  std::vector<cplx> w;    // norm_ratio
};

struct IneqReport {
  double lhs = 0.0;   // first member of the chain
  double rhs = 0.0;   // last member
  double slack = 0.0; // smallest gap between consecutive members
  bool holds = false;
  std::vector<double> chain;
};

// Throws std::invalid_argument outside an inequality's domain.
IneqReport inequality_toolbox(Ineq id, const IneqInputs& in);

// sup over t of |t|^n exp(-beta |t|^(2/(q-1)) / 2).
double exp_decay_constant(int n, double beta, double q);

// ---------------------------------------------------------------------------
// Monte Carlo

struct MonteCarloConfig {
  std::uint64_t seed = 7;
  int samples = 100000;
  int N = 400;
  Exec exec = Exec::parallel;
};

// max_i max(i/n - F(x_i), F(x_i) - (i-1)/n) over ascending samples.
double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

struct MomentEstimates {
  cplx mean, second_analytic;  // E z, E z^2
  double second_abs = 0.0, third_abs = 0.0;
  double se_mean = 0.0, se_second_analytic = 0.0, se_second_abs = 0.0, se_third_abs = 0.0;
};
MomentEstimates moment_estimates(const ComplexLaw& law, int samples, std::uint64_t seed, Exec exec = Exec::parallel);

struct CovarianceEntry {
  int j = 0, l = 0;
  cplx empirical;   // mean of w_j conj(w_l)
  cplx target;      // 2 beta_j beta^2 delta_jl
  double se_re = 0.0, se_im = 0.0;
  double z_score = 0.0;  // max of |re diff|/se_re and |im diff|/se_im
};

struct RectangleCheck {
  int j = 0;
  double x = 0.0, y = 0.0;
  double empirical = 0.0, limit = 0.0, se = 0.0;
};

struct VectorStatisticReport {
  std::vector<double> ks_re, ks_im;  // per component, against N(0, beta_j beta^2)
  std::vector<CovarianceEntry> covariance;
  std::vector<cplx> analytic_second;  // E T_j^2, expected to vanish
  std::vector<double> analytic_second_se;
  std::vector<RectangleCheck> rectangles;
  double max_cov_z = 0.0;
  double ks_noise = 0.0;  // 1.36 / sqrt(samples)
};

// T_N = sigma_N^-1 sum_n X_n b_n from independent replicas; replica r uses
// the stream (seed, r).
VectorStatisticReport vector_statistic(const ComplexLaw& law, const VectorScheme& s, const MonteCarloConfig& mc);
VectorStatisticReport vector_statistic(const ComplexLaw& law, const ScalarScheme& s, const MonteCarloConfig& mc);

// Real-coefficient path: sum b_j X_j / s_N with X_j drawn from a real law of
// variance beta^2; KS against N(0, beta^2).
struct RealLaw {
  std::string name;
  std::function<double(Philox&)> sample;
  double beta = 0.0;
};
RealLaw rademacher_real_law(double beta);
double real_statistic_ks(const RealLaw& law, const ScalarScheme& s, const MonteCarloConfig& mc);

}  // namespace bsx::clt
