// Fejer kernel K, the Beurling-Selberg functions W, B, b, S_l, sigma_l, the
// Fourier-side profile Q and the smoothing constant lambda.
#pragma once

#include <span>
#include <vector>

#include "bsx/numeric.hpp"

namespace bsx::kernels {

struct KernelConfig {
  long series_terms = 1'000'000;  // oracle truncation
  int asymptotic_pairs = 12;      // Bernoulli terms in the trigamma tail
  double crossover_x0 = 8.0;      // shift recurrence below, asymptotic series above
  double taylor_radius = 0.4;     // odd-zeta Taylor series for |x| <= radius
  int taylor_terms = 20;
  double tol = 1e-14;

  void validate() const;  // throws std::invalid_argument
};

// B_0 .. B_n with B_1 = -1/2, exact rational recurrence rounded once.
struct BernoulliTable {
  std::vector<double> values;
  double operator[](std::size_t i) const { return values[i]; }
};
BernoulliTable bernoulli_numbers(int n);

// zeta(3), zeta(5), ..., zeta(2*m_max+1).
struct OddZetaTable {
  std::vector<double> values;
  static OddZetaTable build(int m_max, double tol = 1e-16);
  double zeta(int m) const { return values[static_cast<std::size_t>(m - 1)]; }  // zeta(2m+1)
};

enum class Tag { K, W, B, b, S, sigma };
struct KernelKind {
  Tag tag = Tag::K;
  double ell = 0.0;  // used by S and sigma only
};

enum class WMode { fast, oracle };

struct Bracketed {
  double value = 0.0;
  double err = 0.0;
};

double fejer_K(double x);
double fejer_K_prime(double x);
double trigamma(double x, const KernelConfig& cfg = {});

double W_eval(double x, const KernelConfig& cfg = {}, WMode mode = WMode::fast);
// Direct series with a certified tail interval; err is the half-width.
Bracketed W_oracle(double x, const KernelConfig& cfg = {});

double kernel_family_eval(KernelKind kind, double x, const KernelConfig& cfg = {});
double B_eval(double x, const KernelConfig& cfg = {});
double b_eval(double x, const KernelConfig& cfg = {});
double S_eval(double ell, double x, const KernelConfig& cfg = {});
double sigma_eval(double ell, double x, const KernelConfig& cfg = {});

// Finite-sum form of S_l for integer l (A = B = 1 in the format of Vaaler's
// interval majorant); independent of W.
double S_integer_direct(int ell, double x);

double sgn(double x);
double chi(double x, double ell);  // indicator of [0, ell], endpoints included

double Q_eval(double v);
// T(v) = (Q(v) - Q(0))/v and the complex weights R_B = T/i + (1-|v|),
// R_b = T/i - (1-|v|) on [-1, 1].
double T_eval(double v);
cplx R_B(double v);
cplx R_b(double v);
// sup over [-1, 1] of |R_B| (= sup |R_b|), grid estimate.
double R_sup();

double lambda_constant(double tol = 5e-8);

// Integral of (Q(v)/v) sin(2 pi x v) over [-1, 1].
num::QuadResult fourier_W_check(double x, const KernelConfig& cfg = {});

struct ExtremalReport {
  bool majorant_holds = true;
  double min_slack = 0.0;       // min over grid of F_eta - chi
  double extra_integral = 0.0;  // integral of the eta-term over [-R, R]
  double extra_err = 0.0;
  double R = 0.0;
};
// F_eta(x) = S_l(x) + eta (sin pi x / pi)^2 l / (x (l - x)).
double extremal_family_value(int ell, double eta, double x, const KernelConfig& cfg = {});
ExtremalReport extremal_family_check(int ell, double eta, std::span<const double> grid, double R,
                                     const KernelConfig& cfg = {});

// Evaluates a kernel over a sample of points; the data-parallel sweep used by
// the majorant suites and the benchmark.
std::vector<double> sweep(KernelKind kind, std::span<const double> xs, const KernelConfig& cfg,
                          Exec exec);

}  // namespace bsx::kernels
