// k-variable smoothing machinery: Selberg's ring expansion, the difference
// operators D, E, P, Delta, their factorization and derivative bounds, and the
// four a priori bounds on |F - G| over R^k (plain, truncated, box, slab).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "bsx/esseen1d.hpp"
#include "bsx/numeric.hpp"

namespace bsx::multi {

// ---------------------------------------------------------------------------
// Ring expansion

enum class Sym : std::uint8_t { chi = 0, delta = 1, eps = 2 };

struct Monomial {
  std::vector<Sym> w;  // one symbol per index
  long multiplicity = 1;
};

struct RingExpansion {
  int k = 0;
  std::vector<long> lhs;           // coefficient of every monomial, base-3 code (index 1 is the low digit)
  std::vector<Monomial> S;         // LHS = chi_1...chi_k - S
  std::vector<Monomial> S_tilde;   // g_1...g_k = chi_1...chi_k + S_tilde
};

// 2 <= k <= 6.
RingExpansion selberg_ring_expansion(int k);

template <class T>
struct Assignment {
  std::vector<T> chi, delta, eps;
};

// LHS evaluated from its defining product form, minus (chi...chi - S).
double ring_identity_residual(const RingExpansion& r, const Assignment<double>& a);
boost::rational<long long> ring_identity_residual_exact(const RingExpansion& r,
                                                        const Assignment<boost::rational<long long>>& a);
// g...g - chi...chi - S_tilde.
double ring_tilde_residual(const RingExpansion& r, const Assignment<double>& a);

// ---------------------------------------------------------------------------
// Difference operators

using FieldK = std::function<cplx(std::span<const double>)>;

enum class Op { D, E, P, Delta };
struct OpAt {
  Op op;
  int j;  // 0-based coordinate
};

// (op_0 op_1 ... op_{n-1}) f evaluated at v.
cplx apply_operator(std::span<const OpAt> word, const FieldK& f, std::span<const double> v);

// Partial derivative with per-coordinate orders in {0, 1, 2}.
using PartialFn = std::function<cplx(std::span<const int> orders, std::span<const double> x)>;

// Nested central differences with a step sized to the total order.
PartialFn finite_difference_partials(FieldK f);
// Roundoff-plus-truncation scale of finite_difference_partials for that total order.
double finite_difference_noise(int total_order, double f_scale);

enum class Factorization { mixed, delta, e_delta };

struct FactorizationReport {
  cplx lhs = 0.0;
  cplx rhs = 0.0;
  double residual = 0.0;
  double tol = 0.0;             // quadrature plus differentiation allowance
  bool noise_dominates = false; // finite-difference noise exceeds the requested target
  bool holds = false;
};

// Operators act on the first m coordinates of v. Without analytic partials
// the integrand is differenced numerically.
FactorizationReport factorization_residual(const FieldK& f, std::optional<PartialFn> partials, int m,
                                           Factorization which, std::span<const double> v,
                                           double target = 1e-8);

// mixed_d:  |D_1...D_m f| against first partials, sigma within [1, l].
// delta_d:  |Delta_1...Delta_n D_{n+1}...D_m f|, sigma within [1, l] u [n+1, n+delta].
// e_delta_d: the same bound for E_1 Delta_1...E_n Delta_n D_{n+1}...D_m f.
// e_delta_d_second: that operator against second partials on the E Delta indices.
enum class DerivBound { mixed_d, delta_d, e_delta_d, e_delta_d_second };

struct DerivBoundSpec {
  DerivBound which = DerivBound::mixed_d;
  int h = 1;
  int ell = 1;
  int n = 0;      // leading Delta (or E Delta) coordinates
  int m = 1;
  int delta = 0;  // D coordinates joining the sigma pool
};

enum class Verdict { holds, inconclusive, violated };

struct DerivBoundReport {
  double lhs = 0.0;
  double rhs_raw = 0.0;   // with grid sups
  double rhs_safe = 0.0;  // with grid sups times the safety factor
  double slack = 0.0;     // rhs_raw - lhs
  Verdict verdict = Verdict::violated;
};

inline constexpr double kSupSafety = 1.5;

DerivBoundReport derivative_bound_check(const FieldK& f, const PartialFn& partials, const DerivBoundSpec& spec,
                                        std::span<const double> v);

// Tensor-product quadrature. The outer axis is distributed; each outer slice is
// summed serially and the slices are combined pairwise, so the result does not
// depend on the thread count. An empty axis list evaluates g at the empty point.
double tensor_integrate(const std::vector<std::vector<num::Node>>& axes,
                        const std::function<double(std::span<const double>)>& g, Exec exec);

// ---------------------------------------------------------------------------
// Laws on R^k

struct LawK {
  std::string name;
  int k = 1;
  std::function<double(std::span<const double>)> cdf;
  FieldK cf;
  std::vector<double> marginal_bounds;  // m_l; empty when no density
  esseen::Moment moment;                // integral of (max_j |x_j|)^alpha
  std::vector<esseen::Distribution1D> factors;  // populated for product laws
};
using SignedMeasureK = LawK;

// Independent product of one-dimensional laws. The max-moment is bounded by
// the sum of the marginal moments, which must share one order.
LawK product_law(std::vector<esseen::Distribution1D> factors);
LawK binomial_product(int n, int k);
LawK normal_product(int k);
LawK irwin_hall_product(int n, int k);

// F{(a, b]} by inclusion-exclusion over the 2^k corners.
double box_measure(const LawK& F, std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Bounds

struct ConstantsK {
  double c1 = 0, c2 = 0, c5 = 0, c6 = 0, c8 = 0, c9 = 0, chat1 = 0;
  // Assembled along the proof path from rho = max(1, sup|R_B|).
  static ConstantsK defaults(int k);
};

struct PartitionP {
  std::vector<int> B, C, D;
};
// All 3^k partitions, in base-3 order of (0 = B, 1 = C, 2 = D) per coordinate.
std::vector<PartitionP> all_partitions(int k);

struct PartitionTerm {
  PartitionP p;
  double integral = 0.0;
  double err = 0.0;
};

struct BoundReportK {
  std::string variant;  // plain, A, B, C
  std::vector<double> omega;
  std::vector<PartitionTerm> terms;  // plain and slab variants
  double integral = 0.0;             // sum of the integral parts before the constant
  double integral_err = 0.0;
  double tail_term = 0.0;            // c Sum m_l / Omega_l
  double truncation_term = 0.0;      // mode A only
  double bound = 0.0;
  ConstantsK constants;
};

struct QuadOptions {
  double panel = 0.5;  // max panel width
  int order = 10;      // error estimated against order 20 on the same panels
  int levels = 6;      // dyadic refinement toward v_j = 0
  Exec exec = Exec::parallel;
};

BoundReportK esseen_bound_k(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                            std::span<const double> t, const ConstantsK& c, const QuadOptions& q = {});

enum class TruncMode { A, B };
enum class TruncTransform { bullet, triangle };

struct TruncationMap {
  double Delta = 10.0;  // mode A; mode B uses 1 + D
  double D = 1.0;
  TruncTransform transform = TruncTransform::bullet;
};

// 1/|v_bullet| = min(1/|v|, Delta), or Delta/|v_triangle| = Delta min(1, 1/|v|).
double inverse_transformed(double v, double Delta, TruncTransform tr);

BoundReportK esseen_bound_truncated(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                                    const TruncationMap& tm, TruncMode mode, const ConstantsK& c,
                                    const QuadOptions& q = {});

enum class SlabFlavor { bar, double_bar };

struct SlabNorm {
  double value = 0.0;  // grid sup
  double safe = 0.0;   // value times kSupSafety
  bool stable = true;  // last refinement changed the sup by less than 10%
};

// C is a set of 0-based coordinates. Partials supplies S_j when C_s is nonempty.
SlabNorm slab_norm(const FieldK& f, const PartialFn& partials, std::span<const int> C, std::span<const double> v,
                   double tau, SlabFlavor flavor);

BoundReportK esseen_bound_slab(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                               const ConstantsK& c, const QuadOptions& q = {});

// ---------------------------------------------------------------------------
// Measurements and harness

// max over a tensor grid of |F(t) - G(t)|.
double sup_cdf_distance_k(const LawK& F, const LawK& G, std::span<const double> axis);

enum class Variant { plain, A, B, C };

struct HarnessRowK {
  int index = 0;
  double distance = 0.0;
  BoundReportK bound;
  double partial_gap = 0.0;  // max_ij |d_i d_j phi_n(0) - d_i d_j psi(0)|, central differences
};

std::vector<HarnessRowK> convergence_harness_k(const std::function<LawK(int)>& family, const SignedMeasureK& G,
                                               std::span<const int> indices, Variant variant,
                                               std::span<const double> axis, const QuadOptions& q = {});

}  // namespace bsx::multi
