// Band-limited reconstruction: the cardinal (sampling) series, its extended
// form with origin data, the value+derivative interpolation on the coarser
// lattice, and residual checks for the classical identities behind them.
#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace bsx::interp {

enum class Layout { basic, vaaler };

struct SampleSet {
  double alpha = 1.0;  // type is 2 pi alpha
  int M = 1;           // nodes k = -M..M
  Layout layout = Layout::basic;
  std::vector<double> values;  // f(k/2a) for basic, f(k/a) for vaaler; index k + M
  std::vector<double> derivs;  // f'(k/a), vaaler only
  std::optional<double> f0;    // f(0), extended mode
  std::optional<double> fp0;   // f'(0), extended mode
  double decay_p = 2.0;        // declared |f(x)| = O(|x|^-p), drives the tail estimate

  double node(int k) const { return layout == Layout::basic ? k / (2.0 * alpha) : k / alpha; }
  double value(int k) const { return values[static_cast<std::size_t>(k + M)]; }
  double deriv(int k) const { return derivs[static_cast<std::size_t>(k + M)]; }
  void validate() const;  // throws std::invalid_argument

  static SampleSet sample_basic(const std::function<double(double)>& f, double alpha, int M,
                                double decay_p = 2.0);
  static SampleSet sample_vaaler(const std::function<double(double)>& f,
                                 const std::function<double(double)>& fp, double alpha, int M,
                                 double decay_p = 2.0);
};

struct SeriesValue {
  double value = 0.0;
  double err_est = 0.0;  // truncation estimate from the declared decay and edge samples
  bool converged = true;
};

enum class CardinalMode { basic, extended };

inline constexpr double kNodeWindow = 1e-6;

SeriesValue cardinal_series(const SampleSet& s, double z, CardinalMode mode, double tol = 1e-6);
SeriesValue vaaler_interpolation(const SampleSet& s, double z, double tol = 1e-6);

enum class Identity { csc, fejer, sandwich, refined_sandwich, poisson, parseval_sampling, bernstein };

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;    // |lhs - rhs|, or slack for inequalities
  double tail_bound = 0.0;  // certified truncation/quadrature allowance
  double middle = 0.0;      // sandwich identities: the bracketed value
  bool holds = false;
};

// arg: x for csc/fejer (w, x), omega for the sandwiches, a for poisson,
// alpha for parseval (f = K(alpha x)), x for bernstein (f = K, m = 1).
IdentityReport classical_identity_residual(Identity which, double arg);

}  // namespace bsx::interp
