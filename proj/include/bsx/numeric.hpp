// Shared numerical core: quadrature rules, deterministic reductions,
// the serial/parallel execution switch, and a few scalar helpers.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace bsx {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Every data-parallel loop in the library takes one of these. The serial path
// is the reference; the parallel path must reproduce it bit for bit.
enum class Exec { serial, parallel };

namespace num {

// Fixed binary-tree summation. Order depends only on the length, so results
// are identical however the terms were produced.
double pairwise_sum(std::span<const double> xs);

// out[i] = f(i) for i < n, OpenMP-distributed when exec == parallel.
void map_indexed(std::size_t n, const std::function<double(std::size_t)>& f,
                 std::span<double> out, Exec exec);

// Sum of f(i) over i < n with a deterministic reduction tree.
double sum_indexed(std::size_t n, const std::function<double(std::size_t)>& f, Exec exec);

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
};

// Adaptive Gauss-Kronrod (31 point) on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-12, unsigned max_depth = 18);

struct Node {
  double x;
  double w;
};

// Gauss-Legendre rule of the given order mapped to each [breaks[i], breaks[i+1]].
// Supported orders: 6, 10, 20, 30.
std::vector<Node> panel_nodes(std::span<const double> breaks, int order);

// Breakpoints for [a, b] with panels no wider than h.
std::vector<double> uniform_breaks(double a, double b, double h);

// Breakpoints for [0, b] with dyadic refinement toward 0 down to 2^-levels,
// then panels of width <= h.
std::vector<double> dyadic_breaks(double b, double h, int levels);

inline double sinc(double x) {  // sin(x)/x
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// sin(pi x) with exact argument reduction, so integers give exactly zero.
inline double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // [-1, 1], exact
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(pi * r);
}

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);
double normal_pdf(double x, double mu = 0.0, double sigma = 1.0);

// Bracketed relative-or-absolute comparison used by every check.
inline bool leq(double lhs, double rhs, double rel = 1e-12) {
  return lhs <= rhs + rel * std::max(1.0, std::abs(rhs));
}

}  // namespace num
}  // namespace bsx
