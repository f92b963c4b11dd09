// One-variable smoothing inequality: principal-value integrals, the a priori
// bound sup|F - G| <= c1 * integral |phi - psi|/|zeta| + c2 m / Omega, Gaussian
// mollification and sup-distance measurement.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bsx/numeric.hpp"

namespace bsx::esseen {

struct Moment {
  double alpha = 2.0;  // order of the absolute moment
  double value = 1.0;  // integral of |x|^alpha dF
};

// A law on the line, or a signed comparison function G with G(-inf) = 0,
// G(inf) = 1 and |G'| <= m.
struct Distribution1D {
  std::string name;
  std::function<double(double)> cdf;       // right-continuous
  std::function<double(double)> cdf_left;  // F(t-0); equals cdf when empty
  std::function<cplx(double)> cf;          // integral of exp(i zeta x) dF
  std::optional<double> density_bound;
  Moment moment;
  std::vector<double> atoms;   // declared jump points, sorted
  std::vector<double> masses;  // jump sizes; a purely atomic law has masses summing to 1

  double left(double t) const { return cdf_left ? cdf_left(t) : cdf(t); }
};
using ComparisonTarget = Distribution1D;

Distribution1D normal_law(double mu = 0.0, double sigma = 1.0);
// (S - n/2) / (sqrt(n)/2) for S ~ Binomial(n, 1/2); CDF by cumulative pmf.
Distribution1D standardized_binomial(int n);
// Sum of n uniforms on [-1/2, 1/2] scaled to unit variance; exact CDF.
Distribution1D standardized_irwin_hall(int n);
Distribution1D point_mass(double a);

struct PVResult {
  cplx value = 0.0;
  double err = 0.0;
  bool converged = true;
};
// lim_{eps -> 0+} of the integral of h over eps <= |v| <= A.
PVResult pv_integral(const std::function<cplx(double)>& h, double A, double tol = 1e-10);
PVResult pv_integral_real(const std::function<double(double)>& h, double A, double tol = 1e-10);

struct EsseenConstants {
  double c1 = 0.25;
  double c2 = pi;
};

struct BoundReport1D {
  double omega = 0.0;
  double integral = 0.0;       // integral of |phi - psi|/|zeta| over eps <= |zeta| <= Omega
  double integral_err = 0.0;
  double exclusion_eps = 0.0;
  double exclusion_err = 0.0;  // certified bound for the excluded |zeta| < eps part (times c1)
  double tail_term = 0.0;      // c2 m / Omega
  double bound = 0.0;          // c1 (integral + integral_err) + exclusion_err + tail_term
  bool holder_ok = true;       // CF difference respected its Hoelder budget on the probe mesh
  EsseenConstants constants;
};

// F and G must carry moment records of the same order; G needs a density bound.
BoundReport1D esseen_bound_1d(const Distribution1D& F, const ComparisonTarget& G, double omega,
                              double tol = 1e-7, EsseenConstants c = {});

// Best bound over Omega = 2^j, j in [j_min, j_max].
BoundReport1D optimize_omega(const Distribution1D& F, const ComparisonTarget& G, int j_min = -2, int j_max = 10,
                             double tol = 1e-7, EsseenConstants c = {});

// N_eps * F: CF times exp(-eps^2 zeta^2 / 2), CDF by quadrature (exact sum over atoms
// for purely atomic laws).
Distribution1D gaussian_mollify(const Distribution1D& F, double eps);

// max over the grid of |F(t) - G(t)|, also checking F(t-0), G(t-0) at declared atoms.
double sup_cdf_distance(const Distribution1D& F, const Distribution1D& G, const std::vector<double>& grid);

std::vector<double> linear_grid(double a, double b, std::size_t n);

struct HarnessRow {
  int index = 0;
  double distance = 0.0;
  BoundReport1D bound;
  double holder_increment = 0.0;  // max |phi(z + h) - phi(z)| over the mesh
};

// Convergence table (distance and bound per index) for a family of laws against a fixed G.
std::vector<HarnessRow> convergence_harness_1d(const std::function<Distribution1D(int)>& family,
                                               const ComparisonTarget& G, const std::vector<int>& indices,
                                               const std::vector<double>& grid, Exec exec = Exec::serial);

}  // namespace bsx::esseen
