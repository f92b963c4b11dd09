#include "bsx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>

#include "bsx/clt.hpp"
#include "bsx/esseen1d.hpp"
#include "bsx/esseen_multi.hpp"
#include "bsx/interpolation.hpp"
#include "bsx/kernels.hpp"
#include "bsx/rng.hpp"

namespace bsx::verify {

namespace {

using Checks = std::vector<Check>;

void add(Checks& out, const char* suite, std::string name, double measured, double tol, std::string detail = {}) {
  out.push_back({suite, std::move(name), measured, tol, false, std::move(detail)});
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<double> uniform_points(std::size_t n, double a, double b, std::uint64_t seed) {
  Philox g(seed, 0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = a + (b - a) * g.uniform();
  return xs;
}

// Quadrature of g over [a, b] split at the integers, for kinked integrands.
num::QuadResult integrate_unit_panels(const std::function<double(double)>& g, double a, double b,
                                      std::span<const double> extra_breaks = {}) {
  std::vector<double> br;
  for (double x = std::ceil(a); x < b; x += 1.0) br.push_back(x);
  br.push_back(a);
  br.push_back(b);
  for (double e : extra_breaks) {
    if (e > a && e < b) br.push_back(e);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  num::QuadResult r;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const auto q = num::integrate(g, br[i], br[i + 1], 1e-13);
    r.value += q.value;
    r.err += q.err;
  }
  return r;
}

// Distance from 1 to [lo, hi]; zero when bracketed.
double bracket_miss(double lo, double hi) { return std::max({0.0, lo - 1.0, 1.0 - hi}); }

// ---------------------------------------------------------------------------

Checks kernels_suite(Exec exec) {
  using namespace kernels;
  constexpr const char* S = "kernels";
  Checks out;
  const KernelConfig cfg;
  const double pi2 = pi * pi;

  {
    const auto B = bernoulli_numbers(30);
    double worst = 0.0;
    for (int m = 1; m <= 30; ++m) {
      double s = 0.0, scale = 0.0;
      for (int j = 0; j <= m; ++j) {
        const double t = boost::math::binomial_coefficient<double>(static_cast<unsigned>(m + 1), static_cast<unsigned>(j)) * B[static_cast<std::size_t>(j)];
        s += t;
        scale = std::max(scale, std::abs(t));
      }
      worst = std::max(worst, std::abs(s) / std::max(1.0, scale));
    }
    worst = std::max({worst, std::abs(B[2] - 1.0 / 6.0), std::abs(B[4] + 1.0 / 30.0), std::abs(B[3])});
    add(out, S, "bernoulli_recurrence", worst, 1e-13, "sum C(m+1,j) B_j = 0 for m <= 30");
  }
  {
    const auto Z = OddZetaTable::build(20);
    double bad = 0.0;
    for (std::size_t i = 0; i < Z.values.size(); ++i) {
      if (!(Z.values[i] > 1.0 && Z.values[i] < 1.21)) bad += 1.0;
      if (i > 0 && !(Z.values[i] < Z.values[i - 1])) bad += 1.0;
    }
    add(out, S, "odd_zeta_table_bounds", bad, 0.0, "values in (1, 1.21), strictly decreasing");
  }
  add(out, S, "fejer_special_values",
      std::max({std::abs(fejer_K(0.0) - 1.0), std::abs(fejer_K(1.0)), std::abs(fejer_K(0.5) - 4.0 / pi2)}), 1e-15,
      "K(0) = 1, K(1) = 0, K(1/2) = 4/pi^2");
  add(out, S, "trigamma_closed_forms",
      std::max({std::abs(trigamma(1.0) - pi2 / 6.0), std::abs(trigamma(0.5) - pi2 / 2.0),
                std::abs(trigamma(2.7) - trigamma(3.7) - 1.0 / (2.7 * 2.7))}),
      1e-14, "pi^2/6, pi^2/2 and the shift recurrence");
  {
    double r = std::abs(W_eval(0.5) - 8.0 / pi2);
    r = std::max(r, std::abs(W_eval(0.0)));
    for (int k = 1; k <= 5; ++k) r = std::max(r, std::abs(W_eval(k) - 1.0));
    r = std::max({r, std::abs(B_eval(0.0) - 1.0), std::abs(b_eval(0.0) + 1.0), std::abs(S_eval(1.0, 0.5) - 12.0 / pi2)});
    add(out, S, "closed_form_values", r, 1e-14, "W(1/2) = 8/pi^2, W(k) = 1, B(0) = 1, b(0) = -1, S_1(1/2) = 12/pi^2");
  }
  {
    double r = std::max({std::abs(Q_eval(0.0) - 1.0 / pi), std::abs(Q_eval(1.0)), std::abs(Q_eval(0.5) - 0.5 / pi)});
    for (int i = 0; i <= 1000; ++i) {
      const double v = i / 1000.0;
      r = std::max(r, std::abs(Q_eval(v) + Q_eval(1.0 - v) - 1.0 / pi));
    }
    add(out, S, "Q_values_and_reflection", r, 1e-12, "Q(v) + Q(1 - v) = 1/pi on [0, 1]");
  }
  {
    const double lam = lambda_constant(5e-8);
    add(out, S, "lambda_seven_decimals", std::abs(lam - 0.3263598), 5e-8, "lambda = " + fmt(lam));
    add(out, S, "lambda_bracket", (lam >= 1.0 / pi && lam < 0.5) ? 0.0 : 1.0, 0.0, "1/pi <= lambda < 1/2");
  }
  {
    const auto xs = uniform_points(1000, -30.0, 30.0, 11);
    std::vector<double> d(xs.size());
    num::map_indexed(
        xs.size(), [&](std::size_t i) { return std::abs(W_eval(xs[i]) - W_oracle(xs[i]).value); }, d, exec);
    add(out, S, "W_fast_vs_oracle", *std::max_element(d.begin(), d.end()), 1e-10, "1000 points in [-30, 30]");
  }
  {
    double r = 0.0;
    for (int i = 0; i < 25; ++i) {
      const double x = i == 0 ? 0.5 : (i == 1 ? -0.5 : -6.0 + 12.0 * (i - 2) / 22.0 + 0.013);
      r = std::max(r, std::abs(fourier_W_check(x).value - W_eval(x)));
    }
    add(out, S, "W_fourier_representation", r, 1e-8, "25 points including +-1/2");
  }
  {
    const auto xs = uniform_points(1000, -40.0, 40.0, 12);
    double r = 0.0;
    for (double x : xs) {
      r = std::max(r, std::abs(W_eval(x) + W_eval(-x)));
      r = std::max(r, std::abs(B_eval(x) + B_eval(-x) - 2.0 * fejer_K(x)));
    }
    add(out, S, "W_odd_B_symmetry", r, 1e-12, "W(x) + W(-x) = 0, B(x) + B(-x) = 2K(x)");
  }
  {
    const auto xs = uniform_points(100000, -50.0, 50.0, 13);
    const auto Bv = sweep({Tag::B}, xs, cfg, exec);
    const auto bv = sweep({Tag::b}, xs, cfg, exec);
    const auto Wv = sweep({Tag::W}, xs, cfg, exec);
    double sandwich = 0.0, windows = 0.0, twoK = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i], s = sgn(x), K = fejer_K(x);
      if (!num::leq(bv[i], s, 1e-15) || !num::leq(s, Bv[i], 1e-15)) sandwich += 1.0;
      const bool win = x > 0 ? (num::leq(1.0 - K, Wv[i], 1e-15) && num::leq(Wv[i], 1.0, 1e-15))
                             : (num::leq(-1.0, Wv[i], 1e-15) && num::leq(Wv[i], -1.0 + K, 1e-15));
      if (!win) windows += 1.0;
      if (!num::leq(std::abs(Bv[i] - s), 2.0 * K, 1e-15) || !num::leq(std::abs(bv[i] - s), 2.0 * K, 1e-15)) twoK += 1.0;
    }
    add(out, S, "majorant_b_sgn_B", sandwich, 0.0, "violations over 1e5 points in [-50, 50]");
    add(out, S, "W_windows", windows, 0.0, "1 - K <= W <= 1 (x > 0), -1 <= W <= -1 + K (x < 0)");
    add(out, S, "approximation_within_2K", twoK, 0.0, "|B - sgn|, |b - sgn| <= 2K");
  }
  {
    Philox g(14, 0);
    double nonstrict = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = std::floor(-50.0 + 100.0 * g.uniform()) + 0.001 + 0.998 * g.uniform();
      const double s = sgn(x);
      if (!(B_eval(x) - s > 0.0) || !(s - b_eval(x) > 0.0)) nonstrict += 1.0;
    }
    add(out, S, "majorant_strict_off_integers", nonstrict, 0.0, "1000 non-integer points");
  }
  {
    double bad = 0.0;
    for (double ell : {0.5, 1.0, 2.0, 7.5}) {
      const auto xs = uniform_points(25000, -50.0, 50.0, 15 + static_cast<std::uint64_t>(ell * 2));
      const auto Sv = sweep({Tag::S, ell}, xs, cfg, exec);
      const auto sv = sweep({Tag::sigma, ell}, xs, cfg, exec);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = chi(xs[i], ell);
        const double gapb = fejer_K(xs[i]) + fejer_K(ell - xs[i]);
        if (!num::leq(sv[i], c, 1e-15) || !num::leq(c, Sv[i], 1e-15)) bad += 1.0;
        if (!num::leq(std::max(Sv[i] - c, c - sv[i]), gapb, 1e-15)) bad += 1.0;
      }
    }
    add(out, S, "interval_majorant_and_gap", bad, 0.0, "sigma_l <= chi <= S_l, gap <= K(x) + K(l - x), l in {1/2, 1, 2, 15/2}");
  }
  {
    constexpr double X = 50.0;
    const auto up = integrate_unit_panels([](double x) { return B_eval(x) - sgn(x); }, -X, X);
    const auto lo = integrate_unit_panels([](double x) { return sgn(x) - b_eval(x); }, -X, X);
    const double tail = 4.0 / (pi2 * X);
    const double miss = std::max(bracket_miss(up.value - up.err, up.value + tail + up.err),
                                 bracket_miss(lo.value - lo.err, lo.value + tail + lo.err));
    add(out, S, "integral_B_minus_sgn", std::max(miss, std::max(up.err, lo.err)), 1e-6,
        "integral over [-50, 50] = " + fmt(up.value) + ", tail <= " + fmt(tail));
    double worst = 0.0;
    for (double ell : {1.0, 2.0, 7.5}) {
      const double br[] = {0.0, ell};
      const auto su = integrate_unit_panels([ell](double x) { return S_eval(ell, x) - chi(x, ell); }, -X, X, br);
      const auto sl = integrate_unit_panels([ell](double x) { return chi(x, ell) - sigma_eval(ell, x); }, -X, X, br);
      const double t = 2.0 / (pi2 * X) + 2.0 / (pi2 * (X - ell));
      worst = std::max({worst, bracket_miss(su.value - su.err, su.value + t + su.err),
                        bracket_miss(sl.value - sl.err, sl.value + t + sl.err), su.err, sl.err});
    }
    add(out, S, "integral_S_minus_chi", worst, 1e-6, "l in {1, 2, 15/2}");
  }
  {
    double r = 0.0;
    const auto xs = uniform_points(200, -10.0, 10.0, 16);
    for (int ell : {1, 2, 3}) {
      for (double x : xs) r = std::max(r, std::abs(S_eval(ell, x) - S_integer_direct(ell, x)));
    }
    add(out, S, "S_integer_direct_form", r, 1e-10, "l in {1, 2, 3}, 200 points");
  }
  {
    // M = 3 terms; the positive tail is at most the first omitted term over 1 - 5/4 x^2.
    constexpr int M = 3;
    const auto Z = OddZetaTable::build(M + 1);
    double worst = 0.0;
    for (double x : {0.05, 0.1, 0.2, 0.3, 0.4}) {
      const auto w = W_oracle(x);
      const double K = fejer_K(x);
      double s = 2.0 * x;
      for (int m = 1; m <= M; ++m) s += 4.0 * m * Z.zeta(m) * std::pow(x, 2 * m + 1);
      const double first = 4.0 * (M + 1) * Z.zeta(M + 1) * std::pow(x, 2 * M + 3);
      const double bound = first / (1.0 - (M + 2.0) / (M + 1.0) * x * x) + w.err / K;
      worst = std::max(worst, std::abs(w.value / K - s) / bound);
    }
    add(out, S, "W_taylor_remainder", worst, 1.0, "remainder / bound, x <= 0.4");
  }
  {
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = 5.0 + 95.0 * i / 2000.0;
      worst = std::max(worst, std::abs(W_eval(x) - 1.0) * x * x * x);
    }
    add(out, S, "W_cubic_decay", worst, 1.0 / (3.0 * pi2), "sup of x^3 |W - sgn| on [5, 100]");
  }
  {
    std::vector<double> grid;
    for (int i = 0; i < 10000; ++i) grid.push_back(-10.0 + 20.0 * (i + 0.5) / 10000.0 + 1e-7);
    const auto rep = extremal_family_check(1, 0.05, grid, 100.5);
    add(out, S, "extremal_family_majorant", std::max(0.0, -rep.min_slack), 0.0,
        "eta = 0.05, l = 1, min slack " + fmt(rep.min_slack));
  }
  return out;
}

// ---------------------------------------------------------------------------

Checks interpolation_suite() {
  using namespace interp;
  constexpr const char* S = "interpolation";
  Checks out;
  const double pi2 = pi * pi;
  auto K = [](double x) { return kernels::fejer_K(x); };
  auto Kp = [](double x) { return kernels::fejer_K_prime(x); };

  {
    SampleSet s;
    s.alpha = 1.0;
    s.M = 5;
    s.values.assign(11, 0.0);
    s.values[5] = 1.0;
    add(out, S, "cardinal_single_node", std::abs(cardinal_series(s, 0.25, CardinalMode::basic).value - 2.0 / pi), 1e-15,
        "delta samples at z = 1/4 give 2/pi");
  }
  {
    const auto s = SampleSet::sample_basic(K, 1.0, 2000);
    const auto v = cardinal_series(s, 0.3, CardinalMode::basic);
    add(out, S, "cardinal_reconstructs_K", std::abs(v.value - K(0.3)), std::max(v.err_est, 1e-14),
        "tail estimate " + fmt(v.err_est));
  }
  {
    auto s = SampleSet::sample_basic([](double) { return 1.0; }, 1.0, 20000, 0.0);
    s.f0 = 1.0;
    s.fp0 = 0.0;
    double r = 0.0;
    for (double z : {0.37, 0.5, 1.21}) r = std::max(r, std::abs(cardinal_series(s, z, CardinalMode::extended).value - 1.0));
    add(out, S, "extended_constant_function", r, 1e-8, "f = 1 reproduces 1");
  }
  {
    const auto base = SampleSet::sample_basic(K, 1.0, 400);
    auto ext = SampleSet::sample_basic([&](double x) { return x * K(x); }, 1.0, 400, 1.0);
    ext.f0 = 0.0;
    ext.fp0 = 1.0;
    double r = 0.0;
    for (double z : {0.13, 0.37, 1.7, -2.2}) {
      r = std::max(r, std::abs(cardinal_series(ext, z, CardinalMode::extended).value / z -
                               cardinal_series(base, z, CardinalMode::basic).value));
    }
    add(out, S, "extended_of_zf_matches_basic", r, 1e-12, "f = K");
  }
  {
    SampleSet s;
    s.alpha = 1.0;
    s.M = 3;
    s.layout = Layout::vaaler;
    s.values.assign(7, 0.0);
    s.derivs.assign(7, 0.0);
    s.values[3] = 1.0;
    double r = std::abs(vaaler_interpolation(s, 0.37).value - K(0.37));
    s.values[4] = 1.0;
    r = std::max(r, std::abs(vaaler_interpolation(s, 0.5).value - 8.0 / pi2));
    add(out, S, "vaaler_single_terms", r, 1e-14, "K(0.37), K(1/2) + K(-1/2) = 8/pi^2");
    const double h = 1e-3;
    const double d = (vaaler_interpolation(s, 2.0 + h).value - vaaler_interpolation(s, 2.0 - h).value) / (2.0 * h);
    const double v = vaaler_interpolation(s, 2.0 + 1e-8).value;
    add(out, S, "vaaler_nodal_taylor", std::max(std::abs(v), std::abs(d - (Kp(2.0) + Kp(1.0)))), 1e-5,
        "value and derivative at node 2");
  }
  {
    const auto s1 = SampleSet::sample_basic(K, 1.0, 300);
    auto g = [&](double z) { return cardinal_series(s1, z, CardinalMode::basic).value; };
    const auto s2 = SampleSet::sample_basic(g, 2.0, 1200, 1.0);
    double r = 0.0;
    for (double z : {0.1, 0.33, 1.45, -2.6}) r = std::max(r, std::abs(cardinal_series(s2, z, CardinalMode::basic).value - g(z)));
    add(out, S, "cardinal_idempotence", r, 1e-5, "resampled on the half lattice");
  }
  struct Id {
    Identity which;
    double arg;
    const char* name;
    double tol;
  };
  for (const Id& id : {Id{Identity::fejer, 0.37, "identity_fejer_sum", 1e-8}, Id{Identity::csc, 0.5, "identity_csc", 1e-8},
                       Id{Identity::poisson, 2.0, "identity_poisson", 1e-12},
                       Id{Identity::parseval_sampling, 1.0, "identity_parseval_sampling", 1e-8}}) {
    const auto r = classical_identity_residual(id.which, id.arg);
    add(out, S, id.name, r.residual, std::max(id.tol, r.tail_bound), "tail " + fmt(r.tail_bound));
  }
  {
    const auto a = classical_identity_residual(Identity::sandwich, 2.0);
    const auto b = classical_identity_residual(Identity::refined_sandwich, 2.0);
    add(out, S, "identity_sandwiches", (a.holds ? 0.0 : 1.0) + (b.holds ? 0.0 : 1.0), 0.0,
        "middle " + fmt(a.middle));
  }
  {
    double bad = 0.0;
    for (int i = 0; i < 1000; ++i) {
      if (!classical_identity_residual(Identity::bernstein, -5.0 + 10.0 * (i + 0.5) / 1000.0).holds) bad += 1.0;
    }
    add(out, S, "identity_bernstein", bad, 0.0, "1000 grid points");
  }
  return out;
}

// ---------------------------------------------------------------------------

Checks esseen1d_suite(Exec exec) {
  using namespace esseen;
  constexpr const char* S = "esseen1d";
  Checks out;

  add(out, S, "pv_odd_integrand", std::abs(pv_integral_real([](double v) { return 1.0 / v; }, 1.0).value.real()), 1e-10);
  {
    const double si2pi = num::integrate([](double u) { return num::sinc(u); }, 0.0, 2.0 * pi, 1e-14).value;
    const auto r = pv_integral([](double v) { return std::exp(cplx(0.0, 2.0 * pi * v)) / cplx(0.0, pi * v); }, 1.0);
    add(out, S, "pv_sine_integral", std::abs(r.value - 2.0 / pi * si2pi), 1e-8, "(2/pi) Si(2 pi)");
  }
  {
    double r = 0.0;
    for (double x : {0.3, 1.7, -2.4}) {
      auto hB = [x](double v) { return (1.0 / cplx(0.0, pi * v) + kernels::R_B(v)) * std::exp(cplx(0.0, 2.0 * pi * x * v)); };
      auto hb = [x](double v) { return (1.0 / cplx(0.0, pi * v) + kernels::R_b(v)) * std::exp(cplx(0.0, 2.0 * pi * x * v)); };
      r = std::max(r, std::abs(pv_integral(hB, 1.0).value - kernels::B_eval(x)));
      r = std::max(r, std::abs(pv_integral(hb, 1.0).value - kernels::b_eval(x)));
    }
    add(out, S, "fourier_representation_B_b", r, 1e-6, "x in {0.3, 1.7, -2.4}");
  }
  {
    const auto G = normal_law();
    const auto grid = linear_grid(-5.0, 5.0, 2001);
    double ratio = 0.0, increases = 0.0, prev = std::numeric_limits<double>::infinity();
    std::string detail;
    for (int n : {25, 100, 400}) {
      const auto F = standardized_binomial(n);
      const double d = sup_cdf_distance(F, G, grid);
      const auto b = optimize_omega(F, G);
      ratio = std::max(ratio, d / b.bound);
      if (!(b.bound < prev)) increases += 1.0;
      prev = b.bound;
      detail += "n=" + std::to_string(n) + " dist " + fmt(d) + " bound " + fmt(b.bound) + "; ";
    }
    add(out, S, "binomial_bound_dominates", ratio, 1.0, detail);
    add(out, S, "binomial_bound_decreasing", increases, 0.0, "optimized bound in n");
  }
  {
    const auto F = standardized_binomial(25);
    const auto G = normal_law();
    const auto grid = linear_grid(-4.0, 4.0, 801);
    const double eps = 0.3;
    const double d0 = sup_cdf_distance(F, G, grid);
    const double d1 = sup_cdf_distance(gaussian_mollify(F, eps), normal_law(0.0, std::sqrt(1.0 + eps * eps)), grid);
    add(out, S, "mollification_contracts", d1 / d0, 1.0, "eps = 0.3, binomial(25)");
  }
  {
    Philox g(21, 0);
    double r = 0.0;
    const std::vector<Distribution1D> laws{normal_law(0.3, 1.2), standardized_binomial(25), standardized_irwin_hall(3),
                                           point_mass(0.7)};
    for (const auto& L : laws) {
      for (int i = 0; i < 50; ++i) {
        const double z = -20.0 + 40.0 * g.uniform();
        r = std::max(r, std::abs(L.cf(-z) - std::conj(L.cf(z))));
      }
    }
    add(out, S, "cf_hermitian", r, 1e-14);
  }
  {
    const auto rows = convergence_harness_1d([](int n) { return standardized_irwin_hall(n); }, normal_law(), {2, 4, 8},
                                             linear_grid(-4.0, 4.0, 801), exec);
    double ratio = 0.0;
    for (const auto& r : rows) ratio = std::max(ratio, r.distance / r.bound.bound);
    add(out, S, "irwin_hall_harness", ratio, 1.0, "distance / bound, n in {2, 4, 8}");
  }
  return out;
}

// ---------------------------------------------------------------------------

using multi::Op;
using multi::OpAt;

multi::FieldK hermitian_trig_poly(int k, std::uint64_t seed) {
  Philox g(seed, 0);
  std::vector<std::pair<std::vector<double>, double>> terms;
  for (int t = 0; t < 6; ++t) {
    std::vector<double> m(static_cast<std::size_t>(k));
    for (auto& x : m) x = std::floor(5.0 * g.uniform()) - 2.0;
    terms.emplace_back(m, 2.0 * g.uniform() - 1.0);
  }
  return [terms](std::span<const double> v) {
    cplx s = 0.0;
    for (const auto& [m, c] : terms) {
      double ph = 0.0;
      for (std::size_t j = 0; j < m.size(); ++j) ph += m[j] * v[j];
      s += c * std::exp(cplx(0.0, ph));
    }
    return s;
  };
}

Checks esseen_k_suite() {
  using namespace multi;
  constexpr const char* S = "esseen_k";
  Checks out;

  {
    double r = 0.0;
    Philox g(31, 0);
    for (int k = 2; k <= 4; ++k) {
      const auto ring = selberg_ring_expansion(k);
      for (int trial = 0; trial < 100; ++trial) {
        Assignment<double> a;
        for (int j = 0; j < k; ++j) {
          a.chi.push_back(2.0 * g.uniform() - 1.0);
          a.delta.push_back(2.0 * g.uniform() - 1.0);
          a.eps.push_back(2.0 * g.uniform() - 1.0);
        }
        r = std::max({r, std::abs(ring_identity_residual(ring, a)), std::abs(ring_tilde_residual(ring, a))});
      }
    }
    add(out, S, "ring_identity_random", r, 1e-12, "k in {2, 3, 4}, 100 assignments each");
  }
  {
    double nonzero = 0.0;
    Philox g(32, 0);
    using R = boost::rational<long long>;
    for (int k = 2; k <= 4; ++k) {
      const auto ring = selberg_ring_expansion(k);
      for (int trial = 0; trial < 100; ++trial) {
        Assignment<R> a;
        auto draw = [&] { return R(static_cast<long long>(g.next_u64() % 19) - 9, static_cast<long long>(g.next_u64() % 7) + 1); };
        for (int j = 0; j < k; ++j) {
          a.chi.push_back(draw());
          a.delta.push_back(draw());
          a.eps.push_back(draw());
        }
        if (ring_identity_residual_exact(ring, a) != R(0)) nonzero += 1.0;
      }
    }
    add(out, S, "ring_identity_exact", nonzero, 0.0, "rational assignments");
  }
  {
    const auto ring = selberg_ring_expansion(2);
    // delta eps, eps delta, chi delta, delta chi, eps eps; index 1 first.
    const std::vector<std::vector<Sym>> expected{{Sym::delta, Sym::eps}, {Sym::eps, Sym::delta}, {Sym::chi, Sym::delta},
                                                 {Sym::delta, Sym::chi}, {Sym::eps, Sym::eps}};
    double mismatch = std::abs(static_cast<double>(ring.S.size()) - 5.0);
    for (const auto& w : expected) {
      const bool found = std::any_of(ring.S.begin(), ring.S.end(),
                                     [&](const Monomial& m) { return m.w == w && m.multiplicity == 1; });
      if (!found) mismatch += 1.0;
    }
    add(out, S, "ring_k2_five_monomials", mismatch, 0.0);
  }
  {
    // Operator algebra on random Hermitian trigonometric polynomials.
    double r = 0.0, herm = 0.0;
    Philox g(33, 0);
    const Op ops[] = {Op::D, Op::E, Op::P, Op::Delta};
    for (int k = 1; k <= 3; ++k) {
      const auto f = hermitian_trig_poly(k, 40 + static_cast<std::uint64_t>(k));
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(k)), mv(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          v[i] = 6.0 * g.uniform() - 3.0;
          mv[i] = -v[i];
        }
        auto A = [&](std::initializer_list<OpAt> w) { return apply_operator(std::vector<OpAt>(w), f, v); };
        for (int j = 0; j < k; ++j) {
          const cplx fv = f(v);
          r = std::max({r, std::abs(A({{Op::D, j}, {Op::E, j}})), std::abs(A({{Op::D, j}, {Op::P, j}})),
                        std::abs(A({{Op::D, j}, {Op::Delta, j}}) - A({{Op::D, j}})),
                        std::abs(A({{Op::E, j}, {Op::P, j}}) - A({{Op::P, j}})), std::abs(A({{Op::P, j}, {Op::Delta, j}})),
                        std::abs(fv - A({{Op::D, j}}) - A({{Op::E, j}, {Op::Delta, j}}) - A({{Op::P, j}})),
                        std::abs(A({{Op::D, j}, {Op::E, j}, {Op::Delta, j}})), std::abs(A({{Op::E, j}, {Op::Delta, j}, {Op::P, j}}))});
          for (Op o : ops) r = std::max(r, std::abs(A({{o, j}, {o, j}}) - A({{o, j}})));
          for (int i = 0; i < k; ++i) {
            for (Op a : ops) {
              for (Op b : ops) r = std::max(r, std::abs(A({{a, i}, {b, j}}) - A({{b, j}, {a, i}})));
            }
          }
          std::vector<std::vector<OpAt>> words{{{Op::D, j}}, {{Op::E, j}}, {{Op::P, j}}, {{Op::Delta, j}}, {{Op::E, j}, {Op::Delta, j}}};
          for (const auto& w : words) {
            herm = std::max(herm, std::abs(apply_operator(w, f, mv) - std::conj(apply_operator(w, f, v))));
          }
        }
      }
    }
    add(out, S, "operator_algebra", r, 1e-12, "products, idempotents, commutation, decomposition; k <= 3");
    add(out, S, "operators_preserve_hermitian", herm, 1e-12);
  }
  {
    FieldK f = [](std::span<const double> v) { return cplx(std::sin(1.3 * v[0]) * std::sin(0.7 * v[1]), 0.0); };
    PartialFn df = [](std::span<const int> o, std::span<const double> v) {
      auto d = [](int n, double a, double x) {
        switch (n) {
          case 0: return std::sin(a * x);
          case 1: return a * std::cos(a * x);
          default: return -a * a * std::sin(a * x);
        }
      };
      return cplx(d(o[0], 1.3, v[0]) * d(o[1], 0.7, v[1]), 0.0);
    };
    const std::vector<double> v{0.9, -1.4};
    double r = 0.0;
    for (auto w : {Factorization::mixed, Factorization::delta, Factorization::e_delta}) {
      r = std::max(r, factorization_residual(f, df, 2, w, v).residual);
    }
    add(out, S, "factorization_product_sine", r, 1e-8, "mixed, Delta and E Delta forms");
    double ratio = 0.0;
    const DerivBoundSpec specs[] = {{DerivBound::mixed_d, 2, 2, 0, 2, 0},
                                    {DerivBound::delta_d, 1, 1, 1, 2, 0},
                                    {DerivBound::e_delta_d, 1, 1, 1, 2, 0},
                                    {DerivBound::e_delta_d_second, 1, 1, 1, 2, 1}};
    for (const auto& sp : specs) {
      const auto rep = derivative_bound_check(f, df, sp, v);
      ratio = std::max(ratio, rep.lhs / rep.rhs_raw);
    }
    add(out, S, "derivative_bounds", ratio, 1.0, "lhs / rhs over the four bounds");
  }
  {
    auto f = [](std::span<const double> v) { return std::exp(-v[0] * v[0] - 0.5 * v[1] * v[1]) * std::cos(v[0] + v[1]); };
    const std::vector<double> br{-3.0, -1.5, 0.0, 1.5, 3.0};
    const auto nodes = num::panel_nodes(br, 20);
    const double collapsed = tensor_integrate({{num::Node{0.0, 1.0}}, nodes}, f, Exec::serial);
    const double direct = num::integrate([&](double y) { const double p[2] = {0.0, y}; return f(p); }, -3.0, 3.0, 1e-14).value;
    add(out, S, "dirac_collapse", std::abs(collapsed - direct), 1e-12, "delta(v_1) factor equals the zero section");
  }
  {
    const auto F = binomial_product(64, 2);
    const auto G = normal_product(2);
    const auto c = ConstantsK::defaults(2);
    const std::vector<double> om{15.0, 15.0};
    double ratio = 0.0;
    const double ts[5][2] = {{0.0, 0.0}, {0.5, -0.5}, {-1.0, 1.0}, {1.2, 0.3}, {-0.4, -1.5}};
    double plain0 = 0.0;
    for (const auto& t : ts) {
      const auto b = esseen_bound_k(F, G, om, t, c);
      if (t[0] == 0.0 && t[1] == 0.0) plain0 = b.bound;
      ratio = std::max(ratio, std::abs(F.cdf(t) - G.cdf(t)) / b.bound);
    }
    add(out, S, "plain_bound_dominates", ratio, 1.0, "5 points t, binomial(64)^2 vs normal");
    const auto axis = esseen::linear_grid(-3.0, 3.0, 25);
    const double sup = sup_cdf_distance_k(F, G, axis);
    const auto bA = esseen_bound_truncated(F, G, om, {10.0, 1.0, TruncTransform::bullet}, TruncMode::A, c);
    const auto bT = esseen_bound_truncated(F, G, om, {10.0, 1.0, TruncTransform::triangle}, TruncMode::A, c);
    add(out, S, "truncated_bound_dominates", sup / bA.bound, 1.0, "bound " + fmt(bA.bound) + ", sup " + fmt(sup));
    add(out, S, "plain_below_triangle_bound", plain0 / bT.bound, 1.0, "t = 0 against Delta/|v_triangle|");
    const auto bB = esseen_bound_truncated(F, G, om, {10.0, 1.0, TruncTransform::bullet}, TruncMode::B, c);
    Philox g(34, 0);
    double box = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double a[2] = {-2.5 + 4.0 * g.uniform(), -2.5 + 4.0 * g.uniform()};
      const double b[2] = {a[0] + 1.0, a[1] + 1.0};
      box = std::max(box, std::abs(box_measure(F, a, b) - box_measure(G, a, b)));
    }
    add(out, S, "box_bound_dominates", box / bB.bound, 1.0, "10 unit boxes");
    const auto bC = esseen_bound_slab(F, G, om, c);
    add(out, S, "slab_bound_dominates", sup / bC.bound, 1.0, "bound " + fmt(bC.bound));
    double trunc = 0.0;
    for (double Delta : {1.0, 1.5, 2.0}) {
      for (const auto& t : ts) {
        const double ts2[2] = {3.0 * t[0], 3.0 * t[1]};
        const double cl[2] = {std::clamp(ts2[0], -Delta, Delta), std::clamp(ts2[1], -Delta, Delta)};
        const double lhs = std::abs(F.cdf(ts2) - F.cdf(cl));
        const double rhs = 2.0 * std::pow(Delta, -F.moment.alpha) * F.moment.value;
        trunc = std::max(trunc, lhs / rhs);
      }
    }
    add(out, S, "truncation_inequality", trunc, 1.0, "|F(t) - F(t*)| <= k Delta^-alpha moment");
  }
  return out;
}

// ---------------------------------------------------------------------------

Checks clt_suite(Exec exec) {
  using namespace clt;
  constexpr const char* S = "clt";
  Checks out;
  const auto haar = haar_circle_law();

  {
    double r = 0.0;
    for (int i = 0; i <= 30; ++i) {
      const double x = 0.1 * i;
      r = std::max(r, std::abs(haar_cf(x) - std::cyl_bessel_j(0.0, x)));
    }
    add(out, S, "haar_cf_is_J0", r, 1e-14, "r in [0, 3]");
  }
  {
    double ratio = 0.0;
    double inadmissible = 0.0;
    std::vector<double> bounds;
    for (int N : {100, 400, 1600}) {
      for (int i = 0; i < 20; ++i) {
        const cplx xi = std::polar(0.05 * (i + 1), 0.7 * i);
        const auto g = gaussian_limit_gap(haar, constant_scheme(), N, xi);
        if (!g.admissible || !g.branch_ok) inadmissible += 1.0;
        ratio = std::max(ratio, g.gap / (2.0 / 3.0 / std::sqrt(static_cast<double>(N))));
        if (i == 0) bounds.push_back(g.bound);
      }
    }
    add(out, S, "haar_gap_below_proof_bound", ratio, 1.0, "gap / ((2/3) N^-1/2), N in {100, 400, 1600}");
    add(out, S, "haar_gap_admissible", inadmissible, 0.0);
    add(out, S, "proof_bound_halves", std::max(std::abs(bounds[0] / bounds[1] - 2.0), std::abs(bounds[1] / bounds[2] - 2.0)) / 2.0,
        0.1, "ratio of bounds when N quadruples");
  }
  {
    double z = 0.0;
    for (const auto& L : {haar, rademacher_square_law(), complex_gaussian_law(0.8)}) {
      const auto m = moment_estimates(L, 1000000, 41, exec);
      // Laws with constant |z| have zero spread; the floor keeps rounding from scoring.
      auto score = [](double d, double se) { return d / std::max(se, 1e-12); };
      z = std::max({z, score(std::abs(m.mean), m.se_mean),
                    score(std::abs(m.second_analytic - L.second_analytic), m.se_second_analytic),
                    score(std::abs(m.second_abs - 2.0 * L.beta * L.beta), m.se_second_abs),
                    score(std::abs(m.third_abs - L.rho3), m.se_third_abs)});
    }
    add(out, S, "law_moments", z, 4.0, "max z-score at 1e6 draws");
  }
  {
    const auto rep = vector_statistic(haar, constant_scheme(), {7, 100000, 400, exec});
    add(out, S, "haar_marginal_ks", std::max(rep.ks_re[0], rep.ks_im[0]), 0.01, "N = 400, 1e5 samples");
    add(out, S, "haar_covariance", rep.max_cov_z, 4.0, "z-score against 2 beta^2");
    add(out, S, "haar_analytic_second_vanishes", std::abs(rep.analytic_second[0]) / rep.analytic_second_se[0], 4.0);
    double rect = 0.0;
    for (const auto& rc : rep.rectangles) rect = std::max(rect, std::abs(rc.empirical - rc.limit) / rc.se);
    add(out, S, "haar_rectangles", rect, 5.0, "z-score of 9 quadrant probabilities");
    const double ks_real = real_statistic_ks(rademacher_real_law(std::sqrt(0.5)), constant_scheme(), {7, 100000, 400, exec});
    const auto sq = vector_statistic(rademacher_square_law(), constant_scheme(), {8, 100000, 400, exec});
    // Both statistics have the same lattice law at finite N, so they must agree up to sampling noise.
    add(out, S, "real_marginal_matches_real_path", std::abs(ks_real - sq.ks_re[0]), 2.0 * sq.ks_noise,
        "KS " + fmt(ks_real) + " vs " + fmt(sq.ks_re[0]) + " against N(0, 1/2)");
  }
  {
    const double w[] = {0.3, 1.1, 2.9, -0.7};
    ScalarScheme rot{[w](int j) { return std::polar(1.0 + 0.01 * j, w[j % 4]); }, {}};
    ScalarScheme abs{[](int j) { return cplx(1.0 + 0.01 * j, 0.0); }, {}};
    const auto a = lyapunov_normalizer(rot, 300), b = lyapunov_normalizer(abs, 300);
    const cplx xi(0.4, -0.5);
    const auto ga = gaussian_limit_gap(haar, rot, 300, xi), gb = gaussian_limit_gap(haar, abs, 300, xi);
    add(out, S, "phase_invariance",
        std::max({std::abs(a.s_N - b.s_N) / b.s_N, std::abs(a.lyapunov_sum - b.lyapunov_sum), std::abs(ga.bound - gb.bound),
                  std::abs(ga.gap - gb.gap)}),
        1e-12);
  }
  {
    double disagree = 0.0;
    for (const auto& s : {constant_scheme(), linear_scheme(), geometric_scheme()}) {
      const auto lo = lyapunov_normalizer(s, 10), hi = lyapunov_normalizer(s, 10000);
      const bool sum_zero = hi.lyapunov_sum < 0.1 * lo.lyapunov_sum;
      const bool ratio_zero = hi.ratio < 0.1 * lo.ratio;
      if (sum_zero != ratio_zero) disagree += 1.0;
    }
    add(out, S, "lyapunov_ratio_equivalence", disagree, 0.0, "constant, linear, geometric schemes");
  }
  {
    const auto V = alternating_scheme();
    double resid = 0.0, ratio = 0.0;
    std::vector<double> sums;
    for (int N : {10, 100, 1000, 10000}) {
      const auto st = lyapunov_normalizer(V, N);
      resid = std::max(resid, st.matrix_residual);
      sums.push_back(st.lyapunov_sum);
      for (const auto& xi : {std::vector<cplx>{0.5, cplx(0.0, 0.7)}, std::vector<cplx>{cplx(-0.9, 0.2), 0.3}}) {
        const auto g = gaussian_limit_gap(haar, V, N, xi);
        ratio = std::max(ratio, g.gap / g.bound);
      }
    }
    add(out, S, "vector_matrix_residual_even_N", resid, 1e-12);
    add(out, S, "vector_lyapunov_decreasing", sums.back() / sums.front(), 0.05, "sum at N = 1e4 over sum at N = 10");
    add(out, S, "vector_gap_below_proof_bound", ratio, 1.0);
  }
  {
    double bad = 0.0;
    Philox g(42, 0);
    for (int i = 0; i < 200; ++i) {
      IneqInputs in;
      in.t = 8.0 * g.uniform() - 4.0;
      in.n = static_cast<int>(g.next_u64() % 5);
      in.omega = 0.99 * g.uniform();
      in.beta = 0.2 + g.uniform();
      in.q = 1.5 + 3.0 * g.uniform();
      in.lambda = 1.0 + 3.0 * g.uniform();
      in.psi = 0.3 + 2.0 * g.uniform();
      in.z = std::polar(0.5 * g.uniform(), 2.0 * pi * g.uniform());
      for (int j = 0; j < 6; ++j) {
        in.x.push_back(2.0 * g.uniform());
        in.w.push_back(cplx(g.uniform() - 0.5, g.uniform() - 0.5));
      }
      for (Ineq id : {Ineq::taylor, Ineq::taylor_min, Ineq::log1p, Ineq::power_means, Ineq::lyapunov, Ineq::taylor_frac,
                      Ineq::norm_ratio, Ineq::exp_decay, Ineq::power_ratio}) {
        if (!inequality_toolbox(id, in).holds) bad += 1.0;
      }
    }
    add(out, S, "inequality_toolbox", bad, 0.0, "200 random inputs per inequality");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernels", "interpolation", "esseen1d", "esseen_k", "clt"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, const SuiteOptions& opt) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  Checks out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  auto append = [&](Checks c) { out.insert(out.end(), c.begin(), c.end()); };
  if (want("kernels")) append(kernels_suite(opt.exec));
  if (want("interpolation")) append(interpolation_suite());
  if (want("esseen1d")) append(esseen1d_suite(opt.exec));
  if (want("esseen_k")) append(esseen_k_suite());
  if (want("clt")) append(clt_suite(opt.exec));
  for (auto& c : out) {
    if (opt.tol) c.tolerance = *opt.tol;
    c.pass = c.measured <= c.tolerance;
  }
  return out;
}

}  // namespace bsx::verify
