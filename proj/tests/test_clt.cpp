#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bsx/clt.hpp"
#include "oracles.hpp"

using namespace bsx::clt;
using bsx::cplx;
using bsx::Exec;

TEST_CASE("Haar circle cf is J0") {
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.1 * i;
    CHECK(std::abs(haar_cf(r) - std::cyl_bessel_j(0.0, r)) < 1e-14);
  }
  CHECK(std::abs(haar_cf(2.404826)) < 1e-6);
  const auto L = haar_circle_law();
  CHECK(std::abs(complex_cf(L, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(complex_cf(L, std::polar(2.404826, 0.9))) < 1e-6);
  CHECK(L.beta * L.beta == doctest::Approx(0.5));
  CHECK(L.rho3 == 1.0);
  CHECK(L.second_analytic == 0.0);
}

TEST_CASE("cf is Hermitian") {
  for (const auto& L : {haar_circle_law(), rademacher_square_law(), complex_gaussian_law(0.7)}) {
    for (cplx xi : {cplx(0.3, 0.4), cplx(-1.2, 2.0), cplx(0.0, -0.8)}) {
      CHECK(std::abs(complex_cf(L, -xi) - std::conj(complex_cf(L, xi))) < 1e-14);
    }
  }
  // the complex Gaussian has exp(-beta^2 |xi|^2 / 2)
  const auto G = complex_gaussian_law(0.7);
  const cplx xi(0.5, -1.1);
  CHECK(std::abs(complex_cf(G, xi) - std::exp(-0.49 * std::norm(xi) / 2.0)) < 1e-14);
}

TEST_CASE("Lyapunov statistics of the reference schemes") {
  const auto c = lyapunov_normalizer(constant_scheme(), 400);
  CHECK(c.s_N == doctest::Approx(20.0));
  CHECK(c.lyapunov_sum == doctest::Approx(0.05));
  CHECK(c.ratio == doctest::Approx(0.05));
  const int N = 50;
  const auto l = lyapunov_normalizer(linear_scheme(), N);
  CHECK(l.s_N * l.s_N == doctest::Approx(N * (N + 1.0) * (2.0 * N + 1.0) / 6.0));
  CHECK(lyapunov_normalizer(linear_scheme(), 5000).lyapunov_sum < l.lyapunov_sum);
  const auto g = lyapunov_normalizer(geometric_scheme(), 60);
  CHECK(g.ratio == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-6));
  CHECK(std::isfinite(lyapunov_normalizer(geometric_scheme(), 5000).log_s_N));
  ScalarScheme zero{[](int) { return cplx(0.0); }, {}};
  CHECK_THROWS_AS(lyapunov_normalizer(zero, 10), std::invalid_argument);
}

TEST_CASE("gap at the origin vanishes") {
  const auto g = gaussian_limit_gap(haar_circle_law(), constant_scheme(), 400, 0.0);
  CHECK(g.gap == doctest::Approx(0.0));
}

TEST_CASE("Haar gap against an independent J0 product") {
  const int N = 400;
  const auto g = gaussian_limit_gap(haar_circle_law(), constant_scheme(), N, 1.0);
  const double direct = std::abs(N * std::log(std::cyl_bessel_j(0.0, 1.0 / 20.0)) + 0.25);
  CHECK(g.gap == doctest::Approx(direct).epsilon(1e-10));
  CHECK(g.bound == doctest::Approx(1.0 / 30.0));
  CHECK(g.admissible);
  CHECK(g.gap <= g.bound);
}

TEST_CASE("gap scales like N^-1/2") {
  const auto L = haar_circle_law();
  for (int N : {100, 400, 1600}) {
    for (int i = 0; i < 20; ++i) {
      const cplx xi = std::polar(0.05 * (i + 1), 0.7 * i);
      const auto g = gaussian_limit_gap(L, constant_scheme(), N, xi);
      CHECK(g.admissible);
      CHECK(g.gap <= 2.0 / 3.0 / std::sqrt(static_cast<double>(N)));
    }
  }
  CHECK_THROWS_AS(gaussian_limit_gap(L, constant_scheme(), 100, 2.0), std::invalid_argument);
}

TEST_CASE("alternating vector scheme") {
  const auto V = alternating_scheme();
  const auto s = lyapunov_normalizer(V, 1000);
  CHECK(s.sigma_N == doctest::Approx(std::sqrt(1000.0)));
  CHECK(s.matrix_residual < 1e-12);
  CHECK(lyapunov_normalizer(V, 10000).lyapunov_sum < s.lyapunov_sum);
  const std::vector<cplx> xi{0.5, cplx(0.0, 0.7)};
  const auto g = gaussian_limit_gap(haar_circle_law(), V, 1000, xi);
  CHECK(g.gap <= g.bound);
}

TEST_CASE("inequality toolbox examples") {
  IneqInputs a;
  a.n = 0;
  a.t = oracle::pi;
  const auto r1 = inequality_toolbox(Ineq::taylor, a);
  CHECK(r1.holds);
  CHECK(r1.lhs == doctest::Approx(2.0));
  CHECK(r1.rhs == doctest::Approx(oracle::pi));

  IneqInputs b;
  b.x = {1.0, 1.0};
  b.lambda = 2.0;
  const auto r3 = inequality_toolbox(Ineq::power_means, b);
  CHECK(r3.holds);
  REQUIRE(r3.chain.size() == 5);
  CHECK(r3.chain[0] == doctest::Approx(1.0));
  CHECK(r3.chain[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(r3.chain[2] == doctest::Approx(2.0));
  CHECK(r3.chain[3] == doctest::Approx(2.0));
  CHECK(r3.chain[4] == doctest::Approx(2.0));

  IneqInputs c;
  c.z = 0.3;
  const auto r2 = inequality_toolbox(Ineq::log1p, c);
  CHECK(r2.holds);
  CHECK(r2.lhs == doctest::Approx(std::abs(std::log(1.3) - 0.3)).epsilon(1e-12));
  CHECK(r2.lhs == doctest::Approx(0.03764).epsilon(1e-3));
  CHECK(r2.rhs == doctest::Approx(0.09));

  c.z = 0.6;
  CHECK_THROWS_AS(inequality_toolbox(Ineq::log1p, c), std::invalid_argument);
}

TEST_CASE("exp-decay constant is the sup") {
  const double C = exp_decay_constant(2, 1.0, 3.0);
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double t = 20.0 * i / 100000.0;
    best = std::max(best, t * t * std::exp(-std::pow(t, 2.0 / 2.0) / 2.0));
  }
  CHECK(C == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("KS distance formula") {
  auto Phi = [](double x) { return oracle::normal_cdf(x); };
  const std::vector<double> one{0.0};
  CHECK(ks_distance(one, Phi) == doctest::Approx(0.5));
  const std::vector<double> three{-1.0, 0.0, 1.0};
  double expect = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const double F = Phi(three[static_cast<std::size_t>(i - 1)]);
    expect = std::max({expect, i / 3.0 - F, F - (i - 1) / 3.0});
  }
  CHECK(ks_distance(three, Phi) == doctest::Approx(expect));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, Phi), std::invalid_argument);
}

TEST_CASE("KS of exact samples is at the noise level") {
  bsx::Philox g(3, 0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = g.normal();
  std::sort(xs.begin(), xs.end());
  CHECK(ks_distance(xs, [](double x) { return oracle::normal_cdf(x); }) < 1.63 / 100.0);
}

TEST_CASE("Monte Carlo is deterministic across execution modes") {
  const auto L = haar_circle_law();
  const auto a = vector_statistic(L, constant_scheme(), {7, 2000, 50, Exec::serial});
  const auto b = vector_statistic(L, constant_scheme(), {7, 2000, 50, Exec::parallel});
  CHECK(a.ks_re == b.ks_re);
  CHECK(a.ks_im == b.ks_im);
  CHECK(a.max_cov_z == b.max_cov_z);
  const auto c = vector_statistic(L, constant_scheme(), {8, 2000, 50, Exec::serial});
  CHECK(a.ks_re != c.ks_re);
}

TEST_CASE("N = 1 statistic is the law itself") {
  const auto rep = vector_statistic(haar_circle_law(), constant_scheme(), {11, 20000, 1, Exec::parallel});
  REQUIRE(rep.covariance.size() == 1);
  const auto& e = rep.covariance[0];
  CHECK(std::abs(e.empirical.real() - 1.0) < 1e-12);  // |T| = 1 exactly
}

TEST_CASE("Haar Monte Carlo at N = 400") {
  const auto rep = vector_statistic(haar_circle_law(), constant_scheme(), {7, 100000, 400, Exec::parallel});
  CHECK(rep.ks_re[0] <= 0.01);
  CHECK(rep.ks_im[0] <= 0.01);
  CHECK(rep.max_cov_z <= 4.0);
  CHECK(std::abs(rep.analytic_second[0]) <= 4.0 * rep.analytic_second_se[0]);
}
