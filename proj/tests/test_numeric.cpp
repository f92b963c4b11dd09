#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsx/numeric.hpp"
#include "bsx/rng.hpp"

using namespace bsx;

TEST_CASE("pairwise sum is exact on integers and order-fixed") {
  std::vector<double> xs(1001);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  CHECK(num::pairwise_sum(xs) == 500500.0);
  CHECK(num::pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("serial and parallel reductions agree bit for bit") {
  auto f = [](std::size_t i) { return std::sin(0.37 * static_cast<double>(i)) / (1.0 + static_cast<double>(i)); };
  for (std::size_t n : {1u, 7u, 1000u, 100003u}) {
    CHECK(num::sum_indexed(n, f, Exec::serial) == num::sum_indexed(n, f, Exec::parallel));
  }
  std::vector<double> a(5000), b(5000);
  num::map_indexed(a.size(), f, a, Exec::serial);
  num::map_indexed(b.size(), f, b, Exec::parallel);
  CHECK(a == b);
}

TEST_CASE("Gauss-Legendre panels integrate polynomials exactly") {
  const std::vector<double> br{-1.0, 0.25, 2.0};
  for (int order : {6, 10, 20, 30}) {
    const auto nodes = num::panel_nodes(br, order);
    const int deg = 2 * order - 1;
    double s = 0.0;
    for (const auto& n : nodes) s += n.w * std::pow(n.x, deg);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
  CHECK_THROWS(num::panel_nodes(br, 7));
}

TEST_CASE("adaptive quadrature") {
  const auto r = num::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(std::abs(r.value - std::sqrt(pi)) < 1e-12);
  const auto k = num::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(k.value - 2.0 / 3.0) < 1e-9);
}

TEST_CASE("breakpoint helpers") {
  const auto u = num::uniform_breaks(0.0, 1.0, 0.3);
  CHECK(u.front() == 0.0);
  CHECK(u.back() == 1.0);
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] - u[i - 1] <= 0.3 + 1e-15);
  const auto d = num::dyadic_breaks(4.0, 0.5, 6);
  CHECK(d.front() == 0.0);
  CHECK(d[1] == doctest::Approx(std::ldexp(1.0, -6)));
  CHECK(d.back() == 4.0);
}

TEST_CASE("normal cdf and sinc") {
  CHECK(num::normal_cdf(0.0) == doctest::Approx(0.5));
  for (double x : {-7.5, -3.1, -0.4, 0.9, 2.5, 6.0}) {
    CHECK(std::abs(num::normal_cdf(x) - 0.5 * std::erfc(-x / std::sqrt(2.0))) < 1e-15);
  }
  CHECK(num::sinc(0.0) == 1.0);
  CHECK(std::abs(num::sinc(1e-5) - std::sin(1e-5) / 1e-5) <= 2.3e-16);
}

TEST_CASE("Philox4x32-10 known answer") {
  // Zero counter and key, from the Random123 known-answer tests.
  const auto out = Philox::bijection({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("Philox streams are reproducible and distinct") {
  Philox a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  Philox g(1, 0);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = g.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
