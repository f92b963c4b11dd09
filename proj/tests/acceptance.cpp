// One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "bsx/clt.hpp"
#include "bsx/esseen1d.hpp"
#include "bsx/esseen_multi.hpp"
#include "bsx/interpolation.hpp"
#include "bsx/kernels.hpp"
#include "bsx/rng.hpp"

using namespace bsx;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || s <= limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("AC%-2d %s  %s (%.2f s%s) %s\n", id, pass ? "PASS" : "FAIL", title, s,
              in_time ? "" : ", over time limit", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> uniform_points(std::size_t n, double a, double b, std::uint64_t seed) {
  Philox g(seed, 0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = a + (b - a) * g.uniform();
  return xs;
}

num::QuadResult integrate_unit_panels(const std::function<double(double)>& f, double a, double b,
                                      std::vector<double> br = {}) {
  for (double x = std::ceil(a); x < b; x += 1.0) br.push_back(x);
  br.push_back(a);
  br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  num::QuadResult r;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const auto q = num::integrate(f, br[i], br[i + 1], 1e-13);
    r.value += q.value;
    r.err += q.err;
  }
  return r;
}

// [value - err, value + tail + err] contains 1 and err <= 1e-6.
bool brackets_one(const num::QuadResult& q, double tail) {
  return q.value - q.err <= 1.0 && 1.0 <= q.value + tail + q.err && q.err <= 1e-6;
}

Outcome ac1() {
  const double lam = kernels::lambda_constant(5e-8);
  const double rounded = std::round(lam * 1e7) / 1e7;
  return {std::abs(rounded - 0.3263598) < 1e-12, fmt("lambda = %.10f", lam)};
}

Outcome ac2() {
  using namespace kernels;
  constexpr double X = 50.0;
  const double tail = 4.0 / (pi * pi * X);
  const auto up = integrate_unit_panels([](double x) { return B_eval(x) - sgn(x); }, -X, X);
  const auto lo = integrate_unit_panels([](double x) { return sgn(x) - b_eval(x); }, -X, X);
  bool ok = brackets_one(up, tail) && brackets_one(lo, tail);
  for (double ell : {1.0, 2.0, 7.5}) {
    const double t = 2.0 / (pi * pi * X) + 2.0 / (pi * pi * (X - ell));
    const auto su = integrate_unit_panels([ell](double x) { return S_eval(ell, x) - chi(x, ell); }, -X, X, {0.0, ell});
    const auto sl = integrate_unit_panels([ell](double x) { return chi(x, ell) - sigma_eval(ell, x); }, -X, X, {0.0, ell});
    ok = ok && brackets_one(su, t) && brackets_one(sl, t);
  }
  return {ok, fmt("integral of B - sgn over [-50, 50] = %.8f", up.value)};
}

Outcome ac3() {
  using namespace kernels;
  double w = 0.0;
  for (double x : uniform_points(1000, -30.0, 30.0, 101)) w = std::max(w, std::abs(W_eval(x) - W_oracle(x).value));
  double f = std::max(std::abs(fourier_W_check(0.5).value - 8.0 / (pi * pi)),
                      std::abs(fourier_W_check(-0.5).value + 8.0 / (pi * pi)));
  for (int i = 0; i < 23; ++i) {
    const double x = -6.0 + 12.0 * i / 22.0 + 0.017;
    f = std::max(f, std::abs(fourier_W_check(x).value - W_eval(x)));
  }
  return {w <= 1e-10 && f <= 1e-8, fmt("fast vs oracle %.2e", w) + fmt(", Fourier %.2e", f)};
}

Outcome ac4() {
  using namespace kernels;
  const KernelConfig cfg;
  const auto xs = uniform_points(100000, -50.0, 50.0, 102);
  const auto Bv = sweep({Tag::B}, xs, cfg, Exec::parallel);
  const auto bv = sweep({Tag::b}, xs, cfg, Exec::parallel);
  const auto Wv = sweep({Tag::W}, xs, cfg, Exec::parallel);
  long bad = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i], s = sgn(x), K = fejer_K(x);
    bad += !(num::leq(bv[i], s, 1e-15) && num::leq(s, Bv[i], 1e-15));
    bad += !(num::leq(std::abs(Bv[i] - s), 2.0 * K, 1e-15));
    bad += x > 0 ? !(num::leq(1.0 - K, Wv[i], 1e-15) && num::leq(Wv[i], 1.0, 1e-15))
                 : !(num::leq(-1.0, Wv[i], 1e-15) && num::leq(Wv[i], -1.0 + K, 1e-15));
  }
  for (double ell : {0.5, 1.0, 2.0, 7.5}) {
    const auto Sv = sweep({Tag::S, ell}, xs, cfg, Exec::parallel);
    const auto sv = sweep({Tag::sigma, ell}, xs, cfg, Exec::parallel);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double c = chi(xs[i], ell);
      bad += !(num::leq(sv[i], c, 1e-15) && num::leq(c, Sv[i], 1e-15));
    }
  }
  Philox g(103, 0);
  long nonstrict = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::floor(-50.0 + 100.0 * g.uniform()) + 0.001 + 0.998 * g.uniform();
    nonstrict += !(B_eval(x) > sgn(x) && b_eval(x) < sgn(x));
  }
  return {bad == 0 && nonstrict == 0,
          "violations " + std::to_string(bad) + ", non-strict " + std::to_string(nonstrict)};
}

Outcome ac5() {
  using namespace interp;
  const auto csc = classical_identity_residual(Identity::csc, 0.37);
  const auto fej = classical_identity_residual(Identity::fejer, 0.37);
  const auto par = classical_identity_residual(Identity::parseval_sampling, 1.0);
  const auto poi = classical_identity_residual(Identity::poisson, 2.0);
  double q = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double v = i / 10000.0;
    q = std::max(q, std::abs(kernels::Q_eval(v) + kernels::Q_eval(1.0 - v) - 1.0 / pi));
  }
  const bool ok = csc.residual <= 1e-8 && fej.residual <= 1e-8 && par.residual <= 1e-8 &&
                  std::abs(par.lhs - 2.0 / 3.0) <= 1e-8 && std::abs(par.rhs - 2.0 / 3.0) <= 1e-8 &&
                  poi.residual <= 1e-12 && q <= 1e-12;
  return {ok, fmt("csc %.1e", csc.residual) + fmt(", Fejer %.1e", fej.residual) + fmt(", Parseval %.1e", par.residual) +
                  fmt(", Poisson %.1e", poi.residual) + fmt(", Q %.1e", q)};
}

Outcome ac6() {
  using namespace esseen;
  const auto G = normal_law();
  const auto grid = linear_grid(-5.0, 5.0, 2001);
  double prev = 1e300;
  bool ok = true;
  std::string detail;
  for (int n : {25, 100, 400}) {
    const auto F = standardized_binomial(n);
    const auto b = optimize_omega(F, G);
    double worst = 0.0;
    for (double t : grid) worst = std::max({worst, std::abs(F.cdf(t) - G.cdf(t)), std::abs(F.left(t) - G.left(t))});
    worst = std::max(worst, sup_cdf_distance(F, G, grid));
    ok = ok && worst <= b.bound && b.bound < prev;
    prev = b.bound;
    detail += "n=" + std::to_string(n) + fmt(" %.4f", worst) + fmt(" <= %.4f; ", b.bound);
  }
  return {ok, detail};
}

Outcome ac7() {
  using namespace multi;
  Philox g(104, 0);
  double resid = 0.0;
  long exact_bad = 0;
  using R = boost::rational<long long>;
  for (int k = 2; k <= 4; ++k) {
    const auto ring = selberg_ring_expansion(k);
    for (int t = 0; t < 100; ++t) {
      Assignment<double> a;
      Assignment<R> q;
      for (int j = 0; j < k; ++j) {
        a.chi.push_back(2.0 * g.uniform() - 1.0);
        a.delta.push_back(2.0 * g.uniform() - 1.0);
        a.eps.push_back(2.0 * g.uniform() - 1.0);
        auto draw = [&] { return R(static_cast<long long>(g.next_u64() % 19) - 9, static_cast<long long>(g.next_u64() % 7) + 1); };
        q.chi.push_back(draw());
        q.delta.push_back(draw());
        q.eps.push_back(draw());
      }
      resid = std::max(resid, std::abs(ring_identity_residual(ring, a)));
      exact_bad += ring_identity_residual_exact(ring, q) != R(0);
    }
  }
  const auto r2 = selberg_ring_expansion(2);
  const std::vector<std::vector<Sym>> five{{Sym::delta, Sym::eps}, {Sym::eps, Sym::delta}, {Sym::chi, Sym::delta},
                                           {Sym::delta, Sym::chi}, {Sym::eps, Sym::eps}};
  bool set_ok = r2.S.size() == 5;
  for (const auto& w : five) {
    set_ok = set_ok && std::any_of(r2.S.begin(), r2.S.end(), [&](const Monomial& m) { return m.w == w && m.multiplicity == 1; });
  }
  return {resid <= 1e-12 && exact_bad == 0 && set_ok,
          fmt("residual %.1e", resid) + ", exact failures " + std::to_string(exact_bad) + (set_ok ? ", five monomials" : ", k=2 set differs")};
}

Outcome ac8() {
  using namespace multi;
  Philox g(105, 0);
  double r = 0.0;
  const Op ops[] = {Op::D, Op::E, Op::P, Op::Delta};
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::pair<std::vector<double>, double>> terms;
    for (int t = 0; t < 6; ++t) {
      std::vector<double> m(static_cast<std::size_t>(k));
      for (auto& x : m) x = std::floor(5.0 * g.uniform()) - 2.0;
      terms.emplace_back(m, 2.0 * g.uniform() - 1.0);
    }
    FieldK f = [terms](std::span<const double> v) {
      cplx s = 0.0;
      for (const auto& [m, c] : terms) {
        double ph = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) ph += m[j] * v[j];
        s += c * std::exp(cplx(0.0, ph));
      }
      return s;
    };
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(static_cast<std::size_t>(k));
      for (auto& x : v) x = 6.0 * g.uniform() - 3.0;
      auto A = [&](std::initializer_list<OpAt> w) { return apply_operator(std::vector<OpAt>(w), f, v); };
      for (int j = 0; j < k; ++j) {
        r = std::max({r, std::abs(A({{Op::D, j}, {Op::E, j}})), std::abs(A({{Op::D, j}, {Op::P, j}})),
                      std::abs(A({{Op::D, j}, {Op::Delta, j}}) - A({{Op::D, j}})),
                      std::abs(A({{Op::E, j}, {Op::P, j}}) - A({{Op::P, j}})), std::abs(A({{Op::P, j}, {Op::Delta, j}})),
                      std::abs(f(v) - A({{Op::D, j}}) - A({{Op::E, j}, {Op::Delta, j}}) - A({{Op::P, j}}))});
        for (Op o : ops) r = std::max(r, std::abs(A({{o, j}, {o, j}}) - A({{o, j}})));
        for (int i = 0; i < k; ++i) {
          for (Op a : ops) {
            for (Op b : ops) r = std::max(r, std::abs(A({{a, i}, {b, j}}) - A({{b, j}, {a, i}})));
          }
        }
      }
    }
  }
  // Phases keep D (the odd part) from annihilating the test function.
  FieldK f = [](std::span<const double> v) { return cplx(std::cos(1.3 * v[0] + 0.4) * std::cos(0.7 * v[1] - 0.2), 0.0); };
  PartialFn df = [](std::span<const int> o, std::span<const double> v) {
    auto d = [](int n, double a, double p, double x) {
      if (n == 0) return std::cos(a * x + p);
      if (n == 1) return -a * std::sin(a * x + p);
      return -a * a * std::cos(a * x + p);
    };
    return cplx(d(o[0], 1.3, 0.4, v[0]) * d(o[1], 0.7, -0.2, v[1]), 0.0);
  };
  double fr = 0.0, scale = 0.0;
  for (const auto& v : {std::vector<double>{0.9, -1.4}, std::vector<double>{-0.3, 2.1}, std::vector<double>{1.7, 0.6}}) {
    for (auto w : {Factorization::mixed, Factorization::delta, Factorization::e_delta}) {
      const auto rep = factorization_residual(f, df, 2, w, v);
      fr = std::max(fr, rep.residual);
      scale = std::max(scale, std::abs(rep.lhs));
    }
  }
  return {r <= 1e-12 && fr <= 1e-8 && scale > 1e-3,
          fmt("algebra %.1e", r) + fmt(", factorization %.1e", fr) + fmt(" (|lhs| up to %.3f)", scale)};
}

Outcome ac9() {
  using namespace multi;
  const auto F = binomial_product(64, 2);
  const auto G = normal_product(2);
  const auto c = ConstantsK::defaults(2);
  const std::vector<double> om{15.0, 15.0};
  bool ok = true;
  const double ts[5][2] = {{0.0, 0.0}, {0.5, -0.5}, {-1.0, 1.0}, {1.2, 0.3}, {-0.4, -1.5}};
  double plain = 0.0;
  for (const auto& t : ts) {
    const auto b = esseen_bound_k(F, G, om, t, c);
    ok = ok && std::isfinite(b.bound) && std::abs(F.cdf(t) - G.cdf(t)) <= b.bound;
    plain = std::max(plain, b.bound);
  }
  const double sup = sup_cdf_distance_k(F, G, esseen::linear_grid(-3.0, 3.0, 25));
  const auto A = esseen_bound_truncated(F, G, om, {10.0, 1.0, TruncTransform::bullet}, TruncMode::A, c);
  ok = ok && std::isfinite(A.bound) && sup <= A.bound;
  const auto B = esseen_bound_truncated(F, G, om, {10.0, 1.0, TruncTransform::bullet}, TruncMode::B, c);
  Philox g(106, 0);
  double box = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double a[2] = {-2.5 + 4.0 * g.uniform(), -2.5 + 4.0 * g.uniform()};
    const double b[2] = {a[0] + 1.0, a[1] + 1.0};
    box = std::max(box, std::abs(box_measure(F, a, b) - box_measure(G, a, b)));
  }
  ok = ok && std::isfinite(B.bound) && box <= B.bound;
  const auto C = esseen_bound_slab(F, G, om, c);
  ok = ok && std::isfinite(C.bound) && sup <= C.bound;
  return {ok, fmt("sup %.4f", sup) + fmt("; plain %.3g", plain) + fmt(", A %.3g", A.bound) + fmt(", B %.3g", B.bound) +
                  fmt(" (box %.4f)", box) + fmt(", slab %.3g", C.bound)};
}

Outcome ac10() {
  using namespace clt;
  const auto L = haar_circle_law();
  bool ok = true;
  double ratio = 0.0;
  for (int N : {100, 400, 1600}) {
    for (int i = 0; i < 20; ++i) {
      const cplx xi = std::polar(0.05 * (i + 1), 0.7 * i);
      const auto g = gaussian_limit_gap(L, constant_scheme(), N, xi, 1.0);
      const double lim = 2.0 / 3.0 / std::sqrt(static_cast<double>(N));
      ok = ok && g.gap <= lim;
      ratio = std::max(ratio, g.gap / lim);
    }
  }
  const auto rep = vector_statistic(L, constant_scheme(), {7, 100000, 400, Exec::parallel});
  const double ks = std::max(rep.ks_re[0], rep.ks_im[0]);
  ok = ok && ks <= 0.01 && rep.max_cov_z <= 4.0;
  return {ok, fmt("gap / bound %.3f", ratio) + fmt(", KS %.4f", ks) + fmt(", covariance z %.2f", rep.max_cov_z)};
}

Outcome ac11() {
  using namespace clt;
  const auto V = alternating_scheme();
  const auto L = haar_circle_law();
  std::vector<double> resid, sums;
  double ratio = 0.0;
  for (int N : {10, 100, 1000, 10000}) {
    const auto st = lyapunov_normalizer(V, N);
    resid.push_back(st.matrix_residual);
    sums.push_back(st.lyapunov_sum);
    for (const auto& xi : {std::vector<cplx>{0.5, cplx(0.0, 0.7)}, std::vector<cplx>{cplx(-0.9, 0.2), 0.3},
                           std::vector<cplx>{cplx(0.6, 0.6), cplx(-0.1, -0.95)}}) {
      const auto g = gaussian_limit_gap(L, V, N, xi);
      ratio = std::max(ratio, g.gap / g.bound);
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sums.size(); ++i) decreasing = decreasing && sums[i] < sums[i - 1];
  const double rmax = *std::max_element(resid.begin(), resid.end());
  return {rmax <= 1e-12 && decreasing && sums.back() < 0.05 * sums.front() && ratio <= 1.0,
          fmt("matrix residual %.1e", rmax) + fmt(", Lyapunov sum at 1e4 %.2e", sums.back()) + fmt(", gap / bound %.3f", ratio)};
}

}  // namespace

int main() {
  criterion(1, "lambda to seven decimals", 1.0, ac1);
  criterion(2, "L1 excess integrals bracket 1", 10.0, ac2);
  criterion(3, "W fast path, oracle and Fourier form agree", 0.0, ac3);
  criterion(4, "majorant and minorant suites", 0.0, ac4);
  criterion(5, "classical identities and Q reflection", 0.0, ac5);
  criterion(6, "one-variable bound for binomial vs normal", 30.0, ac6);
  criterion(7, "ring expansion identity", 0.0, ac7);
  criterion(8, "difference operator algebra and factorization", 0.0, ac8);
  criterion(9, "k = 2 bounds dominate measured discrepancies", 300.0, ac9);
  criterion(10, "Haar circle CLT gap and Monte Carlo", 60.0, ac10);
  criterion(11, "vector CLT, alternating scheme", 0.0, ac11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
