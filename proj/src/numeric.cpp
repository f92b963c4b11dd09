#include "bsx/numeric.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <stdexcept>

namespace bsx::num {

namespace {

double pairwise_rec(const double* p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_rec(p, h) + pairwise_rec(p + h, n - h);
}

template <unsigned N>
void append_rule(std::vector<Node>& out, double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  // Boost stores the nonnegative half of a symmetric rule.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) {
      out.push_back({c, r * ws[i]});
    } else {
      out.push_back({c - r * xs[i], r * ws[i]});
      out.push_back({c + r * xs[i], r * ws[i]});
    }
  }
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_rec(xs.data(), xs.size()); }

void map_indexed(std::size_t n, const std::function<double(std::size_t)>& f,
                 std::span<double> out, Exec exec) {
  if (out.size() < n) throw std::invalid_argument("map_indexed: output too small");
  const auto sn = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < sn; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < sn; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  }
}

double sum_indexed(std::size_t n, const std::function<double(std::size_t)>& f, Exec exec) {
  std::vector<double> v(n);
  map_indexed(n, f, v, exec);
  return pairwise_sum(v);
}

namespace {

void gk_recurse(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, unsigned depth, QuadResult& acc) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double e = 0.0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &e);
  // Boost reports the single-panel error on the reference interval.
  e *= 0.5 * (b - a);
  if (depth == 0 || e <= std::max(abs_tol, rel_tol * std::abs(v))) {
    acc.value += v;
    acc.err += e;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_recurse(f, a, m, 0.5 * abs_tol, rel_tol, depth - 1, acc);
  gk_recurse(f, m, b, 0.5 * abs_tol, rel_tol, depth - 1, acc);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol,
                     unsigned max_depth) {
  QuadResult acc;
  if (a == b) return acc;
  gk_recurse(f, a, b, tol, 1e-15, max_depth, acc);
  return acc;
}

std::vector<Node> panel_nodes(std::span<const double> breaks, int order) {
  std::vector<Node> out;
  out.reserve(breaks.size() * static_cast<std::size_t>(order));
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    switch (order) {
      case 6: append_rule<6>(out, a, b); break;
      case 10: append_rule<10>(out, a, b); break;
      case 20: append_rule<20>(out, a, b); break;
      case 30: append_rule<30>(out, a, b); break;
      default: throw std::invalid_argument("panel_nodes: unsupported order");
    }
  }
  return out;
}

std::vector<double> uniform_breaks(double a, double b, double h) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h - 1e-12)));
  std::vector<double> br(n + 1);
  for (std::size_t i = 0; i <= n; ++i) br[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  br.back() = b;
  return br;
}

std::vector<double> dyadic_breaks(double b, double h, int levels) {
  std::vector<double> br{0.0};
  const double top = std::min(1.0, b);
  for (int j = levels; j >= 1; --j) {
    const double x = std::ldexp(top, -j);
    br.push_back(x);
  }
  br.push_back(top);
  if (b > top) {
    auto rest = uniform_breaks(top, b, h);
    br.insert(br.end(), rest.begin() + 1, rest.end());
  }
  return br;
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * pi));
}

}  // namespace bsx::num
