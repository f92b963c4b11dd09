#include "bsx/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bsx/kernels.hpp"
#include "bsx/numeric.hpp"

namespace bsx::interp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Envelope constant C with |f(h)| <= C |h|^-p, read off the outermost nodes.
double edge_constant(const SampleSet& s, const std::vector<double>& data) {
  double c = 0.0;
  const int band = std::min(4, s.M);
  for (int j = 0; j < band; ++j) {
    for (int k : {s.M - j, -(s.M - j)}) {
      const double h = std::abs(s.node(k));
      c = std::max(c, std::abs(data[static_cast<std::size_t>(k + s.M)]) * std::pow(h, s.decay_p));
    }
  }
  return c;
}

// Upper bound for sum over k > M of h_k^-q / (h_k - |z|)^r with h_k = k * step.
double tail_sum(double step, int M, double q, double r, double z) {
  const double hM = M * step;
  const double gap = hM - std::abs(z);
  if (gap <= 0.0 || q <= 1.0) return kInf;
  return std::pow(gap, -r) * std::pow(hM, 1.0 - q) / ((q - 1.0) * step);
}

}  // namespace

void SampleSet::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("SampleSet: alpha must be positive");
  if (M < 1) throw std::invalid_argument("SampleSet: M must be >= 1");
  const auto n = static_cast<std::size_t>(2 * M + 1);
  if (values.size() != n) throw std::invalid_argument("SampleSet: expected 2M+1 values");
  if (layout == Layout::vaaler && derivs.size() != n) throw std::invalid_argument("SampleSet: expected 2M+1 derivatives");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampleSet: non-finite value");
  }
  for (double v : derivs) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampleSet: non-finite derivative");
  }
}

SampleSet SampleSet::sample_basic(const std::function<double(double)>& f, double alpha, int M, double decay_p) {
  SampleSet s;
  s.alpha = alpha;
  s.M = M;
  s.layout = Layout::basic;
  s.decay_p = decay_p;
  for (int k = -M; k <= M; ++k) s.values.push_back(f(s.node(k)));
  s.validate();
  return s;
}

SampleSet SampleSet::sample_vaaler(const std::function<double(double)>& f, const std::function<double(double)>& fp,
                                   double alpha, int M, double decay_p) {
  SampleSet s;
  s.alpha = alpha;
  s.M = M;
  s.layout = Layout::vaaler;
  s.decay_p = decay_p;
  for (int k = -M; k <= M; ++k) {
    s.values.push_back(f(s.node(k)));
    s.derivs.push_back(fp(s.node(k)));
  }
  s.validate();
  return s;
}

SeriesValue cardinal_series(const SampleSet& s, double z, CardinalMode mode, double tol) {
  s.validate();
  if (s.layout != Layout::basic) throw std::invalid_argument("cardinal_series: needs basic-layout samples");
  const double a = s.alpha;
  const double step = 1.0 / (2.0 * a);
  SeriesValue out;

  const double kz = z / step;
  const long knear = std::lround(kz);
  if (std::abs(z - knear * step) < kNodeWindow && std::abs(knear) <= s.M) {
    out.value = s.value(static_cast<int>(knear));
    return out;
  }

  const double C = edge_constant(s, s.values);
  if (mode == CardinalMode::basic) {
    // sin(2 pi a z) (-1)^k / (2 pi a (z - h_k)) = sinc(2 pi a (z - h_k))
    double acc = 0.0;
    for (int k = -s.M; k <= s.M; ++k) acc += s.value(k) * num::sinc(2.0 * pi * a * (z - s.node(k)));
    out.value = acc;
    out.err_est = C == 0.0 ? 0.0 : 2.0 * C / (2.0 * pi * a) * tail_sum(step, s.M, s.decay_p, 1.0, z);
  } else {
    if (!s.f0 || !s.fp0) throw std::invalid_argument("cardinal_series: extended mode needs f(0) and f'(0)");
    const double sn = std::sin(2.0 * pi * a * z) / (2.0 * pi * a);
    double acc = 0.0;
    for (int k = s.M; k >= 1; --k) {
      for (int kk : {k, -k}) {
        const double h = s.node(kk);
        const double sign = (kk % 2 == 0) ? 1.0 : -1.0;
        acc += sign * s.value(kk) * (z / (h * (z - h)));  // 1/(z-h) + 1/h
      }
    }
    // sin(2 pi a z)/(2 pi a) * f(0)/z = f(0) sinc(2 pi a z)
    out.value = *s.fp0 * sn + *s.f0 * num::sinc(2.0 * pi * a * z) + sn * acc;
    out.err_est = C == 0.0 ? 0.0
                           : 2.0 * C * std::abs(z) / (2.0 * pi * a) * tail_sum(step, s.M, s.decay_p + 1.0, 1.0, z);
  }
  out.converged = out.err_est <= tol;
  return out;
}

SeriesValue vaaler_interpolation(const SampleSet& s, double z, double tol) {
  s.validate();
  if (s.layout != Layout::vaaler) throw std::invalid_argument("vaaler_interpolation: needs value+derivative samples");
  const double a = s.alpha;
  const double step = 1.0 / a;
  SeriesValue out;

  const long knear = std::lround(z / step);
  const double dz = z - knear * step;
  if (std::abs(dz) < kNodeWindow && std::abs(knear) <= s.M) {
    const int k = static_cast<int>(knear);
    out.value = s.value(k) + s.deriv(k) * dz;
    return out;
  }

  double acc = 0.0;
  for (int k = -s.M; k <= s.M; ++k) {
    const double d = z - s.node(k);
    // (sin pi a z / pi a)^2 / d^2 = K(a d)
    const double Kd = kernels::fejer_K(a * d);
    acc += s.value(k) * Kd + s.deriv(k) * d * Kd;
  }
  out.value = acc;
  const double Cf = edge_constant(s, s.values);
  const double Cd = edge_constant(s, s.derivs);
  const double c = 1.0 / ((pi * a) * (pi * a));
  double err = 0.0;
  if (Cf > 0.0) err += 2.0 * Cf * c * tail_sum(step, s.M, s.decay_p, 2.0, z);
  if (Cd > 0.0) err += 2.0 * Cd * c * tail_sum(step, s.M, s.decay_p, 1.0, z);
  out.err_est = err;
  out.converged = err <= tol;
  return out;
}

namespace {

// T(w) = sum_{n>=1} 1/(n+w)^2 lies in [lo, lo + 1/(6 w^3)], lo = 1/w - 1/(2 w^2).
struct Bracket {
  double lo, hi;
};
Bracket refined_tail(double w) {
  const double lo = 1.0 / w - 0.5 / (w * w);
  return {lo, lo + 1.0 / (6.0 * w * w * w)};
}

IdentityReport fejer_identity(double x) {
  constexpr long M = 10000;
  const double s = std::sin(pi * x) / pi;
  const double sq = s * s;
  const long k0 = std::lround(x);
  double acc = 0.0;
  for (long n = M; n >= -M; --n) {
    if (n == k0) continue;
    const double d = x - static_cast<double>(n);
    acc += 1.0 / (d * d);
  }
  const auto t1 = refined_tail(static_cast<double>(M) - x);
  const auto t2 = refined_tail(static_cast<double>(M) + x);
  IdentityReport r;
  r.lhs = 1.0;
  r.rhs = kernels::fejer_K(x - static_cast<double>(k0)) + sq * (acc + 0.5 * (t1.lo + t1.hi + t2.lo + t2.hi));
  r.tail_bound = sq * 0.5 * ((t1.hi - t1.lo) + (t2.hi - t2.lo)) + 1e-15;
  r.residual = std::abs(r.lhs - r.rhs);
  r.holds = r.residual <= r.tail_bound + 1e-12;
  return r;
}

IdentityReport csc_identity(double w) {
  constexpr long M = 200000;
  IdentityReport r;
  r.lhs = pi / std::sin(pi * w);
  double acc = 0.0;
  for (long k = M; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * 2.0 * w / (w * w - kd * kd);  // pairs k and -k
  }
  r.rhs = 1.0 / w + acc;
  const double next = static_cast<double>(M + 1);
  r.tail_bound = std::abs(2.0 * w / (w * w - next * next));
  r.residual = std::abs(r.lhs - r.rhs);
  r.holds = r.residual <= r.tail_bound + 1e-13;
  return r;
}

IdentityReport sandwich(double w, bool refined) {
  if (!(w > 0.0)) throw std::invalid_argument("sandwich identities need omega > 0");
  IdentityReport r;
  r.middle = kernels::trigamma(w + 1.0);
  if (refined) {
    const auto b = refined_tail(w);
    r.lhs = b.lo;
    r.rhs = b.hi;
  } else {
    r.lhs = 1.0 / w - 1.0 / (w * w);
    r.rhs = 1.0 / w;
  }
  r.residual = std::min(r.middle - r.lhs, r.rhs - r.middle);
  r.holds = r.lhs < r.middle && r.middle < r.rhs;
  return r;
}

IdentityReport poisson(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("poisson check needs a > 0");
  IdentityReport r;
  const auto side = [](double scale) {
    double s = 0.0;
    for (int k = 60; k >= 1; --k) s += 2.0 * std::exp(-pi * scale * k * k);
    return 1.0 + s;
  };
  r.lhs = side(a);
  r.rhs = side(1.0 / a) / std::sqrt(a);
  r.residual = std::abs(r.lhs - r.rhs);
  r.tail_bound = 4.0 * std::exp(-pi * std::min(a, 1.0 / a) * 61.0 * 61.0);
  r.holds = r.residual <= 1e-12;
  return r;
}

IdentityReport parseval(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("parseval check needs alpha > 0");
  // f(x) = K(alpha x): samples at k/(2 alpha) are K(k/2) = 4/(pi k)^2 for odd k, 0 for even k != 0.
  constexpr long M = 200000;
  double odd = 0.0;
  for (long k = 2 * M - 1; k >= 1; k -= 2) {
    const double v = kernels::fejer_K(0.5 * static_cast<double>(k));
    odd += v * v;
  }
  const double tail_samples = 16.0 / std::pow(pi, 4) * 0.5 / (3.0 * std::pow(2.0 * M - 1.0, 3));
  IdentityReport r;
  r.lhs = (1.0 + 2.0 * (odd + 0.5 * tail_samples)) / (2.0 * alpha);

  // Integral of K^2 over |x| <= X by unit panels, tail with the mean of sin^4 = 3/8.
  constexpr double X = 200.0;
  num::QuadResult q;
  for (int i = 0; i < static_cast<int>(X); ++i) {
    const auto part = num::integrate([](double x) { const double k = kernels::fejer_K(x); return k * k; },
                                     static_cast<double>(i), static_cast<double>(i + 1), 1e-15);
    q.value += part.value;
    q.err += part.err;
  }
  const double tail_max = 2.0 / (3.0 * std::pow(pi, 4) * X * X * X);
  const double integral = 2.0 * (q.value + 0.375 * tail_max);
  r.rhs = integral / alpha;
  r.tail_bound = (2.0 * q.err + 0.625 * 2.0 * tail_max + tail_samples) / alpha;
  r.middle = 2.0 / (3.0 * alpha);
  r.residual = std::abs(r.lhs - r.rhs);
  r.holds = r.residual <= r.tail_bound + 1e-12;
  return r;
}

IdentityReport bernstein(double x) {
  // |f'(x)| <= sqrt(2 alpha) (2 pi alpha)^m / sqrt(1 + 2m) ||f||_2 with f = K, alpha = m = 1.
  IdentityReport r;
  r.lhs = std::abs(kernels::fejer_K_prime(x));
  r.rhs = std::sqrt(2.0) * (2.0 * pi / std::sqrt(3.0)) * std::sqrt(2.0 / 3.0);
  r.residual = r.rhs - r.lhs;
  r.holds = r.residual >= 0.0;
  return r;
}

}  // namespace

IdentityReport classical_identity_residual(Identity which, double arg) {
  switch (which) {
    case Identity::csc: return csc_identity(arg);
    case Identity::fejer: return fejer_identity(arg);
    case Identity::sandwich: return sandwich(arg, false);
    case Identity::refined_sandwich: return sandwich(arg, true);
    case Identity::poisson: return poisson(arg);
    case Identity::parseval_sampling: return parseval(arg);
    case Identity::bernstein: return bernstein(arg);
  }
  throw std::invalid_argument("classical_identity_residual: unknown identity");
}

}  // namespace bsx::interp
