#include "bsx/kernels.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsx::kernels {

namespace {

using Rational = boost::rational<boost::multiprecision::cpp_int>;

constexpr double kInvPi = 1.0 / pi;
constexpr double kSingularWindow = 1e-4;

double s2(double x) {  // (sin pi x / pi)^2
  const double s = num::sin_pi(x) / pi;
  return s * s;
}

// Shared table of B_0..B_64; the asymptotic series never needs more.
const BernoulliTable& shared_bernoulli() {
  static const BernoulliTable table = bernoulli_numbers(64);
  return table;
}

const OddZetaTable& shared_zeta() {
  static const OddZetaTable table = OddZetaTable::build(40);
  return table;
}

// Sum_{k>=1} B_{2k} x^{-2k-1}: trigamma(x) minus its 1/x + 1/(2x^2) part.
double bernoulli_tail(double x, int pairs) {
  const auto& B = shared_bernoulli();
  const double inv2 = 1.0 / (x * x);
  double p = 1.0 / (x * x * x);
  double s = 0.0;
  for (int k = 1; k <= pairs; ++k) {
    s += B[static_cast<std::size_t>(2 * k)] * p;
    p *= inv2;
  }
  return s;
}

struct Neumaier {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

void KernelConfig::validate() const {
  if (series_terms < 10) throw std::invalid_argument("series_terms must be >= 10");
  if (asymptotic_pairs < 1 || asymptotic_pairs > 30) throw std::invalid_argument("asymptotic_pairs must lie in [1, 30]");
  if (!(crossover_x0 >= 1.0)) throw std::invalid_argument("crossover_x0 must be >= 1");
  if (!(taylor_radius > 0.0 && taylor_radius <= 0.5)) throw std::invalid_argument("taylor_radius must lie in (0, 0.5]");
  if (taylor_terms < 1 || taylor_terms > 40) throw std::invalid_argument("taylor_terms must lie in [1, 40]");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

BernoulliTable bernoulli_numbers(int n) {
  if (n < 2) throw std::invalid_argument("bernoulli_numbers: n must be >= 2");
  std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    // sum_{j<=m} C(m+1, j) B_j = 0
    Rational acc = 0;
    boost::multiprecision::cpp_int binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      acc += Rational(binom) * b[static_cast<std::size_t>(j)];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[static_cast<std::size_t>(m)] = -acc / Rational(m + 1);
  }
  BernoulliTable t;
  t.values.reserve(b.size());
  for (const auto& r : b) {
    t.values.push_back(static_cast<double>(boost::multiprecision::cpp_rational(r.numerator(), r.denominator())));
  }
  return t;
}

OddZetaTable OddZetaTable::build(int m_max, double tol) {
  if (m_max < 1) throw std::invalid_argument("OddZetaTable: m_max must be >= 1");
  (void)tol;  // direct part plus six Euler-Maclaurin corrections is below 1e-17 for s >= 3
  const auto& B = shared_bernoulli();
  constexpr int kDirect = 20;
  OddZetaTable t;
  for (int m = 1; m <= m_max; ++m) {
    const double s = 2.0 * m + 1.0;
    double direct = 0.0;
    for (int n = kDirect - 1; n >= 1; --n) direct += std::pow(static_cast<double>(n), -s);
    const double N = kDirect;
    double tail = std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    double rising = s;
    double fact = 2.0;
    for (int k = 1; k <= 6; ++k) {
      tail += B[static_cast<std::size_t>(2 * k)] / fact * rising * std::pow(N, -s - 2.0 * k + 1.0);
      rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
      fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    t.values.push_back(direct + tail);
  }
  return t;
}

double fejer_K(double x) {
  const double u = pi * x;
  if (std::abs(u) < kSingularWindow) {
    const double u2 = u * u;
    return 1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 45.0;
  }
  const double s = num::sin_pi(x) / u;
  return s * s;
}

double fejer_K_prime(double x) {
  const double u = pi * x;
  if (std::abs(u) < 1e-3) {
    const double u2 = u * u;
    return 2.0 * pi * (1.0 - u2 / 6.0) * (-u / 3.0 + u * u2 / 30.0);
  }
  const double sn = num::sin_pi(x);
  return 2.0 * pi * (sn / u) * (u * std::cos(u) - sn) / (u * u);
}

double trigamma(double x, const KernelConfig& cfg) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: x must be positive");
  double shift = 0.0;
  while (x < cfg.crossover_x0) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  return shift + 1.0 / x + 0.5 / (x * x) + bernoulli_tail(x, cfg.asymptotic_pairs);
}

namespace {

// x >= 0 only.
double W_fast_pos(double x, const KernelConfig& cfg) {
  if (x <= cfg.taylor_radius) {
    const auto& Z = shared_zeta();
    const double x2 = x * x;
    double p = x * x2;
    double s = 2.0 * x;
    for (int m = 1; m <= cfg.taylor_terms; ++m) {
      s += 4.0 * m * Z.zeta(m) * p;
      p *= x2;
    }
    return fejer_K(x) * s;
  }
  double br;
  if (x >= cfg.crossover_x0) {
    br = bernoulli_tail(x, cfg.asymptotic_pairs);
  } else {
    br = 0.5 / (x * x) - 1.0 / x + trigamma(x + 1.0, cfg);
  }
  return 1.0 - 2.0 * s2(x) * br;
}

// x >= 0 only.
Bracketed W_oracle_pos(double x, const KernelConfig& cfg) {
  if (x == 0.0) return {0.0, 0.0};
  const long N = cfg.series_terms;
  const long k0 = std::lround(x);
  const double sq = s2(x);
  Neumaier acc;
  for (long k = N; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    if (k == k0) {
      acc.add(-1.0 / ((x + kd) * (x + kd)));
    } else {
      const double d = kd * kd - x * x;
      acc.add(4.0 * kd * x / (d * d));
    }
  }
  acc.add(2.0 / x);
  // Tail: T(N - x) - T(N + x) with T(w) = sum_{n>=1} 1/(n+w)^2.
  const double w1 = static_cast<double>(N) - x;
  const double w2 = static_cast<double>(N) + x;
  const double L1 = 1.0 / w1 - 0.5 / (w1 * w1);
  const double L2 = 1.0 / w2 - 0.5 / (w2 * w2);
  const double lo = L1 - (L2 + 1.0 / (6.0 * w2 * w2 * w2));
  const double hi = L1 + 1.0 / (6.0 * w1 * w1 * w1) - L2;
  double value = sq * (acc.value() + 0.5 * (lo + hi));
  if (k0 >= 1) value += fejer_K(x - static_cast<double>(k0));
  const double err = sq * 0.5 * (hi - lo) + 4e-16 * (1.0 + std::abs(value));
  return {value, err};
}

}  // namespace

double W_eval(double x, const KernelConfig& cfg, WMode mode) {
  if (mode == WMode::oracle) return W_oracle(x, cfg).value;
  return x < 0.0 ? -W_fast_pos(-x, cfg) : W_fast_pos(x, cfg);
}

Bracketed W_oracle(double x, const KernelConfig& cfg) {
  if (x < 0.0) {
    auto r = W_oracle_pos(-x, cfg);
    r.value = -r.value;
    return r;
  }
  return W_oracle_pos(x, cfg);
}

double B_eval(double x, const KernelConfig& cfg) { return W_eval(x, cfg) + fejer_K(x); }
double b_eval(double x, const KernelConfig& cfg) { return W_eval(x, cfg) - fejer_K(x); }
double S_eval(double ell, double x, const KernelConfig& cfg) {
  return 0.5 * (B_eval(x, cfg) + B_eval(ell - x, cfg));
}
double sigma_eval(double ell, double x, const KernelConfig& cfg) {
  return 0.5 * (b_eval(x, cfg) + b_eval(ell - x, cfg));
}

double kernel_family_eval(KernelKind kind, double x, const KernelConfig& cfg) {
  if ((kind.tag == Tag::S || kind.tag == Tag::sigma) && !(kind.ell > 0.0)) {
    throw std::invalid_argument("kernel_family_eval: ell must be positive");
  }
  switch (kind.tag) {
    case Tag::K: return fejer_K(x);
    case Tag::W: return W_eval(x, cfg);
    case Tag::B: return B_eval(x, cfg);
    case Tag::b: return b_eval(x, cfg);
    case Tag::S: return S_eval(kind.ell, x, cfg);
    case Tag::sigma: return sigma_eval(kind.ell, x, cfg);
  }
  return 0.0;
}

double S_integer_direct(int ell, double x) {
  if (ell < 1) throw std::invalid_argument("S_integer_direct: ell must be >= 1");
  const long k0 = std::lround(x);
  const double sq = s2(x);
  double s = 0.0;
  double near = 0.0;
  for (int k = 0; k <= ell; ++k) {
    if (k == k0) {
      near = fejer_K(x - k);
    } else {
      s += 1.0 / ((x - k) * (x - k));
    }
  }
  // A/z + B/(l - z) with A = B = 1; each term vanishes at its own pole.
  double poles = 0.0;
  if (x != 0.0) poles += sq / x;
  if (x != static_cast<double>(ell)) poles += sq / (ell - x);
  return near + sq * s + poles;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
double chi(double x, double ell) { return (x >= 0.0 && x <= ell) ? 1.0 : 0.0; }

double Q_eval(double v) {
  const double a = std::abs(v);
  if (a > 1.0) return 0.0;
  if (a < kSingularWindow) {
    const double v2 = v * v;
    return kInvPi - (1.0 - a) * (pi * v2 / 3.0 + pi * pi * pi * v2 * v2 / 45.0);
  }
  const double u = 1.0 - a;
  if (u < kSingularWindow) {
    const double u2 = u * u;
    return a * (pi * u2 / 3.0 + pi * pi * pi * u2 * u2 / 45.0);
  }
  return a * kInvPi + u * a / std::tan(pi * a);
}

double T_eval(double v) {
  const double a = std::abs(v);
  if (a > 1.0) return 0.0;
  if (a < kSingularWindow) {
    return -(1.0 - a) * (pi * v / 3.0 + pi * pi * pi * v * v * v / 45.0);
  }
  return (Q_eval(v) - kInvPi) / v;
}

cplx R_B(double v) {
  if (std::abs(v) > 1.0) return {0.0, 0.0};
  return {1.0 - std::abs(v), -T_eval(v)};
}

cplx R_b(double v) {
  if (std::abs(v) > 1.0) return {0.0, 0.0};
  return {-(1.0 - std::abs(v)), -T_eval(v)};
}

double R_sup() {
  double best = 0.0;
  constexpr int n = 10000;
  for (int i = 0; i <= n; ++i) best = std::max(best, std::abs(R_B(static_cast<double>(i) / n)));
  return best;
}

double lambda_constant(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lambda_constant: tol must be positive");
  const auto g = [](double xi) { return std::hypot(Q_eval(xi), xi * (1.0 - xi)); };
  constexpr int n = 10000;
  int best = 0;
  double gbest = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const double v = g(static_cast<double>(i) / n);
    if (v > gbest) {
      gbest = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1.0) / n);
  double b = std::min(1.0, (best + 1.0) / n);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > 1e-3 * tol) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  return std::max({gbest, gc, gd});
}

num::QuadResult fourier_W_check(double x, const KernelConfig& cfg) {
  const double w = 2.0 * pi * x;
  const auto f = [w](double v) { return Q_eval(v) * w * num::sinc(w * v); };
  // Panels of about one oscillation keep each GK panel well resolved.
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(x))));
  num::QuadResult acc;
  for (int i = 0; i < panels; ++i) {
    const auto r = num::integrate(f, static_cast<double>(i) / panels, static_cast<double>(i + 1) / panels,
                                  0.1 * cfg.tol / panels);
    acc.value += r.value;
    acc.err += r.err;
  }
  acc.value *= 2.0;
  acc.err *= 2.0;
  return acc;
}

namespace {
double extra_term(int ell, double x) {
  // s2(x) * ell / (x (ell - x)) = s2(x) * (1/x + 1/(ell - x)), both removable.
  const double sq = s2(x);
  double v = 0.0;
  if (std::abs(x) < kSingularWindow) {
    v += x * (1.0 - pi * pi * x * x / 3.0);  // s2/x ~ x - pi^2 x^3/3
  } else {
    v += sq / x;
  }
  const double y = ell - x;
  if (std::abs(y) < kSingularWindow) {
    v += y * (1.0 - pi * pi * y * y / 3.0);
  } else {
    v += sq / y;
  }
  return v;
}
}  // namespace

double extremal_family_value(int ell, double eta, double x, const KernelConfig& cfg) {
  return S_eval(ell, x, cfg) + eta * extra_term(ell, x);
}

ExtremalReport extremal_family_check(int ell, double eta, std::span<const double> grid, double R,
                                     const KernelConfig& cfg) {
  if (ell < 1) throw std::invalid_argument("extremal_family_check: ell must be >= 1");
  ExtremalReport rep;
  rep.R = R;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double slack = extremal_family_value(ell, eta, x, cfg) - chi(x, ell);
    rep.min_slack = std::min(rep.min_slack, slack);
    if (slack < -1e-14) rep.majorant_holds = false;
  }
  if (R > 0.0) {
    // Unit panels with breaks at the integers keep the integrand smooth per panel.
    const auto f = [ell](double x) { return extra_term(ell, x); };
    std::vector<double> br{-R};
    for (double k = std::floor(-R) + 1.0; k < R; k += 1.0) br.push_back(k);
    br.push_back(R);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const auto r = num::integrate(f, br[i], br[i + 1], 1e-13);
      rep.extra_integral += r.value;
      rep.extra_err += r.err;
    }
  }
  return rep;
}

std::vector<double> sweep(KernelKind kind, std::span<const double> xs, const KernelConfig& cfg, Exec exec) {
  std::vector<double> out(xs.size());
  num::map_indexed(xs.size(), [&](std::size_t i) { return kernel_family_eval(kind, xs[i], cfg); }, out, exec);
  return out;
}

}  // namespace bsx::kernels
