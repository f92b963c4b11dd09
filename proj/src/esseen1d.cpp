#include "bsx/esseen1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsx::esseen {

namespace {

double abs_moment_normal(double sigma, double alpha) {
  // E|sigma Z|^alpha
  return std::pow(sigma, alpha) * std::pow(2.0, alpha / 2.0) * std::tgamma((alpha + 1.0) / 2.0) / std::sqrt(pi);
}

}  // namespace

Distribution1D normal_law(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_law: sigma must be positive");
  Distribution1D d;
  d.name = "normal";
  d.cdf = [mu, sigma](double t) { return num::normal_cdf(t, mu, sigma); };
  d.cf = [mu, sigma](double z) { return std::exp(cplx(-0.5 * sigma * sigma * z * z, mu * z)); };
  d.density_bound = 1.0 / (sigma * std::sqrt(2.0 * pi));
  d.moment = {2.0, mu * mu + sigma * sigma};
  return d;
}

Distribution1D standardized_binomial(int n) {
  if (n < 1) throw std::invalid_argument("standardized_binomial: n must be >= 1");
  auto cum = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) + 1);
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  const double lgn = std::lgamma(n + 1.0) - n * std::log(2.0);
  for (int j = 0; j <= n; ++j) pmf[static_cast<std::size_t>(j)] = std::exp(lgn - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0));
  // Accumulate from both ends toward the middle so each tail keeps full relative accuracy.
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    acc += pmf[static_cast<std::size_t>(j)];
    (*cum)[static_cast<std::size_t>(j)] = acc;
  }
  double upper = 0.0;
  for (int j = n; j > n / 2; --j) {
    (*cum)[static_cast<std::size_t>(j - 1)] = 1.0 - (upper += pmf[static_cast<std::size_t>(j)]);
  }
  (*cum)[static_cast<std::size_t>(n)] = 1.0;

  const double half = 0.5 * n;
  const double scale = 0.5 * std::sqrt(static_cast<double>(n));
  Distribution1D d;
  d.name = "binomial";
  d.cdf = [cum, n, half, scale](double t) {
    const double s = half + t * scale;
    const double j = std::floor(s + 1e-9 * std::max(1.0, std::abs(s)));
    if (j < 0.0) return 0.0;
    if (j >= n) return 1.0;
    return (*cum)[static_cast<std::size_t>(j)];
  };
  d.cdf_left = [cum, n, half, scale](double t) {
    const double s = half + t * scale;
    const double j = std::ceil(s - 1e-9 * std::max(1.0, std::abs(s))) - 1.0;
    if (j < 0.0) return 0.0;
    if (j >= n) return 1.0;
    return (*cum)[static_cast<std::size_t>(j)];
  };
  const double rn = std::sqrt(static_cast<double>(n));
  d.cf = [n, rn](double z) { return cplx(std::pow(std::cos(z / rn), n), 0.0); };
  d.moment = {2.0, 1.0};
  for (int j = 0; j <= n; ++j) {
    d.atoms.push_back((j - half) / scale);
    d.masses.push_back(pmf[static_cast<std::size_t>(j)]);
  }
  return d;
}

Distribution1D standardized_irwin_hall(int n) {
  if (n < 1 || n > 40) throw std::invalid_argument("standardized_irwin_hall: n must lie in [1, 40]");
  const double sigma = std::sqrt(n / 12.0);
  // F(y) = (1/n!) sum_{k <= y} (-1)^k C(n,k) (y-k)^n for y in [0, n]; reflected above n/2.
  const auto raw = [n](long double y) {
    long double s = 0.0L;
    long double binom = 1.0L;
    for (int k = 0; k <= n && k <= y; ++k) {
      const long double term = binom * std::pow(y - k, static_cast<long double>(n));
      s += (k % 2 == 0) ? term : -term;
      binom = binom * (n - k) / (k + 1);
    }
    return s / std::tgamma(static_cast<long double>(n) + 1.0L);
  };
  Distribution1D d;
  d.name = "irwin_hall";
  d.cdf = [raw, n, sigma](double t) {
    const long double y = static_cast<long double>(t) * sigma + 0.5L * n;
    if (y <= 0.0L) return 0.0;
    if (y >= n) return 1.0;
    const long double v = (y <= 0.5L * n) ? raw(y) : 1.0L - raw(n - y);
    return static_cast<double>(std::clamp(v, 0.0L, 1.0L));
  };
  d.cf = [n, sigma](double z) { return cplx(std::pow(num::sinc(z / (2.0 * sigma)), n), 0.0); };
  d.moment = {2.0, 1.0};
  return d;
}

Distribution1D point_mass(double a) {
  Distribution1D d;
  d.name = "point_mass";
  d.cdf = [a](double t) { return t >= a ? 1.0 : 0.0; };
  d.cdf_left = [a](double t) { return t > a ? 1.0 : 0.0; };
  d.cf = [a](double z) { return std::exp(cplx(0.0, a * z)); };
  d.moment = {2.0, a * a};
  d.atoms = {a};
  d.masses = {1.0};
  return d;
}

PVResult pv_integral(const std::function<cplx(double)>& h, double A, double tol) {
  if (!(A > 0.0)) throw std::invalid_argument("pv_integral: A must be positive");
  // Symmetric pairing: the odd singular part cancels inside g.
  const auto g = [&h](double v) { return h(v) + h(-v); };
  PVResult res;
  int quiet = 0;
  double hi = A;
  for (int j = 0; j < 64; ++j) {
    const double lo = 0.5 * hi;
    const auto re = num::integrate([&g](double v) { return g(v).real(); }, lo, hi, 0.01 * tol);
    const auto im = num::integrate([&g](double v) { return g(v).imag(); }, lo, hi, 0.01 * tol);
    const cplx piece(re.value, im.value);
    res.value += piece;
    res.err += re.err + im.err;
    hi = lo;
    // Cauchy criterion under eps -> eps/2: the dyadic increments must die out.
    quiet = std::abs(piece) < 0.01 * tol ? quiet + 1 : 0;
    if (quiet >= 4) {
      res.err += hi * std::abs(g(hi));  // what remains on (0, hi)
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  return res;
}

PVResult pv_integral_real(const std::function<double(double)>& h, double A, double tol) {
  return pv_integral([&h](double v) { return cplx(h(v), 0.0); }, A, tol);
}

namespace {

void check_pair(const Distribution1D& F, const ComparisonTarget& G) {
  if (!F.cf || !G.cf) throw std::invalid_argument("esseen_bound_1d: both laws need a characteristic function");
  if (!G.density_bound) throw std::invalid_argument("esseen_bound_1d: comparison target needs a density bound");
  if (F.moment.alpha != G.moment.alpha || !(F.moment.alpha > 0.0)) {
    throw std::invalid_argument("esseen_bound_1d: moment records must share a positive order");
  }
}

}  // namespace

BoundReport1D esseen_bound_1d(const Distribution1D& F, const ComparisonTarget& G, double omega, double tol,
                              EsseenConstants c) {
  check_pair(F, G);
  if (!(omega > 0.0)) throw std::invalid_argument("esseen_bound_1d: omega must be positive");
  BoundReport1D r;
  r.omega = omega;
  r.constants = c;
  r.tail_term = c.c2 * *G.density_bound / omega;

  const double at = std::min(F.moment.alpha, 1.0);
  // integral |x|^at dF <= max(1, integral |x|^alpha dF)
  const double MF = std::max(1.0, F.moment.value);
  const double MG = std::max(1.0, G.moment.value);
  const double holder = 2.0 * (MF + MG);  // |phi - psi| <= holder |zeta|^at

  // Over |zeta| < eps the integrand is at most holder |zeta|^(at-1); both sides give 2 holder eps^at / at.
  double eps = std::pow(0.1 * tol * at / (2.0 * c.c1 * holder), 1.0 / at);
  eps = std::min(eps, 0.5 * omega);
  r.exclusion_eps = eps;
  r.exclusion_err = c.c1 * 2.0 * holder * std::pow(eps, at) / at;

  const auto diff = [&F, &G](double z) { return std::abs(F.cf(z) - G.cf(z)); };

  // Hoelder budget probe on a log mesh.
  for (int i = 0; i <= 200; ++i) {
    const double z = eps * std::pow(omega / eps, i / 200.0);
    if (diff(z) > holder * std::pow(z, at) * (1.0 + 1e-12) + 1e-15) r.holder_ok = false;
  }

  std::vector<double> br{eps};
  const double top = std::min(1.0, omega);
  for (double x = top; x > eps; x *= 0.5) br.push_back(x);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  if (omega > top) {
    const auto rest = num::uniform_breaks(top, omega, 0.5);
    br.insert(br.end(), rest.begin() + 1, rest.end());
  }
  const auto f = [&diff](double z) { return diff(z) / z; };
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const auto q = num::integrate(f, br[i], br[i + 1], 1e-3 * tol / static_cast<double>(br.size()));
    r.integral += 2.0 * q.value;  // even integrand: both half-lines
    r.integral_err += 2.0 * q.err;
  }
  r.bound = c.c1 * (r.integral + r.integral_err) + r.exclusion_err + r.tail_term;
  return r;
}

BoundReport1D optimize_omega(const Distribution1D& F, const ComparisonTarget& G, int j_min, int j_max, double tol,
                             EsseenConstants c) {
  if (j_min > j_max) throw std::invalid_argument("optimize_omega: empty exponent range");
  BoundReport1D best;
  best.bound = std::numeric_limits<double>::infinity();
  bool holder_ok = true;
  for (int j = j_min; j <= j_max; ++j) {
    auto r = esseen_bound_1d(F, G, std::ldexp(1.0, j), tol, c);
    holder_ok = holder_ok && r.holder_ok;
    if (r.bound < best.bound) best = r;
  }
  best.holder_ok = holder_ok;
  return best;
}

Distribution1D gaussian_mollify(const Distribution1D& F, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("gaussian_mollify: eps must be positive");
  Distribution1D d;
  d.name = F.name + "*N_eps";
  auto base = std::make_shared<Distribution1D>(F);
  d.cf = [base, eps](double z) { return std::exp(-0.5 * eps * eps * z * z) * base->cf(z); };

  double total_mass = 0.0;
  for (double m : F.masses) total_mass += m;
  if (!F.masses.empty() && std::abs(total_mass - 1.0) < 1e-12) {
    d.cdf = [base, eps](double t) {
      std::vector<double> terms(base->atoms.size());
      for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = base->masses[i] * num::normal_cdf((t - base->atoms[i]) / eps);
      return num::pairwise_sum(terms);
    };
  } else {
    d.cdf = [base, eps](double t) {
      // integral F(t - eps u) phi(u) du over |u| <= 9
      const auto q = num::integrate([&](double u) { return base->cdf(t - eps * u) * num::normal_pdf(u); }, -9.0, 9.0, 1e-13);
      return std::clamp(q.value + num::normal_cdf(-9.0), 0.0, 1.0);
    };
  }
  const double own = 1.0 / (eps * std::sqrt(2.0 * pi));
  d.density_bound = F.density_bound ? std::min(*F.density_bound, own) : own;
  const double a = F.moment.alpha;
  // E|Q + X|^a <= 2^a E|Q|^a + 2^a E|X|^a
  d.moment = {a, std::pow(2.0, a) * (F.moment.value + abs_moment_normal(eps, a))};
  return d;
}

double sup_cdf_distance(const Distribution1D& F, const Distribution1D& G, const std::vector<double>& grid) {
  if (grid.empty()) return 0.0;
  double best = 0.0;
  for (double t : grid) best = std::max(best, std::abs(F.cdf(t) - G.cdf(t)));
  const double lo = grid.front();
  const double hi = grid.back();
  for (const auto* law : {&F, &G}) {
    for (double a : law->atoms) {
      if (a < lo || a > hi) continue;
      best = std::max(best, std::abs(F.cdf(a) - G.cdf(a)));
      best = std::max(best, std::abs(F.left(a) - G.left(a)));
    }
  }
  return best;
}

std::vector<double> linear_grid(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linear_grid: need at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

std::vector<HarnessRow> convergence_harness_1d(const std::function<Distribution1D(int)>& family,
                                               const ComparisonTarget& G, const std::vector<int>& indices,
                                               const std::vector<double>& grid, Exec exec) {
  std::vector<HarnessRow> rows(indices.size());
  const auto one = [&](std::size_t i) {
    const auto F = family(indices[i]);
    HarnessRow r;
    r.index = indices[i];
    r.distance = sup_cdf_distance(F, G, grid);
    r.bound = optimize_omega(F, G);
    constexpr double h = 0.01;
    for (int s = -1000; s < 1000; ++s) {
      const double z = s * h;
      r.holder_increment = std::max(r.holder_increment, std::abs(F.cf(z + h) - F.cf(z)));
    }
    rows[i] = r;
  };
  const auto n = static_cast<long long>(indices.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return rows;
}

}  // namespace bsx::esseen
