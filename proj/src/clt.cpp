#include "bsx/clt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsx::clt {

double haar_cf(double r, int nodes) {
  double s = 0.0;
  for (int m = 0; m < nodes; ++m) {
    const double th = 2.0 * pi * (m + 0.5) / nodes;
    s += std::cos(r * std::cos(th));
  }
  return s / nodes;
}

double haar_cf_error(double r) { return std::abs(haar_cf(r, 64) - haar_cf(r, 128)); }

ComplexLaw haar_circle_law() {
  ComplexLaw L;
  L.name = "haar_circle";
  L.sample = [](Philox& g) { return std::polar(1.0, 2.0 * pi * g.uniform()); };
  L.cf = [](cplx xi) { return cplx(haar_cf(std::abs(xi)), 0.0); };
  L.beta = std::sqrt(0.5);
  L.rho3 = 1.0;
  return L;
}

ComplexLaw rademacher_square_law() {
  ComplexLaw L;
  L.name = "rademacher_square";
  const double a = 1.0 / std::sqrt(2.0);
  L.sample = [a](Philox& g) {
    const std::uint64_t u = g.next_u64();
    return cplx((u & 1u) ? a : -a, (u & 2u) ? a : -a);
  };
  // Re(conj(xi) z) = Re(xi) Re(z) + Im(xi) Im(z).
  L.cf = [a](cplx xi) { return cplx(std::cos(a * xi.real()) * std::cos(a * xi.imag()), 0.0); };
  L.beta = a;
  L.rho3 = 1.0;
  return L;
}

ComplexLaw complex_gaussian_law(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("complex_gaussian_law: beta must be positive");
  ComplexLaw L;
  L.name = "complex_gaussian";
  L.sample = [beta](Philox& g) {
    const double x = g.normal();
    const double y = g.normal();
    return cplx(beta * x, beta * y);
  };
  L.cf = [beta](cplx xi) { return cplx(std::exp(-0.5 * beta * beta * std::norm(xi)), 0.0); };
  L.beta = beta;
  L.rho3 = 3.0 * std::sqrt(pi / 2.0) * beta * beta * beta;
  return L;
}

cplx complex_cf(const ComplexLaw& law, cplx xi) { return law.cf(xi); }

ScalarScheme constant_scheme(cplx c) {
  return {[c](int) { return c; }, {}};
}

ScalarScheme linear_scheme() {
  return {[](int j) { return cplx(j, 0.0); }, [](int j) { return std::log(static_cast<double>(j)); }};
}

ScalarScheme geometric_scheme() {
  return {[](int j) { return cplx(std::ldexp(1.0, j), 0.0); }, [](int j) { return j * std::log(2.0); }};
}

VectorScheme alternating_scheme() {
  VectorScheme s;
  s.J = 2;
  s.row = [](int n) { return (n % 2 == 1) ? std::vector<cplx>{1.0, 0.0} : std::vector<cplx>{0.0, 1.0}; };
  s.sigma = [](int N) { return std::sqrt(static_cast<double>(N)); };
  s.beta_targets = {0.5, 0.5};
  return s;
}

namespace {

std::vector<double> log_abs_all(const ScalarScheme& s, int N) {
  if (N < 1) throw std::invalid_argument("lyapunov_normalizer: N must be >= 1");
  std::vector<double> la(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) {
    la[static_cast<std::size_t>(j - 1)] = s.log_abs ? s.log_abs(j) : std::log(std::abs(s.b(j)));
  }
  return la;
}

}  // namespace

ScalarStats lyapunov_normalizer(const ScalarScheme& s, int N) {
  const auto la = log_abs_all(s, N);
  const double top = *std::max_element(la.begin(), la.end());
  if (!std::isfinite(top)) throw std::invalid_argument("lyapunov_normalizer: all coefficients vanish");
  // Scale by the largest coefficient so that s^2 and the cubes stay in range.
  std::vector<double> sq(la.size()), cube(la.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double a = std::exp(la[i] - top);
    sq[i] = a * a;
    cube[i] = a * a * a;
  }
  const double s_scaled = std::sqrt(num::pairwise_sum(sq));
  ScalarStats st;
  st.log_s_N = top + std::log(s_scaled);
  st.s_N = std::exp(st.log_s_N);
  st.lyapunov_sum = num::pairwise_sum(cube) / (s_scaled * s_scaled * s_scaled);
  st.ratio = 1.0 / s_scaled;
  return st;
}

VectorStats lyapunov_normalizer(const VectorScheme& s, int N) {
  if (N < 1) throw std::invalid_argument("lyapunov_normalizer: N must be >= 1");
  const auto J = static_cast<std::size_t>(s.J);
  const double sigma = s.sigma(N);
  if (!(sigma > 0.0)) throw std::invalid_argument("lyapunov_normalizer: sigma_N must be positive");
  std::vector<cplx> gram(J * J, 0.0);
  std::vector<double> cubes, proof;
  double D = 0.0;
  bool nonzero = false;
  for (int n = 1; n <= N; ++n) {
    const auto b = s.row(n);
    if (b.size() != J) throw std::invalid_argument("lyapunov_normalizer: row length");
    double c1 = 0.0, c3 = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      const double a = std::abs(b[j]);
      c1 += a;
      c3 += a * a * a;
      for (std::size_t l = 0; l < J; ++l) gram[j * J + l] += b[j] * std::conj(b[l]);
    }
    nonzero = nonzero || c1 > 0.0;
    D = std::max(D, c1);
    cubes.push_back(c3);
    proof.push_back(c1 * c1 * c1);
  }
  if (!nonzero) throw std::invalid_argument("lyapunov_normalizer: all coefficients vanish");
  VectorStats st;
  st.sigma_N = sigma;
  const double s3 = sigma * sigma * sigma;
  st.lyapunov_sum = num::pairwise_sum(cubes) / s3;
  st.proof_sum = num::pairwise_sum(proof) / s3;
  st.ratio = D / sigma;
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t l = 0; l < J; ++l) {
      const double target = (j == l && j < s.beta_targets.size()) ? s.beta_targets[j] : 0.0;
      st.matrix_residual = std::max(st.matrix_residual, std::abs(gram[j * J + l] / (sigma * sigma) - target));
    }
  }
  return st;
}

namespace {

// Sum of principal logarithms of phi(U); flags factors outside the disk |1 - w| < 1.
cplx log_product(const ComplexLaw& law, const std::vector<cplx>& U, bool& branch_ok) {
  std::vector<double> re(U.size()), im(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) {
    const cplx w = law.cf(U[i]);
    if (std::abs(1.0 - w) >= 1.0) branch_ok = false;
    const cplx l = std::log(w);
    re[i] = l.real();
    im[i] = l.imag();
  }
  return {num::pairwise_sum(re), num::pairwise_sum(im)};
}

}  // namespace

GapReport gaussian_limit_gap(const ComplexLaw& law, const ScalarScheme& s, int N, cplx xi, double A) {
  if (std::abs(xi) > A * (1.0 + 1e-12)) throw std::invalid_argument("gaussian_limit_gap: |xi| exceeds A");
  const auto st = lyapunov_normalizer(s, N);
  std::vector<cplx> U(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) U[static_cast<std::size_t>(j - 1)] = std::conj(s.b(j)) * xi / st.s_N;
  GapReport r;
  const double b2 = law.beta * law.beta;
  const cplx lg = log_product(law, U, r.branch_ok);
  r.gap = std::abs(lg + 0.5 * b2 * std::norm(xi));
  const double rho = law.rho();
  r.bound = 2.0 / 3.0 * law.rho3 * A * A * A * st.lyapunov_sum;
  const double AB = A * st.ratio;
  r.admissibility = 4.0 * b2 * AB * AB + 2.0 * std::pow(rho * A, 3) * st.lyapunov_sum;
  r.admissible = r.admissibility < 1.0;
  return r;
}

GapReport gaussian_limit_gap(const ComplexLaw& law, const VectorScheme& s, int N, std::span<const cplx> xi,
                             double A) {
  if (xi.size() != static_cast<std::size_t>(s.J)) throw std::invalid_argument("gaussian_limit_gap: xi length");
  for (const auto& x : xi) {
    if (std::abs(x) > A * (1.0 + 1e-12)) throw std::invalid_argument("gaussian_limit_gap: |xi_j| exceeds A");
  }
  const auto st = lyapunov_normalizer(s, N);
  std::vector<cplx> U(static_cast<std::size_t>(N));
  std::vector<double> q(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    const auto b = s.row(n);
    cplx u = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) u += std::conj(b[j]) * xi[j];
    u /= st.sigma_N;
    U[static_cast<std::size_t>(n - 1)] = u;
    q[static_cast<std::size_t>(n - 1)] = std::norm(u);
  }
  GapReport r;
  const double b2 = law.beta * law.beta;
  const double Q = num::pairwise_sum(q);
  const cplx lg = log_product(law, U, r.branch_ok);
  r.gap = std::abs(lg + 0.5 * b2 * Q);
  double diag = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double bt = j < s.beta_targets.size() ? s.beta_targets[j] : 0.0;
    diag += bt * std::norm(xi[j]);
  }
  r.quadratic_gap = 0.5 * b2 * std::abs(Q - diag);
  const double rho = law.rho();
  r.bound = 2.0 / 3.0 * law.rho3 * A * A * A * st.proof_sum;
  const double AD = A * st.ratio;
  r.admissibility = 4.0 * b2 * AD * AD + 2.0 * std::pow(rho * A, 3) * st.proof_sum;
  r.admissible = r.admissibility < 1.0;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

cplx exp_taylor_remainder(double t, int n) {
  cplx term = 1.0, sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += term;
    term *= cplx(0.0, t) / static_cast<double>(k + 1);
  }
  return std::exp(cplx(0.0, t)) - sum;
}

IneqReport chain_report(std::vector<double> chain) {
  IneqReport r;
  r.lhs = chain.front();
  r.rhs = chain.back();
  r.slack = std::numeric_limits<double>::infinity();
  r.holds = true;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    r.slack = std::min(r.slack, chain[i + 1] - chain[i]);
    r.holds = r.holds && num::leq(chain[i], chain[i + 1], 1e-12);
  }
  r.chain = std::move(chain);
  return r;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double exp_decay_constant(int n, double beta, double q) {
  const double p = n * (q - 1.0) / 2.0;
  if (p == 0.0) return 1.0;
  return std::pow(2.0 * p / (beta * std::exp(1.0)), p);
}

IneqReport inequality_toolbox(Ineq id, const IneqInputs& in) {
  switch (id) {
    case Ineq::taylor: {
      require(in.n >= 0, "taylor: n >= 0");
      return chain_report({std::abs(exp_taylor_remainder(in.t, in.n)),
                           std::pow(std::abs(in.t), in.n + 1) / factorial(in.n + 1)});
    }
    case Ineq::taylor_min: {
      require(in.n >= 0, "taylor_min: n >= 0");
      const double a = std::abs(in.t);
      return chain_report({std::abs(exp_taylor_remainder(in.t, in.n)),
                           std::min(std::pow(a, in.n + 1) / factorial(in.n + 1), 2.0 * std::pow(a, in.n) / factorial(in.n))});
    }
    case Ineq::taylor_frac: {
      require(in.n >= 0 && in.omega >= 0.0 && in.omega < 1.0, "taylor_frac: n >= 0 and omega in [0, 1)");
      double den = 1.0;
      for (int j = 1; j <= in.n; ++j) den *= j + in.omega;
      return chain_report({std::abs(exp_taylor_remainder(in.t, in.n)),
                           std::pow(2.0, 1.0 - in.omega) * std::pow(std::abs(in.t), in.n + in.omega) / den});
    }
    case Ineq::log1p: {
      require(std::abs(in.z) <= 0.5, "log1p: |z| <= 1/2");
      return chain_report({std::abs(std::log(1.0 + in.z) - in.z), std::norm(in.z)});
    }
    case Ineq::power_means: {
      require(!in.x.empty() && in.lambda >= 1.0, "power_means: nonempty x and lambda >= 1");
      double B = 0.0, sum = 0.0, pl = 0.0;
      for (double x : in.x) {
        require(x >= 0.0, "power_means: x >= 0");
        B = std::max(B, x);
        sum += x;
        pl += std::pow(x, in.lambda);
      }
      const double norm = std::pow(pl, 1.0 / in.lambda);
      const double m = static_cast<double>(in.x.size());
      return chain_report({B, norm, sum, std::pow(m, 1.0 - 1.0 / in.lambda) * norm, m * B});
    }
    case Ineq::lyapunov: {
      require(!in.x.empty(), "lyapunov: nonempty x");
      double B = 0.0, s2 = 0.0, s3 = 0.0;
      for (double x : in.x) {
        require(x >= 0.0, "lyapunov: x >= 0");
        B = std::max(B, x);
        s2 += x * x;
        s3 += x * x * x;
      }
      require(s2 > 0.0, "lyapunov: s_N != 0");
      const double s = std::sqrt(s2);
      return chain_report({std::pow(B / s, 3), s3 / (s * s * s), B / s});
    }
    case Ineq::norm_ratio: {
      require(!in.w.empty() && in.lambda >= 1.0, "norm_ratio: nonempty w and lambda >= 1");
      double inf = 0.0, one = 0.0, pl = 0.0;
      for (const auto& w : in.w) {
        const double a = std::abs(w);
        inf = std::max(inf, a);
        one += a;
        pl += std::pow(a, in.lambda);
      }
      require(one > 0.0, "norm_ratio: w != 0");
      return chain_report({1.0 / static_cast<double>(in.w.size()), inf / one, std::pow(pl, 1.0 / in.lambda) / one, 1.0});
    }
    case Ineq::exp_decay: {
      require(in.n >= 0 && in.beta > 0.0 && in.q > 1.0, "exp_decay: n >= 0, beta > 0, q > 1");
      const double a = std::abs(in.t);
      return chain_report({0.0, std::pow(a, in.n) * std::exp(-0.5 * in.beta * std::pow(a, 2.0 / (in.q - 1.0))),
                           exp_decay_constant(in.n, in.beta, in.q)});
    }
    case Ineq::power_ratio: {
      require(!in.x.empty() && in.psi > 0.0 && in.n >= 0, "power_ratio: nonempty t, psi > 0, n >= 0");
      double num = 0.0, den = 0.0;
      for (double t : in.x) {
        const double a = std::pow(std::abs(t), in.n);
        num += a;
        den += std::pow(a, in.psi);
      }
      require(den > 0.0, "power_ratio: t != 0");
      const double k = static_cast<double>(in.x.size());
      const double kp = std::pow(k, in.psi - 1.0);
      return chain_report({std::min(1.0, kp), std::pow(num, in.psi) / den, std::max(1.0, kp)});
    }
  }
  throw std::invalid_argument("inequality_toolbox: unknown id");
}

// ---------------------------------------------------------------------------

double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

MeanSe mean_se(std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double m = num::pairwise_sum(xs) / n;
  for (auto& x : xs) x = (x - m) * (x - m);
  const double var = num::pairwise_sum(xs) / (n - 1.0);
  return {m, std::sqrt(var / n)};
}

}  // namespace

MomentEstimates moment_estimates(const ComplexLaw& law, int samples, std::uint64_t seed, Exec exec) {
  if (samples < 2) throw std::invalid_argument("moment_estimates: need at least 2 samples");
  const auto n = static_cast<std::size_t>(samples);
  std::vector<cplx> z(n);
  const auto sn = static_cast<long long>(n);
  auto draw = [&](long long i) {
    Philox g(seed, static_cast<std::uint64_t>(i));
    z[static_cast<std::size_t>(i)] = law.sample(g);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < sn; ++i) draw(i);
  } else {
    for (long long i = 0; i < sn; ++i) draw(i);
  }
  std::vector<double> a(n);
  auto stat = [&](auto fa) {
    for (std::size_t i = 0; i < n; ++i) a[i] = fa(z[i]);
    return mean_se(a);
  };
  MomentEstimates m;
  const auto mr = stat([](cplx w) { return w.real(); });
  const auto mi = stat([](cplx w) { return w.imag(); });
  m.mean = {mr.mean, mi.mean};
  m.se_mean = std::hypot(mr.se, mi.se);
  const auto sr = stat([](cplx w) { return (w * w).real(); });
  const auto si = stat([](cplx w) { return (w * w).imag(); });
  m.second_analytic = {sr.mean, si.mean};
  m.se_second_analytic = std::hypot(sr.se, si.se);
  const auto s2 = stat([](cplx w) { return std::norm(w); });
  m.second_abs = s2.mean;
  m.se_second_abs = s2.se;
  const auto s3 = stat([](cplx w) { return std::pow(std::abs(w), 3); });
  m.third_abs = s3.mean;
  m.se_third_abs = s3.se;
  return m;
}

VectorStatisticReport vector_statistic(const ComplexLaw& law, const VectorScheme& s, const MonteCarloConfig& mc) {
  if (mc.samples < 1000) throw std::invalid_argument("vector_statistic: samples >= 1000");
  if (mc.N < 1) throw std::invalid_argument("vector_statistic: N >= 1");
  const auto J = static_cast<std::size_t>(s.J);
  const auto n = static_cast<std::size_t>(mc.samples);
  const double sigma = s.sigma(mc.N);
  std::vector<std::vector<cplx>> rows;
  for (int k = 1; k <= mc.N; ++k) rows.push_back(s.row(k));

  std::vector<cplx> T(n * J);
  const auto sn = static_cast<long long>(n);
  auto replica = [&](long long r) {
    Philox g(mc.seed, static_cast<std::uint64_t>(r));
    std::vector<cplx> acc(J, 0.0);
    for (const auto& b : rows) {
      const cplx x = law.sample(g);
      for (std::size_t j = 0; j < J; ++j) acc[j] += x * b[j];
    }
    for (std::size_t j = 0; j < J; ++j) T[static_cast<std::size_t>(r) * J + j] = acc[j] / sigma;
  };
  if (mc.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < sn; ++r) replica(r);
  } else {
    for (long long r = 0; r < sn; ++r) replica(r);
  }

  VectorStatisticReport rep;
  rep.ks_noise = 1.36 / std::sqrt(static_cast<double>(n));
  const double b2 = law.beta * law.beta;
  std::vector<double> buf(n);
  for (std::size_t j = 0; j < J; ++j) {
    const double bt = j < s.beta_targets.size() ? s.beta_targets[j] : 1.0;
    const double sd = std::sqrt(bt * b2);
    auto cdf = [sd](double x) { return num::normal_cdf(x, 0.0, sd); };
    for (int part = 0; part < 2; ++part) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = part == 0 ? T[i * J + j].real() : T[i * J + j].imag();
      std::sort(buf.begin(), buf.end());
      (part == 0 ? rep.ks_re : rep.ks_im).push_back(ks_distance(buf, cdf));
    }
    for (double x : {-sd, 0.0, sd}) {
      for (double y : {-sd, 0.0, sd}) {
        for (std::size_t i = 0; i < n; ++i) {
          buf[i] = (T[i * J + j].real() <= x && T[i * J + j].imag() <= y) ? 1.0 : 0.0;
        }
        const double p = num::pairwise_sum(buf) / static_cast<double>(n);
        rep.rectangles.push_back({static_cast<int>(j), x, y, p, cdf(x) * cdf(y),
                                  std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(n)) / static_cast<double>(n))});
      }
    }
    // E T_j^2 should vanish with the analytic second moment of the law.
    for (std::size_t i = 0; i < n; ++i) buf[i] = (T[i * J + j] * T[i * J + j]).real();
    const auto re = mean_se(buf);
    for (std::size_t i = 0; i < n; ++i) buf[i] = (T[i * J + j] * T[i * J + j]).imag();
    const auto im = mean_se(buf);
    rep.analytic_second.emplace_back(re.mean, im.mean);
    rep.analytic_second_se.push_back(std::hypot(re.se, im.se));
  }
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t l = j; l < J; ++l) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = (T[i * J + j] * std::conj(T[i * J + l])).real();
      const auto re = mean_se(buf);
      for (std::size_t i = 0; i < n; ++i) buf[i] = (T[i * J + j] * std::conj(T[i * J + l])).imag();
      const auto im = mean_se(buf);
      CovarianceEntry e;
      e.j = static_cast<int>(j);
      e.l = static_cast<int>(l);
      e.empirical = {re.mean, im.mean};
      const double bt = j < s.beta_targets.size() ? s.beta_targets[j] : 1.0;
      e.target = j == l ? cplx(2.0 * bt * b2, 0.0) : cplx(0.0, 0.0);
      e.se_re = re.se;
      e.se_im = im.se;
      const double zr = std::abs(re.mean - e.target.real()) / std::max(re.se, 1e-300);
      const double zi = im.se > 0.0 ? std::abs(im.mean - e.target.imag()) / im.se : 0.0;
      e.z_score = std::max(zr, zi);
      rep.max_cov_z = std::max(rep.max_cov_z, e.z_score);
      rep.covariance.push_back(e);
    }
  }
  return rep;
}

VectorStatisticReport vector_statistic(const ComplexLaw& law, const ScalarScheme& s, const MonteCarloConfig& mc) {
  const double sN = lyapunov_normalizer(s, mc.N).s_N;
  VectorScheme v;
  v.J = 1;
  v.row = [b = s.b](int j) { return std::vector<cplx>{b(j)}; };
  v.sigma = [sN](int) { return sN; };
  v.beta_targets = {1.0};
  return vector_statistic(law, v, mc);
}

RealLaw rademacher_real_law(double beta) {
  return {"rademacher", [beta](Philox& g) { return (g.next_u64() & 1u) ? beta : -beta; }, beta};
}

double real_statistic_ks(const RealLaw& law, const ScalarScheme& s, const MonteCarloConfig& mc) {
  if (mc.samples < 1000) throw std::invalid_argument("real_statistic_ks: samples >= 1000");
  const double sN = lyapunov_normalizer(s, mc.N).s_N;
  std::vector<double> b;
  for (int j = 1; j <= mc.N; ++j) {
    const cplx c = s.b(j);
    if (c.imag() != 0.0) throw std::invalid_argument("real_statistic_ks: coefficients must be real");
    b.push_back(c.real());
  }
  std::vector<double> T(static_cast<std::size_t>(mc.samples));
  num::map_indexed(
      T.size(),
      [&](std::size_t r) {
        Philox g(mc.seed, r);
        double acc = 0.0;
        for (double bj : b) acc += bj * law.sample(g);
        return acc / sN;
      },
      T, mc.exec);
  std::sort(T.begin(), T.end());
  return ks_distance(T, [beta = law.beta](double x) { return num::normal_cdf(x, 0.0, beta); });
}

}  // namespace bsx::clt
