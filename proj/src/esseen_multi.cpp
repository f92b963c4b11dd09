#include "bsx/esseen_multi.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bsx/kernels.hpp"

namespace bsx::multi {

namespace {

int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Sym digit(int code, int j) { return static_cast<Sym>((code / ipow(3, j)) % 3); }

template <class T>
T eval_monomial(int code, int k, const Assignment<T>& a) {
  T p(1);
  for (int j = 0; j < k; ++j) {
    const auto u = static_cast<std::size_t>(j);
    switch (digit(code, j)) {
      case Sym::chi: p *= a.chi[u]; break;
      case Sym::delta: p *= a.delta[u]; break;
      case Sym::eps: p *= a.eps[u]; break;
    }
  }
  return p;
}

template <class T>
T lhs_product_form(int k, const Assignment<T>& a) {
  auto g = [&](int j) { return a.chi[static_cast<std::size_t>(j)] + a.eps[static_cast<std::size_t>(j)]; };
  auto f = [&](int j) { return a.chi[static_cast<std::size_t>(j)] - a.delta[static_cast<std::size_t>(j)]; };
  T all(1);
  for (int j = 0; j < k; ++j) all *= g(j);
  T sum = T(1 - k) * all;
  for (int j = 0; j < k; ++j) {
    T term(1);
    for (int i = 0; i < k; ++i) term *= (i == j) ? f(i) : g(i);
    sum += term;
  }
  return sum;
}

template <class T>
T identity_residual(const RingExpansion& r, const Assignment<T>& a) {
  T chis(1);
  for (int j = 0; j < r.k; ++j) chis *= a.chi[static_cast<std::size_t>(j)];
  T s(0);
  for (const auto& mono : r.S) {
    int code = 0;
    for (int j = r.k - 1; j >= 0; --j) code = 3 * code + static_cast<int>(mono.w[static_cast<std::size_t>(j)]);
    s += T(mono.multiplicity) * eval_monomial(code, r.k, a);
  }
  return lhs_product_form(r.k, a) - (chis - s);
}

Monomial monomial_of(int code, int k, long mult) {
  Monomial m;
  m.multiplicity = mult;
  for (int j = 0; j < k; ++j) m.w.push_back(digit(code, j));
  return m;
}

}  // namespace

RingExpansion selberg_ring_expansion(int k) {
  if (k < 2 || k > 6) throw std::invalid_argument("selberg_ring_expansion: need 2 <= k <= 6");
  RingExpansion r;
  r.k = k;
  const int n = ipow(3, k);
  r.lhs.assign(static_cast<std::size_t>(n), 0);
  // g = chi + eps and f = chi - delta, so a monomial's coefficient in each
  // product is a sign determined by its symbols.
  for (int code = 0; code < n; ++code) {
    int n_delta = 0;
    for (int j = 0; j < k; ++j) n_delta += digit(code, j) == Sym::delta ? 1 : 0;
    long c = 0;
    if (n_delta == 0) {
      c += 1 - k;  // (1 - k) g_1...g_k
      for (int j = 0; j < k; ++j) c += digit(code, j) == Sym::chi ? 1 : 0;  // f_j picks chi_j
    } else if (n_delta == 1) {
      c -= 1;  // only the term with f at the delta index, which picks -delta
    }
    r.lhs[static_cast<std::size_t>(code)] = c;
  }
  if (r.lhs[0] != 1) throw std::logic_error("selberg_ring_expansion: leading coefficient");
  for (int code = 1; code < n; ++code) {
    const long c = -r.lhs[static_cast<std::size_t>(code)];
    if (c < 0) throw std::logic_error("selberg_ring_expansion: negative multiplicity");
    if (c > 0) r.S.push_back(monomial_of(code, k, c));
    bool chi_eps = true;
    for (int j = 0; j < k; ++j) chi_eps = chi_eps && digit(code, j) != Sym::delta;
    if (chi_eps) r.S_tilde.push_back(monomial_of(code, k, 1));
  }
  return r;
}

double ring_identity_residual(const RingExpansion& r, const Assignment<double>& a) {
  return identity_residual(r, a);
}

boost::rational<long long> ring_identity_residual_exact(const RingExpansion& r,
                                                        const Assignment<boost::rational<long long>>& a) {
  return identity_residual(r, a);
}

double ring_tilde_residual(const RingExpansion& r, const Assignment<double>& a) {
  double all = 1.0, chis = 1.0;
  for (int j = 0; j < r.k; ++j) {
    const auto u = static_cast<std::size_t>(j);
    all *= a.chi[u] + a.eps[u];
    chis *= a.chi[u];
  }
  double s = 0.0;
  for (const auto& mono : r.S_tilde) {
    int code = 0;
    for (int j = r.k - 1; j >= 0; --j) code = 3 * code + static_cast<int>(mono.w[static_cast<std::size_t>(j)]);
    s += static_cast<double>(mono.multiplicity) * eval_monomial(code, r.k, a);
  }
  return all - chis - s;
}

// ---------------------------------------------------------------------------

namespace {

cplx apply_rec(std::span<const OpAt> w, const FieldK& f, std::vector<double>& v) {
  if (w.empty()) return f(v);
  const auto [op, j] = w.front();
  const auto rest = w.subspan(1);
  const auto u = static_cast<std::size_t>(j);
  const double vj = v[u];
  auto at = [&](double x) {
    v[u] = x;
    const cplx r = apply_rec(rest, f, v);
    v[u] = vj;
    return r;
  };
  switch (op) {
    case Op::D: return 0.5 * (at(vj) - at(-vj));
    case Op::E: return 0.5 * (at(vj) + at(-vj));
    case Op::P: return at(0.0);
    case Op::Delta: return at(vj) - at(0.0);
  }
  return 0.0;
}

double fd_step(int total_order) { return std::pow(DBL_EPSILON, 1.0 / (total_order + 2)); }

cplx fd_rec(const FieldK& f, std::span<const int> orders, std::vector<double>& x, std::size_t j, double h) {
  while (j < orders.size() && orders[j] == 0) ++j;
  if (j == orders.size()) return f(x);
  const double xj = x[j];
  auto at = [&](double y) {
    x[j] = y;
    const cplx r = fd_rec(f, orders, x, j + 1, h);
    x[j] = xj;
    return r;
  };
  if (orders[j] == 1) return (at(xj + h) - at(xj - h)) / (2.0 * h);
  return (at(xj + h) - 2.0 * at(xj) + at(xj - h)) / (h * h);
}

}  // namespace

cplx apply_operator(std::span<const OpAt> word, const FieldK& f, std::span<const double> v) {
  std::vector<double> x(v.begin(), v.end());
  for (const auto& o : word) {
    if (o.j < 0 || static_cast<std::size_t>(o.j) >= x.size()) throw std::invalid_argument("apply_operator: index");
  }
  return apply_rec(word, f, x);
}

PartialFn finite_difference_partials(FieldK f) {
  return [f = std::move(f)](std::span<const int> orders, std::span<const double> x) {
    int p = 0;
    for (int o : orders) p += o;
    std::vector<double> y(x.begin(), x.end());
    return fd_rec(f, orders, y, 0, fd_step(p));
  };
}

double finite_difference_noise(int total_order, double f_scale) {
  if (total_order == 0) return 0.0;
  const double h = fd_step(total_order);
  return (std::ldexp(DBL_EPSILON, total_order) / std::pow(h, total_order) + h * h) * std::max(1.0, f_scale);
}

double tensor_integrate(const std::vector<std::vector<num::Node>>& axes,
                        const std::function<double(std::span<const double>)>& g, Exec exec) {
  const std::size_t d = axes.size();
  if (d == 0) return g(std::span<const double>{});
  std::size_t inner = 1;
  for (std::size_t a = 1; a < d; ++a) inner *= axes[a].size();
  return num::sum_indexed(
      axes[0].size(),
      [&](std::size_t i) {
        std::vector<double> x(d);
        std::vector<double> terms(inner);
        x[0] = axes[0][i].x;
        for (std::size_t flat = 0; flat < inner; ++flat) {
          std::size_t rem = flat;
          double w = axes[0][i].w;
          for (std::size_t a = d; a-- > 1;) {
            const auto& ax = axes[a];
            const auto& nd = ax[rem % ax.size()];
            rem /= ax.size();
            x[a] = nd.x;
            w *= nd.w;
          }
          terms[flat] = w * g(x);
        }
        return num::pairwise_sum(terms);
      },
      exec);
}

FactorizationReport factorization_residual(const FieldK& f, std::optional<PartialFn> partials, int m,
                                           Factorization which, std::span<const double> v, double target) {
  if (m < 1 || static_cast<std::size_t>(m) > v.size()) throw std::invalid_argument("factorization_residual: m");
  const bool numeric = !partials.has_value();
  const PartialFn df = numeric ? finite_difference_partials(f) : *partials;
  const int ord = which == Factorization::e_delta ? 2 : 1;
  const std::vector<int> orders = [&] {
    std::vector<int> o(v.size(), 0);
    for (int j = 0; j < m; ++j) o[static_cast<std::size_t>(j)] = ord;
    return o;
  }();

  std::vector<OpAt> word;
  double pref = 1.0;
  for (int j = 0; j < m; ++j) {
    const double vj = v[static_cast<std::size_t>(j)];
    switch (which) {
      case Factorization::mixed:
        word.push_back({Op::D, j});
        pref *= 0.5 * vj;
        break;
      case Factorization::delta:
        word.push_back({Op::Delta, j});
        pref *= vj;
        break;
      case Factorization::e_delta:
        word.push_back({Op::E, j});
        word.push_back({Op::Delta, j});
        pref *= 0.5 * vj * vj;
        break;
    }
  }
  FactorizationReport rep;
  rep.lhs = apply_operator(word, f, v);

  const std::vector<double> br = which == Factorization::delta   ? std::vector<double>{0.0, 1.0}
                                 : which == Factorization::mixed ? std::vector<double>{-1.0, 1.0}
                                                                 : std::vector<double>{-1.0, 0.0, 1.0};
  auto rhs_at = [&](int order) {
    const auto nodes = num::panel_nodes(br, order);
    std::vector<std::vector<num::Node>> axes(static_cast<std::size_t>(m), nodes);
    auto part = [&](bool imag) {
      return tensor_integrate(
          axes,
          [&](std::span<const double> u) {
            std::vector<double> x(v.begin(), v.end());
            double w = 1.0;
            for (int j = 0; j < m; ++j) {
              const auto s = static_cast<std::size_t>(j);
              x[s] = u[s] * v[s];
              if (which == Factorization::e_delta) w *= 1.0 - std::abs(u[s]);
            }
            const cplx d = df(orders, x);
            return w * (imag ? d.imag() : d.real());
          },
          Exec::serial);
    };
    return pref * cplx(part(false), part(true));
  };
  rep.rhs = rhs_at(30);
  const double quad_err = std::abs(rep.rhs - rhs_at(20));
  rep.residual = std::abs(rep.lhs - rep.rhs);
  const double fd = numeric ? std::abs(pref) * std::ldexp(1.0, m) *
                                  finite_difference_noise(ord * m, std::abs(f(v)))
                            : 0.0;
  rep.tol = 10.0 * quad_err + fd + 1e-14 * std::max(1.0, std::abs(rep.lhs));
  rep.noise_dominates = fd > target;
  rep.holds = rep.residual <= std::max(target, rep.tol);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

long binom(int n, int r) {
  long c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

void subsets_rec(const std::vector<int>& pool, int h, std::size_t from, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == h) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets_rec(pool, h, i + 1, cur, out);
    cur.pop_back();
  }
}

// sup over |u_g| <= 1 (g in sigma) and the allowed eps choices off sigma of
// |partial f|, on a uniform grid with 33 points per sigma coordinate.
double grid_sup(const PartialFn& df, std::span<const double> v, const std::vector<int>& sigma,
                const std::vector<std::vector<double>>& eps_choices, const std::vector<int>& orders) {
  constexpr int G = 33;
  const std::size_t d = v.size();
  std::size_t n_eps = 1;
  for (const auto& c : eps_choices) n_eps *= c.size();
  std::size_t n_grid = 1;
  for (std::size_t i = 0; i < sigma.size(); ++i) n_grid *= G;
  double best = 0.0;
  std::vector<double> x(d);
  for (std::size_t e = 0; e < n_eps; ++e) {
    std::size_t rem = e;
    for (std::size_t j = 0; j < d; ++j) {
      const auto& c = eps_choices[j];
      x[j] = c[rem % c.size()] * v[j];
      rem /= c.size();
    }
    for (std::size_t g = 0; g < n_grid; ++g) {
      std::size_t r = g;
      for (int s : sigma) {
        const auto u = static_cast<std::size_t>(s);
        x[u] = (-1.0 + 2.0 * static_cast<double>(r % G) / (G - 1)) * v[u];
        r /= G;
      }
      best = std::max(best, std::abs(df(orders, x)));
    }
  }
  return best;
}

}  // namespace

DerivBoundReport derivative_bound_check(const FieldK& f, const PartialFn& partials, const DerivBoundSpec& s,
                                        std::span<const double> v) {
  const int k = static_cast<int>(v.size());
  if (s.m < 1 || s.m > k) throw std::invalid_argument("derivative_bound_check: need 1 <= m <= dim");
  std::vector<int> pool;
  std::vector<OpAt> word;
  if (s.which == DerivBound::mixed_d) {
    if (s.ell < 1 || s.ell > s.m) throw std::invalid_argument("derivative_bound_check: need 1 <= l <= m");
    for (int j = 0; j < s.ell; ++j) pool.push_back(j);
    for (int j = 0; j < s.m; ++j) word.push_back({Op::D, j});
  } else {
    if (s.n < 1 || s.n > s.m) throw std::invalid_argument("derivative_bound_check: need 1 <= n <= m");
    if (s.ell < 1 || s.ell > s.n) throw std::invalid_argument("derivative_bound_check: need 1 <= l <= n");
    if (s.delta < 0 || s.delta > s.m - s.n) throw std::invalid_argument("derivative_bound_check: delta");
    for (int j = 0; j < s.ell; ++j) pool.push_back(j);
    for (int j = s.n; j < s.n + s.delta; ++j) pool.push_back(j);
    for (int j = 0; j < s.n; ++j) {
      if (s.which != DerivBound::delta_d) word.push_back({Op::E, j});
      word.push_back({Op::Delta, j});
    }
    for (int j = s.n; j < s.m; ++j) word.push_back({Op::D, j});
  }
  const int L = static_cast<int>(pool.size());
  if (s.h < 0 || s.h > L) throw std::invalid_argument("derivative_bound_check: need 0 <= h <= L");

  DerivBoundReport rep;
  rep.lhs = std::abs(apply_operator(word, f, v));

  const bool second = s.which == DerivBound::e_delta_d_second;
  double vfac = 1.0;
  for (int j : pool) {
    const double a = std::abs(v[static_cast<std::size_t>(j)]);
    vfac *= (second && j < s.n) ? a * a : a;
  }
  vfac = s.h == 0 ? 1.0 : std::pow(vfac, static_cast<double>(s.h) / L);
  const double coef = s.which == DerivBound::mixed_d ? 1.0 : std::ldexp(1.0, s.m - s.h);

  std::vector<std::vector<int>> sigmas;
  std::vector<int> cur;
  subsets_rec(pool, s.h, 0, cur, sigmas);
  double log_prod = 0.0;
  bool zero = false;
  for (const auto& sigma : sigmas) {
    std::vector<std::vector<double>> eps(static_cast<std::size_t>(k), std::vector<double>{1.0});
    std::vector<int> orders(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < s.m; ++j) {
      const bool in_sigma = std::find(sigma.begin(), sigma.end(), j) != sigma.end();
      const auto u = static_cast<std::size_t>(j);
      if (in_sigma) {
        orders[u] = (second && j < s.n) ? 2 : 1;
      } else if (s.which != DerivBound::mixed_d && j < s.n) {
        eps[u] = {-1.0, 0.0, 1.0};
      } else {
        eps[u] = {-1.0, 1.0};
      }
    }
    const double M = grid_sup(partials, v, sigma, eps, orders);
    if (M == 0.0) zero = true;
    else log_prod += std::log(M);
  }
  const double geo = zero ? 0.0 : std::exp(log_prod / static_cast<double>(binom(L, s.h)));
  rep.rhs_raw = coef * vfac * geo;
  rep.rhs_safe = kSupSafety * rep.rhs_raw;
  rep.slack = rep.rhs_raw - rep.lhs;
  const double fuzz = 1e-12 * std::max(1.0, rep.rhs_raw);
  if (rep.lhs <= rep.rhs_raw + fuzz) rep.verdict = Verdict::holds;
  else if (rep.lhs <= rep.rhs_safe + fuzz) rep.verdict = Verdict::inconclusive;
  else rep.verdict = Verdict::violated;
  return rep;
}

// ---------------------------------------------------------------------------

LawK product_law(std::vector<esseen::Distribution1D> factors) {
  if (factors.empty()) throw std::invalid_argument("product_law: no factors");
  LawK L;
  L.k = static_cast<int>(factors.size());
  L.moment = {factors[0].moment.alpha, 0.0};
  bool dens = true;
  for (const auto& f : factors) {
    if (f.moment.alpha != L.moment.alpha) throw std::invalid_argument("product_law: moment orders differ");
    L.moment.value += f.moment.value;
    dens = dens && f.density_bound.has_value();
    L.name += (L.name.empty() ? "" : "x") + f.name;
  }
  if (dens) {
    for (const auto& f : factors) L.marginal_bounds.push_back(*f.density_bound);
  }
  auto fs = std::make_shared<std::vector<esseen::Distribution1D>>(factors);
  L.cdf = [fs](std::span<const double> t) {
    double p = 1.0;
    for (std::size_t j = 0; j < fs->size(); ++j) p *= (*fs)[j].cdf(t[j]);
    return p;
  };
  L.cf = [fs](std::span<const double> v) {
    cplx p = 1.0;
    for (std::size_t j = 0; j < fs->size(); ++j) p *= (*fs)[j].cf(v[j]);
    return p;
  };
  L.factors = std::move(factors);
  return L;
}

LawK binomial_product(int n, int k) {
  return product_law(std::vector<esseen::Distribution1D>(static_cast<std::size_t>(k), esseen::standardized_binomial(n)));
}

LawK normal_product(int k) {
  return product_law(std::vector<esseen::Distribution1D>(static_cast<std::size_t>(k), esseen::normal_law()));
}

LawK irwin_hall_product(int n, int k) {
  return product_law(
      std::vector<esseen::Distribution1D>(static_cast<std::size_t>(k), esseen::standardized_irwin_hall(n)));
}

double box_measure(const LawK& F, std::span<const double> a, std::span<const double> b) {
  const int k = F.k;
  std::vector<double> corner(static_cast<std::size_t>(k));
  double s = 0.0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    int lows = 0;
    for (int j = 0; j < k; ++j) {
      const bool low = (mask >> j) & 1;
      lows += low;
      corner[static_cast<std::size_t>(j)] = low ? a[static_cast<std::size_t>(j)] : b[static_cast<std::size_t>(j)];
    }
    s += ((lows & 1) ? -1.0 : 1.0) * F.cdf(corner);
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

double sine_integral_pi() {
  static const double v = num::integrate([](double x) { return num::sinc(x); }, 0.0, pi, 1e-15).value;
  return v;
}

double rho_constant() {
  static const double r = std::max(1.0, kernels::R_sup());
  return r;
}

int next_order(int order) {
  switch (order) {
    case 6: return 10;
    case 10: return 20;
    case 20: return 30;
    default: throw std::invalid_argument("QuadOptions: order must be 6, 10 or 20");
  }
}

std::vector<double> mirror(const std::vector<double>& pos) {
  std::vector<double> br;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) br.push_back(-*it);
  for (std::size_t i = 1; i < pos.size(); ++i) br.push_back(pos[i]);
  return br;
}

std::vector<double> with_break(std::vector<double> br, double x) {
  if (x > br.front() && x < br.back()) {
    br.push_back(x);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             br.end());
  }
  return br;
}

std::vector<num::Node> scaled(std::vector<num::Node> nodes, double s) {
  for (auto& n : nodes) n.w *= s;
  return nodes;
}

struct AxisPlan {
  std::vector<double> breaks;
  double weight = 1.0;  // folding factor
};

// Integral with the chosen order plus an error estimate from the next order.
num::QuadResult tensor_pair(const std::vector<AxisPlan>& plan,
                            const std::function<double(std::span<const double>)>& g, const QuadOptions& q) {
  auto run = [&](int order) {
    std::vector<std::vector<num::Node>> axes;
    for (const auto& p : plan) axes.push_back(scaled(num::panel_nodes(p.breaks, order), p.weight));
    return tensor_integrate(axes, g, q.exec);
  };
  const double lo = run(q.order);
  const double hi = run(next_order(q.order));
  return {hi, std::abs(hi - lo)};
}

double tail_sum(const SignedMeasureK& G, std::span<const double> omega) {
  if (G.marginal_bounds.size() != omega.size()) throw std::invalid_argument("bound: G needs marginal bounds m_l");
  double s = 0.0;
  for (std::size_t j = 0; j < omega.size(); ++j) s += G.marginal_bounds[j] / omega[j];
  return s;
}

void check_dims(const LawK& F, const LawK& G, std::span<const double> omega) {
  if (F.k != G.k || static_cast<std::size_t>(F.k) != omega.size())
    throw std::invalid_argument("bound: dimension mismatch");
  for (double o : omega) {
    if (!(o > 0.0)) throw std::invalid_argument("bound: Omega must be positive");
  }
}

FieldK difference(const LawK& F, const LawK& G) {
  return [fc = F.cf, gc = G.cf](std::span<const double> v) { return fc(v) - gc(v); };
}

// D_C h at v as the signed average over the 2^|C| reflections.
cplx signed_average(const FieldK& h, const std::vector<int>& C, std::vector<double>& v) {
  const std::size_t nc = C.size();
  std::vector<double> keep(nc);
  for (std::size_t i = 0; i < nc; ++i) keep[i] = v[static_cast<std::size_t>(C[i])];
  cplx s = 0.0;
  for (unsigned mask = 0; mask < (1u << nc); ++mask) {
    double sign = 1.0;
    for (std::size_t i = 0; i < nc; ++i) {
      const bool flip = (mask >> i) & 1u;
      v[static_cast<std::size_t>(C[i])] = flip ? -keep[i] : keep[i];
      if (flip) sign = -sign;
    }
    s += sign * h(v);
  }
  for (std::size_t i = 0; i < nc; ++i) v[static_cast<std::size_t>(C[i])] = keep[i];
  return std::ldexp(1.0, -static_cast<int>(nc)) * s;
}

}  // namespace

ConstantsK ConstantsK::defaults(int k) {
  if (k < 1 || k > 6) throw std::invalid_argument("ConstantsK: need 1 <= k <= 6");
  const double rho = rho_constant();
  double size_S = 1.0;
  if (k >= 2) {
    const auto r = selberg_ring_expansion(k);
    size_S = 0.0;
    for (const auto& m : r.S) size_S += static_cast<double>(m.multiplicity);
  }
  const double size_St = std::ldexp(1.0, k) - 1.0;
  const double c3 = std::max(size_S, size_St);
  const double two_k = std::ldexp(1.0, k);
  ConstantsK c;
  c.c1 = (2 * k - 1) * std::pow(rho / 2.0, k);
  c.c2 = 2.0 * pi * c3;
  const double c7 = (2 * k - 1) * std::pow(rho, k);
  c.c5 = std::pow(5.0, k) * c7;
  c.c6 = two_k * c.c2;
  c.c8 = two_k * c7;
  c.c9 = two_k * c.c2;
  c.chat1 = (2 * k - 1) * two_k * std::pow(rho, k) * std::pow(1.0 + 2.0 * sine_integral_pi(), k);
  return c;
}

std::vector<PartitionP> all_partitions(int k) {
  std::vector<PartitionP> out;
  for (int code = 0; code < ipow(3, k); ++code) {
    PartitionP p;
    for (int j = 0; j < k; ++j) {
      switch ((code / ipow(3, j)) % 3) {
        case 0: p.B.push_back(j); break;
        case 1: p.C.push_back(j); break;
        default: p.D.push_back(j); break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

BoundReportK esseen_bound_k(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                            std::span<const double> t, const ConstantsK& c, const QuadOptions& q) {
  check_dims(F, G, omega);
  if (t.size() != omega.size()) throw std::invalid_argument("esseen_bound_k: t has the wrong dimension");
  const int k = F.k;
  const FieldK h = difference(F, G);
  BoundReportK rep;
  rep.variant = "plain";
  rep.omega.assign(omega.begin(), omega.end());
  rep.constants = c;
  for (const auto& P : all_partitions(k)) {
    std::vector<AxisPlan> plan;
    std::vector<int> dims;
    std::vector<bool> is_c;
    for (int j = 0; j < k; ++j) {
      const auto u = static_cast<std::size_t>(j);
      const bool inC = std::find(P.C.begin(), P.C.end(), j) != P.C.end();
      const bool inD = std::find(P.D.begin(), P.D.end(), j) != P.D.end();
      if (!inC && !inD) continue;
      const auto pos = num::dyadic_breaks(omega[u], q.panel, inC ? q.levels : 2);
      // |D_C h| is even in each C coordinate; D coordinates keep the full range.
      plan.push_back(inC ? AxisPlan{pos, 2.0} : AxisPlan{mirror(pos), 1.0});
      dims.push_back(j);
      is_c.push_back(inC);
    }
    auto g = [&](std::span<const double> x) {
      std::vector<double> v(static_cast<std::size_t>(k), 0.0);
      for (std::size_t i = 0; i < dims.size(); ++i) v[static_cast<std::size_t>(dims[i])] = x[i];
      double w = std::abs(signed_average(h, P.C, v));
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const auto u = static_cast<std::size_t>(dims[i]);
        if (is_c[i]) w /= std::abs(x[i]);
        else w *= 1.0 / omega[u] + std::abs(t[u]) * std::abs(num::sinc(t[u] * x[i]));
      }
      return w;
    };
    const auto r = tensor_pair(plan, g, q);
    rep.terms.push_back({P, r.value, r.err});
    rep.integral += r.value;
    rep.integral_err += r.err;
  }
  rep.tail_term = c.c2 * tail_sum(G, omega);
  rep.bound = c.c1 * (rep.integral + rep.integral_err) + rep.tail_term;
  return rep;
}

double inverse_transformed(double v, double Delta, TruncTransform tr) {
  const double a = std::abs(v);
  if (tr == TruncTransform::bullet) return a * Delta <= 1.0 ? Delta : 1.0 / a;
  return a <= 1.0 ? Delta : Delta / a;
}

BoundReportK esseen_bound_truncated(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                                    const TruncationMap& tm, TruncMode mode, const ConstantsK& c,
                                    const QuadOptions& q) {
  check_dims(F, G, omega);
  for (double o : omega) {
    if (!(o > 1.0)) throw std::invalid_argument("esseen_bound_truncated: need min Omega > 1");
  }
  if (mode == TruncMode::A && !(tm.Delta > 1.0)) throw std::invalid_argument("esseen_bound_truncated: need Delta > 1");
  if (mode == TruncMode::B && !(tm.D > 0.0)) throw std::invalid_argument("esseen_bound_truncated: need D > 0");
  const double Delta = mode == TruncMode::A ? tm.Delta : 1.0 + tm.D;
  const int k = F.k;
  const FieldK h = difference(F, G);
  const double kink = tm.transform == TruncTransform::bullet ? 1.0 / Delta : 1.0;

  std::vector<AxisPlan> plan;
  for (int j = 0; j < k; ++j) {
    const auto pos = with_break(num::dyadic_breaks(omega[static_cast<std::size_t>(j)], q.panel, 2), kink);
    // |phi - psi| is Hermitian, so the first coordinate folds onto [0, Omega].
    plan.push_back(j == 0 ? AxisPlan{pos, 2.0} : AxisPlan{mirror(pos), 1.0});
  }
  auto g = [&](std::span<const double> x) {
    double w = std::abs(h(x));
    for (double xi : x) w *= inverse_transformed(xi, Delta, tm.transform);
    return w;
  };
  const auto r = tensor_pair(plan, g, q);

  BoundReportK rep;
  rep.variant = mode == TruncMode::A ? "A" : "B";
  rep.omega.assign(omega.begin(), omega.end());
  rep.constants = c;
  rep.integral = r.value;
  rep.integral_err = r.err;
  const double tails = tail_sum(G, omega);
  if (mode == TruncMode::A) {
    if (F.moment.alpha != G.moment.alpha) throw std::invalid_argument("esseen_bound_truncated: moment orders differ");
    rep.tail_term = c.c6 * tails;
    rep.truncation_term = (k + 1) * std::pow(Delta, -F.moment.alpha) * (F.moment.value + G.moment.value);
    rep.bound = c.c5 * (r.value + r.err) + rep.tail_term + rep.truncation_term;
  } else {
    rep.tail_term = c.c9 * tails;
    rep.bound = c.c8 * (r.value + r.err) + rep.tail_term;
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Points of a uniform grid on [-r, r] with n points.
void push_grid(std::vector<double>& out, double r, int n) {
  for (int i = 0; i < n; ++i) out.push_back(-r + 2.0 * r * i / (n - 1));
}

double slab_grid_sup(const FieldK& f, const PartialFn& df, const std::vector<int>& Cb, const std::vector<int>& Cs,
                     std::span<const double> v, const std::vector<std::vector<double>>& grids) {
  const std::size_t d = v.size();
  std::vector<double> x(v.begin(), v.end());
  std::size_t n_grid = 1;
  for (const auto& g : grids) n_grid *= g.size();
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << Cb.size()); ++mask) {
    for (std::size_t i = 0; i < Cb.size(); ++i) {
      const auto u = static_cast<std::size_t>(Cb[i]);
      x[u] = ((mask >> i) & 1u) ? -v[u] : v[u];
    }
    if (Cs.empty()) {
      best = std::max(best, std::abs(f(x)));
      continue;
    }
    for (std::size_t g = 0; g < n_grid; ++g) {
      std::size_t r = g;
      for (std::size_t i = 0; i < Cs.size(); ++i) {
        x[static_cast<std::size_t>(Cs[i])] = grids[i][r % grids[i].size()];
        r /= grids[i].size();
      }
      std::vector<int> orders(d, 0);
      for (int j : Cs) {
        orders[static_cast<std::size_t>(j)] = 1;
        best = std::max(best, std::abs(df(orders, x)));
        orders[static_cast<std::size_t>(j)] = 0;
      }
    }
  }
  return best;
}

}  // namespace

SlabNorm slab_norm(const FieldK& f, const PartialFn& partials, std::span<const int> C, std::span<const double> v,
                   double tau, SlabFlavor flavor) {
  if (!(tau > 0.0)) throw std::invalid_argument("slab_norm: need tau > 0");
  std::vector<int> Cb, Cs;
  for (int j : C) {
    const double a = std::abs(v[static_cast<std::size_t>(j)]);
    (a >= tau ? Cb : Cs).push_back(j);
  }
  SlabNorm out;
  if (Cs.empty()) {
    out.value = slab_grid_sup(f, partials, Cb, Cs, v, {});
    out.safe = out.value;
    return out;
  }
  auto grids_for = [&](int n) {
    std::vector<std::vector<double>> gs;
    for (int j : Cs) {
      std::vector<double> g;
      const double a = std::abs(v[static_cast<std::size_t>(j)]);
      push_grid(g, a, n);
      // The wider set keeps the narrow grid so the double-bar sup dominates.
      if (flavor == SlabFlavor::double_bar) push_grid(g, tau, n);
      gs.push_back(std::move(g));
    }
    return gs;
  };
  const double coarse = slab_grid_sup(f, partials, Cb, Cs, v, grids_for(17));
  const double fine = std::max(coarse, slab_grid_sup(f, partials, Cb, Cs, v, grids_for(33)));
  out.value = fine;
  out.safe = kSupSafety * fine;
  out.stable = fine - coarse <= 0.1 * fine;
  return out;
}

BoundReportK esseen_bound_slab(const LawK& F, const SignedMeasureK& G, std::span<const double> omega,
                               const ConstantsK& c, const QuadOptions& q) {
  check_dims(F, G, omega);
  if (F.k > 2) throw std::invalid_argument("esseen_bound_slab: k <= 2");
  for (double o : omega) {
    if (!(o > 1.0)) throw std::invalid_argument("esseen_bound_slab: need min Omega > 1");
  }
  if (F.moment.alpha < 1.0 || G.moment.alpha < 1.0)
    throw std::invalid_argument("esseen_bound_slab: needs a first absolute moment");
  const int k = F.k;
  const FieldK h = difference(F, G);
  const PartialFn dh = finite_difference_partials(h);
  constexpr double tau = 1.0;

  BoundReportK rep;
  rep.variant = "C";
  rep.omega.assign(omega.begin(), omega.end());
  rep.constants = c;
  for (const auto& P : all_partitions(k)) {
    PartitionTerm term{P, 0.0, 0.0};
    // Within a slab the norm ignores the small C coordinates and 1/|v_tri| = 1
    // there, so those directions contribute their length 2 tau exactly. Big C
    // coordinates fold onto [tau, Omega] since the norm maximizes over signs.
    for (unsigned smask = 0; smask < (1u << P.C.size()); ++smask) {
      std::vector<int> Cs, Cb;
      for (std::size_t i = 0; i < P.C.size(); ++i) (((smask >> i) & 1u) ? Cs : Cb).push_back(P.C[i]);
      std::vector<AxisPlan> plan;
      std::vector<int> dims;
      for (int j : Cb) {
        plan.push_back({num::uniform_breaks(tau, omega[static_cast<std::size_t>(j)], q.panel), 2.0});
        dims.push_back(j);
      }
      for (int j : P.D) {
        plan.push_back({mirror(num::dyadic_breaks(omega[static_cast<std::size_t>(j)], q.panel, 2)), 1.0});
        dims.push_back(j);
      }
      const double small_measure = std::pow(2.0 * tau, static_cast<double>(Cs.size()));
      auto g = [&](std::span<const double> x) {
        std::vector<double> v(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < dims.size(); ++i) v[static_cast<std::size_t>(dims[i])] = x[i];
        for (int j : Cs) v[static_cast<std::size_t>(j)] = 0.5 * tau;  // any interior point of the slab
        double w = slab_norm(h, dh, P.C, v, tau, SlabFlavor::double_bar).safe;
        for (int j : Cb) w /= std::abs(v[static_cast<std::size_t>(j)]);
        for (int j : P.D) w /= omega[static_cast<std::size_t>(j)];
        return small_measure * w;
      };
      const auto r = tensor_pair(plan, g, q);
      term.integral += r.value;
      term.err += r.err;
    }
    rep.integral += term.integral;
    rep.integral_err += term.err;
    rep.terms.push_back(std::move(term));
  }
  rep.tail_term = c.c2 * tail_sum(G, omega);
  rep.bound = c.chat1 * (rep.integral + rep.integral_err) + rep.tail_term;
  return rep;
}

// ---------------------------------------------------------------------------

double sup_cdf_distance_k(const LawK& F, const LawK& G, std::span<const double> axis) {
  const int k = F.k;
  std::size_t n = 1;
  for (int j = 0; j < k; ++j) n *= axis.size();
  double best = 0.0;
  std::vector<double> t(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = i;
    for (auto& x : t) {
      x = axis[r % axis.size()];
      r /= axis.size();
    }
    best = std::max(best, std::abs(F.cdf(t) - G.cdf(t)));
  }
  return best;
}

namespace {

double hessian_entry(const FieldK& f, int k, int i, int j) {
  constexpr double h = 1e-3;
  std::vector<double> v(static_cast<std::size_t>(k), 0.0);
  auto at = [&](double a, double b) {
    std::fill(v.begin(), v.end(), 0.0);
    v[static_cast<std::size_t>(i)] += a;
    v[static_cast<std::size_t>(j)] += b;
    return f(v).real();
  };
  if (i == j) return (at(h, 0) - 2.0 * at(0, 0) + at(-h, 0)) / (h * h);
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

// Largest |F{(a, a + D]} - G{...}| with a on the axis grid and unit-free width D.
double box_distance(const LawK& F, const LawK& G, std::span<const double> axis, double D) {
  const int k = F.k;
  std::size_t n = 1;
  for (int j = 0; j < k; ++j) n *= axis.size();
  double best = 0.0;
  std::vector<double> a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = i;
    for (std::size_t j = 0; j < a.size(); ++j) {
      a[j] = axis[r % axis.size()];
      b[j] = a[j] + D;
      r /= axis.size();
    }
    best = std::max(best, std::abs(box_measure(F, a, b) - box_measure(G, a, b)));
  }
  return best;
}

}  // namespace

std::vector<HarnessRowK> convergence_harness_k(const std::function<LawK(int)>& family, const SignedMeasureK& G,
                                               std::span<const int> indices, Variant variant,
                                               std::span<const double> axis, const QuadOptions& q) {
  const int k = G.k;
  const ConstantsK c = ConstantsK::defaults(k);
  const std::vector<double> omegas{4.0, 8.0, 16.0};
  constexpr double box_width = 1.0;
  std::vector<HarnessRowK> rows;
  for (int idx : indices) {
    const LawK F = family(idx);
    HarnessRowK row;
    row.index = idx;
    std::vector<double> t_star(static_cast<std::size_t>(k), 0.0);
    if (variant == Variant::B) {
      row.distance = box_distance(F, G, axis, box_width);
    } else {
      // Locate the maximizing grid point for the t-dependent plain bound.
      std::size_t n = 1;
      for (int j = 0; j < k; ++j) n *= axis.size();
      std::vector<double> t(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = i;
        for (auto& x : t) {
          x = axis[r % axis.size()];
          r /= axis.size();
        }
        const double d = std::abs(F.cdf(t) - G.cdf(t));
        if (d > row.distance) {
          row.distance = d;
          t_star = t;
        }
      }
    }
    bool first = true;
    for (double om : omegas) {
      const std::vector<double> omega(static_cast<std::size_t>(k), om);
      std::vector<BoundReportK> cands;
      switch (variant) {
        case Variant::plain: cands.push_back(esseen_bound_k(F, G, omega, t_star, c, q)); break;
        case Variant::A:
          for (double Delta : {4.0, 16.0}) {
            cands.push_back(esseen_bound_truncated(F, G, omega, {Delta, 1.0, TruncTransform::bullet}, TruncMode::A, c, q));
          }
          break;
        case Variant::B:
          cands.push_back(esseen_bound_truncated(F, G, omega, {10.0, box_width, TruncTransform::bullet}, TruncMode::B, c, q));
          break;
        case Variant::C: cands.push_back(esseen_bound_slab(F, G, omega, c, q)); break;
      }
      for (auto& b : cands) {
        if (first || b.bound < row.bound.bound) row.bound = std::move(b);
        first = false;
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        row.partial_gap = std::max(row.partial_gap, std::abs(hessian_entry(F.cf, k, i, j) - hessian_entry(G.cf, k, i, j)));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bsx::multi
