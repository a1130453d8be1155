#include "hetphase/special_fn.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "hetphase/errors.hpp"
#include "mpfloat.hpp"

namespace hetphase {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInvQuarticRootPi = 0.75112554446494248286; // pi^(-1/4)

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

} // namespace

double laguerre(PolyOrder order, double x) {
  require(order.n >= 0, "laguerre: degree must be nonnegative");
  require(order.alpha >= 0, "laguerre: associated index must be nonnegative");
  require(std::isfinite(x), "laguerre: argument must be finite");
  const double a = static_cast<double>(order.alpha);
  double prev = 1.0;
  if (order.n == 0) return prev;
  double cur = 1.0 + a - x;
  for (int k = 1; k < order.n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite(int n, double x) {
  require(n >= 0, "hermite: degree must be nonnegative");
  require(std::isfinite(x), "hermite: argument must be finite");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * (x * cur - k * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// Maclaurin series of erf, adequate on [0, 2].
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k < 96; ++k) {
    term *= -x2 / k;
    const double contrib = term / (2.0 * k + 1.0);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return 2.0 / kSqrtPi * sum;
}

// Continued fraction for erfc on x > 2 (modified Lentz).
double erfc_fraction(double x) {
  const double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int j = 1; j < 256; ++j) {
    const double a = (j == 1) ? 1.0 : 0.5 * (j - 1);
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return f * std::exp(-x * x) / kSqrtPi;
}

double erfc_positive(double x) {
  if (x <= 2.0) return 1.0 - erf_series(x);
  return erfc_fraction(x);
}

} // namespace

double erf(double x) {
  require(std::isfinite(x), "erf: argument must be finite");
  const double ax = std::abs(x);
  double mag;
  if (ax > 6.0)
    mag = 1.0; // erfc(6) ~ 2e-17, below the accuracy contract
  else if (ax <= 2.0)
    mag = erf_series(ax);
  else
    mag = 1.0 - erfc_fraction(ax);
  return std::signbit(x) ? -mag : mag;
}

double erfc(double x) {
  require(std::isfinite(x), "erfc: argument must be finite");
  if (x >= 0.0) return erfc_positive(x);
  return 2.0 - erfc_positive(-x);
}

double log_factorial(int n) {
  require(n >= 0, "log_factorial: argument must be nonnegative");
  if (n <= 20) {
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return std::log(static_cast<double>(f));
  }
  // Stirling series; the first omitted term is < 1e-15 absolute at n = 21.
  const double nn = static_cast<double>(n);
  const double inv = 1.0 / nn, inv2 = inv * inv;
  return 0.91893853320467274178 // ln(2 pi)/2
         + (nn + 0.5) * std::log(nn) - nn
         + inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

GaussHermiteRule gauss_hermite(int points) {
  require(points >= 1, "gauss_hermite: need at least one node");
  GaussHermiteRule rule;
  rule.nodes.assign(points, 0.0);
  rule.weights.assign(points, 0.0);
  const int m = points;
  double z = 0.0;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Initial guesses from Numerical Recipes' gauher, largest root first.
    if (i == 0)
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(m, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule.nodes[1];
    else
      z = 2.0 * z - rule.nodes[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p1 = kInvQuarticRootPi, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[m - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[m - 1 - i] = rule.weights[i];
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

namespace {

using detail::MpFloat;

struct MpRule {
  std::vector<MpFloat> nodes;
  std::vector<MpFloat> weights;
};

// Orthonormal Hermite value and scaled derivative at z, both at z's precision.
void orthonormal_pair(const MpFloat& z, int m, MpFloat& p1, MpFloat& pp) {
  const mpfr_prec_t prec = z.prec();
  MpFloat pi(prec), p2(prec), p3(prec), t(prec), u(prec);
  pi.set_pi();
  t.sqrt(pi);
  u.sqrt(t);
  p1.set(1.0).div(p1, u); // pi^(-1/4)
  p2.set(0.0);
  for (int j = 1; j <= m; ++j) {
    p3 = p2;
    p2 = p1;
    t.set(2.0).div_ui(t, static_cast<unsigned long>(j)).sqrt(t);
    u.mul(z, t);
    p1.mul(u, p2);
    t.set(j - 1.0).div_ui(t, static_cast<unsigned long>(j)).sqrt(t);
    u.mul(t, p3);
    p1.sub(p1, u);
  }
  t.set(2.0 * m).sqrt(t);
  pp.mul(t, p2);
}

// Gauss-Hermite rule refined to `prec` bits by Newton iteration from the
// double-precision nodes.
MpRule build_mp_rule(int m, mpfr_prec_t prec) {
  const GaussHermiteRule seed = gauss_hermite(m);
  MpRule rule;
  rule.nodes.assign(m, MpFloat(prec));
  rule.weights.assign(m, MpFloat(prec));
  MpFloat p1(prec), pp(prec), dz(prec), two(2.0, prec);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    MpFloat z(seed.nodes[i], prec);
    if (2 * i + 1 == m) z.set(0.0); // middle node of an odd rule
    for (int iter = 0; iter < 24; ++iter) {
      orthonormal_pair(z, m, p1, pp);
      dz.div(p1, pp);
      z.sub(z, dz);
      if (dz.is_zero() || dz.exponent() < z.exponent() - static_cast<long>(prec - 8)) break;
      if (z.is_zero() && dz.exponent() < -static_cast<long>(prec)) break;
    }
    orthonormal_pair(z, m, p1, pp);
    rule.nodes[i] = z;
    rule.nodes[m - 1 - i].neg(z);
    rule.weights[i].mul(pp, pp);
    rule.weights[i].div(two, rule.weights[i]);
    rule.weights[m - 1 - i] = rule.weights[i];
  }
  return rule;
}

const MpRule& cached_mp_rule(int m, mpfr_prec_t prec) {
  static std::mutex mtx;
  static std::map<std::pair<int, mpfr_prec_t>, MpRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto [it, inserted] = cache.try_emplace({m, prec});
  if (inserted) it->second = build_mp_rule(m, prec);
  return it->second;
}

// Physicists' Hermite H_k at an extended-precision argument.
void hermite_mp(int k, const MpFloat& x, MpFloat& out, MpFloat& h0, MpFloat& h1, MpFloat& t) {
  h0.set(1.0);
  if (k == 0) {
    out = h0;
    return;
  }
  h1.mul_d(x, 2.0);
  for (int j = 1; j < k; ++j) {
    t.mul(x, h1);
    out.mul_d(h0, static_cast<double>(j));
    t.sub(t, out);
    t.mul_d(t, 2.0);
    h0 = h1;
    h1 = t;
  }
  out = h1;
}

// One quadrature pass; returns the achieved headroom (precision bits minus
// cancellation bits) through `cond_bits`.
double lhs_quadrature_pass(int n, int alpha, double y, double t, int m, mpfr_prec_t prec,
                           long& cond_bits) {
  const MpRule& rule = cached_mp_rule(m, prec);
  MpFloat sum(prec), term(prec), hn(prec), hm(prec), arg(prec);
  MpFloat s0(prec), s1(prec), s2(prec);
  long max_exp = LONG_MIN;
  for (int i = 0; i < m; ++i) {
    arg.set(y).add(arg, rule.nodes[i]);
    hermite_mp(n, arg, hn, s0, s1, s2);
    arg.set(t).add(arg, rule.nodes[i]);
    hermite_mp(n + alpha, arg, hm, s0, s1, s2);
    term.mul(hn, hm);
    term.mul(term, rule.weights[i]);
    if (!term.is_zero()) max_exp = std::max(max_exp, term.exponent());
    sum.add(sum, term);
  }
  cond_bits = (sum.is_zero() || max_exp == LONG_MIN) ? static_cast<long>(prec)
                                                     : max_exp - sum.exponent();
  MpFloat pi(prec), sp(prec);
  pi.set_pi();
  sp.sqrt(pi);
  sum.div(sum, sp);
  return sum.to_double();
}

double rhs_closed_form(int n, int alpha, double y, double t, mpfr_prec_t prec) {
  MpFloat x(prec), prev(prec), cur(prec), next(prec), tmp(prec);
  x.set(y).mul_d(x, t).mul_d(x, -2.0); // -2yt
  prev.set(1.0);
  if (n >= 1) {
    cur.set(1.0 + alpha).sub(cur, x);
    for (int k = 1; k < n; ++k) {
      next.set(2.0 * k + 1.0 + alpha).sub(next, x);
      next.mul(next, cur);
      tmp.mul_d(prev, static_cast<double>(k + alpha));
      next.sub(next, tmp);
      next.div_ui(next, static_cast<unsigned long>(k + 1));
      prev = cur;
      cur = next;
    }
  } else {
    cur = prev;
  }
  // cur = L_n^alpha(-2yt); scale by 2^(n+alpha) n! t^alpha.
  MpFloat result(prec);
  result.mul_2si(cur, n + alpha);
  for (int k = 2; k <= n; ++k) result.mul_d(result, static_cast<double>(k));
  for (int k = 0; k < alpha; ++k) result.mul_d(result, t);
  return result.to_double();
}

} // namespace

HermiteLaguerreCheck check_hermite_laguerre(int n, int alpha, double y, double t, int capacity) {
  require(n >= 0, "check_hermite_laguerre: n must be nonnegative");
  require(alpha >= 0, "check_hermite_laguerre: alpha must be nonnegative");
  require(std::isfinite(y) && std::isfinite(t), "check_hermite_laguerre: shifts must be finite");
  require(alpha == 0 || t != 0.0, "check_hermite_laguerre: t must be nonzero when alpha > 0");
  if (n + alpha > capacity)
    throw ConvergenceError("check_hermite_laguerre: n + alpha = " + std::to_string(n + alpha) +
                           " exceeds quadrature capacity " + std::to_string(capacity));

  const int degree = 2 * n + alpha;
  const int m = (degree + 2) / 2 + 8; // exactness margin for the polynomial integrand

  // The node sum can cancel by ~alpha*log2(1/|t|) + O(n) bits, so work in
  // extended precision and retry wider if the first pass lacked headroom.
  mpfr_prec_t prec = 192;
  HermiteLaguerreCheck out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    long cond_bits = 0;
    out.lhs = lhs_quadrature_pass(n, alpha, y, t, m, prec, cond_bits);
    if (cond_bits + 90 <= static_cast<long>(prec)) break;
    if (prec >= 8192)
      throw ConvergenceError("check_hermite_laguerre: cancellation exceeds precision budget");
    prec = static_cast<mpfr_prec_t>(((cond_bits + 192) / 64 + 1) * 64);
  }
  out.rhs = rhs_closed_form(n, alpha, y, t, std::max<mpfr_prec_t>(prec, 192));
  return out;
}

} // namespace hetphase
