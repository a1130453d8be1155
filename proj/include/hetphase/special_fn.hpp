#pragma once

#include <vector>

namespace hetphase {

/// Degree and associated index of a generalized Laguerre polynomial L_n^alpha.
struct PolyOrder {
  int n = 0;     ///< degree, n >= 0
  int alpha = 0; ///< associated index, alpha >= 0
};

/// Generalized Laguerre polynomial L_n^alpha(x), evaluated by the upward
/// three-term recurrence in n (stable for the x >= 0 and x <= 0 arguments
/// that occur here).
double laguerre(PolyOrder order, double x);

/// Physicists' Hermite polynomial H_n(x) via H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite(int n, double x);

/// Error function, implemented internally (Maclaurin series for |x| <= 2,
/// continued fraction beyond), odd by construction, absolute error <= 1e-12
/// on |x| <= 6 and saturating to +-1 outside.
double erf(double x);

/// Complementary error function, same internal machinery as erf.
double erfc(double x);

/// ln(n!), exact summation for n <= 20 and a Stirling series beyond.
double log_factorial(int n);

/// Nodes and weights for the Gauss-Hermite rule of a given order:
/// integral of e^{-x^2} f(x) dx ~ sum_i weights[i] * f(nodes[i]).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule with `points` nodes, exact for polynomial integrands
/// of degree <= 2*points - 1.
GaussHermiteRule gauss_hermite(int points);

/// Both sides of the Hermite-Laguerre product identity
///   integral dx/sqrt(pi) e^{-x^2} H_n(x+y) H_{n+alpha}(x+t)
///     = 2^{n+alpha} n! L_n^alpha(-2yt) t^alpha,
/// the left side by Gauss-Hermite quadrature and the right by the closed
/// form. The two routes share no code path, so agreement is meaningful.
struct HermiteLaguerreCheck {
  double lhs = 0.0; ///< quadrature value
  double rhs = 0.0; ///< closed-form value
};

/// Evaluate the identity above. Requires t != 0 when alpha > 0 (the t^alpha
/// factor) and n + alpha <= capacity; both sides are computed internally in
/// extended precision because the quadrature sum can cancel by tens of
/// orders of magnitude when |t| is small.
HermiteLaguerreCheck check_hermite_laguerre(int n, int alpha, double y, double t,
                                            int capacity = 40);

} // namespace hetphase
