#pragma once

// Reference values computed independently of the library: closed forms and adaptive
// quadrature of the analytic functions, never the library's own discretizations.

#include <functional>
#include <vector>

namespace oracle {

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b);

/// Periodic Fourier basis on [0, L]: 1/sqrt(L), then sin/cos pairs with norm sqrt(2/L).
double fourier(double L, int k, double x);

/// Normalized eigenfunctions of the insulated element problem on [-h, h], by level k and
/// index within the level (k even >= 2 has three: cos, sin and sin of |s|).
double insulated(double h, int k, int idx, double s);
int multiplicity(int k);
double insulatedEigenvalue(double h, int k);

/// <e_k, e_{j,(k', idx)}> on the element centred at xc, by quadrature split at the centre.
double projectionWeight(double L, double h, double xc, int fourierIndex, int level, int idx);

/// sum_k q_k w_k^2 for the given element mode.
double projectedVariance(double L, double h, double xc, const std::vector<double>& q, int level, int idx);

/// Eigenvalue of the periodic second-difference matrix (N points, spacing dx) for wavenumber m.
double periodicDifferenceEigenvalue(int N, double dx, int m);

/// Stationary variance of x <- (1 - lambda dt) x + s dW (explicit Euler-Maruyama).
double explicitOuVariance(double lambda, double s, double dt);
/// Stationary variance of x <- (x + s dW) / (1 + lambda dt) (implicit drift).
double implicitOuVariance(double lambda, double s, double dt);

/// Variance of int_0^t x ds for a stationary OU process with covariance v exp(-r |s|),
/// computed as 2 int_0^t (t - s) v exp(-r s) ds by quadrature.
double integratedStationaryVariance(double v, double r, double t);

}  // namespace oracle
