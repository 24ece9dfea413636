#pragma once

#include <array>
#include <vector>

// Closed-form and quadrature evaluators for the Riemannian catenoid in
// dimension n >= 3: graph profile Q'(r~), asymptote constant S, height Z(rho),
// induced metric, flux weight |F_rho|, second fundamental form |II|^2, and the
// unit normal of the embedding F(rho, omega) = (<rho> Theta(omega), Z(rho)).
namespace catenoid::geometry {

// (r~^{2(n-1)} - 1)^{-1/2}; throws std::domain_error for r_tilde <= 1.
double profile_derivative(double r_tilde, int n);

// Q''(r~), closed form.
double profile_second_derivative(double r_tilde, int n);

// Graph height relative to the asymptotic plane: Q(r~) = -int_{r~}^inf Q'.
// Increasing in r~, tends to 0 at infinity.
double profile_height(double r_tilde, int n);

// S = int_1^inf df / sqrt(f^{2(n-1)} - 1), evaluated by two independent
// quadratures (adaptive Simpson after f = 1 + u^2, and tanh-sinh); throws if
// they disagree beyond tol.
double asymptote_S(int n, double tol = 1e-10);

// Axial height Z(rho) = int_0^rho (rho'/<rho'>) / sqrt(<rho'>^{2(n-1)} - 1) drho'.
// Odd in rho, |Z| < S.
double axial_height(double rho, int n);

struct MetricSample {
    double rho = 0.0;
    double g_rr = 0.0;           // rho-rho metric coefficient (= |F_rho|^2)
    double g_sphere = 0.0;       // <rho>^2
    double F_rho_weight = 0.0;   // |F_rho|
    double II2 = 0.0;            // |II|^2 = n(n-1) <rho>^{-2n}
    std::vector<double> nu;      // unit normal in R^{n+1} at (rho, omega)
};

// All closed forms; rho = 0 handled by the analytic limits
// g_rr(0) = 1/(n-1), |F_rho|(0) = (n-1)^{-1/2}. omega is a unit vector in R^n.
MetricSample metric_at(double rho, int n, const std::vector<double>& omega);

// Finite-difference residual of Q'' + (n-1)/r Q' + (n-1)/r (Q')^3 = 0 given
// samples q of Q on a strictly increasing grid (2nd-order central stencils on
// a uniform grid). Returns the max interior residual.
double profile_ode_residual(const std::vector<double>& grid, const std::vector<double>& q, int n);

}  // namespace catenoid::geometry
