#include "catenoid/catenoid_geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "catenoid/quadrature.hpp"

namespace catenoid::geometry {

namespace {

double bracket(double rho) { return std::sqrt(1.0 + rho * rho); }

}  // namespace

double profile_derivative(double r_tilde, int n) {
    if (r_tilde <= 1.0) throw std::domain_error("profile_derivative: requires r_tilde > 1");
    return 1.0 / std::sqrt(std::pow(r_tilde, 2.0 * (n - 1)) - 1.0);
}

double profile_second_derivative(double r_tilde, int n) {
    if (r_tilde <= 1.0) throw std::domain_error("profile_second_derivative: requires r_tilde > 1");
    double m = 2.0 * (n - 1);
    double d = std::pow(r_tilde, m) - 1.0;
    return -0.5 * m * std::pow(r_tilde, m - 1.0) * std::pow(d, -1.5);
}

double profile_height(double r_tilde, int n) {
    if (r_tilde <= 1.0) throw std::domain_error("profile_height: requires r_tilde > 1");
    // substitute s = 1/u: int_{r~}^inf (s^{2(n-1)}-1)^{-1/2} ds
    //                   = int_0^{1/r~} u^{n-3} (1 - u^{2(n-1)})^{-1/2} du
    auto g = [n](double u) {
        return std::pow(u, n - 3.0) / std::sqrt(1.0 - std::pow(u, 2.0 * (n - 1)));
    };
    return -quad::gauss_legendre(g, 0.0, 1.0 / r_tilde, 48);
}

double asymptote_S(int n, double tol) {
    if (n < 3) throw std::domain_error("asymptote_S: requires n >= 3");
    // scheme 1: f = 1 + u^2 removes the endpoint singularity; split at u = 1
    // and map the tail with u -> 1/u so both pieces are bounded intervals.
    auto integrand_u = [n](double u) {
        if (u < 1e-8) return 2.0 / std::sqrt(2.0 * (n - 1));  // limit at u = 0
        double f = 1.0 + u * u;
        return 2.0 * u / std::sqrt(std::pow(f, 2.0 * (n - 1)) - 1.0);
    };
    auto tail = [&](double w) {  // u = 1/w
        double u = 1.0 / w;
        return integrand_u(u) / (w * w);
    };
    double s1 = quad::adaptive_simpson(integrand_u, 0.0, 1.0, 1e-13) +
                quad::adaptive_simpson(tail, 1e-8, 1.0, 1e-13);
    // scheme 2: tanh-sinh directly on int_0^1 u^{n-3}(1-u^{2(n-1)})^{-1/2} du,
    // which equals S after s = 1/u.  Factor 1-u^m = (1-u) sum_k u^k and feed
    // the exact endpoint distance to avoid cancellation at u = 1.
    boost::math::quadrature::tanh_sinh<double> ts;
    auto g = [n](double u, double uc) {
        double one_minus_u = u > 0.5 ? std::abs(uc) : 1.0 - u;
        double geom = 0.0;  // 1 + u + ... + u^{2n-3}
        for (int k = 2 * n - 3; k >= 0; --k) geom = geom * u + 1.0;
        return std::pow(u, n - 3.0) / std::sqrt(one_minus_u * geom);
    };
    double s2 = ts.integrate(g, 0.0, 1.0, 1e-14);
    if (std::abs(s1 - s2) > tol)
        throw std::runtime_error("asymptote_S: quadrature schemes disagree beyond tolerance");
    return 0.5 * (s1 + s2);
}

double axial_height(double rho, int n) {
    if (rho == 0.0) return 0.0;
    // (1+p^2)^{n-1} - 1 = p^2 sum_{k=1}^{n-1} C(n-1,k) p^{2(k-1)}, so for p > 0
    // the integrand (p/<p>) (<p>^{2(n-1)} - 1)^{-1/2} = 1/(<p> sqrt(poly)) is
    // smooth all the way to p = 0 (no cancellation, no kink)
    std::vector<double> binom(n, 0.0);
    binom[0] = 1.0;
    for (int k = 1; k < n; ++k) binom[k] = binom[k - 1] * (n - k) / k;
    auto g = [&](double p) {
        double p2 = p * p;
        double poly = 0.0;  // sum_{k=1}^{n-1} C(n-1,k) p^{2(k-1)}
        for (int k = n - 1; k >= 1; --k) poly = poly * p2 + binom[k];
        return 1.0 / (bracket(p) * std::sqrt(poly));
    };
    double v = quad::adaptive_simpson(g, 0.0, std::abs(rho), 1e-13);
    return rho > 0 ? v : -v;
}

MetricSample metric_at(double rho, int n, const std::vector<double>& omega) {
    MetricSample s;
    s.rho = rho;
    double br = bracket(rho);
    double denom = std::pow(br, 2.0 * (n - 1)) - 1.0;
    if (std::abs(rho) < 1e-8) {
        // limits at the neck: <rho>^{2(n-1)} - 1 ~ (n-1) rho^2
        s.g_rr = 1.0 / (n - 1);
        s.F_rho_weight = 1.0 / std::sqrt(double(n - 1));
    } else {
        s.g_rr = rho * rho * std::pow(br, 2.0 * (n - 2)) / denom;
        s.F_rho_weight = rho * std::pow(br, n - 2.0) / std::sqrt(denom);
        if (rho < 0) s.F_rho_weight = -s.F_rho_weight;  // |F_rho| is even in rho
    }
    s.g_sphere = br * br;
    s.II2 = double(n) * (n - 1) * std::pow(br, -2.0 * n);
    // nu = (Theta, -f') / sqrt(1 + f'^2) with f' = sign(rho) sqrt(<rho>^{2(n-1)} - 1)
    double fp = (rho >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(denom, 0.0));
    double norm = std::pow(br, n - 1.0);  // sqrt(1 + f'^2)
    s.nu.assign(n + 1, 0.0);
    for (int i = 0; i < n && i < (int)omega.size(); ++i) s.nu[i] = omega[i] / norm;
    s.nu[n] = -fp / norm;
    return s;
}

double profile_ode_residual(const std::vector<double>& grid, const std::vector<double>& q, int n) {
    if (grid.size() != q.size() || grid.size() < 3)
        throw std::invalid_argument("profile_ode_residual: bad samples");
    double h = grid[1] - grid[0];
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-12 * h)
            throw std::invalid_argument("profile_ode_residual: grid must be uniform");
    if (grid.front() <= 1.0 + 1e-6)
        throw std::domain_error("profile_ode_residual: grid too close to r_tilde = 1");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double qp = (q[i + 1] - q[i - 1]) / (2.0 * h);
        double qpp = (q[i + 1] - 2.0 * q[i] + q[i - 1]) / (h * h);
        double r = grid[i];
        double res = qpp + (n - 1) / r * qp + (n - 1) / r * qp * qp * qp;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace catenoid::geometry
