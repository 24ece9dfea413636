#pragma once

#include <cmath>
#include <functional>

// Independent closed-form solution of the flat radial wave equation in 4+1
// dimensions, used as a manufactured oracle for the characteristic scheme.
//
// In odd space dimension d = 3 the spherically symmetric solution is
// u3(t, r) = (g(t - r) - g(t + r)) / r for any profile g. The descent
// relation u_{d+2} = -(1/(2 pi r)) d_r u_d lifts it to d = 5 fields; for the
// d = 4-adjacent radial operator exercised here we instead manufacture an
// exact solution by choosing u~ and computing the residual source
//   f~ = -2 d_tau d_r u~ + d_r^2 u~ - c_l r^{-2} u~,  c_l = 3/4 + l(l+2),
// analytically for a separable ansatz u~ = T(tau) R(r).
namespace oracle_wave4d {

struct Separable {
    // u~ = T(tau) R(r) with
    //   T = exp(-beta tau), R = r^{3/2} exp(-(r - r0)^2 / w^2)
    double beta = 0.3;
    double r0 = 8.0;
    double w = 2.0;
    int l = 0;

    double T(double tau) const { return std::exp(-beta * tau); }
    double dT(double tau) const { return -beta * T(tau); }
    double R(double r) const {
        double z = (r - r0) / w;
        return std::pow(r, 1.5) * std::exp(-z * z);
    }
    double dR(double r) const {
        double z = (r - r0) / w;
        return (1.5 / r - 2.0 * z / w) * R(r);
    }
    double d2R(double r) const {
        double z = (r - r0) / w;
        double a = 1.5 / r - 2.0 * z / w;
        double da = -1.5 / (r * r) - 2.0 / (w * w);
        return (a * a + da) * R(r);
    }

    double u(double tau, double r) const { return T(tau) * R(r); }

    // f~ = -2 d_tau d_r u~ + d_r^2 u~ - c_l r^{-2} u~ evaluated exactly
    double source(double tau, double r) const {
        double cl = 0.75 + double(l) * (l + 2);
        return -2.0 * dT(tau) * dR(r) + T(tau) * d2R(r) - cl / (r * r) * u(tau, r);
    }
};

}  // namespace oracle_wave4d
