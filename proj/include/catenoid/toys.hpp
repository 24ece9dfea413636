#pragma once

#include <functional>
#include <vector>

// Scalar companions of the evolution estimates: the exact-constant Hardy
// inequalities, the two-weight interpolation bound, the almost-local-in-time
// smoothing operators S and S-tilde, and the shooting/trapping ODE toy.
namespace catenoid::toys {

struct HardyTerms {
    double lhs = 0.0;  // ((p-1)^2/4) int phi^2 r^{p-2}
    double rhs = 0.0;  // int (d_r phi)^2 r^p + boundary term
    bool pass = false;
};

// Hardy inequality on [r0, r1] (p != 1 required). phi and its derivative are
// supplied as callables; integrals by adaptive quadrature.
HardyTerms hardy_check(const std::function<double(double)>& phi,
                       const std::function<double(double)>& dphi, double r0, double r1,
                       double p);

// variant with operator d_r + (n-1)/(2r) and constant (q-n)^2/4 (q != n)
HardyTerms hardy_variant_check(const std::function<double(double)>& phi,
                               const std::function<double(double)>& dphi, double r0, double r1,
                               double q, int n);

struct InterpolationReport {
    double D1 = 0.0;        // sup over tau of (1+tau)^q int r^{p-eps} f^2
    double D2 = 0.0;        // sup over tau of (1+tau)^{q-1} int r^{p+s-eps} f^2
    double worst_ratio = 0.0;  // max over tau of int r^p f^2 / explicit bound
    bool pass = false;
};

// Checks int_R^inf r^p f^2 <= D1 (R+tau)^eps (1+tau)^{-q}
//                          + D2 (R+tau)^{eps-s} (1+tau)^{-q+1}
// (the proof's split at r = R + tau) at each tau in taus. s in (0,1],
// eps in (0,s). f must decay fast enough that the r-integrals converge;
// they are truncated at r_cut with a tail estimate check.
InterpolationReport interpolation_check(const std::function<double(double, double)>& f,
                                        double R, double p, double s, double eps, double q,
                                        const std::vector<double>& taus, double r_cut = 1e5);

// Smoothing kernel: the fixed bump c exp(-1/(s(1-s))) on (0, 1), normalized to
// unit mass. k_tilde(r) = -int_r^inf k.
double kernel_k(double s);
double kernel_k_tilde(double r);

// (S h)(t) = int_{max(t-1,-1)}^{t} h(s) k(t-s) ds, with h given on [-1, inf)
double smooth_S(const std::function<double(double)>& h, double t, int panels = 512);
// (S~ h)(t) = int chi_{[-1,inf)}(s) h(s) k~(t-s) ds; d/dt (S~ h) = (S - I) h
double smooth_tilde_S(const std::function<double(double)>& h, double t, int panels = 512);

struct ShootResult {
    double b0 = 0.0;                  // trapped initial value
    double bracket_width = 0.0;       // final bisection bracket, relative to lambda0
    std::vector<double> tau;          // trajectory samples
    std::vector<double> b;            // trapped trajectory
    bool monotonicity_ok = false;     // d(b^2)/dtau >= mu b^2 in lambda/2 < |b| < lambda
    double exit_time_low = 0.0;       // saturation times of the bracket endpoints
    double exit_time_high = 0.0;
};

// Trapped trajectory of db/dtau = mu b + g(tau) inside the envelope
// |b| <= lambda0 <tau>^{-9/4+kappa}, found by bisection on b(0) in
// [-lambda0, lambda0]. RK4 with step dtau. Throws if the two bracket
// endpoints do not exit through opposite signs of the envelope.
ShootResult shoot(double mu, const std::function<double(double)>& g, double lambda0,
                  double kappa, double T, double dtau = 1e-3);

}  // namespace catenoid::toys
