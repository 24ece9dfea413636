#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

// Hyperboloidal foliation of the far field of a moving catenoid: Lorentz
// boosts, the smoothed max used to glue the flat region to the hyperboloidal
// wings, the leaf metric blocks in (tau, r, theta) coordinates, and the
// quasilinear source F0 produced when the boost parameters drift in time.
namespace catenoid::foliation {

// C^2 blend of max(t1, t2) with transition width delta:
// (t1+t2)/2 + (delta/2) mu((t1-t2)/delta), mu(x) = 3/8 + 3x^2/4 - x^4/8 on
// [-1, 1] and |x| outside. mu >= |x| everywhere, so the blend dominates max.
double smoothed_max(double t1, double t2, double delta);

// Lorentz boost on R^{1+d} for velocity ell in R^d (|ell| < 1):
// [[gamma, -gamma ell^T], [-gamma ell, gamma P_ell + P_ell_perp]].
Eigen::MatrixXd boost_matrix(const Eigen::VectorXd& ell);

// Leaf metric blocks at a point (r, theta, eta') in (tau, r, theta^a)
// coordinates on R x (0, inf) x S^3. eta' is the drift velocity of the leaf
// center, theta = (theta1, theta2, theta3) the standard S^3 angles.
struct MetricBlocks {
    Eigen::Matrix<double, 5, 5> m0;        // leading block, closed form
    Eigen::Matrix<double, 5, 5> m0_inv;    // closed-form inverse
    Eigen::Matrix<double, 5, 5> m1;        // hyperboloidal correction
    Eigen::Matrix<double, 5, 5> m1_tilde;  // -m0^{-1} m1 m0^{-1}, numeric
    double det_m0 = 0.0;                   // closed form: -(1-Theta.eta')^2 r^6 det ghat
    double m1_tilde_tautau = 0.0;          // closed form: -<r>^-2 / (1-Theta.eta')^2
};

MetricBlocks metric_blocks(double r, const Eigen::Vector3d& theta,
                           const Eigen::Vector4d& eta_prime);

// History of the boost parameters along the foliation time sigma.
struct BoostPath {
    std::function<Eigen::Vector4d(double)> ell;  // velocity, |ell| < 1
    std::function<Eigen::Vector4d(double)> xi;   // center, d xi / d sigma = ell
    double R_f = 20.0;                           // flat-region radius
    double delta_max = 1.0;                      // smoothed-max width
};

// Constant velocity: ell(s) = ell0, xi(s) = s ell0 (an exact travelling
// soliton, so the source F0 vanishes identically).
BoostPath frozen_path(const Eigen::Vector4d& ell0, double R_f = 20.0);

// ell(s) = amp tanh(s / ramp) e, xi the closed-form antiderivative.
BoostPath tanh_path(double amp, const Eigen::Vector4d& e, double ramp = 10.0,
                    double R_f = 20.0);

// Foliation time sigma at the event (X0, X'), the root of
// sigma - gamma R_f + smax(gamma R_f, <|X' - eta(sigma)|>) - X0 = 0,
// eta = xi - gamma R_f ell. Bracketing + TOMS748, tolerance 1e-12.
double sigma_of(const BoostPath& path, double X0, const Eigen::Vector4d& Xp);

// Event on the leaf tau = const at radius r, direction Theta (unit, R^4):
// X0 = tau + smax(gamma R_f, <r>), X' = eta + r Theta, parameters at the
// sigma with tau = sigma - gamma(sigma) R_f.
void leaf_point(const BoostPath& path, double tau, double r, const Eigen::Vector4d& Theta,
                double& X0, Eigen::Vector4d& Xp);

// Comoving soliton graph Q_p(X) = Q(|y'|), y' = A_ell (X' - (xi - sigma ell))
// - gamma ell X0 at sigma = sigma_of(X). Throws if |y'| <= 1.05 (the neck is
// outside this chart).
double soliton_profile_at(const BoostPath& path, double X0, const Eigen::Vector4d& Xp);

// Quasilinear residual of the graph flow on Minkowski R^{1+4}:
// F0 = box Q - (1 + dQ.dQ)^{-1} dQ^mu dQ^nu d2Q_{mu nu},
// second-order central differences with stencil width fd_h.
double source_F0(const BoostPath& path, double X0, const Eigen::Vector4d& Xp, double fd_h);

// |F0| sampled on the leaf tau at radii r (direction e1); used for decay fits.
std::vector<double> source_profile(const BoostPath& path, double tau,
                                   const std::vector<double>& radii, double fd_h);

}  // namespace catenoid::foliation
