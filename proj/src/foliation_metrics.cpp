#include "catenoid/foliation_metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "catenoid/catenoid_geometry.hpp"

namespace catenoid::foliation {

namespace {

double gamma_of(const Eigen::Vector4d& ell) {
    double e2 = ell.squaredNorm();
    if (e2 >= 1.0) throw std::domain_error("boost velocity must satisfy |ell| < 1");
    return 1.0 / std::sqrt(1.0 - e2);
}

Eigen::Vector4d eta_of(const BoostPath& path, double sigma) {
    Eigen::Vector4d ell = path.ell(sigma);
    return path.xi(sigma) - gamma_of(ell) * path.R_f * ell;
}

// implicit equation whose root is the foliation time of the event
double leaf_equation(const BoostPath& path, double sigma, double X0,
                     const Eigen::Vector4d& Xp) {
    Eigen::Vector4d ell = path.ell(sigma);
    double g = gamma_of(ell);
    double r = (Xp - eta_of(path, sigma)).norm();
    return sigma - g * path.R_f +
           smoothed_max(g * path.R_f, std::sqrt(r * r + 1.0), path.delta_max) - X0;
}

}  // namespace

double smoothed_max(double t1, double t2, double delta) {
    if (delta <= 0.0) return std::max(t1, t2);
    double x = (t1 - t2) / delta;
    double mu;
    if (std::abs(x) >= 1.0)
        mu = std::abs(x);
    else
        mu = 3.0 / 8.0 + 0.75 * x * x - 0.125 * x * x * x * x;
    return 0.5 * (t1 + t2) + 0.5 * delta * mu;
}

Eigen::MatrixXd boost_matrix(const Eigen::VectorXd& ell) {
    int d = static_cast<int>(ell.size());
    double e2 = ell.squaredNorm();
    if (e2 >= 1.0) throw std::domain_error("boost velocity must satisfy |ell| < 1");
    double g = 1.0 / std::sqrt(1.0 - e2);
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(d + 1, d + 1);
    L(0, 0) = g;
    if (e2 > 0.0) {
        Eigen::MatrixXd P = ell * ell.transpose() / e2;
        L.block(0, 1, 1, d) = -g * ell.transpose();
        L.block(1, 0, d, 1) = -g * ell;
        L.block(1, 1, d, d) = Eigen::MatrixXd::Identity(d, d) + (g - 1.0) * P;
    }
    return L;
}

MetricBlocks metric_blocks(double r, const Eigen::Vector3d& theta,
                           const Eigen::Vector4d& eta_prime) {
    if (r <= 0.0) throw std::domain_error("metric_blocks: r > 0 required");
    double t1 = theta(0), t2 = theta(1), t3 = theta(2);
    Eigen::Vector4d Th(std::cos(t1), std::sin(t1) * std::cos(t2),
                       std::sin(t1) * std::sin(t2) * std::cos(t3),
                       std::sin(t1) * std::sin(t2) * std::sin(t3));
    Eigen::Matrix<double, 4, 3> dTh;
    dTh.col(0) << -std::sin(t1), std::cos(t1) * std::cos(t2),
        std::cos(t1) * std::sin(t2) * std::cos(t3), std::cos(t1) * std::sin(t2) * std::sin(t3);
    dTh.col(1) << 0.0, -std::sin(t1) * std::sin(t2), std::sin(t1) * std::cos(t2) * std::cos(t3),
        std::sin(t1) * std::cos(t2) * std::sin(t3);
    dTh.col(2) << 0.0, 0.0, -std::sin(t1) * std::sin(t2) * std::sin(t3),
        std::sin(t1) * std::sin(t2) * std::cos(t3);

    Eigen::Matrix3d ghat = Eigen::Matrix3d::Zero();
    ghat(0, 0) = 1.0;
    ghat(1, 1) = std::sin(t1) * std::sin(t1);
    ghat(2, 2) = std::sin(t1) * std::sin(t1) * std::sin(t2) * std::sin(t2);

    double q = 1.0 - Th.dot(eta_prime);
    if (std::abs(q) < 1e-10)
        throw std::domain_error("metric_blocks: degenerate drift, Theta.eta' = 1");
    Eigen::Vector3d v;  // eta' . dTheta/dtheta^a
    for (int a = 0; a < 3; ++a) v(a) = eta_prime.dot(dTh.col(a));

    MetricBlocks out;
    out.m0.setZero();
    out.m0(0, 0) = -(1.0 - eta_prime.squaredNorm());
    out.m0(0, 1) = out.m0(1, 0) = -q;
    for (int a = 0; a < 3; ++a) out.m0(0, 2 + a) = out.m0(2 + a, 0) = r * v(a);
    out.m0.block<3, 3>(2, 2) = r * r * ghat;

    Eigen::Matrix3d ghat_inv = ghat.inverse();
    Eigen::Vector3d v_up = ghat_inv * v;
    out.m0_inv.setZero();
    out.m0_inv(0, 1) = out.m0_inv(1, 0) = -1.0 / q;
    out.m0_inv(1, 1) = (1.0 + Th.dot(eta_prime)) / q;
    for (int a = 0; a < 3; ++a) out.m0_inv(1, 2 + a) = out.m0_inv(2 + a, 1) = v_up(a) / (r * q);
    out.m0_inv.block<3, 3>(2, 2) = ghat_inv / (r * r);

    double br2 = r * r + 1.0;
    out.m1.setZero();
    out.m1(0, 1) = out.m1(1, 0) = 1.0 - r / std::sqrt(br2);
    out.m1(1, 1) = 1.0 / br2;

    out.m1_tilde = -out.m0_inv * out.m1 * out.m0_inv;

    out.det_m0 = -(q * q) * std::pow(r, 6) * ghat.determinant();
    out.m1_tilde_tautau = -1.0 / (br2 * q * q);
    return out;
}

BoostPath frozen_path(const Eigen::Vector4d& ell0, double R_f) {
    BoostPath p;
    p.ell = [ell0](double) { return ell0; };
    p.xi = [ell0](double s) { return Eigen::Vector4d(s * ell0); };
    p.R_f = R_f;
    return p;
}

BoostPath tanh_path(double amp, const Eigen::Vector4d& e, double ramp, double R_f) {
    BoostPath p;
    p.ell = [amp, e, ramp](double s) { return Eigen::Vector4d(amp * std::tanh(s / ramp) * e); };
    p.xi = [amp, e, ramp](double s) {
        return Eigen::Vector4d(amp * ramp * std::log(std::cosh(s / ramp)) * e);
    };
    p.R_f = R_f;
    return p;
}

double sigma_of(const BoostPath& path, double X0, const Eigen::Vector4d& Xp) {
    double span = Xp.norm() + path.R_f + 10.0;
    double lo = X0 - 3.0 * span, hi = X0 + span;
    auto f = [&](double s) { return leaf_equation(path, s, X0, Xp); };
    double flo = f(lo), fhi = f(hi);
    int guard = 0;
    while (flo * fhi > 0.0) {
        lo -= span;
        hi += span;
        flo = f(lo);
        fhi = f(hi);
        if (++guard > 10) throw std::runtime_error("sigma_of: failed to bracket the leaf time");
    }
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (res.first + res.second);
}

void leaf_point(const BoostPath& path, double tau, double r, const Eigen::Vector4d& Theta,
                double& X0, Eigen::Vector4d& Xp) {
    // invert tau = sigma - gamma(sigma) R_f for sigma
    auto f = [&](double s) { return s - gamma_of(path.ell(s)) * path.R_f - tau; };
    double lo = tau, hi = tau + 3.0 * path.R_f;
    double flo = f(lo), fhi = f(hi);
    int guard = 0;
    while (flo * fhi > 0.0) {
        lo -= path.R_f;
        hi += path.R_f;
        flo = f(lo);
        fhi = f(hi);
        if (++guard > 10) throw std::runtime_error("leaf_point: failed to bracket sigma");
    }
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    double sigma = 0.5 * (res.first + res.second);
    double g = gamma_of(path.ell(sigma));
    X0 = tau + smoothed_max(g * path.R_f, std::sqrt(r * r + 1.0), path.delta_max);
    Xp = eta_of(path, sigma) + r * Theta;
}

double soliton_profile_at(const BoostPath& path, double X0, const Eigen::Vector4d& Xp) {
    double sigma = sigma_of(path, X0, Xp);
    Eigen::Vector4d ell = path.ell(sigma);
    double g = gamma_of(ell);
    double e2 = ell.squaredNorm();
    Eigen::Vector4d rel = Xp - (path.xi(sigma) - sigma * ell);
    Eigen::Vector4d y = rel;
    if (e2 > 0.0) {
        Eigen::Vector4d par = (ell.dot(rel) / e2) * ell;
        y = rel + (g - 1.0) * par;  // A_ell rel = gamma P rel + (I - P) rel
        y -= g * ell * X0;
    }
    double rt = y.norm();
    if (rt <= 1.05) throw std::domain_error("soliton_profile_at: too close to the neck");
    return geometry::profile_height(rt, 4);
}

double source_F0(const BoostPath& path, double X0, const Eigen::Vector4d& Xp, double fd_h) {
    // Q and its first/second central differences in the 5 ambient coordinates
    auto Q = [&](double t, const Eigen::Vector4d& x) { return soliton_profile_at(path, t, x); };
    double h = fd_h;
    double q0 = Q(X0, Xp);
    double d[5], d2[5][5];
    double qp[5], qm[5];
    for (int mu = 0; mu < 5; ++mu) {
        double tp = X0, tm = X0;
        Eigen::Vector4d xp = Xp, xm = Xp;
        if (mu == 0) {
            tp += h;
            tm -= h;
        } else {
            xp(mu - 1) += h;
            xm(mu - 1) -= h;
        }
        qp[mu] = Q(tp, xp);
        qm[mu] = Q(tm, xm);
        d[mu] = (qp[mu] - qm[mu]) / (2.0 * h);
        d2[mu][mu] = (qp[mu] - 2.0 * q0 + qm[mu]) / (h * h);
    }
    for (int mu = 0; mu < 5; ++mu)
        for (int nu = mu + 1; nu < 5; ++nu) {
            auto shift = [&](int s1, int s2) {
                double t = X0;
                Eigen::Vector4d x = Xp;
                if (mu == 0)
                    t += s1 * h;
                else
                    x(mu - 1) += s1 * h;
                if (nu == 0)
                    t += s2 * h;
                else
                    x(nu - 1) += s2 * h;
                return Q(t, x);
            };
            d2[mu][nu] = d2[nu][mu] =
                (shift(1, 1) - shift(1, -1) - shift(-1, 1) + shift(-1, -1)) / (4.0 * h * h);
        }
    auto eta = [](int mu) { return mu == 0 ? -1.0 : 1.0; };
    double box = 0.0, grad2 = 0.0, quad = 0.0;
    for (int mu = 0; mu < 5; ++mu) {
        box += eta(mu) * d2[mu][mu];
        grad2 += eta(mu) * d[mu] * d[mu];
        for (int nu = 0; nu < 5; ++nu)
            quad += eta(mu) * eta(nu) * d[mu] * d[nu] * d2[mu][nu];
    }
    return box - quad / (1.0 + grad2);
}

std::vector<double> source_profile(const BoostPath& path, double tau,
                                   const std::vector<double>& radii, double fd_h) {
    Eigen::Vector4d e1(1.0, 0.0, 0.0, 0.0);
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        double X0;
        Eigen::Vector4d Xp;
        leaf_point(path, tau, r, e1, X0, Xp);
        out.push_back(std::abs(source_F0(path, X0, Xp, fd_h)));
    }
    return out;
}

}  // namespace catenoid::foliation
