#include "catenoid/toys.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catenoid/quadrature.hpp"

namespace catenoid::toys {

namespace {

constexpr double kQuadTol = 1e-11;

// relative slack granted to inequalities checked by quadrature
constexpr double kIneqSlack = 1e-8;

double normalized_kernel_mass() {
    static const double mass = quad::tanh_sinh(
        [](double s) { return std::exp(-1.0 / (s * (1.0 - s))); }, 0.0, 1.0, 1e-15);
    return mass;
}

}  // namespace

HardyTerms hardy_check(const std::function<double(double)>& phi,
                       const std::function<double(double)>& dphi, double r0, double r1,
                       double p) {
    if (p == 1.0) throw std::domain_error("hardy_check: p = 1 has no Hardy constant");
    if (!(0.0 < r0 && r0 < r1)) throw std::domain_error("hardy_check: need 0 < r0 < r1");
    HardyTerms out;
    out.lhs = 0.25 * (p - 1.0) * (p - 1.0) *
              quad::adaptive_simpson(
                  [&](double r) { return phi(r) * phi(r) * std::pow(r, p - 2.0); }, r0, r1,
                  kQuadTol);
    double bulk = quad::adaptive_simpson(
        [&](double r) { return dphi(r) * dphi(r) * std::pow(r, p); }, r0, r1, kQuadTol);
    double boundary = 0.5 * (p - 1.0) *
                      (std::pow(r1, p - 1.0) * phi(r1) * phi(r1) -
                       std::pow(r0, p - 1.0) * phi(r0) * phi(r0));
    out.rhs = bulk + boundary;
    out.pass = out.lhs <= out.rhs + kIneqSlack * (std::abs(out.rhs) + 1.0);
    return out;
}

HardyTerms hardy_variant_check(const std::function<double(double)>& phi,
                               const std::function<double(double)>& dphi, double r0, double r1,
                               double q, int n) {
    if (q == double(n)) throw std::domain_error("hardy_variant_check: q = n is excluded");
    if (!(0.0 < r0 && r0 < r1)) throw std::domain_error("hardy_variant_check: need 0 < r0 < r1");
    HardyTerms out;
    out.lhs = 0.25 * (q - n) * (q - n) *
              quad::adaptive_simpson(
                  [&](double r) { return phi(r) * phi(r) * std::pow(r, q - 2.0); }, r0, r1,
                  kQuadTol);
    double bulk = quad::adaptive_simpson(
        [&](double r) {
            double op = dphi(r) + 0.5 * (n - 1.0) / r * phi(r);
            return op * op * std::pow(r, q);
        },
        r0, r1, kQuadTol);
    double boundary = 0.5 * (q - n) *
                      (std::pow(r1, q - 1.0) * phi(r1) * phi(r1) -
                       std::pow(r0, q - 1.0) * phi(r0) * phi(r0));
    out.rhs = bulk + boundary;
    out.pass = out.lhs <= out.rhs + kIneqSlack * (std::abs(out.rhs) + 1.0);
    return out;
}

InterpolationReport interpolation_check(const std::function<double(double, double)>& f,
                                        double R, double p, double s, double eps, double q,
                                        const std::vector<double>& taus, double r_cut) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("interpolation_check: s in (0, 1]");
    if (!(eps > 0.0 && eps < s)) throw std::domain_error("interpolation_check: eps in (0, s)");
    auto rint = [&](double tau, double expo) {
        return quad::adaptive_simpson(
            [&](double r) {
                double v = f(tau, r);
                return std::pow(r, expo) * v * v;
            },
            R, r_cut, kQuadTol);
    };
    InterpolationReport rep;
    for (double tau : taus) {
        rep.D1 = std::max(rep.D1, std::pow(1.0 + tau, q) * rint(tau, p - eps));
        rep.D2 = std::max(rep.D2, std::pow(1.0 + tau, q - 1.0) * rint(tau, p + s - eps));
    }
    rep.pass = true;
    for (double tau : taus) {
        double lhs = rint(tau, p);
        double bound = rep.D1 * std::pow(R + tau, eps) * std::pow(1.0 + tau, -q) +
                       rep.D2 * std::pow(R + tau, eps - s) * std::pow(1.0 + tau, -q + 1.0);
        double ratio = lhs / bound;
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (ratio > 1.0 + kIneqSlack) rep.pass = false;
    }
    return rep;
}

double kernel_k(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s))) / normalized_kernel_mass();
}

double kernel_k_tilde(double r) {
    if (r >= 1.0) return 0.0;
    if (r <= 0.0) return -1.0;
    return -quad::tanh_sinh([](double s) { return kernel_k(s); }, r, 1.0, 1e-14);
}

double smooth_S(const std::function<double(double)>& h, double t, int panels) {
    double lo = std::max(t - 1.0, -1.0);
    if (lo >= t) return 0.0;
    std::vector<double> y(panels + 1);
    double dh = (t - lo) / panels;
    for (int i = 0; i <= panels; ++i) {
        double sPt = lo + i * dh;
        y[i] = h(sPt) * kernel_k(t - sPt);
    }
    return quad::simpson_uniform(y, dh);
}

double smooth_tilde_S(const std::function<double(double)>& h, double t, int panels) {
    // supp k~ subset (-inf, 1), and s >= -1, so s ranges over [-1, t] u nothing
    double lo = -1.0, hi = std::max(t, -1.0 + 1e-14);
    std::vector<double> y(panels + 1);
    double dh = (hi - lo) / panels;
    for (int i = 0; i <= panels; ++i) {
        double sPt = lo + i * dh;
        y[i] = h(sPt) * kernel_k_tilde(t - sPt);
    }
    return quad::simpson_uniform(y, dh);
}

ShootResult shoot(double mu, const std::function<double(double)>& g, double lambda0,
                  double kappa, double T, double dtau) {
    if (mu <= 0.0) throw std::domain_error("shoot: mu > 0 required");
    if (lambda0 <= 0.0) throw std::domain_error("shoot: lambda0 > 0 required");
    auto envelope = [&](double tau) {
        return lambda0 * std::pow(1.0 + tau * tau, 0.5 * (-2.25 + kappa));
    };
    auto rhs = [&](double tau, double b) { return mu * b + g(tau); };
    // integrate until the trajectory leaves the envelope; returns the signed
    // exit (b at exit) or 0 if trapped through T, and records samples
    auto run = [&](double b0, std::vector<double>* taus, std::vector<double>* bs,
                   double* exit_time) {
        double b = b0, tau = 0.0;
        if (taus) {
            taus->clear();
            bs->clear();
        }
        while (tau < T) {
            if (taus) {
                taus->push_back(tau);
                bs->push_back(b);
            }
            double step = std::min(dtau, T - tau);
            double k1 = rhs(tau, b);
            double k2 = rhs(tau + 0.5 * step, b + 0.5 * step * k1);
            double k3 = rhs(tau + 0.5 * step, b + 0.5 * step * k2);
            double k4 = rhs(tau + step, b + step * k3);
            b += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tau += step;
            if (std::abs(b) > envelope(tau)) {
                if (exit_time) *exit_time = tau;
                return b > 0.0 ? 1.0 : -1.0;
            }
        }
        if (taus) {
            taus->push_back(tau);
            bs->push_back(b);
        }
        if (exit_time) *exit_time = T;
        // trapped through T: classify by the terminal sign so the bisection
        // still contracts onto the trapped manifold
        return b > 0.0 ? 1.0 : (b < 0.0 ? -1.0 : 0.0);
    };

    ShootResult res;
    double lo = -lambda0, hi = lambda0;
    double slo = run(lo, nullptr, nullptr, &res.exit_time_low);
    double shi = run(hi, nullptr, nullptr, &res.exit_time_high);
    if (!(slo < 0.0 && shi > 0.0))
        throw std::runtime_error("shoot: bracket endpoints do not exit through opposite signs");
    while (hi - lo > 1e-16 * lambda0) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
        double sm = run(mid, nullptr, nullptr, nullptr);
        if (sm <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    res.b0 = 0.5 * (lo + hi);
    res.bracket_width = (hi - lo) / lambda0;
    run(res.b0, &res.tau, &res.b, nullptr);

    // differential-inequality audit inside the band lambda/2 < |b| < lambda,
    // rerun from both bracket endpoints so the band is actually visited
    res.monotonicity_ok = true;
    for (double b0 : {lo - 0.1 * lambda0, hi + 0.1 * lambda0, res.b0}) {
        std::vector<double> ts, bs;
        double et = 0.0;
        run(std::clamp(b0, -lambda0, lambda0), &ts, &bs, &et);
        for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
            double lam = envelope(ts[i]);
            double ab = std::abs(bs[i]);
            if (ab > 0.5 * lam && ab < lam) {
                double db2 = (bs[i + 1] * bs[i + 1] - bs[i - 1] * bs[i - 1]) /
                             (ts[i + 1] - ts[i - 1]);
                if (db2 < mu * bs[i] * bs[i] - 1e-9 * lambda0 * lambda0)
                    res.monotonicity_ok = false;
            }
        }
    }
    return res;
}

}  // namespace catenoid::toys
