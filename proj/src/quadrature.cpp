#include "catenoid/quadrature.hpp"

#include <algorithm>

namespace catenoid::quad {

namespace {

double simpson_panel(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double& fm) {
    double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    double fml, fmr;
    double left = simpson_panel(f, a, fa, m, fm, fml);
    double right = simpson_panel(f, m, fm, b, fb, fmr);
    double delta = left + right - whole;
    if (std::isfinite(delta) && (depth <= 0 || std::abs(delta) <= 15.0 * tol))
        return left + right + delta / 15.0;
    // non-finite estimates (endpoint singularities) keep shrinking towards
    // the bad point; once the panel is at machine resolution its contribution
    // is dropped
    if (depth <= 0 || b - a <= 0x1p-50 * (std::abs(a) + std::abs(b) + 1.0))
        return std::isfinite(left + right) ? left + right : 0.0;
    // keep the child tolerance above roundoff so the recursion terminates
    double child = std::max(0.5 * tol,
                            0x1p-52 * (std::abs(left) + std::abs(right)));
    return adapt(f, a, fa, m, fm, 0.5 * (a + m), fml, left, child, depth - 1) +
           adapt(f, m, fm, b, fb, 0.5 * (m + b), fmr, right, child, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    double fa = f(a), fb = f(b), fm;
    double whole = simpson_panel(f, a, fa, b, fb, fm);
    return adapt(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, tol, max_depth);
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
    // map (a,b) -> (-1,1), then x = tanh(pi/2 sinh t)
    const double c = 0.5 * (b - a), d = 0.5 * (b + a);
    auto g = [&](double t) {
        double s = std::sinh(t);
        double x = std::tanh(M_PI_2 * s);
        double w = M_PI_2 * std::cosh(t) / std::pow(std::cosh(M_PI_2 * s), 2);
        double xx = d + c * x;
        // clamp into the open interval; the weight already kills the endpoint
        if (xx <= std::min(a, b)) xx = std::nextafter(std::min(a, b), d);
        if (xx >= std::max(a, b)) xx = std::nextafter(std::max(a, b), d);
        return c * w * f(xx);
    };
    const double tmax = 6.5;
    double h = 0.5;
    double sum = g(0.0);
    for (double t = h; t <= tmax; t += h) sum += g(t) + g(-t);
    double prev = h * sum;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += g(t) + g(-t);
        sum += add;
        double cur = h * sum;
        if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur)) && level >= 2) return cur;
        prev = cur;
    }
    return prev;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int order) {
    std::vector<double> x, w;
    gauss_legendre_nodes(order, x, w);
    double c = 0.5 * (b - a), d = 0.5 * (b + a);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += w[i] * f(d + c * x[i]);
    return c * s;
}

void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    // Newton on Legendre polynomials, standard Golub-Welsch-free construction
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            double dx = p0 / pp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    }
}

double simpson_uniform(const std::vector<double>& y, double h) {
    std::size_t n = y.size();
    if (n < 2) return 0.0;
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    if (i + 1 < n) s += 0.5 * h * (y[i] + y[i + 1]);
    return s;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

}  // namespace catenoid::quad
