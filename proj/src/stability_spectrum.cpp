#include "catenoid/stability_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "catenoid/catenoid_geometry.hpp"
#include "catenoid/quadrature.hpp"

extern "C" {
void dstevr_(const char* jobz, const char* range, const int* n, double* d, double* e,
             const double* vl, const double* vu, const int* il, const int* iu,
             const double* abstol, int* m, double* w, double* z, const int* ldz, int* isuppz,
             double* work, const int* lwork, int* iwork, const int* liwork, int* info,
             std::size_t jobz_len, std::size_t range_len);
}

namespace catenoid::spectrum {

namespace {

double bracket(double rho) { return std::sqrt(1.0 + rho * rho); }

// |F_rho|(rho), even in rho, with the neck limit (n-1)^{-1/2}
double f_rho_weight(double rho, int n) {
    double a = std::abs(rho);
    if (a < 1e-8) return 1.0 / std::sqrt(double(n - 1));
    double br = bracket(a);
    return a * std::pow(br, n - 2.0) / std::sqrt(std::pow(br, 2.0 * (n - 1)) - 1.0);
}

double sector_potential(double rho, int l, int n) {
    double br2 = 1.0 + rho * rho;
    return -double(l) * (l + n - 2) / br2 + double(n) * (n - 1) * std::pow(br2, -double(n));
}

// eigen-decomposition of a symmetric tridiagonal matrix, selected index range
// (1-based, ascending), via LAPACK dstevr
void tridiag_eigs(std::vector<double> d, std::vector<double> e, int il, int iu,
                  std::vector<double>& vals, std::vector<std::vector<double>>& vecs) {
    int n = static_cast<int>(d.size());
    int m = 0;
    int nsel = iu - il + 1;
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * nsel);
    std::vector<int> isuppz(2 * std::max(1, nsel));
    double abstol = 0.0, vl = 0.0, vu = 0.0;
    int lwork = -1, liwork = -1, info = 0;
    double wkopt = 0.0;
    int iwkopt = 0;
    e.resize(n, 0.0);
    dstevr_("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &m, w.data(), z.data(),
            &n, isuppz.data(), &wkopt, &lwork, &iwkopt, &liwork, &info, 1, 1);
    lwork = static_cast<int>(wkopt);
    liwork = iwkopt;
    std::vector<double> work(lwork);
    std::vector<int> iwork(liwork);
    dstevr_("V", "I", &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &m, w.data(), z.data(),
            &n, isuppz.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
    if (info != 0) throw std::runtime_error("dstevr failed, info = " + std::to_string(info));
    vals.assign(w.begin(), w.begin() + m);
    vecs.assign(m, std::vector<double>(n));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) vecs[j][i] = z[static_cast<std::size_t>(j) * n + i];
}

double quintic_ramp_down(double t) {
    // 1 at t <= 0, 0 at t >= 1, C^2 quintic in between
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return 1.0 - (10.0 * t * t * t - 15.0 * t * t * t * t + 6.0 * t * t * t * t * t);
}

}  // namespace

std::vector<double> uniform_grid(double rho_max, int nodes) {
    std::vector<double> g(nodes);
    double h = 2.0 * rho_max / (nodes + 1);
    for (int i = 0; i < nodes; ++i) g[i] = -rho_max + (i + 1) * h;
    return g;
}

ModeOperator assemble(int l, int n, const std::vector<double>& grid) {
    if (grid.size() < 8) throw std::invalid_argument("assemble: grid too small");
    double h = grid[1] - grid[0];
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-10 * h)
            throw std::invalid_argument("assemble: grid must be uniform");
    double rho_max = grid.back() + h;
    if (rho_max < 30.0 - 1e-9) throw std::invalid_argument("assemble: rho_max must be >= 30");
    if (h > 0.05 + 1e-12) throw std::invalid_argument("assemble: spacing must resolve the neck");

    ModeOperator op;
    op.l = l;
    op.n = n;
    op.grid = grid;
    op.h = h;
    std::size_t N = grid.size();
    op.w.resize(N);
    op.V.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        op.w[i] = std::pow(bracket(grid[i]), n - 1.0) * f_rho_weight(grid[i], n);
        op.V[i] = sector_potential(grid[i], l, n);
    }
    op.wt_half.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        double rho = grid[0] + (static_cast<double>(i) - 0.5) * h;
        op.wt_half[i] = std::pow(bracket(rho), n - 1.0) / f_rho_weight(rho, n);
    }
    // A x = lambda M x with M = diag(h w_i); reduce to tridiagonal
    // B = M^{-1/2} A M^{-1/2}
    op.diag.resize(N);
    op.offdiag.resize(N - 1);
    for (std::size_t i = 0; i < N; ++i) {
        double Aii = -(op.wt_half[i] + op.wt_half[i + 1]) / h + h * op.w[i] * op.V[i];
        op.diag[i] = Aii / (h * op.w[i]);
        if (i + 1 < N)
            op.offdiag[i] = (op.wt_half[i + 1] / h) / (h * std::sqrt(op.w[i] * op.w[i + 1]));
    }
    return op;
}

std::vector<double> ModeOperator::apply(const std::vector<double>& u) const {
    std::size_t N = grid.size();
    if (u.size() != N) throw std::invalid_argument("apply: size mismatch");
    std::vector<double> out(N);
    for (std::size_t i = 0; i < N; ++i) {
        double um = i > 0 ? u[i - 1] : 0.0;   // Dirichlet
        double up = i + 1 < N ? u[i + 1] : 0.0;
        double flux = (wt_half[i + 1] * (up - u[i]) - wt_half[i] * (u[i] - um)) / (h * h);
        out[i] = flux / w[i] + V[i] * u[i];
    }
    return out;
}

double ModeOperator::inner(const std::vector<double>& u, const std::vector<double>& v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i] * w[i];
    return s * h;
}

double ModeOperator::norm(const std::vector<double>& u) const { return std::sqrt(inner(u, u)); }

SpectralResult spectrum_top(const ModeOperator& op, int k) {
    int N = static_cast<int>(op.grid.size());
    k = std::min(k, N);
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    tridiag_eigs(op.diag, op.offdiag, N - k + 1, N, vals, vecs);
    SpectralResult res;
    res.eigenvalues = vals;
    res.eigenvectors.resize(vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j) {
        // undo the M^{1/2} similarity, then w-normalize
        std::vector<double> v(op.grid.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = vecs[j][i] / std::sqrt(op.h * op.w[i]);
        double nrm = op.norm(v);
        for (auto& x : v) x /= nrm;
        res.eigenvectors[j] = std::move(v);
    }
    return res;
}

double zero_mode_multiplier(int l, int n, int j) {
    int m = j + 2 * (n - 1);
    double denom = double(m - l - n + 2) * (m + l);
    if (denom == 0.0) throw std::domain_error("zero_mode_multiplier: vanishing denominator");
    return double(j - n + 1) * (j + n) / denom;
}

double zero_mode_series(int l, int n, double r, int max_terms) {
    if (r <= 1.0) throw std::domain_error("zero_mode_series: requires r > 1");
    if (l < 1) throw std::domain_error("zero_mode_series: requires l >= 1");
    int m = n - 2 + l;
    double C = 1.0;
    double sum = 0.0;
    for (int t = 0; t < max_terms; ++t) {
        double term = C * std::pow(r, -m);
        sum += term;
        if (std::abs(term) < 1e-12 * std::max(1.0, std::abs(sum)) && t > 0) return sum;
        double mult = zero_mode_multiplier(l, n, m);
        if (mult == 0.0) return sum;  // l = 1: recursion terminates immediately
        C *= mult;
        m += 2 * (n - 1);
    }
    throw std::runtime_error("zero_mode_series: term budget exhausted, tail " +
                             std::to_string(C * std::pow(r, -m)));
}

double weighted_norm_sq(const ModeOperator& op, const std::vector<double>& u, int s,
                        double delta) {
    std::size_t N = u.size();
    std::vector<double> cur = u;
    double total = 0.0;
    for (int k = 0; k <= s; ++k) {
        double part = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            part += std::pow(1.0 + op.grid[i] * op.grid[i], delta + k) * cur[i] * cur[i] *
                    op.w[i];
        total += part * op.h;
        if (k == s) break;
        std::vector<double> der(N);
        for (std::size_t i = 0; i < N; ++i) {
            double um = i > 0 ? cur[i - 1] : 0.0;
            double up = i + 1 < N ? cur[i + 1] : 0.0;
            der[i] = (up - um) / (2.0 * op.h);
        }
        cur = std::move(der);
    }
    return total;
}

EllipticProbeResult elliptic_ratio_probe(int n, int trials, double delta, int nodes,
                                         double rho_max, std::uint64_t seed) {
    if (!(delta > -0.5 * n && delta < 0.5 * n - 2.0))
        throw std::domain_error("elliptic_ratio_probe: delta outside (-n/2, n/2 - 2)");
    auto grid = uniform_grid(rho_max, nodes);
    std::vector<ModeOperator> ops;
    for (int l = 0; l <= 2; ++l) ops.push_back(assemble(l, n, grid));

    // truncated, w-normalized zero mode <rho>^{-(n-1)} for the l = 1 pairing
    std::vector<double> e1(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        e1[i] = std::pow(1.0 + grid[i] * grid[i], -0.5 * (n - 1));
    double e1n = ops[1].norm(e1);
    for (auto& x : e1) x /= e1n;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-rho_max / 3.0, rho_max / 3.0);
    std::uniform_real_distribution<double> width(0.5, 3.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> nbump(1, 3);
    std::uniform_int_distribution<int> sector(0, 2);

    EllipticProbeResult res;
    res.trials = trials;
    for (int t = 0; t < trials; ++t) {
        int l = sector(rng);
        std::vector<double> u(grid.size(), 0.0);
        int k = nbump(rng);
        for (int b = 0; b < k; ++b) {
            double c = center(rng), s2 = width(rng), a = amp(rng);
            for (std::size_t i = 0; i < grid.size(); ++i)
                u[i] += a * std::exp(-0.5 * std::pow((grid[i] - c) / s2, 2));
        }
        auto Lu = ops[l].apply(u);
        double num = std::sqrt(weighted_norm_sq(ops[l], u, 2, delta));
        double den = std::sqrt(weighted_norm_sq(ops[l], Lu, 0, delta + 2.0));
        if (l == 1) den += std::abs(ops[1].inner(u, e1));
        if (den > 0.0) res.max_ratio = std::max(res.max_ratio, num / den);
    }
    return res;
}

int morse_index(int n, int l_max, int nodes, double rho_max, double gap_tol) {
    auto grid = uniform_grid(rho_max, nodes);
    // translation zero modes pick up a positive O(h^2) discretization shift
    // (empirically ~0.5 h^2); keep the threshold safely above it
    double h = grid[1] - grid[0];
    gap_tol = std::max(gap_tol, 5.0 * h * h);
    int count = 0;
    for (int l = 0; l <= l_max; ++l) {
        auto op = assemble(l, n, grid);
        auto top = spectrum_top(op, 4);
        for (double lam : top.eigenvalues)
            if (lam > gap_tol) ++count;
    }
    return count;
}

std::vector<std::vector<double>> dmatrix(const std::vector<double>& ell, double R_f) {
    const int n = 4;
    if (ell.size() != n) throw std::invalid_argument("dmatrix: ell must be in R^4");
    double el2 = 0.0;
    for (double x : ell) el2 += x * x;
    double elnorm = std::sqrt(el2);
    if (elnorm >= 0.3) throw std::domain_error("dmatrix: requires |ell| < 0.3");
    if (R_f < 10.0) throw std::domain_error("dmatrix: requires R_f >= 10");
    double gamma = 1.0 / std::sqrt(1.0 - el2);

    using Vec5 = Eigen::Matrix<double, 5, 1>;
    using Mat5 = Eigen::Matrix<double, 5, 5>;

    // embedding derivatives of F(rho, theta) = (<rho> Theta, Z(rho)) in R^5
    auto theta_of = [](double t1, double t2, double t3) {
        Eigen::Vector4d Th(std::cos(t1), std::sin(t1) * std::cos(t2),
                           std::sin(t1) * std::sin(t2) * std::cos(t3),
                           std::sin(t1) * std::sin(t2) * std::sin(t3));
        return Th;
    };

    // quadrature rules
    int n_rho = 80, n_t1 = 16, n_t2 = 16, n_t3 = 24;
    std::vector<double> xg, wg;
    quad::gauss_legendre_nodes(n_rho, xg, wg);
    std::vector<double> x1, w1, x2, w2;
    quad::gauss_legendre_nodes(n_t1, x1, w1);
    quad::gauss_legendre_nodes(n_t2, x2, w2);

    Eigen::Vector4d lv(ell[0], ell[1], ell[2], ell[3]);
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    if (elnorm > 0) P = lv * lv.transpose() / el2;

    Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
    for (int ir = 0; ir < n_rho; ++ir) {
        // split the rho range at 0 to keep the |rho| kink off the nodes
        for (int side = 0; side < 2; ++side) {
            double a = side == 0 ? -R_f / 2.0 : 0.0;
            double b = side == 0 ? 0.0 : R_f / 2.0;
            double rho = 0.5 * (b - a) * xg[ir] + 0.5 * (a + b);
            double wrho = 0.5 * (b - a) * wg[ir];
            double chi = quintic_ramp_down((std::abs(rho) - R_f / 4.0) / (R_f / 4.0));
            if (chi == 0.0) continue;
            double br = bracket(rho);
            double zp = std::abs(rho) < 1e-12
                            ? 0.0
                            : (rho / br) / std::sqrt(std::pow(br, 2.0 * (n - 1)) - 1.0);
            double nu_fac = std::pow(br, -(n - 1.0));
            for (int i1 = 0; i1 < n_t1; ++i1) {
                // sqrt|h| below already carries the angular volume factors
                // sin^2(t1) sin(t2), so the weights are bare interval maps
                double t1 = 0.5 * M_PI * (x1[i1] + 1.0);
                double jw1 = 0.5 * M_PI * w1[i1];
                for (int i2 = 0; i2 < n_t2; ++i2) {
                    double t2 = 0.5 * M_PI * (x2[i2] + 1.0);
                    double jw2 = 0.5 * M_PI * w2[i2];
                    for (int i3 = 0; i3 < n_t3; ++i3) {
                        double t3 = 2.0 * M_PI * i3 / n_t3;
                        double jw3 = 2.0 * M_PI / n_t3;
                        Eigen::Vector4d Th = theta_of(t1, t2, t3);
                        // coordinate tangents of F = (<rho> Theta, Z(rho)),
                        // angular derivatives in closed form
                        double c1 = std::cos(t1), s1 = std::sin(t1);
                        double c2v = std::cos(t2), s2v = std::sin(t2);
                        double c3 = std::cos(t3), s3 = std::sin(t3);
                        Vec5 Frho;
                        Frho.head<4>() = (rho / br) * Th;
                        Frho(4) = zp;
                        Vec5 Ft1 = Vec5::Zero(), Ft2 = Vec5::Zero(), Ft3 = Vec5::Zero();
                        Ft1.head<4>() =
                            br * Eigen::Vector4d(-s1, c1 * c2v, c1 * s2v * c3, c1 * s2v * s3);
                        Ft2.head<4>() =
                            br * Eigen::Vector4d(0.0, -s1 * s2v, s1 * c2v * c3, s1 * c2v * s3);
                        Ft3.head<4>() =
                            br * Eigen::Vector4d(0.0, 0.0, -s1 * s2v * s3, s1 * s2v * c3);
                        // boosted spatial tangents: dF + (1/gamma - 1) P_l dF
                        auto boost_sp = [&](const Vec5& v) {
                            Vec5 o = v;
                            o.head<4>() += (1.0 / gamma - 1.0) * (P * v.head<4>());
                            return o;
                        };
                        Vec5 t[4] = {boost_sp(Frho), boost_sp(Ft1), boost_sp(Ft2), boost_sp(Ft3)};
                        Vec5 ell5 = Vec5::Zero();
                        ell5.head<4>() = lv;
                        // h_{mu nu} = eta(Psi_mu, Psi_nu), Psi_0 = (1, ell)
                        Mat5 hmat;
                        hmat(0, 0) = -1.0 + el2;
                        for (int j = 0; j < 4; ++j) {
                            double v0j = ell5.dot(t[j]);
                            hmat(0, j + 1) = hmat(j + 1, 0) = v0j;
                            for (int k2 = j; k2 < 4; ++k2)
                                hmat(j + 1, k2 + 1) = hmat(k2 + 1, j + 1) = t[j].dot(t[k2]);
                        }
                        double det = hmat.determinant();
                        double sqrth = std::sqrt(std::abs(det));
                        double h00 = hmat.inverse()(0, 0);
                        double weight = chi * sqrth * h00 * wrho * jw1 * jw2 * jw3;
                        D += weight * nu_fac * nu_fac * (Th * Th.transpose());
                    }
                }
            }
        }
    }
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = D(i, j);
    return out;
}

}  // namespace catenoid::spectrum
