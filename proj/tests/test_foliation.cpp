#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "catenoid/foliation_metrics.hpp"

using namespace catenoid::foliation;

TEST_CASE("smoothed max dominates max and is exact outside the blend window") {
    CHECK(smoothed_max(5.0, 1.0, 0.5) == doctest::Approx(5.0));
    CHECK(smoothed_max(1.0, 5.0, 0.5) == doctest::Approx(5.0));
    CHECK(smoothed_max(2.0, 2.0, 1.0) == doctest::Approx(2.0 + 3.0 / 16.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 500; ++k) {
        double a = u(rng), b = u(rng), d = 0.25 + std::abs(u(rng));
        double s = smoothed_max(a, b, d);
        CHECK(s >= std::max(a, b) - 1e-14);
        CHECK(s <= std::max(a, b) + 3.0 * d / 16.0 + 1e-14);
        CHECK(smoothed_max(a, b, d) == doctest::Approx(smoothed_max(b, a, d)));
    }
    // C^1: one-sided derivatives agree at the window edge
    double d = 1.0, a = 0.0;
    auto f = [&](double b) { return smoothed_max(a, b, d); };
    double h = 1e-6;
    CHECK((f(1.0 + h) - f(1.0 - h)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("boost matrices preserve the Minkowski form") {
    Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(5, 5);
    eta(0, 0) = -1.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int k = 0; k < 50; ++k) {
        Eigen::VectorXd ell(4);
        for (int i = 0; i < 4; ++i) ell(i) = u(rng);
        Eigen::MatrixXd L = boost_matrix(ell);
        CHECK((L.transpose() * eta * L - eta).cwiseAbs().maxCoeff() < 1e-12);
        // inverse boost is the boost with -ell
        CHECK((boost_matrix(Eigen::VectorXd(-ell)) * L -
               Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(boost_matrix(Eigen::VectorXd::Zero(4))
              .isApprox(Eigen::MatrixXd::Identity(5, 5), 1e-15));
}

TEST_CASE("leaf metric blocks satisfy their closed-form identities") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.5, 50.0), ut(0.1, 3.0),
        ue(-0.2, 0.2);
    for (int k = 0; k < 1000; ++k) {
        double r = ur(rng);
        Eigen::Vector3d th(ut(rng), ut(rng), 2.0 * ut(rng));
        Eigen::Vector4d ep(ue(rng), ue(rng), ue(rng), ue(rng));
        auto b = metric_blocks(r, th, ep);

        CHECK((b.m0 * b.m0_inv - Eigen::Matrix<double, 5, 5>::Identity())
                  .cwiseAbs().maxCoeff() < 1e-12);
        // m1_tilde = -m0^{-1} m1 m0^{-1}  <=>  m0 m1_tilde + m1 m0_inv = 0
        CHECK((b.m0 * b.m1_tilde + b.m1 * b.m0_inv).cwiseAbs().maxCoeff() <
              1e-11 * std::max(1.0, b.m1.cwiseAbs().maxCoeff()));
        CHECK(b.m1_tilde(0, 0) == doctest::Approx(b.m1_tilde_tautau).epsilon(1e-11));
        CHECK(b.m0.determinant() == doctest::Approx(b.det_m0).epsilon(1e-10));
        CHECK(b.det_m0 < 0.0);  // Lorentzian signature
        // closed form of the tau-tau correction
        double Te = std::cos(th(0)) * ep(0) + std::sin(th(0)) * std::cos(th(1)) * ep(1) +
                    std::sin(th(0)) * std::sin(th(1)) * std::cos(th(2)) * ep(2) +
                    std::sin(th(0)) * std::sin(th(1)) * std::sin(th(2)) * ep(3);
        double expect = -1.0 / ((1.0 + r * r) * (1.0 - Te) * (1.0 - Te));
        CHECK(b.m1_tilde_tautau == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("foliation time solve inverts the leaf parametrization") {
    auto path = tanh_path(0.1, Eigen::Vector4d(1, 0, 0, 0), 10.0, 20.0);
    for (double tau : {-5.0, 0.0, 7.5}) {
        for (double r : {5.0, 30.0, 120.0}) {
            double X0;
            Eigen::Vector4d Xp;
            Eigen::Vector4d Theta(0.6, 0.8, 0.0, 0.0);
            leaf_point(path, tau, r, Theta, X0, Xp);
            double sigma = sigma_of(path, X0, Xp);
            // on the leaf, tau = sigma - gamma(sigma) R_f
            Eigen::Vector4d ell = path.ell(sigma);
            double gamma = 1.0 / std::sqrt(1.0 - ell.squaredNorm());
            CHECK(sigma - gamma * path.R_f == doctest::Approx(tau).epsilon(1e-9));
        }
    }
}

TEST_CASE("frozen boost path is an exact travelling solution") {
    // the quasilinear residual of a constant-velocity soliton is pure
    // finite-difference error: it must converge to zero at second order
    auto path = frozen_path(0.05 * Eigen::Vector4d(1, 0, 0, 0), 20.0);
    double X0;
    Eigen::Vector4d Xp;
    leaf_point(path, 3.0, 50.0, Eigen::Vector4d(1, 0, 0, 0), X0, Xp);
    double f1 = std::abs(source_F0(path, X0, Xp, 4e-2));
    double f2 = std::abs(source_F0(path, X0, Xp, 2e-2));
    double f3 = std::abs(source_F0(path, X0, Xp, 1e-2));
    CHECK(f1 < 1e-10);
    CHECK(f2 < f1);
    CHECK(f3 < f2);
}

TEST_CASE("drifting boost produces a cubically decaying source") {
    auto path = tanh_path(0.05, Eigen::Vector4d(1, 0, 0, 0), 5.0, 5.0);
    std::vector<double> radii;
    for (double r = 50.0; r <= 400.0; r *= 1.18) radii.push_back(r);
    auto prof = source_profile(path, 5.0, radii, 1e-2);
    REQUIRE(prof.size() == radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int m = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double x = std::log(radii[i]), y = std::log(prof[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++m;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double c = (m * sxy - sx * sy) / std::sqrt((m * sxx - sx * sx) * (m * syy - sy * sy));
    CHECK(slope == doctest::Approx(-3.0).epsilon(0.07));
    CHECK(c * c > 0.999);
}

TEST_CASE("soliton graph far field approaches the flat plane") {
    auto path = frozen_path(Eigen::Vector4d::Zero(), 20.0);
    double X0;
    Eigen::Vector4d Xp;
    leaf_point(path, 0.0, 300.0, Eigen::Vector4d(0, 1, 0, 0), X0, Xp);
    CHECK(std::abs(soliton_profile_at(path, X0, Xp)) < 1e-3);
}
