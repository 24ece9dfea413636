#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "catenoid/calibration.hpp"
#include "catenoid/quadrature.hpp"
#include "catenoid/tail_evolution.hpp"
#include "oracle_wave4d.hpp"

using namespace catenoid::evolution;

namespace {

EvolutionConfig base_config() {
    EvolutionConfig cfg;
    cfg.l = 0;
    cfg.r_min = 2.0;
    cfg.r_max = 10.0;
    cfg.nodes = 1200;
    cfg.t_max = 20.0;
    cfg.cutoff_R = 10.0;
    cfg.observers = {10.0};
    cfg.p_list = {0.5, 1.0, 1.5, 1.9};
    return cfg;
}

}  // namespace

TEST_CASE("zero data stays zero") {
    auto cfg = base_config();
    cfg.bump_amp = 0.0;
    cfg.t_max = 5.0;
    auto run = run_evolution(cfg);
    for (std::size_t ip = 0; ip < run.p_list.size(); ++ip)
        for (double e : run.E[ip]) CHECK(e == 0.0);
    for (double le : run.local_energy) CHECK(le == 0.0);
    for (const auto& obs : run.observer_U)
        for (double u : obs) CHECK(u == 0.0);
}

TEST_CASE("cumulative ledgers start at zero") {
    auto cfg = base_config();
    cfg.t_max = 2.0;
    auto run = run_evolution(cfg);
    for (std::size_t ip = 0; ip < run.p_list.size(); ++ip) {
        CHECK(run.B[ip].front() == 0.0);
        CHECK(run.B_Y[ip].front() == 0.0);
        CHECK(run.flux[ip].front() == 0.0);
    }
    CHECK(run.taus.front() == doctest::Approx(0.0));
}

TEST_CASE("initial energy of u~ = 1/r against independent quadrature") {
    // d_r u~ = -r^-2, so E^p = int chi r^{p-4} dr with the quintic cutoff
    // ramp on [R, 2R]; reference by adaptive quadrature plus the exact tail
    auto cfg = base_config();
    cfg.nodes = 6000;
    cfg.initial_utilde = [](double r) { return 1.0 / r; };
    auto st = init(cfg);
    double R = cfg.cutoff_R;
    for (double p : {0.5, 1.0, 1.5}) {
        double ramp_part = catenoid::quad::adaptive_simpson(
            [&](double r) { return quintic_ramp((r - R) / R) * std::pow(r, p - 4.0); }, R,
            2.0 * R, 1e-12);
        double tail = std::pow(2.0 * R, p - 3.0) / (3.0 - p);
        double ref = ramp_part + tail;
        CHECK(energies(st, cfg, p).E == doctest::Approx(ref).epsilon(2e-4));
    }
}

TEST_CASE("manufactured separable solution: fourth-order convergence") {
    oracle_wave4d::Separable mms;
    mms.beta = 0.3;
    mms.r0 = 10.0;
    mms.w = 1.5;
    mms.l = 0;

    std::vector<double> errs;
    for (int nodes : {300, 600, 1200}) {
        auto cfg = base_config();
        cfg.nodes = nodes;
        cfg.t_max = 5.0;
        cfg.bump_amp = 0.0;
        cfg.initial_utilde = [&](double r) { return mms.u(0.0, r); };
        cfg.forced_source = [&](double tau, double r) { return mms.source(tau, r); };
        auto st = init(cfg);
        double dtau = cfg.cfl * (st.x[1] - st.x[0]) * cfg.r_max;  // proportional to h
        int steps = int(std::ceil(cfg.t_max / dtau));
        dtau = cfg.t_max / steps;
        for (int k = 0; k < steps; ++k) step(st, cfg, dtau);
        double err = 0.0;
        for (std::size_t i = 0; i < st.x.size(); ++i) {
            if (!std::isfinite(st.r[i]) || st.r[i] < 3.0 || st.r[i] > 60.0) continue;
            err = std::max(err, std::abs(st.u[i] - mms.u(st.tau, st.r[i])));
        }
        errs.push_back(err);
    }
    double o1 = std::log2(errs[0] / errs[1]);
    double o2 = std::log2(errs[1] / errs[2]);
    CHECK(o1 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(o2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("energy forms: positivity and mutual control on random profiles") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uc(5.0, 60.0), uw(1.0, 6.0), ua(-2.0, 2.0);
    auto cfg = base_config();
    cfg.nodes = 2000;
    for (int k = 0; k < 200; ++k) {
        double c = uc(rng), w = uw(rng), a = ua(rng);
        double c2 = uc(rng), w2 = uw(rng), a2 = ua(rng);
        cfg.initial_utilde = [=](double r) {
            return a * std::exp(-(r - c) * (r - c) / (w * w)) +
                   a2 * std::exp(-(r - c2) * (r - c2) / (w2 * w2));
        };
        auto st = init(cfg);
        for (double p : {0.5, 1.5}) {
            auto e = energies(st, cfg, p);
            CHECK(e.E >= 0.0);
            CHECK(e.Etil_65 >= 0.0);
            // coercivity of the introduced form for p <= 3/2
            CHECK(e.Etil_intro >= -1e-12);
            // and it is controlled by the full commuted form
            if (e.Etil_65 > 0.0) CHECK(e.Etil_intro <= 10.0 * e.Etil_65);
        }
        // at p = 3/2 the lower-order coefficient (3-2p)/4 vanishes
        auto e32 = energies(st, cfg, 1.5);
        CHECK(e32.Etil_intro == doctest::Approx(e32.E_Y).epsilon(1e-12));
    }
}

TEST_CASE("coercivity of the introduced form holds along a full run") {
    auto cfg = base_config();
    cfg.r_max = 10.0;
    cfg.t_max = 30.0;
    auto run = run_evolution(cfg);
    CHECK(run.min_Etil_intro >= 0.0);
}

TEST_CASE("energy hierarchies stay within the frozen calibration constants") {
    EvolutionConfig cfg;
    cfg.l = 0;
    cfg.r_min = 2.0;
    cfg.r_max = 300.0;
    cfg.nodes = 1200;
    cfg.t_max = 60.0;
    cfg.p_list = {0.5, 1.0, 1.4, 1.5, 1.9};
    auto run = run_evolution(cfg);
    for (double p : {0.5, 1.0, 1.5, 1.9}) {
        auto rep = hierarchy_check(run, p, false, 10.0);
        CHECK(rep.pass);
        CHECK(rep.worst_ratio <= rep.frozen_C * 1.05);
        CHECK(rep.windows > 0);
    }
    for (double p : {0.5, 1.0, 1.4}) {
        auto rep = hierarchy_check(run, p, true, 10.0);
        CHECK(rep.pass);
    }
    CHECK_THROWS(hierarchy_check(run, 2.5, false, 10.0));
    CHECK_THROWS(hierarchy_check(run, 1.9, true, 10.0));
}

TEST_CASE("free data radiates with the expected late-time tail") {
    EvolutionConfig cfg;
    cfg.l = 0;
    cfg.r_min = 2.0;
    cfg.r_max = 300.0;
    cfg.nodes = 1200;
    cfg.t_max = 500.0;
    cfg.observers = {10.0};
    auto run = run_evolution(cfg);
    auto fit = tail_fit(run.taus, run.observer_U[0], 10.0);
    CHECK(fit.enough_decades);
    CHECK(fit.terminal_exponent == doctest::Approx(3.0).epsilon(0.05));
    CHECK(fit.bootstrap_spread < 0.2);
    // the local exponent settles: late-time samples are all near the median
    for (std::size_t i = 0; i < fit.taus.size(); ++i)
        if (fit.taus[i] > 300.0)
            CHECK(fit.p_eff[i] == doctest::Approx(fit.terminal_exponent).epsilon(0.1));
}

TEST_CASE("tail fitting on synthetic power laws") {
    std::vector<double> taus, U;
    for (double t = 1.0; t <= 1000.0; t *= 1.02) {
        taus.push_back(t);
        U.push_back(2.7 * std::pow(t, -2.25));
    }
    auto fit = tail_fit(taus, U, 10.0);
    CHECK(fit.enough_decades);
    CHECK(fit.terminal_exponent == doctest::Approx(2.25).epsilon(1e-6));
    CHECK(fit.bootstrap_spread < 1e-6);
    // too short a record is flagged
    std::vector<double> ts(taus.begin(), taus.begin() + 20), us(U.begin(), U.begin() + 20);
    CHECK_FALSE(tail_fit(ts, us, 10.0).enough_decades);
}

TEST_CASE("config validation") {
    auto cfg = base_config();
    cfg.nodes = 10;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config();
    cfg.r_min = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config();
    cfg.p_list = {2.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
