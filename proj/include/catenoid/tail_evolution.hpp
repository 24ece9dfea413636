#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

// Characteristic evolution of the r^{3/2}-conjugated radial wave equation
//   -2 d_tau d_r u~ + d_r^2 u~ - (3/4 + l(l+2)) r^-2 u~ = f~,  f~ = r^{3/2} f,
// per spherical mode on [R_min, scri) in the compactified coordinate
// x = r / (R_s + r), with the r^p energy ledger and tail fitting.
namespace catenoid::evolution {

struct SourceSpec {
    enum class Kind { none, power };
    Kind kind = Kind::none;
    double amp = 0.0;  // f = amp <tau>^-q r^-s chi_{r >= R}
    double q = 2.25;
    double s = 3.0;
    double R = 20.0;  // inner edge of the source support (quintic ramp on [R, 2R])
};

struct EvolutionConfig {
    int l = 0;
    double r_min = 2.0;
    double r_max = 10.0;  // compactification scale R_s (and the cutoff base R)
    int nodes = 800;
    double dtau = 0.0;  // 0: choose from the CFL bound
    double cfl = 0.25;
    double t_max = 100.0;
    // initial data U = amp exp(-1/(1 - z^2)), z = (r - center)/width, |z| < 1
    double bump_amp = 1.0;
    double bump_center = 6.0;
    double bump_width = 2.0;
    SourceSpec source;
    std::vector<double> observers = {10.0};
    std::vector<double> p_list = {0.5, 1.0, 1.5, 1.9};
    bool compactify = true;
    double cutoff_R = 10.0;  // chi_R ramps 0 -> 1 on [R, 2R]
    double alpha = 0.05;     // local-energy weight r^{-1-alpha}
    double record_dtau = 0.5;
    // test harness hooks
    bool disable_potential = false;
    std::optional<std::function<double(double, double)>> forced_source;  // f~(tau, r)
    std::optional<std::function<double(double)>> initial_utilde;         // u~(0, r)

    void validate() const;  // throws std::invalid_argument on violations
    static EvolutionConfig from_file(const std::string& path);
};

struct ModeState {
    double tau = 0.0;
    std::vector<double> x;  // uniform compactified grid, last node at scri
    std::vector<double> r;  // r(x); infinite at the last node
    std::vector<double> u;  // u~
    std::vector<double> v;  // d_tau u~, slaved by the radial constraint
    std::vector<double> Y;  // K u~ = r^{3/2} d_r u~
};

// per-slice energies at one exponent p
struct EnergySlice {
    double E = 0.0;            // int chi r^p (d_r u~)^2
    double E_Y = 0.0;          // int chi r^p (d_r Y)^2
    double Etil_intro = 0.0;   // E_Y + (3-2p)/4 int chi r^{p-2} Y^2
    double Etil_65 = 0.0;      // int chi r^p ((d_r Y)^2 + r^-2 Y^2 + r^-4 |angular Y|^2)
    double bulk_U = 0.0;       // B^p integrand: (1/2) int chi (p r^{p-1}(d_r u~)^2
                               //   + (2-p)(3/4 + l(l+2)) r^{p-3} u~^2)
    double bulk_Y = 0.0;       // B~^p integrand of the commuted hierarchy
    double flux_U = 0.0;       // |int chi r^p f~ d_r u~|
};

struct RunResult {
    EvolutionConfig config;
    std::vector<double> p_list;
    std::vector<double> taus;                          // record times
    std::vector<std::vector<double>> E;                // [p][time]
    std::vector<std::vector<double>> Etil_intro;       // [p][time]
    std::vector<std::vector<double>> Etil_65;          // [p][time]
    std::vector<std::vector<double>> B;                // cumulative B^p
    std::vector<std::vector<double>> B_Y;              // cumulative B~^p
    std::vector<std::vector<double>> flux;             // cumulative source flux
    std::vector<double> local_energy;                  // int r^{-1-alpha} v^2
    std::vector<std::vector<double>> observer_U;       // [observer][time], U = r^{-3/2} u~
    double min_Etil_intro = 0.0;                       // over slices and p in [0, 3/2]
};

ModeState init(const EvolutionConfig& cfg);

// one RK4 step of size dtau; refreshes v and Y
void step(ModeState& state, const EvolutionConfig& cfg, double dtau);

EnergySlice energies(const ModeState& state, const EvolutionConfig& cfg, double p);

RunResult run_evolution(const EvolutionConfig& cfg);

struct HierarchyReport {
    double p = 0.0;
    bool commuted = false;      // false: u~ hierarchy, true: Y hierarchy
    double worst_ratio = 0.0;   // max over windows of LHS / RHS
    double frozen_C = 0.0;
    bool pass = false;          // worst_ratio <= frozen_C * 1.05
    int windows = 0;
};

// E^p(t2) + B^p(t1,t2) <= C (E^p(t1) + flux) over sliding windows of the run.
// C is the frozen calibration constant for this p (see calibration.hpp);
// pass allows a 5% margin. Throws if p is outside the admissible range
// (0, 2) for the base hierarchy or (0, 3/2) for the commuted one.
HierarchyReport hierarchy_check(const RunResult& run, double p, bool commuted,
                                double window_len = 10.0);

struct TailFit {
    double observer_r = 0.0;
    std::vector<double> taus;
    std::vector<double> p_eff;     // local -d log|U| / d log tau
    double terminal_exponent = 0.0;  // median over the last decade of tau
    double bootstrap_spread = 0.0;
    bool enough_decades = false;   // run covers >= 1.5 decades of tau
};

TailFit tail_fit(const std::vector<double>& taus, const std::vector<double>& U_obs,
                 double observer_r, std::uint64_t seed = 1234);

// pinned quintic ramp, 0 for t <= 0, 1 for t >= 1, C^2 monotone
double quintic_ramp(double t);

}  // namespace catenoid::evolution
