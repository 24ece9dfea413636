#pragma once

#include <cstdint>
#include <vector>

// Per-mode stability operators of the catenoid,
//   L_l = (1/w) d_rho ( wt d_rho ) - l(l+n-2) <rho>^-2 + n(n-1) <rho>^-2n,
//   w = <rho>^{n-1} |F_rho|,  wt = <rho>^{n-1} |F_rho|^-1,
// discretized in flux (self-adjoint) form on a uniform grid with Dirichlet
// truncation at +-rho_max, plus weighted Sobolev norms and the probes built
// on them.
namespace catenoid::spectrum {

struct ModeOperator {
    int l = 0;
    int n = 4;
    std::vector<double> grid;     // interior nodes, uniform
    double h = 0.0;               // spacing
    std::vector<double> w;        // volume density at nodes
    std::vector<double> wt_half;  // flux coefficient at half nodes, size grid.size()+1
    std::vector<double> V;        // sector potential at nodes
    // symmetric tridiagonal B = M^{-1/2} A M^{-1/2} for A x = lambda M x
    std::vector<double> diag;
    std::vector<double> offdiag;

    // apply the continuous operator stencil to samples u (same grid)
    std::vector<double> apply(const std::vector<double>& u) const;
    // w-weighted L2 inner product / norm on the grid
    double inner(const std::vector<double>& u, const std::vector<double>& v) const;
    double norm(const std::vector<double>& u) const;
};

// Preconditions: uniform grid symmetric about 0, spacing <= 0.05 near the
// neck, rho_max >= 30. Throws std::invalid_argument otherwise.
ModeOperator assemble(int l, int n, const std::vector<double>& grid);

// convenience constructor of the uniform grid with `nodes` interior nodes
std::vector<double> uniform_grid(double rho_max, int nodes);

struct SpectralResult {
    std::vector<double> eigenvalues;               // ascending
    std::vector<std::vector<double>> eigenvectors; // w-normalized, same order
};

// Largest-k generalized eigenpairs of L_l (its spectrum is bounded above).
SpectralResult spectrum_top(const ModeOperator& op, int k);

// Formal decaying zero-mode series sum C_m r^-m, C_{n-2+l} = 1, recursion
// C_{j+2(n-1)} = (j-n+1)(j+n) / ((m-l-n+2)(m+l)) C_j. Throws if the term
// budget runs out before the tail drops below 1e-12.
double zero_mode_series(int l, int n, double r, int max_terms);
// Single recursion multiplier C_m / C_j at a given j (m = j + 2(n-1)).
double zero_mode_multiplier(int l, int n, int j);

// || u ||^2_{H^{s,delta}} = sum_{k<=s} int <rho>^{2(delta+k)} |d^k u|^2 w drho
double weighted_norm_sq(const ModeOperator& op, const std::vector<double>& u, int s, double delta);

struct EllipticProbeResult {
    double max_ratio = 0.0;
    int trials = 0;
};

// Empirical constant of ||u||_{H^{2,delta}} <= C (||L u||_{H^{0,delta+2}}
// + sum_j |<u, e_j>|) over random Gaussian-bump test functions, sectors
// l = 0..2. delta must lie in the open interval (-n/2, n/2 - 2).
EllipticProbeResult elliptic_ratio_probe(int n, int trials, double delta, int nodes,
                                         double rho_max, std::uint64_t seed);

// Morse index: number of eigenvalues > gap_tol across sectors l <= l_max.
int morse_index(int n, int l_max, int nodes, double rho_max, double gap_tol = 1e-6);

// Modulation pairing matrix d_ij = int chi nu^i nu^j sqrt|h| h^00 drho domega
// over the flat region of the boosted leaf, n = 4 only. chi is a quintic ramp
// supported in |rho| < R_f/2.
std::vector<std::vector<double>> dmatrix(const std::vector<double>& ell, double R_f);

}  // namespace catenoid::spectrum
