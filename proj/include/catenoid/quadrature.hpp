#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace catenoid::quad {

// Adaptive Simpson with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 60);

// Tanh-sinh (double exponential) rule on (a, b); tolerates integrable endpoint
// singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

// Fixed-order Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int order = 40);

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w);

// Composite Simpson over samples y on a uniform grid of spacing h (size odd or
// even; even sizes finish with a trapezoid panel).
double simpson_uniform(const std::vector<double>& y, double h);

// Trapezoid over arbitrary strictly increasing nodes.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace catenoid::quad
