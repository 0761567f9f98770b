#pragma once

#include <span>
#include <vector>

#include "bcfem/linalg.hpp"

namespace bcfem::polybasis {

// p(x) = sum_i coeffs[i] b^n_i(x) on [0,1] by the de Casteljau recurrence.
double bernstein_eval(int n, std::span<const double> coeffs, double x);

// Single basis value b^n_i(x).
double bernstein_basis(int n, int i, double x);

// Derivative of the Bernstein-form polynomial at x.
double bernstein_deriv(int n, std::span<const double> coeffs, double x);

// Barycentric Lagrange interpolation on the given nodes.
double lagrange_eval(std::span<const double> nodes, std::span<const double> coeffs, double x);

// Derivative of the Lagrange interpolant at x.
double lagrange_deriv(std::span<const double> nodes, std::span<const double> coeffs, double x);

// Basis conversions on [0,1], degree = nodes.size()-1, via the
// Bernstein-Vandermonde matrix and a dense LU solve.
std::vector<double> lagrange_to_bernstein(std::span<const double> nodes,
                                          std::span<const double> nodal_values);
std::vector<double> bernstein_to_lagrange(std::span<const double> nodes,
                                          std::span<const double> bernstein_coeffs);

// Componentwise (min, max) of a Bernstein coefficient vector; bounds the
// polynomial on [0,1] by the convex hull property.
std::pair<double, double> control_net_bounds(std::span<const double> coeffs);

// Block partition of the (confluent) Bernstein-Vandermonde matrix on the
// augmented node set (0, c_1..c_s):
//
//   vbar = [ 1  0^T ]     with  Ybar = vbar * Zbar  (non-confluent), or
//          [ v  V   ]           Ybar = vbar * Zbar - (0, w)  (confluent),
//
// where Zbar = (y^n, Z) are Bernstein coefficients of the collocating
// polynomial and Ybar = (y^n, Y) its nodal values.  In the confluent case
// (c_1 = 0) the second row of the assembled system encodes the scaled
// derivative b_i'(0)/s, i.e. rows (1,0,..), (0,1,0,..), then the basis at
// c_2..c_s; the w-correction itself is supplied by the stage-system module.
struct CollocationTransform {
    linalg::DenseMatrix vbar;   // (s+1) x (s+1)
    std::vector<double> v;      // length s, first column below the pivot
    linalg::DenseMatrix V;      // s x s trailing block
    bool confluent = false;
};

CollocationTransform collocation_transform(std::span<const double> c, bool confluent);

}  // namespace bcfem::polybasis
