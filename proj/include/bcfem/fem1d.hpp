#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bcfem/linalg.hpp"

namespace bcfem::vi_solver {
struct BoxConstraint;
}

namespace bcfem::fem1d {

enum class BasisFlavor { Lagrange, Bernstein };

struct Mesh1D {
    double a = 0.0, b = 1.0;
    int n_cells = 1;
    std::vector<double> vertices;  // length n_cells+1, increasing
    bool periodic = false;

    static Mesh1D uniform(double a, double b, int n_cells, bool periodic = false);
    double cell_size(int e) const { return vertices[e + 1] - vertices[e]; }
};

// Continuous piecewise-polynomial space of degree r on a 1D mesh.  The flavor
// changes the meaning of the coefficients (nodal values vs control net), not
// the span.
struct FeSpace1D {
    Mesh1D mesh;
    int degree = 1;
    BasisFlavor flavor = BasisFlavor::Lagrange;
    std::size_t dof_count = 0;
    std::vector<std::vector<std::size_t>> cell_to_dof;  // r+1 local dofs per cell
    std::vector<std::size_t> boundary_dofs;

    // Physical coordinate of each dof's node/control point.
    std::vector<double> dof_points() const;
};

FeSpace1D build_space(const Mesh1D& mesh, int r, BasisFlavor flavor);

struct FeFunction {
    const FeSpace1D* space = nullptr;
    linalg::Vector coeffs;

    double eval(double x) const;
    double eval_deriv(double x) const;
};

struct AssembledOperators {
    linalg::DenseMatrix mass;
    linalg::DenseMatrix stiffness;
};

// Cellwise Gauss quadrature exact for degree-2r integrands (rule degree 2r+2).
AssembledOperators assemble(const FeSpace1D& space);

// Load vector (f(t, .), phi_i) at a fixed time.
linalg::Vector assemble_load(const FeSpace1D& space, const std::function<double(double)>& f);

// Nonlinear load vector: entries int fn(u_h(x)) phi_i dx for the function
// with the given coefficients on this space.
linalg::Vector assemble_function_load(const FeSpace1D& space, std::span<const double> state_coeffs,
                                      const std::function<double(double)>& fn);

// int fn(u_h(x), u_h'(x)) dx over the mesh, degree-(2r+2) quadrature.
double integrate(const FeSpace1D& space, std::span<const double> state_coeffs,
                 const std::function<double(double, double)>& fn);

// Weighted mass matrix: entries int w(x) phi_i phi_j dx with w evaluated
// through the coefficients of an FeFunction composed with a scalar function.
linalg::DenseMatrix assemble_weighted_mass(const FeSpace1D& space,
                                           std::span<const double> state_coeffs,
                                           const std::function<double(double)>& weight);

// L2-projection onto the space subject to box bounds on the coefficients,
// solved as a mass-matrix-weighted VI.
FeFunction project_constrained(const FeSpace1D& space, const std::function<double(double)>& f,
                               const vi_solver::BoxConstraint& bounds);
FeFunction project_unconstrained(const FeSpace1D& space, const std::function<double(double)>& f);

// (L2 error, H1 seminorm error) against an exact solution/derivative pair.
std::pair<double, double> error_norms(const FeFunction& u_h,
                                      const std::function<double(double)>& u_exact,
                                      const std::function<double(double)>& du_exact);

// Symmetric elimination of Dirichlet dofs from a linear system in place:
// boundary rows/columns zeroed, diagonal set to 1, rhs adjusted, boundary
// entries of the rhs pinned to the prescribed values.
void apply_dirichlet(const FeSpace1D& space, linalg::DenseMatrix& a, linalg::Vector& rhs,
                     std::span<const double> boundary_values);

}  // namespace bcfem::fem1d
