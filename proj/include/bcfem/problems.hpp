#pragma once

#include <functional>
#include <memory>

#include "bcfem/fem1d.hpp"
#include "bcfem/stage_system.hpp"

namespace bcfem::problems {

// ---------------------------------------------------------------- phytoplankton

struct PhytoParams {
    double a = 1.0, b = 1.0, k_c = 1.0, k_n = 1.0, r_max = 1.0, e = 0.3;
    double c0 = 29.98, n0 = 9.98, p0 = 0.01, d0 = 0.01;

    void validate() const;
    linalg::Vector initial_state() const { return {c0, n0, p0, d0}; }
};

// Four-component nutrient/population ODE with identity mass; components
// (C, N, P, D), all bounded below by zero.
stage_system::SemidiscreteProblem phyto_problem(const PhytoParams& params);

// (C+P+D, N+P+D): conserved totals of carbon and nitrogen.
std::pair<double, double> linear_invariants(std::span<const double> state);

// ----------------------------------------------------------------------- heat

enum class HeatVariant { Smooth, Front };

struct HeatProblem {
    const fem1d::FeSpace1D* space = nullptr;
    fem1d::AssembledOperators ops;
    std::function<double(double, double)> exact;    // u(t, x)
    std::function<double(double, double)> exact_dx; // du/dx
    std::function<double(double, double)> forcing;  // f = u_t - u_xx
    stage_system::SemidiscreteProblem semidiscrete;
};

// Manufactured heat problem on the space's mesh with nonnegativity bounds and
// Dirichlet data taken from the exact solution at the endpoints.
// Smooth: u = e^{-t} cos^2(2 pi x).  Front: a steep tanh profile switched on
// in time, bounded below by zero.
std::unique_ptr<HeatProblem> heat_mms_problem(const fem1d::FeSpace1D& space, HeatVariant variant);

// ------------------------------------------------------------- Cahn-Hilliard

enum class ChBoundary { Neumann, Periodic };

struct CahnHilliardParams {
    double theta0 = 2.0;
    double theta_c = 3.5;
    double epsilon = 0.01;
    double mobility = 1.0;
    double delta_reg = 1e-3;
    double delta_b = 1e-8;

    void validate() const;
};

// Logarithmic free-energy density F and its derivatives.
double ch_potential(double s, const CahnHilliardParams& p);     // F(s)
double ch_potential_d(double s, const CahnHilliardParams& p);   // F'(s), true log
// F'' with the regularized logarithm, used only in the Jacobian.
double ch_potential_dd_reg(double s, const CahnHilliardParams& p);
// ln_reg: ln(s) above delta_reg, linear continuation below.
double ln_reg(double s, double delta_reg);

// Positive root of (1/s) ln((1+s)/(1-s)) = 2 theta_c / theta0, by bisection.
double ch_binodal(const CahnHilliardParams& p);

struct CahnHilliardProblem {
    const fem1d::FeSpace1D* space = nullptr;  // shared by the c and mu fields
    fem1d::AssembledOperators ops;
    CahnHilliardParams params;
    std::size_t field_dofs = 0;  // per-field; total unknowns are 2x this
    stage_system::SemidiscreteProblem semidiscrete;

    // E(c) = int F(c) + (eps^2/2) |c'|^2; throws SingularityError if a
    // quadrature value reaches |c| >= 1.
    double free_energy(std::span<const double> c_coeffs) const;
    // int c dx.
    double total_mass(std::span<const double> c_coeffs) const;
};

// Mixed two-field (c, mu) system; the mu equations are algebraic (zero mass
// rows).  Bounds [-1+delta_b, 1-delta_b] on the c field only.
std::unique_ptr<CahnHilliardProblem> cahn_hilliard_problem(const fem1d::FeSpace1D& space,
                                                           const CahnHilliardParams& params);

}  // namespace bcfem::problems
