#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bcfem/linalg.hpp"
#include "bcfem/polybasis.hpp"
#include "bcfem/tableau.hpp"
#include "bcfem/vi_solver.hpp"

namespace bcfem::stage_system {

enum class TimeBasis { Lagrange, Bernstein };

// Semidiscrete evolution problem M u' = G(t, u), with G a dual-space residual
// vector.  Fields without a time derivative (the chemical potential in
// Cahn-Hilliard) have zero mass rows; their equations are purely algebraic.
struct SemidiscreteProblem {
    std::size_t dof_count = 0;
    linalg::DenseMatrix mass;
    std::function<linalg::Vector(double, std::span<const double>)> f_eval;
    std::function<linalg::DenseMatrix(double, std::span<const double>)> f_jac;

    struct DirichletBc {
        std::size_t dof;
        std::function<double(double)> value;  // g(t)
    };
    std::vector<DirichletBc> dirichlet;

    // Per-dof bounds for the VI solve, applied to every dof including
    // Dirichlet-pinned ones (their pinning rows then hold in the
    // complementarity sense).
    linalg::Vector lower, upper;
};

// One implicit RK step: previous state, step size, tableau, and the time
// basis in which the stage unknowns are expressed.  The transform is present
// iff the time basis is Bernstein.
struct StepContext {
    double t_n = 0.0;
    double k = 0.0;
    linalg::Vector y_n;
    const tableau::ButcherTableau* tab = nullptr;
    std::optional<polybasis::CollocationTransform> transform;
    TimeBasis time_basis = TimeBasis::Lagrange;

    void validate() const;
};

StepContext make_context(double t_n, double k, linalg::Vector y_n,
                         const tableau::ButcherTableau& tab, TimeBasis basis);

// Nodal stage values Y_1..Y_s recovered from the stage unknowns (identity for
// the Lagrange basis; V Z + y^n v (- w) for Bernstein).
std::vector<linalg::Vector> stage_nodal_values(const SemidiscreteProblem& prob,
                                               const StepContext& ctx,
                                               std::span<const double> stages);

// Stage-coupled nonlinear residual in the basis selected by the context,
// stage-major layout, with Dirichlet rows replaced by per-stage pinning
// equations.
linalg::Vector residual(const SemidiscreteProblem& prob, const StepContext& ctx,
                        std::span<const double> stages);

// Exact analytic Jacobian of `residual`.
linalg::DenseMatrix jacobian(const SemidiscreteProblem& prob, const StepContext& ctx,
                             std::span<const double> stages);

// y^{n+1}: last Bernstein block, last stage of a stiffly accurate method, or
// the b-weighted update by mass solve.
linalg::Vector step_update(const SemidiscreteProblem& prob, const StepContext& ctx,
                           std::span<const double> stages);

// Coefficients of the collocating polynomial at t^n + tau*k, tau in [0,1].
linalg::Vector dense_output(const SemidiscreteProblem& prob, const StepContext& ctx,
                            std::span<const double> stages, double tau);
// Time derivative d/dt of the collocating polynomial at t^n + tau*k.
linalg::Vector dense_output_deriv(const SemidiscreteProblem& prob, const StepContext& ctx,
                                  std::span<const double> stages, double tau);

// Per-dof problem bounds tiled across the s stage blocks.
vi_solver::BoxConstraint tile_bounds(const SemidiscreteProblem& prob, int s);

// Stage initial guess: previous solution tiled across stages.
linalg::Vector initial_stage_guess(const SemidiscreteProblem& prob, const StepContext& ctx);

// Discrete Riesz representative of G(t, u): mass solve of the residual
// vector, with Dirichlet rows pinned to zero.
linalg::Vector riesz_representative(const SemidiscreteProblem& prob, double t,
                                    std::span<const double> u);

}  // namespace bcfem::stage_system
