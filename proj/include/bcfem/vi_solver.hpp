#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "bcfem/linalg.hpp"

namespace bcfem::vi_solver {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-dof box bounds; infinite entries mean unconstrained.
struct BoxConstraint {
    linalg::Vector lower;
    linalg::Vector upper;

    static BoxConstraint unbounded(std::size_t n) {
        return {linalg::Vector(n, -kInf), linalg::Vector(n, kInf)};
    }
    static BoxConstraint uniform(std::size_t n, double lo, double hi) {
        return {linalg::Vector(n, lo), linalg::Vector(n, hi)};
    }
    void validate() const;
};

struct NewtonSettings {
    double absolute_tolerance = 1e-8;
    int max_iterations = 50;
    bool line_search = false;
};

struct SolveReport {
    bool converged = false;
    int newton_iterations = 0;
    double final_residual_norm = 0.0;
    std::vector<int> active_set_size_history;
};

using ResidualFn = std::function<linalg::Vector(std::span<const double>)>;
using JacobianFn = std::function<linalg::DenseMatrix(std::span<const double>)>;

// Reduced-space active-set Newton for the box-constrained mixed
// complementarity problem: find feasible x with F_i(x) = 0 on the inactive
// set, F_i >= 0 where x_i sits at the lower bound and F_i <= 0 at the upper.
// Per iteration: classify the active set within a 1e-12 band of the bounds,
// solve J_II d_I = -F_I with d_A = 0, optionally backtrack on ||F_I||, and
// project x + d onto the box.  Non-convergence is reported, not thrown.
std::pair<linalg::Vector, SolveReport> solve_vi(const ResidualFn& residual,
                                                const JacobianFn& jacobian,
                                                std::span<const double> x0,
                                                const BoxConstraint& bounds,
                                                const NewtonSettings& settings);

// Plain Newton; identical iterates to solve_vi under infinite bounds.
std::pair<linalg::Vector, SolveReport> solve_unconstrained(const ResidualFn& residual,
                                                           const JacobianFn& jacobian,
                                                           std::span<const double> x0,
                                                           const NewtonSettings& settings);

}  // namespace bcfem::vi_solver
