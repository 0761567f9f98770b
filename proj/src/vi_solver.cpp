#include "bcfem/vi_solver.hpp"

#include <algorithm>
#include <cmath>

#include "bcfem/errors.hpp"

namespace bcfem::vi_solver {

namespace {

constexpr double kActiveBand = 1e-12;

void clamp_to_box(linalg::Vector& x, const BoxConstraint& b) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
}

// Active set: dofs pinned at a bound whose residual sign pushes outward.
std::vector<std::size_t> inactive_set(std::span<const double> x, std::span<const double> f,
                                      const BoxConstraint& b) {
    std::vector<std::size_t> inactive;
    inactive.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool at_lower = x[i] - b.lower[i] <= kActiveBand && f[i] > 0.0;
        const bool at_upper = b.upper[i] - x[i] <= kActiveBand && f[i] < 0.0;
        if (!at_lower && !at_upper) inactive.push_back(i);
    }
    return inactive;
}

}  // namespace

void BoxConstraint::validate() const {
    if (lower.size() != upper.size()) throw ConfigError("BoxConstraint: size mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (lower[i] > upper[i])
            throw ConfigError("BoxConstraint: lower > upper at dof " + std::to_string(i));
}

std::pair<linalg::Vector, SolveReport> solve_vi(const ResidualFn& residual,
                                                const JacobianFn& jacobian,
                                                std::span<const double> x0,
                                                const BoxConstraint& bounds,
                                                const NewtonSettings& settings) {
    bounds.validate();
    if (x0.size() != bounds.lower.size()) throw ConfigError("solve_vi: x0/bounds size mismatch");

    linalg::Vector x(x0.begin(), x0.end());
    clamp_to_box(x, bounds);

    SolveReport report;
    for (int iter = 0;; ++iter) {
        const auto f = residual(x);
        const auto inactive = inactive_set(x, f, bounds);
        report.active_set_size_history.push_back(static_cast<int>(x.size() - inactive.size()));

        const auto f_red = linalg::gather(f, inactive);
        const double rnorm = linalg::norm2(f_red);
        report.final_residual_norm = rnorm;
        if (rnorm <= settings.absolute_tolerance) {
            report.converged = true;
            return {std::move(x), report};
        }
        if (iter >= settings.max_iterations) return {std::move(x), report};

        const auto j = jacobian(x);
        const auto j_red = linalg::submatrix(j, inactive);
        auto neg_f = f_red;
        for (double& v : neg_f) v = -v;
        const auto lu = linalg::lu_factor(j_red);
        auto d_red = linalg::lu_solve(lu, neg_f);

        double alpha = 1.0;
        if (settings.line_search) {
            for (int bt = 0; bt < 8; ++bt) {
                linalg::Vector trial = x;
                for (std::size_t k = 0; k < inactive.size(); ++k)
                    trial[inactive[k]] += alpha * d_red[k];
                clamp_to_box(trial, bounds);
                const auto f_trial = linalg::gather(residual(trial), inactive);
                if (linalg::norm2(f_trial) < rnorm) break;
                alpha *= 0.5;
            }
        }
        for (std::size_t k = 0; k < inactive.size(); ++k) x[inactive[k]] += alpha * d_red[k];
        clamp_to_box(x, bounds);
        ++report.newton_iterations;
    }
}

std::pair<linalg::Vector, SolveReport> solve_unconstrained(const ResidualFn& residual,
                                                           const JacobianFn& jacobian,
                                                           std::span<const double> x0,
                                                           const NewtonSettings& settings) {
    return solve_vi(residual, jacobian, x0, BoxConstraint::unbounded(x0.size()), settings);
}

}  // namespace bcfem::vi_solver
