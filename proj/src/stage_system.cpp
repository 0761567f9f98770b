#include "bcfem/stage_system.hpp"

#include <cmath>

#include "bcfem/errors.hpp"

namespace bcfem::stage_system {

void StepContext::validate() const {
    if (tab == nullptr) throw ConfigError("StepContext: missing tableau");
    if (k <= 0.0) throw ConfigError("StepContext: step size must be positive");
    if ((time_basis == TimeBasis::Bernstein) != transform.has_value())
        throw ConfigError("StepContext: transform present iff time basis is Bernstein");
    if (time_basis == TimeBasis::Lagrange && tab->confluent())
        throw ConfigError(
            "StepContext: confluent (c_1 = 0) tableaux are only supported in the Bernstein time "
            "basis");
    if (transform && transform->confluent != tab->confluent())
        throw ConfigError("StepContext: transform/tableau confluence mismatch");
}

StepContext make_context(double t_n, double k, linalg::Vector y_n,
                         const tableau::ButcherTableau& tab, TimeBasis basis) {
    StepContext ctx;
    ctx.t_n = t_n;
    ctx.k = k;
    ctx.y_n = std::move(y_n);
    ctx.tab = &tab;
    ctx.time_basis = basis;
    if (basis == TimeBasis::Bernstein)
        ctx.transform = polybasis::collocation_transform(tab.c, tab.confluent());
    ctx.validate();
    return ctx;
}

linalg::Vector riesz_representative(const SemidiscreteProblem& prob, double t,
                                    std::span<const double> u) {
    auto m = prob.mass;
    auto rhs = prob.f_eval(t, u);
    for (const auto& bc : prob.dirichlet) {
        for (std::size_t j = 0; j < m.cols(); ++j) m(bc.dof, j) = 0.0;
        m(bc.dof, bc.dof) = 1.0;
        rhs[bc.dof] = 0.0;
    }
    const auto lu = linalg::lu_factor(m);
    return linalg::lu_solve(lu, rhs);
}

std::vector<linalg::Vector> stage_nodal_values(const SemidiscreteProblem& prob,
                                               const StepContext& ctx,
                                               std::span<const double> stages) {
    ctx.validate();
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    if (stages.size() != static_cast<std::size_t>(s) * n)
        throw DomainError("stage_nodal_values: stage vector size mismatch");

    std::vector<linalg::Vector> y(s, linalg::Vector(n, 0.0));
    if (ctx.time_basis == TimeBasis::Lagrange) {
        for (int i = 0; i < s; ++i)
            std::copy(stages.begin() + i * n, stages.begin() + (i + 1) * n, y[i].begin());
        return y;
    }
    const auto& tr = *ctx.transform;
    for (int i = 0; i < s; ++i) {
        for (int m = 0; m < s; ++m) {
            const double vim = tr.V(i, m);
            if (vim == 0.0) continue;
            for (std::size_t d = 0; d < n; ++d) y[i][d] += vim * stages[m * n + d];
        }
        if (tr.v[i] != 0.0)
            for (std::size_t d = 0; d < n; ++d) y[i][d] += tr.v[i] * ctx.y_n[d];
    }
    if (tr.confluent) {
        // w = ((k/s) f_{t^n}(y^n), 0, ..., 0): the scaled discrete Riesz
        // representative of the stage-0 slope.
        const auto f0 = riesz_representative(prob, ctx.t_n, ctx.y_n);
        const double scale = ctx.k / s;
        for (std::size_t d = 0; d < n; ++d) y[0][d] -= scale * f0[d];
    }
    return y;
}

linalg::Vector residual(const SemidiscreteProblem& prob, const StepContext& ctx,
                        std::span<const double> stages) {
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    const auto y = stage_nodal_values(prob, ctx, stages);

    const auto my_n = linalg::matvec(prob.mass, ctx.y_n);
    std::vector<linalg::Vector> g(s);
    for (int j = 0; j < s; ++j) g[j] = prob.f_eval(ctx.t_n + ctx.tab->c[j] * ctx.k, y[j]);

    linalg::Vector r(static_cast<std::size_t>(s) * n, 0.0);
    for (int i = 0; i < s; ++i) {
        auto my = linalg::matvec(prob.mass, y[i]);
        for (std::size_t d = 0; d < n; ++d) r[i * n + d] = my[d] - my_n[d];
        for (int j = 0; j < s; ++j) {
            const double kaij = ctx.k * ctx.tab->A(i, j);
            if (kaij == 0.0) continue;
            for (std::size_t d = 0; d < n; ++d) r[i * n + d] -= kaij * g[j][d];
        }
        for (const auto& bc : prob.dirichlet)
            r[i * n + bc.dof] = y[i][bc.dof] - bc.value(ctx.t_n + ctx.tab->c[i] * ctx.k);
    }
    return r;
}

linalg::DenseMatrix jacobian(const SemidiscreteProblem& prob, const StepContext& ctx,
                             std::span<const double> stages) {
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    const auto y = stage_nodal_values(prob, ctx, stages);

    std::vector<linalg::DenseMatrix> gj(s);
    for (int j = 0; j < s; ++j) gj[j] = prob.f_jac(ctx.t_n + ctx.tab->c[j] * ctx.k, y[j]);

    const std::size_t nn = static_cast<std::size_t>(s) * n;
    linalg::DenseMatrix jac(nn, nn);
    const bool bern = ctx.time_basis == TimeBasis::Bernstein;
    for (int i = 0; i < s; ++i) {
        for (int m = 0; m < s; ++m) {
            // d R_i / d X_m = (dY_i/dX_m) M - k sum_j A_ij G'_j (dY_j/dX_m)
            const double w_im = bern ? ctx.transform->V(i, m) : (i == m ? 1.0 : 0.0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    double val = w_im * prob.mass(a, b);
                    for (int j = 0; j < s; ++j) {
                        const double w_jm = bern ? ctx.transform->V(j, m) : (j == m ? 1.0 : 0.0);
                        if (w_jm == 0.0) continue;
                        val -= ctx.k * ctx.tab->A(i, j) * w_jm * gj[j](a, b);
                    }
                    jac(i * n + a, m * n + b) = val;
                }
        }
        for (const auto& bc : prob.dirichlet) {
            const std::size_t row = i * n + bc.dof;
            for (std::size_t col = 0; col < nn; ++col) jac(row, col) = 0.0;
            if (bern)
                for (int m = 0; m < s; ++m) jac(row, m * n + bc.dof) = ctx.transform->V(i, m);
            else
                jac(row, i * n + bc.dof) = 1.0;
        }
    }
    return jac;
}

linalg::Vector step_update(const SemidiscreteProblem& prob, const StepContext& ctx,
                           std::span<const double> stages) {
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    if (ctx.time_basis == TimeBasis::Bernstein || ctx.tab->stiffly_accurate()) {
        // Last Bernstein block (only b_s is nonzero at tau=1) or last stage.
        linalg::Vector out(n);
        std::copy(stages.begin() + (s - 1) * n, stages.begin() + s * n, out.begin());
        return out;
    }
    // b-weighted update by mass solve.
    const auto y = stage_nodal_values(prob, ctx, stages);
    auto rhs = linalg::matvec(prob.mass, ctx.y_n);
    for (int j = 0; j < s; ++j) {
        const auto g = prob.f_eval(ctx.t_n + ctx.tab->c[j] * ctx.k, y[j]);
        for (std::size_t d = 0; d < n; ++d) rhs[d] += ctx.k * ctx.tab->b[j] * g[d];
    }
    auto m = prob.mass;
    for (const auto& bc : prob.dirichlet) {
        for (std::size_t j = 0; j < m.cols(); ++j) m(bc.dof, j) = 0.0;
        m(bc.dof, bc.dof) = 1.0;
        rhs[bc.dof] = bc.value(ctx.t_n + ctx.k);
    }
    const auto lu = linalg::lu_factor(m);
    return linalg::lu_solve(lu, rhs);
}

linalg::Vector dense_output(const SemidiscreteProblem& prob, const StepContext& ctx,
                            std::span<const double> stages, double tau) {
    if (tau < 0.0 || tau > 1.0) throw DomainError("dense_output: tau outside [0,1]");
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    linalg::Vector out(n);
    std::vector<double> coeffs(s + 1);
    if (ctx.time_basis == TimeBasis::Lagrange) {
        std::vector<double> aug(s + 1, 0.0);
        for (int i = 0; i < s; ++i) aug[i + 1] = ctx.tab->c[i];
        for (std::size_t d = 0; d < n; ++d) {
            coeffs[0] = ctx.y_n[d];
            for (int i = 0; i < s; ++i) coeffs[i + 1] = stages[i * n + d];
            out[d] = polybasis::lagrange_eval(aug, coeffs, tau);
        }
    } else {
        for (std::size_t d = 0; d < n; ++d) {
            coeffs[0] = ctx.y_n[d];
            for (int i = 0; i < s; ++i) coeffs[i + 1] = stages[i * n + d];
            out[d] = polybasis::bernstein_eval(s, coeffs, tau);
        }
    }
    return out;
}

linalg::Vector dense_output_deriv(const SemidiscreteProblem& prob, const StepContext& ctx,
                                  std::span<const double> stages, double tau) {
    if (tau < 0.0 || tau > 1.0) throw DomainError("dense_output_deriv: tau outside [0,1]");
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    linalg::Vector out(n);
    std::vector<double> coeffs(s + 1);
    if (ctx.time_basis == TimeBasis::Lagrange) {
        std::vector<double> aug(s + 1, 0.0);
        for (int i = 0; i < s; ++i) aug[i + 1] = ctx.tab->c[i];
        for (std::size_t d = 0; d < n; ++d) {
            coeffs[0] = ctx.y_n[d];
            for (int i = 0; i < s; ++i) coeffs[i + 1] = stages[i * n + d];
            out[d] = polybasis::lagrange_deriv(aug, coeffs, tau) / ctx.k;
        }
    } else {
        for (std::size_t d = 0; d < n; ++d) {
            coeffs[0] = ctx.y_n[d];
            for (int i = 0; i < s; ++i) coeffs[i + 1] = stages[i * n + d];
            out[d] = polybasis::bernstein_deriv(s, coeffs, tau) / ctx.k;
        }
    }
    return out;
}

vi_solver::BoxConstraint tile_bounds(const SemidiscreteProblem& prob, int s) {
    const std::size_t n = prob.dof_count;
    auto box = vi_solver::BoxConstraint::unbounded(static_cast<std::size_t>(s) * n);
    if (prob.lower.empty() && prob.upper.empty()) return box;
    for (int i = 0; i < s; ++i)
        for (std::size_t d = 0; d < n; ++d) {
            box.lower[i * n + d] = prob.lower.empty() ? -vi_solver::kInf : prob.lower[d];
            box.upper[i * n + d] = prob.upper.empty() ? vi_solver::kInf : prob.upper[d];
        }
    // Dirichlet-pinned dofs keep the problem bounds: their pinning rows are
    // then satisfied in the complementarity sense, so a steep boundary-data
    // transient cannot push a stage coefficient out of the feasible box.
    return box;
}

linalg::Vector initial_stage_guess(const SemidiscreteProblem& prob, const StepContext& ctx) {
    const int s = ctx.tab->s;
    const std::size_t n = prob.dof_count;
    linalg::Vector x(static_cast<std::size_t>(s) * n);
    for (int i = 0; i < s; ++i)
        std::copy(ctx.y_n.begin(), ctx.y_n.end(), x.begin() + i * n);
    return x;
}

}  // namespace bcfem::stage_system
