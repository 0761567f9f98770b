#include "bcfem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "bcfem/errors.hpp"

namespace bcfem::experiments {

const char* kVersionString = "bcfem-1.0.0";

namespace {

std::string family_tag(tableau::CollocationFamily f) {
    switch (f) {
        case tableau::CollocationFamily::RadauIIA: return "RIIA";
        case tableau::CollocationFamily::GaussLegendre: return "GL";
        case tableau::CollocationFamily::LobattoIIIA: return "LIIIA";
    }
    return "?";
}

char flavor_tag(fem1d::BasisFlavor f) { return f == fem1d::BasisFlavor::Lagrange ? 'L' : 'B'; }
char tbasis_tag(stage_system::TimeBasis b) {
    return b == stage_system::TimeBasis::Lagrange ? 'L' : 'B';
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string MethodSpec::time_name() const {
    std::ostringstream os;
    os << family_tag(family) << '(' << tbasis_tag(time_basis) << stages << ")-"
       << (constrained ? "VI" : "VP");
    return os.str();
}

std::string MethodSpec::name() const {
    std::ostringstream os;
    os << flavor_tag(spatial_flavor) << spatial_degree << '-' << time_name();
    return os.str();
}

StepResult solve_step(const stage_system::SemidiscreteProblem& prob,
                      const stage_system::StepContext& ctx, bool constrained,
                      const vi_solver::NewtonSettings& settings) {
    auto res = [&](std::span<const double> x) { return stage_system::residual(prob, ctx, x); };
    auto jac = [&](std::span<const double> x) { return stage_system::jacobian(prob, ctx, x); };
    linalg::Vector x0 = stage_system::initial_stage_guess(prob, ctx);

    StepResult out;
    if (constrained) {
        vi_solver::BoxConstraint bounds = stage_system::tile_bounds(prob, ctx.tab->s);
        auto [x, report] = vi_solver::solve_vi(res, jac, x0, bounds, settings);
        out.stages = std::move(x);
        out.report = std::move(report);
    } else {
        auto [x, report] = vi_solver::solve_unconstrained(res, jac, x0, settings);
        out.stages = std::move(x);
        out.report = std::move(report);
    }
    out.y_next = stage_system::step_update(prob, ctx, out.stages);
    return out;
}

// -------------------------------------------------------------- phytoplankton

RunRecord run_phyto(const MethodSpec& method, const problems::PhytoParams& params, double k,
                    double t_final) {
    params.validate();
    if (k <= 0.0 || t_final <= 0.0) throw ConfigError("run_phyto: k and T must be positive");
    tableau::ButcherTableau tab = tableau::make_tableau(method.family, method.stages);
    stage_system::SemidiscreteProblem prob = problems::phyto_problem(params);

    RunRecord rec;
    rec.columns = {"time", "C",       "N",       "P",
                   "D",    "CPD_inv", "NPD_inv", "min_dense_output",
                   "newton_its"};
    rec.metadata = {"experiment=phyto",
                    "method=" + method.time_name(),
                    "k=" + fmt17(k),
                    "t_final=" + fmt17(t_final),
                    "version=" + std::string(kVersionString)};

    vi_solver::NewtonSettings settings;
    const int n_steps = static_cast<int>(std::llround(t_final / k));
    linalg::Vector y = params.initial_state();

    for (int step = 0; step < n_steps; ++step) {
        const double t_n = step * k;
        stage_system::StepContext ctx =
            stage_system::make_context(t_n, k, y, tab, method.time_basis);
        StepResult sr = solve_step(prob, ctx, method.constrained, settings);
        if (!sr.report.converged) {
            rec.completed = false;
            rec.failure_reason = "newton non-convergence at step " + std::to_string(step);
            break;
        }

        // Minimum of the collocation polynomial over the step: 200 uniform
        // tau samples plus the collocation nodes themselves.
        std::vector<double> taus;
        taus.reserve(200 + tab.c.size());
        for (int j = 1; j <= 200; ++j) taus.push_back(j / 200.0);
        taus.insert(taus.end(), tab.c.begin(), tab.c.end());
        double dense_min = std::numeric_limits<double>::infinity();
        for (double tau : taus) {
            linalg::Vector v = stage_system::dense_output(prob, ctx, sr.stages, tau);
            for (double vi : v) dense_min = std::min(dense_min, vi);
        }

        std::vector<linalg::Vector> nodal = stage_system::stage_nodal_values(prob, ctx, sr.stages);
        double min_comp[4] = {y[0], y[1], y[2], y[3]};
        for (const auto& yi : nodal)
            for (int comp = 0; comp < 4; ++comp) min_comp[comp] = std::min(min_comp[comp], yi[comp]);
        double min_coeff = *std::min_element(sr.stages.begin(), sr.stages.end());

        y = sr.y_next;
        auto [cpd, npd] = problems::linear_invariants(y);
        rec.rows.push_back({(step + 1) * k, y[0], y[1], y[2], y[3], cpd, npd, dense_min,
                            static_cast<double>(sr.report.newton_iterations)});
        rec.aux["min_stage_C"].push_back(min_comp[0]);
        rec.aux["min_stage_N"].push_back(min_comp[1]);
        rec.aux["min_stage_P"].push_back(min_comp[2]);
        rec.aux["min_stage_D"].push_back(min_comp[3]);
        rec.aux["min_stage_coeff"].push_back(min_coeff);
        rec.aux["bounds_active"].push_back(min_coeff <= 1e-10 ? 1.0 : 0.0);
    }
    return rec;
}

// ----------------------------------------------------------- heat convergence

RunRecord run_heat_convergence(const MethodSpec& method, const std::vector<int>& n_values) {
    tableau::ButcherTableau tab = tableau::make_tableau(method.family, method.stages);

    RunRecord rec;
    rec.columns = {"N", "l2_error", "h1_error", "avg_newton_its"};
    rec.metadata = {"experiment=heat-conv", "method=" + method.name(), "k=1/N",
                    "version=" + std::string(kVersionString)};
    vi_solver::NewtonSettings settings;

    for (int n_cells : n_values) {
        fem1d::Mesh1D mesh = fem1d::Mesh1D::uniform(0.0, 1.0, n_cells);
        fem1d::FeSpace1D space = fem1d::build_space(mesh, method.spatial_degree, method.spatial_flavor);
        auto hp = problems::heat_mms_problem(space, problems::HeatVariant::Smooth);

        auto u0 = [&](double x) { return hp->exact(0.0, x); };
        fem1d::FeFunction uh =
            method.constrained
                ? fem1d::project_constrained(space, u0,
                                             {hp->semidiscrete.lower, hp->semidiscrete.upper})
                : fem1d::project_unconstrained(space, u0);

        const double k = 1.0 / n_cells;
        long total_its = 0;
        bool ok = true;
        for (int step = 0; step < n_cells; ++step) {
            stage_system::StepContext ctx =
                stage_system::make_context(step * k, k, uh.coeffs, tab, method.time_basis);
            StepResult sr = solve_step(hp->semidiscrete, ctx, method.constrained, settings);
            if (!sr.report.converged) {
                rec.completed = false;
                rec.failure_reason = "newton non-convergence at N=" + std::to_string(n_cells) +
                                     " step " + std::to_string(step);
                ok = false;
                break;
            }
            total_its += sr.report.newton_iterations;
            uh.coeffs = std::move(sr.y_next);
        }
        if (!ok) break;

        auto [l2, h1] = fem1d::error_norms(
            uh, [&](double x) { return hp->exact(1.0, x); },
            [&](double x) { return hp->exact_dx(1.0, x); });
        rec.rows.push_back({static_cast<double>(n_cells), l2, h1,
                            static_cast<double>(total_its) / n_cells});
    }
    return rec;
}

// ------------------------------------------------------------- violation scan

ViolationScan run_violation_scan(const MethodSpec& method, int n_cells, double k, double t_final) {
    tableau::ButcherTableau tab = tableau::make_tableau(method.family, method.stages);

    fem1d::Mesh1D mesh = fem1d::Mesh1D::uniform(0.0, 1.0, n_cells);
    fem1d::FeSpace1D space = fem1d::build_space(mesh, method.spatial_degree, method.spatial_flavor);
    auto hp = problems::heat_mms_problem(space, problems::HeatVariant::Front);

    ViolationScan scan;
    scan.record.columns = {"step", "tau", "x", "value", "at_dof", "at_colloc_time"};
    scan.record.metadata = {"experiment=heat-vios",
                            "method=" + method.name(),
                            "cells=" + std::to_string(n_cells),
                            "k=" + fmt17(k),
                            "t_final=" + fmt17(t_final),
                            "violation_tolerance=-1e-10",
                            "version=" + std::string(kVersionString)};

    // Scan grid: 200 uniform x samples plus every coefficient node position,
    // each point classified as at-dof when it coincides with a dof point.
    std::vector<double> dof_pts = space.dof_points();
    struct ScanPoint {
        double x;
        bool at_dof;
    };
    std::vector<ScanPoint> grid;
    for (double x : dof_pts) grid.push_back({x, true});
    for (int i = 0; i < 200; ++i) {
        double x = i / 199.0;
        bool at_dof = std::any_of(dof_pts.begin(), dof_pts.end(),
                                  [&](double p) { return std::abs(p - x) <= 1e-12; });
        grid.push_back({x, at_dof});
    }

    const std::vector<double> taus = {0.01, 1.0 / 3.0, 0.5, 0.99, 1.0};
    auto at_colloc = [&](double tau) {
        return std::any_of(tab.c.begin(), tab.c.end(),
                           [&](double c) { return std::abs(c - tau) <= 1e-12; });
    };

    auto u0 = [&](double x) { return hp->exact(0.0, x); };
    fem1d::FeFunction uh =
        method.constrained
            ? fem1d::project_constrained(space, u0,
                                         {hp->semidiscrete.lower, hp->semidiscrete.upper})
            : fem1d::project_unconstrained(space, u0);

    vi_solver::NewtonSettings settings;
    const int n_steps = static_cast<int>(std::llround(t_final / k));
    for (int step = 0; step < n_steps; ++step) {
        stage_system::StepContext ctx =
            stage_system::make_context(step * k, k, uh.coeffs, tab, method.time_basis);
        StepResult sr = solve_step(hp->semidiscrete, ctx, method.constrained, settings);
        if (!sr.report.converged) {
            scan.record.completed = false;
            scan.record.failure_reason = "newton non-convergence at step " + std::to_string(step);
            break;
        }
        for (double tau : taus) {
            fem1d::FeFunction snap{&space,
                                   stage_system::dense_output(hp->semidiscrete, ctx, sr.stages, tau)};
            const bool ct = at_colloc(tau);
            for (const ScanPoint& p : grid) {
                double v = snap.eval(p.x);
                if (v < -1e-10) {
                    int id = p.at_dof ? 1 : 0, ic = ct ? 1 : 0;
                    ++scan.counts[id][ic];
                    scan.worst[id][ic] = std::min(scan.worst[id][ic], v);
                    scan.record.rows.push_back({static_cast<double>(step), tau, p.x, v,
                                                static_cast<double>(id), static_cast<double>(ic)});
                }
            }
        }
        uh.coeffs = std::move(sr.y_next);
    }
    return scan;
}

// -------------------------------------------------------------- Cahn-Hilliard

RunRecord run_cahn_hilliard(const problems::CahnHilliardParams& params, const MethodSpec& method,
                            int n_cells, bool periodic, ChInit init, std::uint64_t seed, double k,
                            int n_steps) {
    params.validate();
    tableau::ButcherTableau tab = tableau::make_tableau(method.family, method.stages);

    fem1d::Mesh1D mesh = fem1d::Mesh1D::uniform(0.0, 1.0, n_cells, periodic);
    fem1d::FeSpace1D space = fem1d::build_space(mesh, method.spatial_degree, method.spatial_flavor);
    auto ch = problems::cahn_hilliard_problem(space, params);
    const std::size_t nf = ch->field_dofs;

    RunRecord rec;
    rec.columns = {"time", "energy", "min_c_coeff", "max_c_coeff", "mass", "newton_its"};
    rec.metadata = {"experiment=cahn-hilliard",
                    "method=" + method.name(),
                    "cells=" + std::to_string(n_cells),
                    "boundary=" + std::string(periodic ? "periodic" : "neumann"),
                    "init=" + std::string(init == ChInit::Sine ? "sine" : "random"),
                    "seed=" + std::to_string(seed),
                    "k=" + fmt17(k),
                    "n_steps=" + std::to_string(n_steps),
                    "theta0=" + fmt17(params.theta0),
                    "theta_c=" + fmt17(params.theta_c),
                    "epsilon=" + fmt17(params.epsilon),
                    "mobility=" + fmt17(params.mobility),
                    "delta_reg=" + fmt17(params.delta_reg),
                    "delta_b=" + fmt17(params.delta_b),
                    "version=" + std::string(kVersionString)};

    // Initial order parameter.
    linalg::Vector c0(nf, 0.0);
    if (init == ChInit::Sine) {
        auto f = [](double x) {
            double s = std::sin(2.0 * M_PI * x);
            return 0.25 * s * s * std::sin(12.0 * M_PI * x);
        };
        fem1d::FeFunction proj =
            method.constrained
                ? fem1d::project_constrained(space, f,
                                             vi_solver::BoxConstraint::uniform(
                                                 nf, -1.0 + params.delta_b, 1.0 - params.delta_b))
                : fem1d::project_unconstrained(space, f);
        c0 = std::move(proj.coeffs);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < nf; ++i) c0[i] = (2.0 * unit(rng) - 1.0) / 10.0;
    }

    // Consistent algebraic start: mu0 solves (mu, v) = (F'(c0), v) + eps^2 (c0', v').
    linalg::Vector y(2 * nf, 0.0);
    std::copy(c0.begin(), c0.end(), y.begin());
    {
        linalg::Vector rhs = fem1d::assemble_function_load(
            space, c0, [&](double s) { return problems::ch_potential_d(s, params); });
        linalg::Vector kc = linalg::matvec(ch->ops.stiffness, c0);
        for (std::size_t i = 0; i < nf; ++i) rhs[i] += params.epsilon * params.epsilon * kc[i];
        auto lu = linalg::lu_factor(ch->ops.mass);
        linalg::Vector mu0 = linalg::lu_solve(lu, rhs);
        std::copy(mu0.begin(), mu0.end(), y.begin() + nf);
    }

    vi_solver::NewtonSettings settings;
    long total_its = 0;
    for (int step = 0; step < n_steps; ++step) {
        stage_system::StepContext ctx =
            stage_system::make_context(step * k, k, y, tab, method.time_basis);
        StepResult sr;
        try {
            sr = solve_step(ch->semidiscrete, ctx, method.constrained, settings);
        } catch (const SingularityError& e) {
            rec.completed = false;
            rec.failure_reason =
                "singularity at step " + std::to_string(step) + ": " + e.what();
            break;
        }
        if (!sr.report.converged) {
            rec.completed = false;
            rec.failure_reason = "newton non-convergence at step " + std::to_string(step);
            break;
        }
        y = std::move(sr.y_next);
        std::span<const double> c(y.data(), nf);
        double energy;
        try {
            energy = ch->free_energy(c);
        } catch (const SingularityError& e) {
            rec.completed = false;
            rec.failure_reason =
                "singular free energy at step " + std::to_string(step) + ": " + e.what();
            break;
        }
        total_its += sr.report.newton_iterations;
        rec.rows.push_back({(step + 1) * k, energy, *std::min_element(c.begin(), c.end()),
                            *std::max_element(c.begin(), c.end()), ch->total_mass(c),
                            static_cast<double>(sr.report.newton_iterations)});
    }
    rec.aux["total_newton_its"].push_back(static_cast<double>(total_its));
    return rec;
}

// ------------------------------------------------------------------------ CSV

void emit_csv(const RunRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);

    for (const std::string& m : record.metadata) out << "# " << m << '\n';
    if (!record.completed) out << "# incomplete=" << record.failure_reason << '\n';

    for (std::size_t i = 0; i < record.columns.size(); ++i) {
        if (i) out << ',';
        out << record.columns[i];
    }
    out << '\n';
    for (const auto& row : record.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << fmt17(row[i]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failure: " + path);
}

}  // namespace bcfem::experiments
