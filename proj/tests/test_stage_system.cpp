#include <cmath>
#include <random>

#include "bcfem/errors.hpp"
#include "bcfem/experiments.hpp"
#include "bcfem/problems.hpp"
#include "bcfem/stage_system.hpp"
#include "doctest.h"

using namespace bcfem;
using linalg::DenseMatrix;
using linalg::Vector;
using stage_system::SemidiscreteProblem;
using stage_system::TimeBasis;
using tableau::CollocationFamily;

namespace {

SemidiscreteProblem dahlquist(double lambda) {
    SemidiscreteProblem p;
    p.dof_count = 1;
    p.mass = DenseMatrix(1, 1);
    p.mass(0, 0) = 1.0;
    p.f_eval = [lambda](double, std::span<const double> u) { return Vector{lambda * u[0]}; };
    p.f_jac = [lambda](double, std::span<const double>) {
        DenseMatrix j(1, 1);
        j(0, 0) = lambda;
        return j;
    };
    p.lower = Vector(1, -vi_solver::kInf);
    p.upper = Vector(1, vi_solver::kInf);
    return p;
}

// Stability-function oracle R(z) = 1 + z b^T (I - z A)^{-1} 1.
double stability_function(const tableau::ButcherTableau& t, double z) {
    const int s = static_cast<int>(t.c.size());
    DenseMatrix m(s, s);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) m(i, j) = -z * t.A(i, j);
        m(i, i) += 1.0;
    }
    auto f = linalg::lu_factor(m);
    Vector x = linalg::lu_solve(f, Vector(s, 1.0));
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += t.b[i] * x[i];
    return 1.0 + z * acc;
}

double take_step(const SemidiscreteProblem& prob, const tableau::ButcherTableau& tab,
                 TimeBasis basis, double y0, double k) {
    auto ctx = stage_system::make_context(0.0, k, Vector{y0}, tab, basis);
    auto res = experiments::solve_step(prob, ctx, false, {});
    REQUIRE(res.report.converged);
    return res.y_next[0];
}

}  // namespace

TEST_CASE("scalar linear step reproduces the stability function for every method") {
    const double lambda = -2.0, k = 0.4, y0 = 1.3;
    auto prob = dahlquist(lambda);
    struct Case {
        CollocationFamily fam;
        int s;
        TimeBasis basis;
    };
    std::vector<Case> cases;
    for (int s = 1; s <= 5; ++s) {
        cases.push_back({CollocationFamily::RadauIIA, s, TimeBasis::Lagrange});
        cases.push_back({CollocationFamily::RadauIIA, s, TimeBasis::Bernstein});
        cases.push_back({CollocationFamily::GaussLegendre, s, TimeBasis::Lagrange});
        cases.push_back({CollocationFamily::GaussLegendre, s, TimeBasis::Bernstein});
    }
    for (int s = 2; s <= 5; ++s) cases.push_back({CollocationFamily::LobattoIIIA, s, TimeBasis::Bernstein});
    for (const Case& c : cases) {
        CAPTURE(static_cast<int>(c.fam));
        CAPTURE(c.s);
        auto tab = tableau::make_tableau(c.fam, c.s);
        double y1 = take_step(prob, tab, c.basis, y0, k);
        CHECK(y1 == doctest::Approx(y0 * stability_function(tab, lambda * k)).epsilon(1e-11));
    }
}

TEST_CASE("two-stage Lobatto in the Bernstein basis is the trapezoid rule") {
    // This pins down the confluent formulation: both endpoints are collocation
    // nodes, and the extra derivative condition must reproduce
    // R(z) = (1 + z/2) / (1 - z/2) exactly.
    const double lambda = -1.5, k = 0.3, y0 = 2.0;
    auto prob = dahlquist(lambda);
    auto tab = tableau::make_tableau(CollocationFamily::LobattoIIIA, 2);
    double y1 = take_step(prob, tab, TimeBasis::Bernstein, y0, k);
    double z = lambda * k;
    CHECK(y1 == doctest::Approx(y0 * (1.0 + z / 2.0) / (1.0 - z / 2.0)).epsilon(1e-13));
}

TEST_CASE("collocation property: the dense output satisfies the ODE at the nodes") {
    const double lambda = -0.8, k = 0.25, y0 = 1.0;
    auto prob = dahlquist(lambda);
    for (TimeBasis basis : {TimeBasis::Lagrange, TimeBasis::Bernstein}) {
        auto tab = tableau::make_tableau(CollocationFamily::RadauIIA, 3);
        auto ctx = stage_system::make_context(0.0, k, Vector{y0}, tab, basis);
        auto res = experiments::solve_step(prob, ctx, false, {});
        REQUIRE(res.report.converged);
        auto nodal = stage_system::stage_nodal_values(prob, ctx, res.stages);
        for (std::size_t i = 0; i < tab.c.size(); ++i) {
            // p'(t^n + c_i k) = lambda * Y_i (identity mass).
            Vector d = stage_system::dense_output_deriv(prob, ctx, res.stages, tab.c[i]);
            CHECK(d[0] == doctest::Approx(lambda * nodal[i][0]).epsilon(1e-10));
            // Dense output interpolates the stage values.
            Vector v = stage_system::dense_output(prob, ctx, res.stages, tab.c[i]);
            CHECK(v[0] == doctest::Approx(nodal[i][0]).epsilon(1e-12));
        }
        // Dense output starts from y^n.
        Vector v0 = stage_system::dense_output(prob, ctx, res.stages, 0.0);
        CHECK(v0[0] == doctest::Approx(y0).epsilon(1e-12));
        // Stiffly accurate: dense output at tau = 1 is the step update.
        Vector v1 = stage_system::dense_output(prob, ctx, res.stages, 1.0);
        CHECK(v1[0] == doctest::Approx(res.y_next[0]).epsilon(1e-12));
    }
}

TEST_CASE("stage Jacobian matches central differences on the nonlinear ODE system") {
    problems::PhytoParams params;
    auto prob = problems::phyto_problem(params);
    auto tab = tableau::make_tableau(CollocationFamily::RadauIIA, 2);
    for (TimeBasis basis : {TimeBasis::Lagrange, TimeBasis::Bernstein}) {
        auto ctx = stage_system::make_context(0.0, 0.5, params.initial_state(), tab, basis);
        Vector stages = stage_system::initial_stage_guess(prob, ctx);
        // Perturb away from the tiled guess so the Jacobian is generic.
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        for (auto& v : stages) v += v * u(rng) + u(rng);
        DenseMatrix jac = stage_system::jacobian(prob, ctx, stages);
        const std::size_t n = stages.size();
        const double h = 1e-6;
        for (std::size_t j = 0; j < n; ++j) {
            Vector sp = stages, sm = stages;
            sp[j] += h;
            sm[j] -= h;
            Vector rp = stage_system::residual(prob, ctx, sp);
            Vector rm = stage_system::residual(prob, ctx, sm);
            for (std::size_t i = 0; i < n; ++i) {
                double fd = (rp[i] - rm[i]) / (2 * h);
                CHECK(jac(i, j) == doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::abs(fd)));
            }
        }
    }
}

TEST_CASE("Lagrange and Bernstein stage bases give the same step") {
    problems::PhytoParams params;
    auto prob = problems::phyto_problem(params);
    for (auto fam : {CollocationFamily::RadauIIA, CollocationFamily::GaussLegendre}) {
        auto tab = tableau::make_tableau(fam, 3);
        auto cl = stage_system::make_context(0.0, 1.0, params.initial_state(), tab, TimeBasis::Lagrange);
        auto cb = stage_system::make_context(0.0, 1.0, params.initial_state(), tab, TimeBasis::Bernstein);
        auto rl = experiments::solve_step(prob, cl, false, {});
        auto rb = experiments::solve_step(prob, cb, false, {});
        REQUIRE(rl.report.converged);
        REQUIRE(rb.report.converged);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(rl.y_next[i] - rb.y_next[i]) <= 1e-10 * (1.0 + std::abs(rl.y_next[i])));
    }
}

TEST_CASE("Gauss methods use the b-weighted update") {
    // Gauss is not stiffly accurate; check y^{n+1} = y^n + k sum b_i f(Y_i)
    // explicitly against the solved stages.
    const double lambda = -1.0, k = 0.5, y0 = 1.0;
    auto prob = dahlquist(lambda);
    auto tab = tableau::make_tableau(CollocationFamily::GaussLegendre, 2);
    auto ctx = stage_system::make_context(0.0, k, Vector{y0}, tab, TimeBasis::Lagrange);
    auto res = experiments::solve_step(prob, ctx, false, {});
    REQUIRE(res.report.converged);
    auto nodal = stage_system::stage_nodal_values(prob, ctx, res.stages);
    double y1 = y0;
    for (std::size_t i = 0; i < tab.c.size(); ++i) y1 += k * tab.b[i] * lambda * nodal[i][0];
    CHECK(res.y_next[0] == doctest::Approx(y1).epsilon(1e-13));
}

TEST_CASE("Dirichlet rows pin the stage values to the boundary data") {
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 4), 1, fem1d::BasisFlavor::Lagrange);
    auto heat = problems::heat_mms_problem(space, problems::HeatVariant::Smooth);
    const auto& prob = heat->semidiscrete;
    auto tab = tableau::make_tableau(CollocationFamily::RadauIIA, 2);
    Vector y0(prob.dof_count);
    auto pts = space.dof_points();
    for (std::size_t i = 0; i < y0.size(); ++i) y0[i] = heat->exact(0.0, pts[i]);
    const double k = 0.1;
    auto ctx = stage_system::make_context(0.0, k, y0, tab, TimeBasis::Lagrange);
    auto res = experiments::solve_step(prob, ctx, false, {});
    REQUIRE(res.report.converged);
    auto nodal = stage_system::stage_nodal_values(prob, ctx, res.stages);
    for (std::size_t i = 0; i < tab.c.size(); ++i) {
        double t_i = k * tab.c[i];
        for (const auto& bc : prob.dirichlet)
            CHECK(nodal[i][bc.dof] == doctest::Approx(bc.value(t_i)).epsilon(1e-10));
    }
}

TEST_CASE("context validation rejects a nodal basis for confluent tableaus") {
    auto tab = tableau::make_tableau(CollocationFamily::LobattoIIIA, 2);
    CHECK_THROWS_AS(
        (void)stage_system::make_context(0.0, 0.1, Vector{1.0}, tab, TimeBasis::Lagrange),
        ConfigError);
    // Bernstein works.
    auto ctx = stage_system::make_context(0.0, 0.1, Vector{1.0}, tab, TimeBasis::Bernstein);
    CHECK(ctx.transform.has_value());
}

TEST_CASE("tile_bounds repeats the problem bounds across stages, Dirichlet dofs included") {
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 3), 1, fem1d::BasisFlavor::Lagrange);
    auto heat = problems::heat_mms_problem(space, problems::HeatVariant::Smooth);
    const auto& prob = heat->semidiscrete;
    const int s = 3;
    auto bounds = stage_system::tile_bounds(prob, s);
    REQUIRE(bounds.lower.size() == prob.dof_count * s);
    for (int i = 0; i < s; ++i)
        for (std::size_t j = 0; j < prob.dof_count; ++j) {
            CHECK(bounds.lower[i * prob.dof_count + j] == prob.lower[j]);
            CHECK(bounds.upper[i * prob.dof_count + j] == prob.upper[j]);
        }
    // The heat problem is bounded below by zero everywhere, boundary dofs too.
    for (std::size_t dof : space.boundary_dofs) CHECK(bounds.lower[dof] == 0.0);
}

TEST_CASE("riesz representative of the identity-mass problem is the raw residual") {
    auto prob = dahlquist(-3.0);
    Vector u = {0.7};
    Vector r = stage_system::riesz_representative(prob, 0.0, u);
    CHECK(r[0] == doctest::Approx(-3.0 * 0.7).epsilon(1e-14));
}
