#include <cmath>
#include <random>

#include "bcfem/errors.hpp"
#include "bcfem/fem1d.hpp"
#include "bcfem/linalg.hpp"
#include "bcfem/vi_solver.hpp"
#include "doctest.h"

using namespace bcfem;
using fem1d::BasisFlavor;

TEST_CASE("dof counts for open and periodic meshes") {
    for (int r = 1; r <= 4; ++r) {
        auto open_space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 7), r, BasisFlavor::Lagrange);
        CHECK(open_space.dof_count == static_cast<std::size_t>(7 * r + 1));
        CHECK(open_space.boundary_dofs.size() == 2);
        auto per = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 7, true), r, BasisFlavor::Bernstein);
        CHECK(per.dof_count == static_cast<std::size_t>(7 * r));
        CHECK(per.boundary_dofs.empty());
    }
    CHECK_THROWS_AS((void)fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 4), 0, BasisFlavor::Lagrange),
                    ConfigError);
    CHECK_THROWS_AS((void)fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 4), 5, BasisFlavor::Lagrange),
                    ConfigError);
}

TEST_CASE("linear-element mass and stiffness rows against closed forms") {
    const int n = 5;
    const double h = 1.0 / n;
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, n), 1, BasisFlavor::Lagrange);
    auto ops = fem1d::assemble(space);
    // Interior row i: mass h*[1/6, 2/3, 1/6], stiffness (1/h)*[-1, 2, -1].
    for (std::size_t i = 1; i + 1 < space.dof_count; ++i) {
        CHECK(ops.mass(i, i - 1) == doctest::Approx(h / 6.0).epsilon(1e-13));
        CHECK(ops.mass(i, i) == doctest::Approx(2.0 * h / 3.0).epsilon(1e-13));
        CHECK(ops.mass(i, i + 1) == doctest::Approx(h / 6.0).epsilon(1e-13));
        CHECK(ops.stiffness(i, i - 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
        CHECK(ops.stiffness(i, i) == doctest::Approx(2.0 / h).epsilon(1e-13));
        CHECK(ops.stiffness(i, i + 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
    }
}

TEST_CASE("mass matrix row sums integrate the basis (partition of unity)") {
    for (BasisFlavor flavor : {BasisFlavor::Lagrange, BasisFlavor::Bernstein}) {
        for (int r = 1; r <= 4; ++r) {
            auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 2, 3), r, flavor);
            auto ops = fem1d::assemble(space);
            double total = 0.0;
            for (std::size_t i = 0; i < space.dof_count; ++i)
                for (std::size_t j = 0; j < space.dof_count; ++j) total += ops.mass(i, j);
            CHECK(total == doctest::Approx(2.0).epsilon(1e-12));  // |domain|
            // Stiffness annihilates constants.
            for (std::size_t i = 0; i < space.dof_count; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < space.dof_count; ++j) row += ops.stiffness(i, j);
                CHECK(std::abs(row) <= 1e-11);
            }
        }
    }
}

TEST_CASE("projection reproduces polynomials of degree <= r in both flavors") {
    for (BasisFlavor flavor : {BasisFlavor::Lagrange, BasisFlavor::Bernstein}) {
        for (int r = 1; r <= 4; ++r) {
            auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 4), r, flavor);
            auto f = [r](double x) { return 1.0 + std::pow(x, r) - 0.5 * x; };
            auto df = [r](double x) { return r * std::pow(x, r - 1) - 0.5; };
            auto uh = fem1d::project_unconstrained(space, f);
            auto [l2, h1] = fem1d::error_norms(uh, f, df);
            CHECK(l2 <= 1e-12);
            CHECK(h1 <= 1e-10);
            for (double x : {0.05, 0.37, 0.81})
                CHECK(uh.eval(x) == doctest::Approx(f(x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("flavors span the same space: projections agree pointwise") {
    auto f = [](double x) { return std::sin(3.0 * x) + 0.2 * x; };
    for (int r = 1; r <= 4; ++r) {
        auto sl = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 5), r, BasisFlavor::Lagrange);
        auto sb = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 5), r, BasisFlavor::Bernstein);
        auto ul = fem1d::project_unconstrained(sl, f);
        auto ub = fem1d::project_unconstrained(sb, f);
        for (int j = 0; j <= 40; ++j) {
            double x = j / 40.0;
            CHECK(std::abs(ul.eval(x) - ub.eval(x)) <= 1e-10);
            CHECK(std::abs(ul.eval_deriv(x) - ub.eval_deriv(x)) <= 1e-8);
        }
    }
}

TEST_CASE("dof points are interpolatory for the Lagrange flavor") {
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 3), 3, BasisFlavor::Lagrange);
    auto f = [](double x) { return x * x * x - x; };
    auto uh = fem1d::project_unconstrained(space, f);
    auto pts = space.dof_points();
    REQUIRE(pts.size() == space.dof_count);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(uh.coeffs[i] == doctest::Approx(f(pts[i])).epsilon(1e-10));
}

TEST_CASE("constrained projection clips at active bounds and is feasible") {
    // Project a function dipping below zero with a nonnegativity constraint.
    auto f = [](double x) { return std::sin(2.0 * M_PI * x); };
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 8), 2, BasisFlavor::Bernstein);
    auto bounds = vi_solver::BoxConstraint::uniform(space.dof_count, 0.0, vi_solver::kInf);
    auto uh = fem1d::project_constrained(space, f, bounds);
    double cmin = 1e300;
    for (double c : uh.coeffs) cmin = std::min(cmin, c);
    CHECK(cmin >= -1e-14);
    // Uniform nonnegativity of the function follows from the control net.
    for (int j = 0; j <= 200; ++j) CHECK(uh.eval(j / 200.0) >= -1e-12);
    // Where f is comfortably positive the projection still tracks it.
    CHECK(uh.eval(0.25) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("nonlinear load and integrate agree with linear-oracle identities") {
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 6), 2, BasisFlavor::Lagrange);
    auto ops = fem1d::assemble(space);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    linalg::Vector c(space.dof_count);
    for (auto& v : c) v = u(rng);
    // With fn = identity, the nonlinear load is the mass matrix action.
    auto load = fem1d::assemble_function_load(space, c, [](double s) { return s; });
    auto mc = linalg::matvec(ops.mass, c);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(load[i] == doctest::Approx(mc[i]).epsilon(1e-12));
    // integrate of u^2 equals c^T M c; integrate of (u')^2 equals c^T K c.
    double l2sq = fem1d::integrate(space, c, [](double v, double) { return v * v; });
    double h1sq = fem1d::integrate(space, c, [](double, double d) { return d * d; });
    double ctmc = 0.0, ctkc = 0.0;
    auto kc = linalg::matvec(ops.stiffness, c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        ctmc += c[i] * mc[i];
        ctkc += c[i] * kc[i];
    }
    CHECK(l2sq == doctest::Approx(ctmc).epsilon(1e-12));
    CHECK(h1sq == doctest::Approx(ctkc).epsilon(1e-11));
    // Weighted mass with unit weight reproduces the mass matrix.
    auto wm = fem1d::assemble_weighted_mass(space, c, [](double) { return 1.0; });
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            CHECK(wm(i, j) == doctest::Approx(ops.mass(i, j)).epsilon(1e-13));
}

TEST_CASE("Dirichlet elimination solves a manufactured Poisson problem") {
    // -u'' = 2 with u(0) = 1, u(1) = 3 has exact solution u = 1 + 3x - x^2.
    auto exact = [](double x) { return 1.0 + 3.0 * x - x * x; };
    for (BasisFlavor flavor : {BasisFlavor::Lagrange, BasisFlavor::Bernstein}) {
        auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 4), 2, flavor);
        auto ops = fem1d::assemble(space);
        auto rhs = fem1d::assemble_load(space, [](double) { return 2.0; });
        linalg::DenseMatrix a = ops.stiffness;
        std::vector<double> bvals = {1.0, 3.0};
        fem1d::apply_dirichlet(space, a, rhs, bvals);
        auto f = linalg::lu_factor(a);
        fem1d::FeFunction uh{&space, linalg::lu_solve(f, rhs)};
        for (int j = 0; j <= 20; ++j)
            CHECK(uh.eval(j / 20.0) == doctest::Approx(exact(j / 20.0)).epsilon(1e-10));
    }
}

TEST_CASE("periodic space evaluates continuously across the wrap point") {
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 8, true), 2, BasisFlavor::Lagrange);
    auto f = [](double x) { return std::cos(2.0 * M_PI * x); };
    auto uh = fem1d::project_unconstrained(space, f);
    CHECK(uh.eval(0.0) == doctest::Approx(uh.eval(1.0)).epsilon(1e-12));
    CHECK(uh.eval(0.5) == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("error_norms against a hand-computed linear interpolation error") {
    // u = x^2 on one linear element over [0,1]: interpolant is x, and the
    // errors are ||x - x^2||_L2 = 1/sqrt(30), |u - I u|_H1 = 1/sqrt(3).
    auto space = fem1d::build_space(fem1d::Mesh1D::uniform(0, 1, 1), 1, BasisFlavor::Lagrange);
    fem1d::FeFunction uh{&space, {0.0, 1.0}};
    auto [l2, h1] = fem1d::error_norms(
        uh, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
    CHECK(l2 == doctest::Approx(1.0 / std::sqrt(30.0)).epsilon(1e-12));
    CHECK(h1 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}
