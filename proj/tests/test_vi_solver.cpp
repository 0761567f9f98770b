#include <cmath>
#include <optional>
#include <random>

#include "bcfem/linalg.hpp"
#include "bcfem/vi_solver.hpp"
#include "doctest.h"

using namespace bcfem;
using linalg::DenseMatrix;
using linalg::Vector;
using vi_solver::BoxConstraint;
using vi_solver::NewtonSettings;

namespace {

DenseMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = u(rng);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += b(k, i) * b(k, j);
            a(i, j) = s + (i == j ? 0.5 : 0.0);
        }
    return a;
}

// Exhaustive active-set oracle for min (x-z)^T M (x-z)/2 s.t. x >= 0:
// enumerate all 2^n active sets, solve the KKT system for each, and return
// the unique feasible KKT point.
std::optional<Vector> brute_force_projection(const DenseMatrix& m, const Vector& z) {
    const std::size_t n = z.size();
    Vector mz = linalg::matvec(m, z);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> inactive;
        for (std::size_t i = 0; i < n; ++i)
            if (!(mask & (1u << i))) inactive.push_back(i);
        Vector x(n, 0.0);
        if (!inactive.empty()) {
            DenseMatrix mii = linalg::submatrix(m, inactive);
            Vector rhs = linalg::gather(mz, inactive);
            auto f = linalg::lu_factor(mii);
            Vector xi = linalg::lu_solve(f, rhs);
            linalg::scatter(xi, inactive, x);
        }
        // KKT: x_I >= 0 and the gradient M(x - z) >= 0 on the active set.
        bool ok = true;
        for (std::size_t i : inactive)
            if (x[i] < -1e-12) ok = false;
        Vector grad = linalg::matvec(m, x);
        for (std::size_t i = 0; i < n; ++i) grad[i] -= mz[i];
        for (std::size_t i = 0; i < n; ++i)
            if ((mask & (1u << i)) && grad[i] < -1e-10) ok = false;
        if (ok) return x;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("linear residual with infinite bounds converges in one iteration") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 3.0;
    Vector b = {1.0, -2.0};
    auto residual = [&](std::span<const double> x) {
        Vector r = linalg::matvec(a, x);
        for (int i = 0; i < 2; ++i) r[i] -= b[i];
        return r;
    };
    auto jacobian = [&](std::span<const double>) { return a; };
    Vector x0 = {0.0, 0.0};
    NewtonSettings st;
    auto [xu, ru] = vi_solver::solve_unconstrained(residual, jacobian, x0, st);
    CHECK(ru.converged);
    CHECK(ru.newton_iterations == 1);
    auto [xv, rv] = vi_solver::solve_vi(residual, jacobian, x0, BoxConstraint::unbounded(2), st);
    CHECK(rv.converged);
    CHECK(rv.newton_iterations == 1);
    // Bitwise-identical iterates under infinite bounds.
    CHECK(xu[0] == xv[0]);
    CHECK(xu[1] == xv[1]);
}

TEST_CASE("scalar complementarity at the lower bound") {
    auto residual = [](std::span<const double> x) { return Vector{x[0] + 1.0}; };
    auto jacobian = [](std::span<const double>) {
        DenseMatrix j(1, 1);
        j(0, 0) = 1.0;
        return j;
    };
    Vector x0 = {2.0};
    BoxConstraint bounds{{0.0}, {vi_solver::kInf}};
    auto [x, rep] = vi_solver::solve_vi(residual, jacobian, x0, bounds, {});
    CHECK(rep.converged);
    CHECK(x[0] == 0.0);  // at the bound with F(0) = 1 >= 0
}

TEST_CASE("obstacle projection matches the exhaustive active-set oracle") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NewtonSettings st;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + trial % 11;  // up to 12 dofs
        DenseMatrix m = random_spd(n, rng);
        Vector z(n);
        for (auto& v : z) v = u(rng);
        auto residual = [&](std::span<const double> x) {
            Vector d(x.begin(), x.end());
            for (std::size_t i = 0; i < n; ++i) d[i] -= z[i];
            return linalg::matvec(m, d);
        };
        auto jacobian = [&](std::span<const double>) { return m; };
        Vector x0(n, 0.0);
        BoxConstraint bounds{Vector(n, 0.0), Vector(n, vi_solver::kInf)};
        auto [x, rep] = vi_solver::solve_vi(residual, jacobian, x0, bounds, st);
        REQUIRE(rep.converged);
        auto oracle = brute_force_projection(m, z);
        REQUIRE(oracle.has_value());
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - (*oracle)[i]) <= 1e-7);

        // Feasibility and complementarity invariants.
        Vector f = residual(x);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(x[i] >= -1e-15);
            CHECK(std::min(x[i], std::max(f[i], 0.0)) <= 10.0 * st.absolute_tolerance);
        }
    }
}

TEST_CASE("bitwise equivalence on a nonlinear system with infinite bounds") {
    const std::size_t n = 5;
    auto residual = [&](std::span<const double> x) {
        Vector r(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = std::exp(0.3 * x[i]) - 1.0 + 0.5 * x[i] - 0.1 * x[(i + 1) % n];
        }
        return r;
    };
    auto jacobian = [&](std::span<const double> x) {
        DenseMatrix j(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            j(i, i) = 0.3 * std::exp(0.3 * x[i]) + 0.5;
            j(i, (i + 1) % n) -= 0.1;
        }
        return j;
    };
    Vector x0 = {1.0, -0.5, 2.0, 0.25, -1.5};
    NewtonSettings st;
    auto [xu, ru] = vi_solver::solve_unconstrained(residual, jacobian, x0, st);
    auto [xv, rv] = vi_solver::solve_vi(residual, jacobian, x0, BoxConstraint::unbounded(n), st);
    REQUIRE(ru.converged);
    REQUIRE(rv.converged);
    CHECK(ru.newton_iterations == rv.newton_iterations);
    for (std::size_t i = 0; i < n; ++i) CHECK(xu[i] == xv[i]);
}

TEST_CASE("backward Euler step of y' = y^2 matches a bisection oracle") {
    const double y0 = 1.0, k = 0.1;
    auto residual = [&](std::span<const double> x) {
        return Vector{x[0] - y0 - k * x[0] * x[0]};
    };
    auto jacobian = [&](std::span<const double> x) {
        DenseMatrix j(1, 1);
        j(0, 0) = 1.0 - 2.0 * k * x[0];
        return j;
    };
    Vector x0 = {y0};
    auto [x, rep] = vi_solver::solve_unconstrained(residual, jacobian, x0, {});
    REQUIRE(rep.converged);
    // Bisect g(y) = y - y0 - k y^2 on [1, 2].
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = mid - y0 - k * mid * mid;
        (g < 0 ? lo : hi) = mid;
    }
    CHECK(x[0] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
    CHECK(rep.newton_iterations <= 6);  // quadratic convergence
}

TEST_CASE("non-convergence is reported, not thrown") {
    auto residual = [](std::span<const double> x) { return Vector{std::cos(x[0]) + 2.0}; };
    auto jacobian = [](std::span<const double> x) {
        DenseMatrix j(1, 1);
        j(0, 0) = -std::sin(x[0]) - 1.5;  // keeps the solve moving; no root exists
        return j;
    };
    Vector x0 = {0.5};
    NewtonSettings st;
    st.max_iterations = 8;
    auto [x, rep] = vi_solver::solve_unconstrained(residual, jacobian, x0, st);
    CHECK_FALSE(rep.converged);
    CHECK(rep.newton_iterations == 8);
    CHECK(rep.final_residual_norm > st.absolute_tolerance);
}

TEST_CASE("upper bounds and active-set history") {
    // Minimize (x - 2)^2/2 subject to x <= 1: active upper bound, F(1) <= 0.
    auto residual = [](std::span<const double> x) { return Vector{x[0] - 2.0}; };
    auto jacobian = [](std::span<const double>) {
        DenseMatrix j(1, 1);
        j(0, 0) = 1.0;
        return j;
    };
    Vector x0 = {0.0};
    BoxConstraint bounds{{-vi_solver::kInf}, {1.0}};
    auto [x, rep] = vi_solver::solve_vi(residual, jacobian, x0, bounds, {});
    CHECK(rep.converged);
    CHECK(x[0] == 1.0);
    CHECK_FALSE(rep.active_set_size_history.empty());
}

TEST_CASE("infeasible initial guess is clipped into the box") {
    auto residual = [](std::span<const double> x) { return Vector{x[0] - 0.5}; };
    auto jacobian = [](std::span<const double>) {
        DenseMatrix j(1, 1);
        j(0, 0) = 1.0;
        return j;
    };
    Vector x0 = {-7.0};
    BoxConstraint bounds{{0.0}, {2.0}};
    auto [x, rep] = vi_solver::solve_vi(residual, jacobian, x0, bounds, {});
    CHECK(rep.converged);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-12));
}
