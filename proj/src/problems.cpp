#include "bcfem/problems.hpp"

#include <cmath>
#include <string>

#include "bcfem/errors.hpp"

namespace bcfem::problems {

// ---------------------------------------------------------------- phytoplankton

void PhytoParams::validate() const {
    for (double v : {a, b, k_c, k_n, r_max, e, c0, n0, p0, d0})
        if (!(v > 0.0)) throw ConfigError("PhytoParams: all parameters must be positive");
}

stage_system::SemidiscreteProblem phyto_problem(const PhytoParams& params) {
    params.validate();
    stage_system::SemidiscreteProblem prob;
    prob.dof_count = 4;
    prob.mass = linalg::DenseMatrix(4, 4);
    for (int i = 0; i < 4; ++i) prob.mass(i, i) = 1.0;
    const PhytoParams p = params;
    prob.f_eval = [p](double, std::span<const double> y) {
        const double c = y[0], n = y[1], pop = y[2];
        const double uptake = p.r_max * c / (p.k_c + c) * n / (p.k_n + n) * pop;
        return linalg::Vector{-p.a * uptake, -p.b * uptake, uptake - p.e * pop, p.e * pop};
    };
    prob.f_jac = [p](double, std::span<const double> y) {
        const double c = y[0], n = y[1], pop = y[2];
        const double uc = c / (p.k_c + c), un = n / (p.k_n + n);
        const double duc = p.k_c / ((p.k_c + c) * (p.k_c + c));
        const double dun = p.k_n / ((p.k_n + n) * (p.k_n + n));
        const double r_c = p.r_max * duc * un * pop;
        const double r_n = p.r_max * uc * dun * pop;
        const double r_p = p.r_max * uc * un;
        linalg::DenseMatrix j(4, 4);
        j(0, 0) = -p.a * r_c; j(0, 1) = -p.a * r_n; j(0, 2) = -p.a * r_p;
        j(1, 0) = -p.b * r_c; j(1, 1) = -p.b * r_n; j(1, 2) = -p.b * r_p;
        j(2, 0) = r_c;        j(2, 1) = r_n;        j(2, 2) = r_p - p.e;
        j(3, 2) = p.e;
        return j;
    };
    prob.lower = linalg::Vector(4, 0.0);
    prob.upper = linalg::Vector(4, vi_solver::kInf);
    return prob;
}

std::pair<double, double> linear_invariants(std::span<const double> state) {
    return {state[0] + state[2] + state[3], state[1] + state[2] + state[3]};
}

// ----------------------------------------------------------------------- heat

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FrontShape {
    // Spatial profile g(x) = 1/4 (1 - tanh((0.15 - |x-0.5|)/0.015)) and
    // temporal switch T(t) = 1 + tanh(75 t - 6).
    static double q(double x) { return (0.15 - std::abs(x - 0.5)) / 0.015; }
    static double g(double x) { return 0.25 * (1.0 - std::tanh(q(x))); }
    static double gx(double x) {
        const double sech2 = 1.0 - std::tanh(q(x)) * std::tanh(q(x));
        const double sgn = x >= 0.5 ? 1.0 : -1.0;
        return 0.25 * sech2 * sgn / 0.015;
    }
    static double gxx(double x) {
        const double th = std::tanh(q(x));
        const double sech2 = 1.0 - th * th;
        return 0.5 * sech2 * th / (0.015 * 0.015);
    }
    static double tt(double t) { return 1.0 + std::tanh(75.0 * t - 6.0); }
    static double ttd(double t) {
        const double th = std::tanh(75.0 * t - 6.0);
        return 75.0 * (1.0 - th * th);
    }
};

}  // namespace

std::unique_ptr<HeatProblem> heat_mms_problem(const fem1d::FeSpace1D& space, HeatVariant variant) {
    auto hp = std::make_unique<HeatProblem>();
    hp->space = &space;
    hp->ops = fem1d::assemble(space);

    if (variant == HeatVariant::Smooth) {
        hp->exact = [](double t, double x) {
            const double c = std::cos(2.0 * kPi * x);
            return std::exp(-t) * c * c;
        };
        hp->exact_dx = [](double t, double x) {
            return -2.0 * kPi * std::exp(-t) * std::sin(4.0 * kPi * x);
        };
        // f = u_t - u_xx with u_t = -u and u_xx = -8 pi^2 e^{-t} cos(4 pi x).
        hp->forcing = [](double t, double x) {
            const double c = std::cos(2.0 * kPi * x);
            return std::exp(-t) * (-c * c + 8.0 * kPi * kPi * std::cos(4.0 * kPi * x));
        };
    } else {
        hp->exact = [](double t, double x) { return FrontShape::g(x) * FrontShape::tt(t); };
        hp->exact_dx = [](double t, double x) { return FrontShape::gx(x) * FrontShape::tt(t); };
        hp->forcing = [](double t, double x) {
            return FrontShape::g(x) * FrontShape::ttd(t) - FrontShape::gxx(x) * FrontShape::tt(t);
        };
    }

    auto& sd = hp->semidiscrete;
    sd.dof_count = space.dof_count;
    sd.mass = hp->ops.mass;
    const HeatProblem* raw = hp.get();
    sd.f_eval = [raw](double t, std::span<const double> u) {
        auto load = fem1d::assemble_load(*raw->space,
                                         [&](double x) { return raw->forcing(t, x); });
        const auto ku = linalg::matvec(raw->ops.stiffness, u);
        for (std::size_t i = 0; i < load.size(); ++i) load[i] -= ku[i];
        return load;
    };
    sd.f_jac = [raw](double, std::span<const double>) {
        auto j = raw->ops.stiffness;
        for (std::size_t i = 0; i < j.rows(); ++i)
            for (std::size_t k = 0; k < j.cols(); ++k) j(i, k) = -j(i, k);
        return j;
    };
    if (!space.mesh.periodic) {
        const auto pts = space.dof_points();
        for (std::size_t bd : space.boundary_dofs) {
            const double x = pts[bd];
            sd.dirichlet.push_back({bd, [raw, x](double t) { return raw->exact(t, x); }});
        }
    }
    sd.lower = linalg::Vector(space.dof_count, 0.0);
    sd.upper = linalg::Vector(space.dof_count, vi_solver::kInf);
    return hp;
}

// ------------------------------------------------------------- Cahn-Hilliard

void CahnHilliardParams::validate() const {
    if (!(theta0 > 0.0 && theta0 < theta_c)) throw ConfigError("CahnHilliard: need 0 < theta0 < theta_c");
    if (!(delta_reg > 0.0 && delta_reg < 0.25)) throw ConfigError("CahnHilliard: delta_reg outside (0, 0.25)");
    if (!(delta_b > 0.0)) throw ConfigError("CahnHilliard: delta_b must be positive");
    if (!(epsilon > 0.0 && mobility > 0.0)) throw ConfigError("CahnHilliard: epsilon, mobility must be positive");
    const double cstar = ch_binodal(*this);
    if (!(cstar < 1.0 - delta_b))
        throw ConfigError("CahnHilliard: binodal point outside the feasible interval");
}

double ln_reg(double s, double delta_reg) {
    if (s > delta_reg) return std::log(s);
    return std::log(delta_reg) + (s - delta_reg) / delta_reg;
}

double ch_potential(double s, const CahnHilliardParams& p) {
    if (std::abs(s) >= 1.0)
        throw SingularityError("CahnHilliard: potential evaluated at |c| >= 1 (c = " +
                               std::to_string(s) + ")");
    return 0.5 * p.theta0 * ((1.0 + s) * std::log(1.0 + s) + (1.0 - s) * std::log(1.0 - s)) -
           0.5 * p.theta_c * s * s;
}

double ch_potential_d(double s, const CahnHilliardParams& p) {
    if (std::abs(s) >= 1.0)
        throw SingularityError("CahnHilliard: F' evaluated at |c| >= 1 (c = " +
                               std::to_string(s) + ")");
    return 0.5 * p.theta0 * std::log((1.0 + s) / (1.0 - s)) - p.theta_c * s;
}

double ch_potential_dd_reg(double s, const CahnHilliardParams& p) {
    const double lo = std::max(1.0 + s, p.delta_reg);
    const double hi = std::max(1.0 - s, p.delta_reg);
    return 0.5 * p.theta0 * (1.0 / lo + 1.0 / hi) - p.theta_c;
}

double ch_binodal(const CahnHilliardParams& p) {
    const double target = 2.0 * p.theta_c / p.theta0;
    auto h = [&](double s) { return std::log((1.0 + s) / (1.0 - s)) / s - target; };
    double lo = 1e-12, hi = 1.0 - 1e-15;
    if (h(lo) > 0.0 || h(hi) < 0.0)
        throw ConfigError("ch_binodal: no bracketed root; check theta0 < theta_c");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double CahnHilliardProblem::free_energy(std::span<const double> c_coeffs) const {
    const CahnHilliardParams& p = params;
    return fem1d::integrate(*space, c_coeffs, [&](double c, double dc) {
        return ch_potential(c, p) + 0.5 * p.epsilon * p.epsilon * dc * dc;
    });
}

double CahnHilliardProblem::total_mass(std::span<const double> c_coeffs) const {
    return fem1d::integrate(*space, c_coeffs, [](double c, double) { return c; });
}

std::unique_ptr<CahnHilliardProblem> cahn_hilliard_problem(const fem1d::FeSpace1D& space,
                                                           const CahnHilliardParams& params) {
    params.validate();
    auto ch = std::make_unique<CahnHilliardProblem>();
    ch->space = &space;
    ch->ops = fem1d::assemble(space);
    ch->params = params;
    ch->field_dofs = space.dof_count;

    const std::size_t n = space.dof_count;
    auto& sd = ch->semidiscrete;
    sd.dof_count = 2 * n;
    // Time derivative only on the c field; mu rows are algebraic.
    sd.mass = linalg::DenseMatrix(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sd.mass(i, j) = ch->ops.mass(i, j);

    const CahnHilliardProblem* raw = ch.get();
    sd.f_eval = [raw, n](double, std::span<const double> u) {
        const CahnHilliardParams& p = raw->params;
        const std::span<const double> c = u.subspan(0, n);
        const std::span<const double> mu = u.subspan(n, n);
        linalg::Vector g(2 * n, 0.0);
        // c rows: -(M grad mu, grad v).
        const auto kmu = linalg::matvec(raw->ops.stiffness, mu);
        for (std::size_t i = 0; i < n; ++i) g[i] = -p.mobility * kmu[i];
        // mu rows (algebraic): (mu, w) - (F'(c), w) - eps^2 (grad c, grad w),
        // with the true logarithm.
        const auto mmu = linalg::matvec(raw->ops.mass, mu);
        const auto kc = linalg::matvec(raw->ops.stiffness, c);
        const auto fp = fem1d::assemble_function_load(
            *raw->space, c, [&](double s) { return ch_potential_d(s, p); });
        for (std::size_t i = 0; i < n; ++i)
            g[n + i] = mmu[i] - fp[i] - p.epsilon * p.epsilon * kc[i];
        return g;
    };
    sd.f_jac = [raw, n](double, std::span<const double> u) {
        const CahnHilliardParams& p = raw->params;
        const std::span<const double> c = u.subspan(0, n);
        linalg::DenseMatrix j(2 * n, 2 * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                j(a, n + b) = -p.mobility * raw->ops.stiffness(a, b);
                j(n + a, n + b) = raw->ops.mass(a, b);
            }
        // d(mu rows)/dc with the regularized logarithm.
        const auto w = fem1d::assemble_weighted_mass(
            *raw->space, c, [&](double s) { return ch_potential_dd_reg(s, p); });
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                j(n + a, b) = -w(a, b) - p.epsilon * p.epsilon * raw->ops.stiffness(a, b);
        return j;
    };
    sd.lower = linalg::Vector(2 * n, -vi_solver::kInf);
    sd.upper = linalg::Vector(2 * n, vi_solver::kInf);
    for (std::size_t i = 0; i < n; ++i) {
        sd.lower[i] = -1.0 + params.delta_b;
        sd.upper[i] = 1.0 - params.delta_b;
    }
    return ch;
}

}  // namespace bcfem::problems
