#include "bcfem/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcfem/errors.hpp"
#include "bcfem/polybasis.hpp"
#include "bcfem/tableau.hpp"
#include "bcfem/vi_solver.hpp"

namespace bcfem::fem1d {

namespace {

// Local basis values/derivatives on the reference cell [0,1].  Lagrange nodes
// are equispaced i/r; local dofs 0 and r sit on the cell endpoints in both
// flavors, which is what makes C0 assembly across cells work.
void local_basis(int r, BasisFlavor flavor, double xi, std::span<double> values,
                 std::span<double> derivs) {
    if (flavor == BasisFlavor::Bernstein) {
        for (int i = 0; i <= r; ++i) {
            values[i] = polybasis::bernstein_basis(r, i, xi);
            double d = 0.0;
            if (i > 0) d += r * polybasis::bernstein_basis(r - 1, i - 1, xi);
            if (i < r) d -= r * polybasis::bernstein_basis(r - 1, i, xi);
            derivs[i] = d;
        }
        return;
    }
    for (int i = 0; i <= r; ++i) {
        const double xi_i = static_cast<double>(i) / r;
        double v = 1.0, d = 0.0;
        for (int j = 0; j <= r; ++j) {
            if (j == i) continue;
            const double xi_j = static_cast<double>(j) / r;
            double term = 1.0 / (xi_i - xi_j);
            for (int k = 0; k <= r; ++k) {
                if (k == i || k == j) continue;
                term *= (xi - static_cast<double>(k) / r) / (xi_i - static_cast<double>(k) / r);
            }
            d += term;
            v *= (xi - xi_j) / (xi_i - xi_j);
        }
        values[i] = v;
        derivs[i] = d;
    }
}

int locate_cell(const Mesh1D& mesh, double x) {
    if (x < mesh.a || x > mesh.b) throw DomainError("FeFunction: x outside the mesh domain");
    const auto it = std::upper_bound(mesh.vertices.begin(), mesh.vertices.end(), x);
    int e = static_cast<int>(it - mesh.vertices.begin()) - 1;
    return std::clamp(e, 0, mesh.n_cells - 1);
}

}  // namespace

Mesh1D Mesh1D::uniform(double a, double b, int n_cells, bool periodic) {
    if (n_cells < 1 || !(a < b)) throw ConfigError("Mesh1D: invalid domain or cell count");
    Mesh1D m;
    m.a = a;
    m.b = b;
    m.n_cells = n_cells;
    m.periodic = periodic;
    m.vertices.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        m.vertices[i] = a + (b - a) * static_cast<double>(i) / n_cells;
    return m;
}

FeSpace1D build_space(const Mesh1D& mesh, int r, BasisFlavor flavor) {
    if (r < 1 || r > 4) throw ConfigError("build_space: degree must be in [1,4]");
    FeSpace1D sp;
    sp.mesh = mesh;
    sp.degree = r;
    sp.flavor = flavor;
    const std::size_t n_interface = static_cast<std::size_t>(mesh.n_cells) * r;
    sp.dof_count = mesh.periodic ? n_interface : n_interface + 1;
    sp.cell_to_dof.resize(mesh.n_cells);
    for (int e = 0; e < mesh.n_cells; ++e) {
        sp.cell_to_dof[e].resize(r + 1);
        for (int i = 0; i <= r; ++i) {
            std::size_t g = static_cast<std::size_t>(e) * r + i;
            if (mesh.periodic) g %= sp.dof_count;
            sp.cell_to_dof[e][i] = g;
        }
    }
    if (!mesh.periodic) sp.boundary_dofs = {0, sp.dof_count - 1};
    return sp;
}

std::vector<double> FeSpace1D::dof_points() const {
    std::vector<double> pts(dof_count);
    for (int e = 0; e < mesh.n_cells; ++e)
        for (int i = 0; i <= degree; ++i)
            pts[cell_to_dof[e][i]] =
                mesh.vertices[e] + mesh.cell_size(e) * static_cast<double>(i) / degree;
    return pts;
}

double FeFunction::eval(double x) const {
    const auto& sp = *space;
    const int e = locate_cell(sp.mesh, x);
    const double xi = (x - sp.mesh.vertices[e]) / sp.mesh.cell_size(e);
    const int r = sp.degree;
    std::vector<double> v(r + 1), d(r + 1);
    local_basis(r, sp.flavor, xi, v, d);
    double s = 0.0;
    for (int i = 0; i <= r; ++i) s += coeffs[sp.cell_to_dof[e][i]] * v[i];
    return s;
}

double FeFunction::eval_deriv(double x) const {
    const auto& sp = *space;
    const int e = locate_cell(sp.mesh, x);
    const double h = sp.mesh.cell_size(e);
    const double xi = (x - sp.mesh.vertices[e]) / h;
    const int r = sp.degree;
    std::vector<double> v(r + 1), d(r + 1);
    local_basis(r, sp.flavor, xi, v, d);
    double s = 0.0;
    for (int i = 0; i <= r; ++i) s += coeffs[sp.cell_to_dof[e][i]] * d[i];
    return s / h;
}

AssembledOperators assemble(const FeSpace1D& space) {
    const int r = space.degree;
    const int npts = r + 2;  // exact through degree 2r+3
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);

    AssembledOperators ops{linalg::DenseMatrix(space.dof_count, space.dof_count),
                           linalg::DenseMatrix(space.dof_count, space.dof_count)};
    std::vector<double> v(r + 1), d(r + 1);
    for (int e = 0; e < space.mesh.n_cells; ++e) {
        const double h = space.mesh.cell_size(e);
        const auto& dofs = space.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, space.flavor, q[p], v, d);
            const double wm = w[p] * h;
            const double ws = w[p] / h;
            for (int i = 0; i <= r; ++i)
                for (int j = 0; j <= r; ++j) {
                    ops.mass(dofs[i], dofs[j]) += wm * v[i] * v[j];
                    ops.stiffness(dofs[i], dofs[j]) += ws * d[i] * d[j];
                }
        }
    }
    return ops;
}

linalg::Vector assemble_load(const FeSpace1D& space, const std::function<double(double)>& f) {
    const int r = space.degree;
    const int npts = r + 3;
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);
    linalg::Vector load(space.dof_count, 0.0);
    std::vector<double> v(r + 1), d(r + 1);
    for (int e = 0; e < space.mesh.n_cells; ++e) {
        const double h = space.mesh.cell_size(e);
        const auto& dofs = space.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, space.flavor, q[p], v, d);
            const double x = space.mesh.vertices[e] + h * q[p];
            const double fw = f(x) * w[p] * h;
            for (int i = 0; i <= r; ++i) load[dofs[i]] += fw * v[i];
        }
    }
    return load;
}

linalg::Vector assemble_function_load(const FeSpace1D& space, std::span<const double> state_coeffs,
                                      const std::function<double(double)>& fn) {
    const int r = space.degree;
    const int npts = r + 2;
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);
    linalg::Vector load(space.dof_count, 0.0);
    std::vector<double> v(r + 1), d(r + 1);
    for (int e = 0; e < space.mesh.n_cells; ++e) {
        const double h = space.mesh.cell_size(e);
        const auto& dofs = space.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, space.flavor, q[p], v, d);
            double u = 0.0;
            for (int i = 0; i <= r; ++i) u += state_coeffs[dofs[i]] * v[i];
            const double fw = fn(u) * w[p] * h;
            for (int i = 0; i <= r; ++i) load[dofs[i]] += fw * v[i];
        }
    }
    return load;
}

double integrate(const FeSpace1D& space, std::span<const double> state_coeffs,
                 const std::function<double(double, double)>& fn) {
    const int r = space.degree;
    const int npts = r + 2;
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);
    std::vector<double> v(r + 1), d(r + 1);
    double total = 0.0;
    for (int e = 0; e < space.mesh.n_cells; ++e) {
        const double h = space.mesh.cell_size(e);
        const auto& dofs = space.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, space.flavor, q[p], v, d);
            double u = 0.0, du = 0.0;
            for (int i = 0; i <= r; ++i) {
                u += state_coeffs[dofs[i]] * v[i];
                du += state_coeffs[dofs[i]] * d[i];
            }
            total += w[p] * h * fn(u, du / h);
        }
    }
    return total;
}

linalg::DenseMatrix assemble_weighted_mass(const FeSpace1D& space,
                                           std::span<const double> state_coeffs,
                                           const std::function<double(double)>& weight) {
    const int r = space.degree;
    const int npts = r + 2;
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);
    linalg::DenseMatrix m(space.dof_count, space.dof_count);
    std::vector<double> v(r + 1), d(r + 1);
    for (int e = 0; e < space.mesh.n_cells; ++e) {
        const double h = space.mesh.cell_size(e);
        const auto& dofs = space.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, space.flavor, q[p], v, d);
            double u = 0.0;
            for (int i = 0; i <= r; ++i) u += state_coeffs[dofs[i]] * v[i];
            const double wm = w[p] * h * weight(u);
            for (int i = 0; i <= r; ++i)
                for (int j = 0; j <= r; ++j) m(dofs[i], dofs[j]) += wm * v[i] * v[j];
        }
    }
    return m;
}

FeFunction project_unconstrained(const FeSpace1D& space, const std::function<double(double)>& f) {
    const auto ops = assemble(space);
    const auto load = assemble_load(space, f);
    const auto lu = linalg::lu_factor(ops.mass);
    return FeFunction{&space, linalg::lu_solve(lu, load)};
}

FeFunction project_constrained(const FeSpace1D& space, const std::function<double(double)>& f,
                               const vi_solver::BoxConstraint& bounds) {
    if (bounds.lower.size() != space.dof_count || bounds.upper.size() != space.dof_count)
        throw ConfigError("project_constrained: bounds size mismatch");
    const auto ops = assemble(space);
    const auto load = assemble_load(space, f);
    auto residual = [&](std::span<const double> x) {
        auto r = linalg::matvec(ops.mass, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= load[i];
        return r;
    };
    auto jacobian = [&](std::span<const double>) { return ops.mass; };
    linalg::Vector x0(space.dof_count, 0.0);
    auto [x, report] = vi_solver::solve_vi(residual, jacobian, x0, bounds, {});
    if (!report.converged)
        throw ConfigError("project_constrained: VI projection did not converge");
    return FeFunction{&space, std::move(x)};
}

std::pair<double, double> error_norms(const FeFunction& u_h,
                                      const std::function<double(double)>& u_exact,
                                      const std::function<double(double)>& du_exact) {
    const auto& sp = *u_h.space;
    const int r = sp.degree;
    const int npts = r + 4;
    std::vector<double> q, w;
    tableau::gauss_legendre_rule(npts, q, w);
    std::vector<double> v(r + 1), d(r + 1);
    double l2 = 0.0, h1 = 0.0;
    for (int e = 0; e < sp.mesh.n_cells; ++e) {
        const double h = sp.mesh.cell_size(e);
        const auto& dofs = sp.cell_to_dof[e];
        for (int p = 0; p < npts; ++p) {
            local_basis(r, sp.flavor, q[p], v, d);
            double uh = 0.0, duh = 0.0;
            for (int i = 0; i <= r; ++i) {
                uh += u_h.coeffs[dofs[i]] * v[i];
                duh += u_h.coeffs[dofs[i]] * d[i];
            }
            duh /= h;
            const double x = sp.mesh.vertices[e] + h * q[p];
            const double eu = uh - u_exact(x);
            const double edu = duh - du_exact(x);
            l2 += w[p] * h * eu * eu;
            h1 += w[p] * h * edu * edu;
        }
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

void apply_dirichlet(const FeSpace1D& space, linalg::DenseMatrix& a, linalg::Vector& rhs,
                     std::span<const double> boundary_values) {
    if (space.mesh.periodic) throw ConfigError("apply_dirichlet: periodic space has no boundary");
    if (boundary_values.size() != space.boundary_dofs.size())
        throw ConfigError("apply_dirichlet: boundary value count mismatch");
    for (std::size_t k = 0; k < space.boundary_dofs.size(); ++k) {
        const std::size_t bd = space.boundary_dofs[k];
        const double g = boundary_values[k];
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == bd) continue;
            rhs[i] -= a(i, bd) * g;
            a(i, bd) = 0.0;
            a(bd, i) = 0.0;
        }
        a(bd, bd) = 1.0;
        rhs[bd] = g;
    }
}

}  // namespace bcfem::fem1d
