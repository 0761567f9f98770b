#include "bcfem/polybasis.hpp"

#include <cmath>
#include <string>

#include "bcfem/errors.hpp"

namespace bcfem::polybasis {

double bernstein_eval(int n, std::span<const double> coeffs, double x) {
    if (static_cast<int>(coeffs.size()) != n + 1)
        throw DomainError("bernstein_eval: coefficient count must be n+1");
    if (x < 0.0 || x > 1.0) throw DomainError("bernstein_eval: x outside [0,1]");
    std::vector<double> beta(coeffs.begin(), coeffs.end());
    for (int level = 1; level <= n; ++level)
        for (int i = 0; i <= n - level; ++i)
            beta[i] = (1.0 - x) * beta[i] + x * beta[i + 1];
    return beta[0];
}

double bernstein_basis(int n, int i, double x) {
    if (i < 0 || i > n) throw DomainError("bernstein_basis: index out of range");
    std::vector<double> e(n + 1, 0.0);
    e[i] = 1.0;
    return bernstein_eval(n, e, x);
}

double bernstein_deriv(int n, std::span<const double> coeffs, double x) {
    if (static_cast<int>(coeffs.size()) != n + 1)
        throw DomainError("bernstein_deriv: coefficient count must be n+1");
    if (n == 0) return 0.0;
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = n * (coeffs[i + 1] - coeffs[i]);
    return bernstein_eval(n - 1, diff, x);
}

double lagrange_eval(std::span<const double> nodes, std::span<const double> coeffs, double x) {
    const std::size_t m = nodes.size();
    if (coeffs.size() != m)
        throw DomainError("lagrange_eval: coefficient count must equal node count");
    // Barycentric weights.
    std::vector<double> w(m, 1.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = nodes[i] - nodes[j];
            if (d == 0.0)
                throw DegenerateInterpolationError("lagrange_eval: duplicate nodes");
            w[i] /= d;
        }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = x - nodes[i];
        if (d == 0.0) return coeffs[i];
        const double t = w[i] / d;
        num += t * coeffs[i];
        den += t;
    }
    return num / den;
}

double lagrange_deriv(std::span<const double> nodes, std::span<const double> coeffs, double x) {
    const std::size_t m = nodes.size();
    if (coeffs.size() != m)
        throw DomainError("lagrange_deriv: coefficient count must equal node count");
    double out = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        // l_i'(x) = sum_{j != i} 1/(x_i - x_j) * prod_{k != i,j} (x - x_k)/(x_i - x_k)
        double di = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double dij = nodes[i] - nodes[j];
            if (dij == 0.0) throw DegenerateInterpolationError("lagrange_deriv: duplicate nodes");
            double term = 1.0 / dij;
            for (std::size_t k = 0; k < m; ++k) {
                if (k == i || k == j) continue;
                term *= (x - nodes[k]) / (nodes[i] - nodes[k]);
            }
            di += term;
        }
        out += coeffs[i] * di;
    }
    return out;
}

namespace {

// Bernstein-Vandermonde matrix on the given nodes.
linalg::DenseMatrix bernstein_vandermonde(std::span<const double> nodes) {
    const int n = static_cast<int>(nodes.size()) - 1;
    linalg::DenseMatrix bv(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) bv(i, j) = bernstein_basis(n, j, nodes[i]);
    return bv;
}

}  // namespace

std::vector<double> lagrange_to_bernstein(std::span<const double> nodes,
                                          std::span<const double> nodal_values) {
    if (nodes.size() != nodal_values.size())
        throw DomainError("lagrange_to_bernstein: size mismatch");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw DegenerateInterpolationError("lagrange_to_bernstein: nodes must be increasing");
    const auto bv = bernstein_vandermonde(nodes);
    const auto f = linalg::lu_factor(bv);
    return linalg::lu_solve(f, nodal_values);
}

std::vector<double> bernstein_to_lagrange(std::span<const double> nodes,
                                          std::span<const double> bernstein_coeffs) {
    if (nodes.size() != bernstein_coeffs.size())
        throw DomainError("bernstein_to_lagrange: size mismatch");
    const int n = static_cast<int>(nodes.size()) - 1;
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out[i] = bernstein_eval(n, bernstein_coeffs, nodes[i]);
    return out;
}

std::pair<double, double> control_net_bounds(std::span<const double> coeffs) {
    if (coeffs.empty()) throw DomainError("control_net_bounds: empty coefficient vector");
    double lo = coeffs[0], hi = coeffs[0];
    for (double c : coeffs) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return {lo, hi};
}

CollocationTransform collocation_transform(std::span<const double> c, bool confluent) {
    const int s = static_cast<int>(c.size());
    if (s == 0) throw ConfigError("collocation_transform: empty node vector");
    for (int i = 0; i + 1 < s; ++i)
        if (!(c[i] < c[i + 1]))
            throw DegenerateInterpolationError("collocation_transform: nodes must be increasing");
    if (confluent && c[0] != 0.0)
        throw ConfigError("collocation_transform: confluent form requires c_1 = 0");
    if (!confluent && c[0] == 0.0)
        throw ConfigError("collocation_transform: c_1 = 0 requires the confluent form");

    CollocationTransform t;
    t.confluent = confluent;
    t.vbar = linalg::DenseMatrix(s + 1, s + 1);
    if (!confluent) {
        // Rows: degree-s Bernstein basis at nodes (0, c_1, ..., c_s).
        std::vector<double> aug(s + 1);
        aug[0] = 0.0;
        for (int i = 0; i < s; ++i) aug[i + 1] = c[i];
        for (int i = 0; i <= s; ++i)
            for (int j = 0; j <= s; ++j) t.vbar(i, j) = bernstein_basis(s, j, aug[i]);
    } else {
        // Rows: basis at 0, derivative row b_i'(0)/s = (0,1,0,...), basis at
        // c_2..c_s.
        for (int j = 0; j <= s; ++j) {
            t.vbar(0, j) = (j == 0) ? 1.0 : 0.0;
            t.vbar(1, j) = (j == 1) ? 1.0 : 0.0;
        }
        for (int i = 2; i <= s; ++i)
            for (int j = 0; j <= s; ++j) t.vbar(i, j) = bernstein_basis(s, j, c[i - 1]);
    }
    t.v.resize(s);
    t.V = linalg::DenseMatrix(s, s);
    for (int i = 0; i < s; ++i) {
        t.v[i] = t.vbar(i + 1, 0);
        for (int j = 0; j < s; ++j) t.V(i, j) = t.vbar(i + 1, j + 1);
    }
    return t;
}

}  // namespace bcfem::polybasis
