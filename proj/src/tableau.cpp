#include "bcfem/tableau.hpp"

#include <cmath>
#include <string>

#include "bcfem/errors.hpp"
#include "bcfem/polybasis.hpp"

namespace bcfem::tableau {

namespace {

// Collocation node literals for s <= 5.  RadauIIA: roots of the right Radau
// polynomials; Gauss-Legendre: shifted Legendre roots; LobattoIIIA: Lobatto
// points.
const std::vector<double>& radau_nodes(int s) {
    static const std::vector<double> n1{1.0};
    static const std::vector<double> n2{1.0 / 3.0, 1.0};
    static const std::vector<double> n3{0.15505102572168219018, 0.64494897427831780982, 1.0};
    static const std::vector<double> n4{0.08858795951270394739, 0.40946686444073471087,
                                        0.78765946176084705603, 1.0};
    static const std::vector<double> n5{0.05710419611451768220, 0.27684301363812382768,
                                        0.58359043236891682006, 0.86024013565621944907, 1.0};
    static const std::vector<double>* tab[] = {&n1, &n2, &n3, &n4, &n5};
    return *tab[s - 1];
}

const std::vector<double>& gauss_nodes(int s) {
    static const std::vector<double> n1{0.5};
    static const std::vector<double> n2{0.21132486540518711775, 0.78867513459481288225};
    static const std::vector<double> n3{0.11270166537925831148, 0.5, 0.88729833462074168852};
    static const std::vector<double> n4{0.06943184420297371239, 0.33000947820757186760,
                                        0.66999052179242813240, 0.93056815579702628761};
    static const std::vector<double> n5{0.04691007703066800360, 0.23076534494715845448, 0.5,
                                        0.76923465505284154552, 0.95308992296933199640};
    static const std::vector<double>* tab[] = {&n1, &n2, &n3, &n4, &n5};
    return *tab[s - 1];
}

const std::vector<double>& lobatto_nodes(int s) {
    static const std::vector<double> n2{0.0, 1.0};
    static const std::vector<double> n3{0.0, 0.5, 1.0};
    static const std::vector<double> n4{0.0, 0.27639320225002103036, 0.72360679774997896964, 1.0};
    static const std::vector<double> n5{0.0, 0.17267316464601142810, 0.5, 0.82732683535398857190,
                                        1.0};
    static const std::vector<double>* tab[] = {&n2, &n3, &n4, &n5};
    return *tab[s - 2];
}

}  // namespace

bool ButcherTableau::stiffly_accurate() const {
    if (s == 0 || c.back() != 1.0) return false;
    for (int j = 0; j < s; ++j)
        if (std::abs(A(s - 1, j) - b[j]) > 1e-12) return false;
    return true;
}

std::vector<double> collocation_nodes(CollocationFamily family, int s) {
    if (s < 1 || s > 5)
        throw ConfigError("collocation_nodes: stage count " + std::to_string(s) +
                          " outside supported range [1,5]");
    switch (family) {
        case CollocationFamily::RadauIIA: return radau_nodes(s);
        case CollocationFamily::GaussLegendre: return gauss_nodes(s);
        case CollocationFamily::LobattoIIIA:
            if (s < 2) throw ConfigError("collocation_nodes: LobattoIIIA requires s >= 2");
            return lobatto_nodes(s);
    }
    throw ConfigError("collocation_nodes: unknown family");
}

void gauss_legendre_rule(int n, std::vector<double>& points, std::vector<double>& weights) {
    // Newton iteration on the Legendre recurrence (nodes on [-1,1], then
    // mapped to [0,1]).  Deterministic to the bit for fixed n.
    points.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        points[i] = 0.5 * (1.0 - x);
        points[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

ButcherTableau tableau_from_nodes(const std::vector<double>& c) {
    const int s = static_cast<int>(c.size());
    if (s == 0) throw ConfigError("tableau_from_nodes: empty node vector");
    for (int i = 0; i + 1 < s; ++i)
        if (!(c[i] < c[i + 1]))
            throw DegenerateInterpolationError("tableau_from_nodes: nodes must be strictly increasing");
    if (c.front() < 0.0 || c.back() > 1.0)
        throw ConfigError("tableau_from_nodes: nodes must lie in [0,1]");

    ButcherTableau t;
    t.s = s;
    t.c = c;
    t.A = linalg::DenseMatrix(s, s);
    t.b.assign(s, 0.0);

    std::vector<double> q, w;
    gauss_legendre_rule((2 * s + 1) / 2 + 1, q, w);

    // ell_j evaluated through the nodal Lagrange basis; integrate over
    // [0, c_i] for A and [0, 1] for b.
    std::vector<double> unit(s);
    for (int j = 0; j < s; ++j) {
        std::fill(unit.begin(), unit.end(), 0.0);
        unit[j] = 1.0;
        for (int i = 0; i < s; ++i) {
            double aij = 0.0;
            for (std::size_t p = 0; p < q.size(); ++p)
                aij += c[i] * w[p] * polybasis::lagrange_eval(c, unit, c[i] * q[p]);
            t.A(i, j) = aij;
        }
        double bj = 0.0;
        for (std::size_t p = 0; p < q.size(); ++p)
            bj += w[p] * polybasis::lagrange_eval(c, unit, q[p]);
        t.b[j] = bj;
    }
    return t;
}

ButcherTableau make_tableau(CollocationFamily family, int s) {
    return tableau_from_nodes(collocation_nodes(family, s));
}

bool order_conditions_check(const ButcherTableau& t, int p) {
    if (p > 5) throw ConfigError("order_conditions_check: p <= 5 supported");
    const int s = t.s;
    const auto& b = t.b;
    const auto& c = t.c;
    auto apply_A = [&](const std::vector<double>& v) {
        std::vector<double> out(s, 0.0);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) out[i] += t.A(i, j) * v[j];
        return out;
    };
    auto dotb = [&](const std::vector<double>& v) {
        double sum = 0.0;
        for (int i = 0; i < s; ++i) sum += b[i] * v[i];
        return sum;
    };
    auto pw = [&](const std::vector<double>& u, const std::vector<double>& v) {
        std::vector<double> out(s);
        for (int i = 0; i < s; ++i) out[i] = u[i] * v[i];
        return out;
    };
    const std::vector<double> ones(s, 1.0);
    const auto c2 = pw(c, c), c3 = pw(c2, c), c4 = pw(c3, c);
    const auto Ac = apply_A(c), AAc = apply_A(Ac);

    struct Cond { int order; double value; double target; };
    const std::vector<Cond> conds = {
        {1, dotb(ones), 1.0},
        {2, dotb(c), 1.0 / 2},
        {3, dotb(c2), 1.0 / 3},
        {3, dotb(Ac), 1.0 / 6},
        {4, dotb(c3), 1.0 / 4},
        {4, dotb(pw(c, Ac)), 1.0 / 8},
        {4, dotb(apply_A(c2)), 1.0 / 12},
        {4, dotb(AAc), 1.0 / 24},
        {5, dotb(c4), 1.0 / 5},
        {5, dotb(pw(c2, Ac)), 1.0 / 10},
        {5, dotb(pw(c, apply_A(c2))), 1.0 / 15},
        {5, dotb(pw(c, AAc)), 1.0 / 30},
        {5, dotb(pw(Ac, Ac)), 1.0 / 20},
        {5, dotb(apply_A(c3)), 1.0 / 20},
        {5, dotb(apply_A(pw(c, Ac))), 1.0 / 40},
        {5, dotb(apply_A(apply_A(c2))), 1.0 / 60},
        {5, dotb(apply_A(AAc)), 1.0 / 120},
    };
    for (const auto& cond : conds)
        if (cond.order <= p && std::abs(cond.value - cond.target) > 1e-10) return false;
    return true;
}

}  // namespace bcfem::tableau
