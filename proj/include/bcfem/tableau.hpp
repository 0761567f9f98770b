#pragma once

#include <vector>

#include "bcfem/linalg.hpp"

namespace bcfem::tableau {

enum class CollocationFamily { RadauIIA, GaussLegendre, LobattoIIIA };

struct ButcherTableau {
    int s = 0;
    linalg::DenseMatrix A;  // s x s
    std::vector<double> b;  // length s
    std::vector<double> c;  // collocation nodes in [0,1], strictly increasing

    bool stiffly_accurate() const;
    // true iff c1 == 0 (LobattoIIIA), requiring confluent interpolation.
    bool confluent() const { return !c.empty() && c.front() == 0.0; }
};

// Collocation nodes for the given family, 1 <= s <= 5 (LobattoIIIA: s >= 2).
// Stored as high-precision literals; validated against the quadrature-order
// oracle in the test suite.
std::vector<double> collocation_nodes(CollocationFamily family, int s);

// Butcher tableau of the collocation method on nodes c:
// A_ij = int_0^{c_i} l_j, b_j = int_0^1 l_j, by Gauss-Legendre quadrature
// exact for the degree-(s-1) integrands.
ButcherTableau tableau_from_nodes(const std::vector<double>& c);

ButcherTableau make_tableau(CollocationFamily family, int s);

// Rooted-tree order conditions up to order p (p <= 5), tolerance 1e-10.
bool order_conditions_check(const ButcherTableau& t, int p);

// Points/weights of the n-point Gauss-Legendre rule on [0,1]; exact for
// polynomials of degree 2n-1.  Shared by tableau and FEM assembly.
void gauss_legendre_rule(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace bcfem::tableau
