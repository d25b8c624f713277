#pragma once

#include <cstdint>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

/// Sparse matrix for -Delta_gamma with homogeneous Dirichlet rows and
/// columns eliminated. Rows are indexed by interior nodes in flat grid
/// order; the structure is symmetric with nonpositive off-diagonals
/// (M-matrix) and positive definite.
struct DiscreteOperator {
    GridSpec grid;
    std::vector<std::int64_t> interior_index;   // per node, -1 on the boundary
    std::vector<std::size_t> node_of_interior;  // interior row -> flat node
    std::vector<std::size_t> row_offsets;       // CSR, interior rows
    std::vector<std::int64_t> cols;             // interior column indices
    std::vector<double> coeffs;
    std::vector<double> diagonal;               // cached per interior row

    std::size_t interior_count() const { return node_of_interior.size(); }
};

/// Central second-order stencil per axis; the y-block stencil at a node is
/// scaled by |x(node)|^{2 gamma} evaluated at the node itself, which keeps
/// the matrix symmetric and the M-matrix sign pattern intact.
DiscreteOperator assemble(const GridSpec& grid);

/// y = A u on interior nodes; boundary nodes of the result are zero.
/// Throws GridMismatch when the field belongs to a different grid.
Field apply(const DiscreteOperator& op, const Field& u);

/// Jacobi-preconditioned conjugate gradients down to a relative residual
/// of tol in the Euclidean norm. Throws MaxIterationsExceeded with the
/// achieved residual attached.
Field solve_linear(const DiscreteOperator& op, const Field& rhs, double tol, int max_iter);

struct ShiftedSolveResult {
    std::vector<double> solution;   // interior unknowns
    double relative_residual = 0.0;
    int iterations = 0;
    bool hit_negative_curvature = false;
};

/// CG on (A + diag(shift)) x = b over interior unknowns. When the system is
/// indefinite the iteration stops at the first negative-curvature direction
/// and returns the current iterate (truncated-Newton style); callers decide
/// whether that is acceptable. shift and b are nodal arrays.
ShiftedSolveResult solve_shifted(const DiscreteOperator& op, const std::vector<double>& shift,
                                 const std::vector<double>& b, double tol, int max_iter);

/// Jacobi-preconditioned MINRES on (A + diag(shift)) x = b. Handles the
/// indefinite Jacobians that Newton meets around mountain-pass states, where
/// plain CG breaks down.
ShiftedSolveResult solve_symmetric(const DiscreteOperator& op, const std::vector<double>& shift,
                                   const std::vector<double>& b, double tol, int max_iter);

/// Trapezoid-rule approximation of (int |grad_gamma u|^2 + u^2)^{1/2} with
/// grad_gamma = (d/dx, |x|^gamma d/dy), one-sided differences at the boundary.
double discrete_h1_gamma_norm(const Field& u);

/// Smallest Ritz value of the assembled operator from a plain Lanczos run;
/// positive values certify positive definiteness at desk scale.
double smallest_ritz_value(const DiscreteOperator& op, int iterations);

}  // namespace grushin
