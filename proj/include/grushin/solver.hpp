#pragma once

#include <functional>
#include <vector>

#include "grushin/closed_form.hpp"
#include "grushin/discrete_operator.hpp"

namespace grushin {

/// Converged fields with sup norm below this are flagged as the ever-present
/// zero solution of the power problems.
inline constexpr double kTrivialCollapseThreshold = 1e-8;

/// Right-hand side f(z, u) of -Delta_gamma u + linear_term * u = f(z, u).
/// The power kind is f = h(z) max(u,0)^p + g(z); iterates are clamped at
/// zero before exponentiation so Newton never sees complex values.
struct Nonlinearity {
    enum class Kind { power, general };

    Kind kind = Kind::power;
    double p = 3.0;            // exponent, > 1
    double linear_term = 0.0;  // 0 or 1
    ScalarFunction coefficient;   // h(z); unset means identically 1
    ScalarFunction perturbation;  // g(z); unset means identically 0
    std::function<double(const Point&, double)> general_value;
    std::function<double(const Point&, double)> general_slope;

    double value(const Point& z, double u) const;
    double slope(const Point& z, double u) const;
    void validate() const;

    static Nonlinearity power(double p, double linear_term);
};

struct SolveConfig {
    double newton_tol = 1e-10;  // sup-norm residual target
    int newton_max = 50;
    double cg_tol = 1e-12;  // relative inner tolerance
    int cg_max = 50000;
    bool positivity_projection = false;
};

struct SolveReport {
    Field field;
    std::vector<double> residual_history;
    bool converged = false;
    bool trivial = false;  // converged to the zero solution
    double sup_value = 0.0;
    Point sup_location;
    std::size_t sup_node = 0;
    int newton_iterations = 0;
    long cg_iterations = 0;
};

/// Damped Newton for the discrete Dirichlet problem on the grid's box.
/// Line search halves the step on residual-norm increase down to 1/64.
/// Throws NewtonDiverged (with the residual history) when the iteration
/// stalls or the budget is exhausted.
SolveReport solve_dirichlet(const GridSpec& grid, const Nonlinearity& nl, const Field& init,
                            const SolveConfig& cfg);

/// Sup-norm of -Delta_gamma^h u + linear_term u - f(z, u) over interior
/// nodes; the certificate every converged report satisfies.
double equation_residual(const DiscreteOperator& op, const Nonlinearity& nl, const Field& u);

/// lambda^{2/(p-1)} u(dilate(lambda, .)) as a field on the dilated grid.
/// Nodes of the two grids coincide under the dilation, so the values carry
/// over exactly; a solution of the pure power problem maps to a solution.
Field dilation_rescaled(const Field& u, double lambda, double p);

/// The default ground-state seed: 2 exp(-(|x|^2 + |y|^{2/(1+gamma)})).
Field default_initial_guess(const GridSpec& grid);

/// Sweeps the exponent from p_start to p_end in the given number of steps,
/// warm-starting each solve from the previous field.
std::vector<SolveReport> continuation_in_p(const GridSpec& grid, const Nonlinearity& prototype,
                                           double p_start, double p_end, int steps,
                                           const SolveConfig& cfg);

/// Solves the pure power problem on the dilation-compatible boxes
/// [-R, R]^N x [-R^{1+gamma}, R^{1+gamma}]^l for each radius (increasing),
/// chaining warm starts through the exact discrete dilation covariance.
std::vector<SolveReport> box_size_sweep(const GrushinParams& params,
                                        const std::vector<double>& radii,
                                        const Nonlinearity& nl, int nodes_per_axis,
                                        const SolveConfig& cfg);

struct AprioriEntry {
    int member = 0;
    SolveReport report;
    double max_x_offset = 0.0;          // |x block| at the maximizer
    bool max_on_degeneracy_line = false;
};

/// Independent solves for a family of nonlinearities on a shared grid;
/// members run concurrently (GRUSHIN_LAB_THREADS caps the worker count).
std::vector<AprioriEntry> apriori_sweep(const GridSpec& grid,
                                        const std::vector<Nonlinearity>& family,
                                        const SolveConfig& cfg);

/// Number of workers used for independent solves in sweeps.
int worker_count(std::size_t jobs);

}  // namespace grushin
