#include "grushin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace grushin {

double Nonlinearity::value(const Point& z, double u) const {
    if (kind == Kind::general) return general_value(z, u);
    const double h = coefficient.value ? coefficient(z) : 1.0;
    const double g = perturbation.value ? perturbation(z) : 0.0;
    return h * std::pow(std::max(u, 0.0), p) + g;
}

double Nonlinearity::slope(const Point& z, double u) const {
    if (kind == Kind::general) return general_slope(z, u);
    const double h = coefficient.value ? coefficient(z) : 1.0;
    return p * h * std::pow(std::max(u, 0.0), p - 1.0);
}

void Nonlinearity::validate() const {
    if (kind == Kind::power) {
        if (!(p > 1.0)) throw Error("Nonlinearity: power exponent must exceed 1");
    } else if (!general_value || !general_slope) {
        throw Error("Nonlinearity: general kind needs value and slope callables");
    }
    if (linear_term != 0.0 && linear_term != 1.0) {
        throw Error("Nonlinearity: linear_term must be 0 or 1");
    }
}

Nonlinearity Nonlinearity::power(double p, double linear_term) {
    Nonlinearity nl;
    nl.kind = Kind::power;
    nl.p = p;
    nl.linear_term = linear_term;
    return nl;
}

namespace {

// Per-interior-node samples of the nonlinearity, so the Newton loop never
// re-evaluates the coefficient functions.
struct NodalNonlinearity {
    const Nonlinearity* nl = nullptr;
    std::vector<double> h_vals;
    std::vector<double> g_vals;
    std::vector<Point> points;  // kept only for the general kind

    double f(std::size_t i, double u) const {
        if (nl->kind == Nonlinearity::Kind::general) return nl->general_value(points[i], u);
        return h_vals[i] * std::pow(std::max(u, 0.0), nl->p) + g_vals[i];
    }
    double dfdu(std::size_t i, double u) const {
        if (nl->kind == Nonlinearity::Kind::general) return nl->general_slope(points[i], u);
        return nl->p * h_vals[i] * std::pow(std::max(u, 0.0), nl->p - 1.0);
    }
};

NodalNonlinearity sample_nonlinearity(const DiscreteOperator& op, const Nonlinearity& nl) {
    NodalNonlinearity out;
    out.nl = &nl;
    const std::size_t n = op.interior_count();
    std::vector<int> idx;
    if (nl.kind == Nonlinearity::Kind::general) {
        out.points.reserve(n);
        for (std::size_t r = 0; r < n; ++r) {
            op.grid.unflatten(op.node_of_interior[r], idx);
            out.points.push_back(op.grid.point_at(idx));
        }
        return out;
    }
    out.h_vals.resize(n);
    out.g_vals.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        op.grid.unflatten(op.node_of_interior[r], idx);
        const Point z = op.grid.point_at(idx);
        out.h_vals[r] = nl.coefficient.value ? nl.coefficient(z) : 1.0;
        out.g_vals[r] = nl.perturbation.value ? nl.perturbation(z) : 0.0;
        if (!(out.h_vals[r] > 0.0)) {
            throw NonpositiveCoefficient("Nonlinearity: coefficient h must be strictly positive");
        }
    }
    return out;
}

// F(u) = A u + linear_term u - f(u) over interior unknowns; returns sup norm.
double residual_vector(const DiscreteOperator& op, const NodalNonlinearity& nodal,
                       const std::vector<double>& u, std::vector<double>& out) {
    const std::size_t n = u.size();
    out.resize(n);
    for (std::size_t row = 0; row < n; ++row) {
        double acc = 0.0;
        for (std::size_t k = op.row_offsets[row]; k < op.row_offsets[row + 1]; ++k) {
            acc += op.coeffs[k] * u[static_cast<std::size_t>(op.cols[k])];
        }
        out[row] = acc + nodal.nl->linear_term * u[row] - nodal.f(row, u[row]);
    }
    double sup = 0.0;
    for (double v : out) sup = std::max(sup, std::abs(v));
    return sup;
}

void fill_report_extrema(SolveReport& report) {
    const Field& u = report.field;
    std::size_t best = 0;
    double best_val = u.values[0];
    for (std::size_t i = 1; i < u.values.size(); ++i) {
        if (u.values[i] > best_val) {
            best_val = u.values[i];
            best = i;
        }
    }
    report.sup_value = best_val;
    report.sup_node = best;
    std::vector<int> idx;
    u.grid.unflatten(best, idx);
    report.sup_location = u.grid.point_at(idx);
    report.trivial = report.converged && u.max_abs() < kTrivialCollapseThreshold;
}

}  // namespace

namespace {

// Fixed-point warm-up for the homogeneous power problems (no perturbation):
//   u <- M^{p/(p-1)} (A + linear_term)^{-1} (h u_+^p),
//   M = <(A + linear_term) u, u> / <h u_+^p, u>.
// Newton's basin around these ground states is narrow (the linearization has
// a negative direction along the state itself); the renormalized iteration
// walks into it from generic positive seeds and is a no-op on converged
// warm starts.
long renormalized_warmup(const DiscreteOperator& op, const NodalNonlinearity& nodal,
                         const SolveConfig& cfg, std::vector<double>& u, long* cg_iterations) {
    const std::size_t n = u.size();
    const double lt = nodal.nl->linear_term;
    const double exponent = nodal.nl->p / (nodal.nl->p - 1.0);
    const std::vector<double> shift(n, lt);
    std::vector<double> au(n), rhs(n), next(n);

    long steps = 0;
    for (; steps < 30; ++steps) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = op.row_offsets[i]; k < op.row_offsets[i + 1]; ++k) {
                acc += op.coeffs[k] * u[static_cast<std::size_t>(op.cols[k])];
            }
            au[i] = acc + lt * u[i];
        }
        double numer = 0.0, denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] = nodal.h_vals[i] * std::pow(std::max(u[i], 0.0), nodal.nl->p);
            numer += au[i] * u[i];
            denom += rhs[i] * u[i];
        }
        if (!(denom > 0.0) || !(numer > 0.0)) break;
        const double m = std::pow(numer / denom, exponent);

        const ShiftedSolveResult inner = solve_shifted(op, shift, rhs, cfg.cg_tol, cfg.cg_max);
        *cg_iterations += inner.iterations;
        double change = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = m * inner.solution[i];
            change = std::max(change, std::abs(next[i] - u[i]));
            scale = std::max(scale, std::abs(next[i]));
        }
        u.swap(next);
        if (change <= 1e-4 * std::max(scale, 1e-30)) break;
    }
    return steps;
}

}  // namespace

SolveReport solve_dirichlet(const GridSpec& grid, const Nonlinearity& nl, const Field& init,
                            const SolveConfig& cfg) {
    nl.validate();
    if (init.grid != grid) throw GridMismatch("solve_dirichlet: init bound to a different grid");
    if (!(cfg.newton_tol > 0.0) || !(cfg.cg_tol > 0.0)) {
        throw Error("SolveConfig: tolerances must be positive");
    }

    const DiscreteOperator op = assemble(grid);
    const NodalNonlinearity nodal = sample_nonlinearity(op, nl);
    const std::size_t n = op.interior_count();

    std::vector<double> u(n);
    for (std::size_t r = 0; r < n; ++r) u[r] = init.values[op.node_of_interior[r]];
    if (cfg.positivity_projection) {
        for (double& v : u) v = std::max(v, 0.0);
    }

    long warmup_cg = 0;
    if (nl.kind == Nonlinearity::Kind::power && !nl.perturbation.value) {
        renormalized_warmup(op, nodal, cfg, u, &warmup_cg);
    }

    SolveReport report;
    report.cg_iterations = warmup_cg;
    std::vector<double> f_vec, trial, f_trial, shift(n), rhs(n);
    double res = residual_vector(op, nodal, u, f_vec);
    report.residual_history.push_back(res);

    int stalls = 0;
    bool converged = res <= cfg.newton_tol;
    while (!converged && report.newton_iterations < cfg.newton_max) {
        for (std::size_t i = 0; i < n; ++i) {
            shift[i] = nl.linear_term - nodal.dfdu(i, u[i]);
            rhs[i] = -f_vec[i];
        }
        const ShiftedSolveResult inner = solve_symmetric(op, shift, rhs, cfg.cg_tol, cfg.cg_max);
        report.cg_iterations += inner.iterations;

        // Halving line search on the residual sup norm, floor 1/64.
        double step = 1.0;
        double trial_res = res;
        bool accepted = false;
        for (int k = 0; k < 7; ++k, step *= 0.5) {
            trial = u;
            for (std::size_t i = 0; i < n; ++i) trial[i] += step * inner.solution[i];
            if (cfg.positivity_projection) {
                for (double& v : trial) v = std::max(v, 0.0);
            }
            trial_res = residual_vector(op, nodal, trial, f_trial);
            if (trial_res < res) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Keep the floor step; repeated stalls mean divergence.
            if (++stalls >= 5) {
                throw NewtonDiverged("solve_dirichlet: line search stalled",
                                     report.residual_history);
            }
        } else {
            stalls = 0;
        }
        u.swap(trial);
        f_vec.swap(f_trial);
        res = trial_res;
        report.residual_history.push_back(res);
        ++report.newton_iterations;
        converged = res <= cfg.newton_tol;
    }
    if (!converged) {
        throw NewtonDiverged("solve_dirichlet: iteration budget exhausted at residual " +
                                 std::to_string(res),
                             report.residual_history);
    }

    report.converged = true;
    report.field = Field(grid);
    for (std::size_t r = 0; r < n; ++r) report.field.values[op.node_of_interior[r]] = u[r];
    fill_report_extrema(report);
    return report;
}

double equation_residual(const DiscreteOperator& op, const Nonlinearity& nl, const Field& u) {
    if (u.grid != op.grid) throw GridMismatch("equation_residual: grid mismatch");
    const NodalNonlinearity nodal = sample_nonlinearity(op, nl);
    const std::size_t n = op.interior_count();
    std::vector<double> u_int(n), f_vec;
    for (std::size_t r = 0; r < n; ++r) u_int[r] = u.values[op.node_of_interior[r]];
    return residual_vector(op, nodal, u_int, f_vec);
}

Field default_initial_guess(const GridSpec& grid) {
    const double exponent = 2.0 / (1.0 + grid.params.gamma);
    Field out = sample_field(grid, [exponent](const Point& z) {
        const double xn = x_block_norm(z);
        const double yn = y_block_norm(z);
        return 2.0 * std::exp(-(xn * xn + std::pow(yn, exponent)));
    });
    out.zero_boundary();
    return out;
}

std::vector<SolveReport> continuation_in_p(const GridSpec& grid, const Nonlinearity& prototype,
                                           double p_start, double p_end, int steps,
                                           const SolveConfig& cfg) {
    if (steps < 1) throw Error("continuation_in_p: need at least one step");
    std::vector<SolveReport> reports;
    reports.reserve(static_cast<std::size_t>(steps));
    Field init = default_initial_guess(grid);
    for (int k = 0; k < steps; ++k) {
        Nonlinearity nl = prototype;
        nl.p = steps == 1 ? p_start
                          : p_start + (p_end - p_start) * k / static_cast<double>(steps - 1);
        try {
            reports.push_back(solve_dirichlet(grid, nl, init, cfg));
        } catch (NewtonDiverged& err) {
            throw NewtonDiverged("continuation_in_p: diverged at p = " + std::to_string(nl.p),
                                 err.residual_history);
        }
        init = reports.back().field;
    }
    return reports;
}

Field dilation_rescaled(const Field& u, double lambda, double p) {
    if (!(lambda > 0.0)) throw Error("dilation_rescaled: lambda must be positive");
    const GrushinParams& params = u.grid.params;
    const double inv = 1.0 / lambda;
    const double inv_y = std::pow(inv, 1.0 + params.gamma);
    std::vector<double> lo = u.grid.lo, hi = u.grid.hi;
    for (int a = 0; a < u.grid.axes(); ++a) {
        const double s = a < params.x_dim ? inv : inv_y;
        lo[a] *= s;
        hi[a] *= s;
    }
    GridSpec target(params, u.grid.dims, std::move(lo), std::move(hi));
    const double amp = std::pow(lambda, 2.0 / (p - 1.0));
    Field out(std::move(target));
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = amp * u.values[i];
    return out;
}

namespace {

// One-mode Galerkin seed for the pure power problem: a tensor cosine profile
// with amplitude balancing the Rayleigh quotient against the power term.
Field power_problem_seed(const GridSpec& grid, const Nonlinearity& nl, double amp_factor) {
    std::vector<double> center(static_cast<std::size_t>(grid.axes())),
        half(static_cast<std::size_t>(grid.axes()));
    for (int a = 0; a < grid.axes(); ++a) {
        center[a] = 0.5 * (grid.lo[a] + grid.hi[a]);
        half[a] = 0.5 * (grid.hi[a] - grid.lo[a]);
    }
    Field profile = sample_field(grid, [&](const Point& z) {
        double v = 1.0;
        std::size_t a = 0;
        for (double c : z.x) {
            v *= std::cos(0.5 * M_PI * (c - center[a]) / half[a]);
            ++a;
        }
        for (double c : z.y) {
            v *= std::cos(0.5 * M_PI * (c - center[a]) / half[a]);
            ++a;
        }
        return v;
    });
    profile.zero_boundary();

    const DiscreteOperator op = assemble(grid);
    const Field a_phi = apply(op, profile);
    double num = 0.0, den = 0.0, phi2 = 0.0, phi_pp = 0.0;
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        const double v = profile.values[i];
        num += a_phi.values[i] * v;
        den += v * v;
        phi2 += v * v;
        phi_pp += std::pow(std::abs(v), nl.p + 1.0);
    }
    const double rayleigh = num / den;
    const double amp =
        std::pow((rayleigh + nl.linear_term) * phi2 / phi_pp, 1.0 / (nl.p - 1.0));
    for (double& v : profile.values) v *= amp * amp_factor;
    return profile;
}

}  // namespace

std::vector<SolveReport> box_size_sweep(const GrushinParams& params,
                                        const std::vector<double>& radii,
                                        const Nonlinearity& nl, int nodes_per_axis,
                                        const SolveConfig& cfg) {
    for (std::size_t k = 1; k < radii.size(); ++k) {
        if (!(radii[k] > radii[k - 1])) throw Error("box_size_sweep: radii must increase");
    }
    std::vector<SolveReport> reports;
    reports.reserve(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const GridSpec grid = GridSpec::dilation_box(params, nodes_per_axis, radii[k]);
        SolveReport report;
        if (k == 0) {
            bool solved = false;
            std::vector<double> last_history;
            for (double factor : {1.0, 2.0, 0.5, 4.0}) {
                try {
                    report = solve_dirichlet(grid, nl, power_problem_seed(grid, nl, factor), cfg);
                } catch (const NewtonDiverged& err) {
                    last_history = err.residual_history;
                    continue;
                }
                if (!report.trivial) {
                    solved = true;
                    break;
                }
                last_history = report.residual_history;
            }
            if (!solved) {
                throw NewtonDiverged("box_size_sweep: no nontrivial solution reached at R = " +
                                         std::to_string(radii[k]),
                                     last_history);
            }
        } else {
            // Exact discrete dilation covariance makes the previous solution,
            // rescaled, a near-perfect warm start on the enlarged box.
            const Field init =
                dilation_rescaled(reports.back().field, radii[k - 1] / radii[k], nl.p);
            report = solve_dirichlet(grid, nl, init, cfg);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

int worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    long cap = static_cast<long>(hw);
    if (const char* env = std::getenv("GRUSHIN_LAB_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && parsed >= 1) cap = parsed;
    }
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cap), jobs));
}

std::vector<AprioriEntry> apriori_sweep(const GridSpec& grid,
                                        const std::vector<Nonlinearity>& family,
                                        const SolveConfig& cfg) {
    const CriticalExponents exponents = critical_exponents(grid.params);
    for (const Nonlinearity& nl : family) {
        if (nl.kind == Nonlinearity::Kind::power &&
            (nl.p < exponents.halfspace_lower || nl.p > exponents.serrin_upper)) {
            throw Error("apriori_sweep: member exponent outside the subcritical window");
        }
    }

    const std::size_t members = family.size();
    std::vector<AprioriEntry> entries(members);
    std::vector<std::exception_ptr> failures(members);

    const int workers = worker_count(members);
    auto run_member = [&](std::size_t m) {
        try {
            AprioriEntry entry;
            entry.member = static_cast<int>(m);
            entry.report = solve_dirichlet(grid, family[m], Field(grid), cfg);
            entry.max_x_offset = x_block_norm(entry.report.sup_location);
            double max_hx = 0.0;
            for (int a = 0; a < grid.params.x_dim; ++a) max_hx = std::max(max_hx, grid.spacing[a]);
            entry.max_on_degeneracy_line = entry.max_x_offset <= 0.5 * max_hx;
            entries[m] = std::move(entry);
        } catch (...) {
            failures[m] = std::current_exception();
        }
    };

    if (workers <= 1) {
        for (std::size_t m = 0; m < members; ++m) run_member(m);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t m = static_cast<std::size_t>(w); m < members;
                     m += static_cast<std::size_t>(workers)) {
                    run_member(m);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }
    for (std::size_t m = 0; m < members; ++m) {
        if (failures[m]) std::rethrow_exception(failures[m]);
    }
    return entries;
}

}  // namespace grushin
