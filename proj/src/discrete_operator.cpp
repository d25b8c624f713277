#include "grushin/discrete_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace grushin {

namespace {

void matvec(const DiscreteOperator& op, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = op.interior_count();
    for (std::size_t row = 0; row < n; ++row) {
        double acc = 0.0;
        for (std::size_t k = op.row_offsets[row]; k < op.row_offsets[row + 1]; ++k) {
            acc += op.coeffs[k] * x[static_cast<std::size_t>(op.cols[k])];
        }
        y[row] = acc;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

DiscreteOperator assemble(const GridSpec& grid) {
    DiscreteOperator op;
    op.grid = grid;
    const std::size_t n_nodes = grid.node_count();
    const int n_axes = grid.axes();

    op.interior_index.assign(n_nodes, -1);
    std::vector<int> idx;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        grid.unflatten(i, idx);
        if (!grid.is_boundary(idx)) {
            op.interior_index[i] = static_cast<std::int64_t>(op.node_of_interior.size());
            op.node_of_interior.push_back(i);
        }
    }

    const std::size_t n_int = op.node_of_interior.size();
    op.row_offsets.assign(n_int + 1, 0);
    op.diagonal.assign(n_int, 0.0);
    op.cols.reserve(n_int * static_cast<std::size_t>(2 * n_axes + 1));
    op.coeffs.reserve(n_int * static_cast<std::size_t>(2 * n_axes + 1));

    std::vector<std::pair<std::int64_t, double>> row;
    for (std::size_t r = 0; r < n_int; ++r) {
        grid.unflatten(op.node_of_interior[r], idx);
        const double weight = std::pow(grid.x_norm_at(idx), 2.0 * grid.params.gamma);

        row.clear();
        double diag = 0.0;
        for (int a = 0; a < n_axes; ++a) {
            const double inv_h2 = 1.0 / (grid.spacing[a] * grid.spacing[a]);
            const double c = a < grid.params.x_dim ? inv_h2 : weight * inv_h2;
            diag += 2.0 * c;
            if (c == 0.0) continue;  // degeneracy line: no y coupling
            for (int step : {-1, 1}) {
                idx[a] += step;
                const std::int64_t neighbor =
                    op.interior_index[grid.flat_index(idx)];
                idx[a] -= step;
                if (neighbor >= 0) row.emplace_back(neighbor, -c);
            }
        }
        row.emplace_back(static_cast<std::int64_t>(r), diag);
        std::sort(row.begin(), row.end());

        op.diagonal[r] = diag;
        for (const auto& [col, val] : row) {
            op.cols.push_back(col);
            op.coeffs.push_back(val);
        }
        op.row_offsets[r + 1] = op.cols.size();
    }
    return op;
}

Field apply(const DiscreteOperator& op, const Field& u) {
    if (u.grid != op.grid) throw GridMismatch("apply: field bound to a different grid");
    const std::size_t n_int = op.interior_count();
    std::vector<double> x(n_int), y(n_int);
    for (std::size_t r = 0; r < n_int; ++r) x[r] = u.values[op.node_of_interior[r]];
    matvec(op, x, y);
    Field out(op.grid);
    for (std::size_t r = 0; r < n_int; ++r) out.values[op.node_of_interior[r]] = y[r];
    return out;
}

ShiftedSolveResult solve_shifted(const DiscreteOperator& op, const std::vector<double>& shift,
                                 const std::vector<double>& b, double tol, int max_iter) {
    const std::size_t n = op.interior_count();
    ShiftedSolveResult out;
    out.solution.assign(n, 0.0);

    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) return out;

    // Jacobi preconditioner; falls back to the unshifted diagonal where the
    // shift would make it nonpositive.
    std::vector<double> precond(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = op.diagonal[i] + shift[i];
        precond[i] = d > 0.0 ? 1.0 / d : 1.0 / op.diagonal[i];
    }

    std::vector<double>& x = out.solution;
    std::vector<double> r = b;
    std::vector<double> z(n), p(n), ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = precond[i] * r[i];
    p = z;
    double rz = dot(r, z);

    double r_norm = b_norm;
    int it = 0;
    for (; it < max_iter && r_norm > tol * b_norm; ++it) {
        matvec(op, p, ap);
        for (std::size_t i = 0; i < n; ++i) ap[i] += shift[i] * p[i];
        const double p_ap = dot(p, ap);
        if (p_ap <= 0.0) {
            out.hit_negative_curvature = true;
            if (it == 0) x = z;  // fall back to the preconditioned gradient
            break;
        }
        const double alpha = rz / p_ap;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        for (std::size_t i = 0; i < n; ++i) z[i] = precond[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        r_norm = std::sqrt(dot(r, r));
    }
    out.iterations = it;

    // True residual, not the recurrence value.
    matvec(op, x, ap);
    for (std::size_t i = 0; i < n; ++i) ap[i] += shift[i] * x[i] - b[i];
    out.relative_residual = std::sqrt(dot(ap, ap)) / b_norm;
    return out;
}

ShiftedSolveResult solve_symmetric(const DiscreteOperator& op, const std::vector<double>& shift,
                                   const std::vector<double>& b, double tol, int max_iter) {
    const std::size_t n = op.interior_count();
    ShiftedSolveResult out;
    out.solution.assign(n, 0.0);

    std::vector<double> precond(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(op.diagonal[i] + shift[i]);
        precond[i] = 1.0 / std::max(d, 1e-12 * op.diagonal[i]);
    }
    auto shifted_matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        matvec(op, x, y);
        for (std::size_t i = 0; i < n; ++i) y[i] += shift[i] * x[i];
    };

    // Paige-Saunders MINRES with a symmetric positive preconditioner.
    std::vector<double>& x = out.solution;
    std::vector<double> r1 = b, r2 = b, y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = precond[i] * r1[i];
    const double beta1_sq = dot(r1, y);
    if (beta1_sq <= 0.0) return out;
    const double beta1 = std::sqrt(beta1_sq);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    int it = 0;
    for (; it < max_iter && phibar > tol * beta1; ++it) {
        for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / beta;
        shifted_matvec(v, y);
        if (it >= 1) {
            const double c = beta / oldb;
            for (std::size_t i = 0; i < n; ++i) y[i] -= c * r1[i];
        }
        const double alfa = dot(v, y);
        {
            const double c = alfa / beta;
            for (std::size_t i = 0; i < n; ++i) y[i] -= c * r2[i];
        }
        r1 = r2;
        r2 = y;
        for (std::size_t i = 0; i < n; ++i) y[i] = precond[i] * r2[i];
        oldb = beta;
        const double beta_sq = dot(r2, y);
        beta = beta_sq > 0.0 ? std::sqrt(beta_sq) : 0.0;

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::sqrt(gbar * gbar + beta * beta), 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        w1 = w2;
        w2 = w;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
            x[i] += phi * w[i];
        }
        if (beta == 0.0) break;
    }
    out.iterations = it;

    shifted_matvec(x, y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - b[i];
        num += r * r;
        den += b[i] * b[i];
    }
    out.relative_residual = std::sqrt(num / den);
    return out;
}

Field solve_linear(const DiscreteOperator& op, const Field& rhs, double tol, int max_iter) {
    if (rhs.grid != op.grid) throw GridMismatch("solve_linear: rhs bound to a different grid");
    const std::size_t n = op.interior_count();
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) b[r] = rhs.values[op.node_of_interior[r]];
    const double b_norm = std::sqrt(dot(b, b));

    Field out(op.grid);
    if (b_norm == 0.0) return out;

    // CG on the residual equation, restarted until the recomputed (true)
    // relative residual meets the contract; the recurrence alone can sit a
    // hair above tol after many iterations.
    const std::vector<double> shift(n, 0.0);
    std::vector<double> x(n, 0.0), r = b, ax(n);
    int used = 0;
    double rel = 1.0;
    int iterations_last = 0;
    for (int attempt = 0; attempt < 3 && used < max_iter; ++attempt) {
        const ShiftedSolveResult res =
            solve_shifted(op, shift, r, 0.3 * tol * b_norm / std::sqrt(dot(r, r)),
                          max_iter - used);
        used += res.iterations;
        iterations_last = res.iterations;
        for (std::size_t i = 0; i < n; ++i) x[i] += res.solution[i];
        matvec(op, x, ax);
        double num = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = b[i] - ax[i];
            num += r[i] * r[i];
        }
        rel = std::sqrt(num) / b_norm;
        if (rel <= tol) {
            for (std::size_t i = 0; i < n; ++i) out.values[op.node_of_interior[i]] = x[i];
            return out;
        }
        if (iterations_last == 0) break;  // no progress possible
    }
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "solve_linear: CG stopped after %d iterations at relative residual %.3e", used,
                  rel);
    throw MaxIterationsExceeded(msg, rel);
}

double discrete_h1_gamma_norm(const Field& u) {
    const GridSpec& grid = u.grid;
    const int n_axes = grid.axes();
    std::vector<int> idx;
    double total = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        grid.unflatten(i, idx);
        const double weight_y = std::pow(grid.x_norm_at(idx), 2.0 * grid.params.gamma);

        double grad_sq = 0.0;
        for (int a = 0; a < n_axes; ++a) {
            double deriv;
            const double h = grid.spacing[a];
            if (idx[a] == 0) {
                idx[a] += 1;
                deriv = (u.values[grid.flat_index(idx)] - u.values[i]) / h;
                idx[a] -= 1;
            } else if (idx[a] == grid.dims[a] - 1) {
                idx[a] -= 1;
                deriv = (u.values[i] - u.values[grid.flat_index(idx)]) / h;
                idx[a] += 1;
            } else {
                idx[a] += 1;
                const double up = u.values[grid.flat_index(idx)];
                idx[a] -= 2;
                const double dn = u.values[grid.flat_index(idx)];
                idx[a] += 1;
                deriv = (up - dn) / (2.0 * h);
            }
            grad_sq += (a < grid.params.x_dim ? 1.0 : weight_y) * deriv * deriv;
        }

        double quad_weight = 1.0;
        for (int a = 0; a < n_axes; ++a) {
            const bool edge = idx[a] == 0 || idx[a] == grid.dims[a] - 1;
            quad_weight *= grid.spacing[a] * (edge ? 0.5 : 1.0);
        }
        total += quad_weight * (grad_sq + u.values[i] * u.values[i]);
    }
    return std::sqrt(total);
}

double smallest_ritz_value(const DiscreteOperator& op, int iterations) {
    const std::size_t n = op.interior_count();
    const int m = std::min<int>(iterations, static_cast<int>(n));

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> v_prev(n, 0.0), w(n);
    std::vector<double> alpha, beta;
    alpha.reserve(static_cast<std::size_t>(m));
    beta.reserve(static_cast<std::size_t>(m));

    for (int k = 0; k < m; ++k) {
        matvec(op, v, w);
        const double a = dot(v, w);
        alpha.push_back(a);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] -= a * v[i] + (k > 0 ? beta[static_cast<std::size_t>(k) - 1] * v_prev[i] : 0.0);
        }
        const double b = std::sqrt(dot(w, w));
        if (k + 1 == m || b < 1e-13) break;
        beta.push_back(b);
        v_prev = v;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
    }

    // Smallest eigenvalue of the Lanczos tridiagonal via Sturm bisection.
    const std::size_t k = alpha.size();
    double lo = alpha[0], hi = alpha[0];
    for (std::size_t i = 0; i < k; ++i) {
        const double off = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                           (i < beta.size() ? std::abs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - off);
        hi = std::max(hi, alpha[i] + off);
    }
    auto count_below = [&](double x) {
        int count = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double off2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
            d = alpha[i] - x - (i > 0 ? off2 / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++count;
        }
        return count;
    };
    for (int pass = 0; pass < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++pass) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace grushin
