// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; timings are wall clock.

#include <chrono>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/diagnostics.hpp"
#include "grushin/experiments.hpp"
#include "grushin/io.hpp"
#include "grushin/kelvin.hpp"
#include "grushin/rng.hpp"
#include "grushin/solver.hpp"

using namespace grushin;

namespace {

const GrushinParams kParams{1, 1, 1.0};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail,
            double seconds) {
    std::printf("[%s] %02d %-22s %s (%.2f s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

Point identity_sample(SplitMix64& rng) {
    for (;;) {
        Point z;
        z.x = {rng.uniform(-2.5, 2.5)};
        z.y = {rng.uniform(-2.5, 2.5)};
        if (grushin_distance_to_origin(z, kParams) > 0.5 && x_block_norm(z) > 0.25) return z;
    }
}

std::vector<Point> seeded_identity_points(int count) {
    SplitMix64 rng(20240809);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(identity_sample(rng));
    return pts;
}

double normalized_error(double reference, double probe) {
    return std::abs(reference - probe) / std::max(1.0, std::abs(reference));
}

ScalarFunction annular_bump() {
    ScalarFunction f;
    f.value = [](const Point& z) {
        const double d = grushin_distance_to_origin(z, kParams);
        const double t = d * d;
        if (t <= 0.25 || t >= 4.0) return 0.0;
        return std::exp(-1.0 / ((t - 0.25) * (4.0 - t)));
    };
    f.smooth_at = [](const Point& z) {
        return grushin_distance_to_origin(z, kParams) > 0.05;
    };
    return f;
}

std::vector<double> dense_lu_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --------------------------------------------------------------------------

void criterion_1_barrier_identity() {
    Timer timer;
    const std::vector<Point> pts = seeded_identity_points(100);
    const BarrierSpec spec{0.7, 1.0, 1.0};
    const ScalarFunction f = barrier_function(spec, kParams);
    double err_h = 0.0, err_h2 = 0.0;
    for (const Point& z : pts) {
        const double closed = barrier_grushin_laplacian(z, spec, kParams);
        err_h = std::max(err_h, normalized_error(closed, fd_grushin_laplacian(f, z, 1e-3, kParams)));
        err_h2 =
            std::max(err_h2, normalized_error(closed, fd_grushin_laplacian(f, z, 5e-4, kParams)));
    }
    const double ratio = err_h / err_h2;
    const double elapsed = timer.seconds();
    const bool ok = err_h <= 1e-4 && ratio >= 3.0 && elapsed < 1.0;
    report(1, "barrier-identity", ok,
           fmt("max_err=%.2e ratio=%.2f", err_h, ratio), elapsed);
}

void criterion_2_power_identity() {
    Timer timer;
    const std::vector<Point> pts = seeded_identity_points(100);
    const double ng = kParams.homogeneous_dimension();
    bool ok = true;
    std::string detail;
    double harmonic_abs = 0.0;
    for (double b : {0.3, 0.5, ng - 2.0}) {
        const ScalarFunction f = radial_power_function(b, kParams);
        double err_h = 0.0, err_h2 = 0.0;
        for (const Point& z : pts) {
            const double closed = power_grushin_laplacian(z, b, kParams);
            if (b == ng - 2.0) harmonic_abs = std::max(harmonic_abs, std::abs(closed));
            err_h = std::max(err_h,
                             normalized_error(closed, fd_grushin_laplacian(f, z, 1e-3, kParams)));
            err_h2 = std::max(err_h2,
                              normalized_error(closed, fd_grushin_laplacian(f, z, 5e-4, kParams)));
        }
        ok = ok && err_h <= 1e-4 && err_h / err_h2 >= 3.0;
        detail += fmt("b=%.1f:%.1e ", b, err_h);
    }
    ok = ok && harmonic_abs <= 1e-6;
    const double elapsed = timer.seconds();
    ok = ok && elapsed < 1.0;
    report(2, "power-identity", ok, detail + fmt("harmonic=%.1e", harmonic_abs), elapsed);
}

void criterion_3_kelvin_identity() {
    Timer timer;
    SplitMix64 rng(20240809);
    std::vector<Point> samples;
    while (samples.size() < 100) {
        Point z;
        z.x = {rng.uniform(-1.8, 1.8)};
        z.y = {rng.uniform(-1.8, 1.8)};
        const double d = grushin_distance_to_origin(z, kParams);
        if (d > 0.75 && d < 1.6 && x_block_norm(z) > 0.3) samples.push_back(z);
    }
    const ScalarFunction u = annular_bump();
    const KelvinReport coarse = verify_kelvin_identity(u, samples, 1e-3, kParams);
    const KelvinReport fine = verify_kelvin_identity(u, samples, 5e-4, kParams);
    const double order = std::log2(coarse.max_residual / fine.max_residual);

    // Involution of the point map and of the transform itself.
    double involution = 0.0;
    const ScalarFunction twice = kelvin_transform(kelvin_transform(u, kParams), kParams);
    int tested = 0;
    while (tested < 1000) {
        Point z;
        z.x = {rng.uniform(-4.0, 4.0)};
        z.y = {rng.uniform(-4.0, 4.0)};
        const double d = grushin_distance_to_origin(z, kParams);
        if (d < 0.1 || d > 10.0) continue;
        ++tested;
        const Point back = kelvin_point(kelvin_point(z, kParams), kParams);
        involution = std::max(involution, std::abs(back.x[0] - z.x[0]) / std::max(1.0, std::abs(z.x[0])));
        involution = std::max(involution, std::abs(back.y[0] - z.y[0]) / std::max(1.0, std::abs(z.y[0])));
        const double reference = u(z);
        involution = std::max(involution,
                              std::abs(twice(z) - reference) / std::max(1.0, std::abs(reference)));
    }
    const double elapsed = timer.seconds();
    const bool ok =
        coarse.max_residual <= 1e-3 && order >= 1.7 && involution <= 1e-10 && elapsed < 5.0;
    report(3, "kelvin-identity", ok,
           fmt("max_res=%.2e order=%.2f involution=%.1e", coarse.max_residual, order, involution),
           elapsed);
}

void criterion_4_maximum_principle() {
    Timer timer;
    const GridSpec grid = GridSpec::cube(kParams, 64, 1.0);
    const DiscreteOperator op = assemble(grid);
    SplitMix64 rng(20240809);
    double min_val = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Field rhs(grid);
        for (double& v : rhs.values) v = rng.uniform(0.0, 1.0);
        rhs.zero_boundary();
        const Field sol = solve_linear(op, rhs, 1e-12, 100000);
        for (double v : sol.values) min_val = std::min(min_val, v);
    }

    // Dense LU agreement on a 9x9 grid.
    const GridSpec small = GridSpec::cube(kParams, 9, 1.0);
    const DiscreteOperator op_small = assemble(small);
    const std::size_t n = op_small.interior_count();
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = op_small.row_offsets[r]; k < op_small.row_offsets[r + 1]; ++k) {
            dense[r][static_cast<std::size_t>(op_small.cols[k])] = op_small.coeffs[k];
        }
    }
    Field rhs_small(small);
    for (double& v : rhs_small.values) v = rng.uniform(0.0, 1.0);
    rhs_small.zero_boundary();
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) b[r] = rhs_small.values[op_small.node_of_interior[r]];
    const std::vector<double> exact = dense_lu_solve(dense, b);
    const Field cg = solve_linear(op_small, rhs_small, 1e-13, 100000);
    double lu_diff = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        lu_diff = std::max(lu_diff, std::abs(cg.values[op_small.node_of_interior[r]] - exact[r]));
    }

    const double elapsed = timer.seconds();
    const bool ok = min_val >= -1e-12 && lu_diff <= 1e-10 && elapsed < 10.0;
    report(4, "maximum-principle", ok, fmt("min=%.1e lu_diff=%.1e", min_val, lu_diff), elapsed);
}

void criterion_5_manufactured_solve() {
    Timer timer;
    const GridSpec grid = GridSpec::cube(kParams, 128, 6.0);
    const DiscreteOperator op = assemble(grid);
    Field target = sample_field(grid, [](const Point& z) {
        const double xn = x_block_norm(z), yn = y_block_norm(z);
        return 0.5 * std::exp(-(xn * xn + yn * yn));
    });
    target.zero_boundary();

    Nonlinearity nl = Nonlinearity::power(3.0, 1.0);
    const Field a_target = apply(op, target);
    Field g(grid);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        g.values[i] = a_target.values[i] + target.values[i] -
                      std::pow(std::max(target.values[i], 0.0), 3.0);
    }
    nl.perturbation.value = field_evaluator(g);

    SolveConfig cfg;
    const SolveReport rep = solve_dirichlet(grid, nl, Field(grid), cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < target.values.size(); ++i) {
        err = std::max(err, std::abs(rep.field.values[i] - target.values[i]));
    }
    const double elapsed = timer.seconds();
    const bool ok = err <= 1e-6 && rep.newton_iterations <= 15 && elapsed < 30.0;
    report(5, "manufactured-solve", ok, fmt("sup_err=%.1e newton=%d", err, rep.newton_iterations),
           elapsed);
}

SolveReport g_ground_state;  // shared between criteria 6 and 7

void criterion_6_symmetry() {
    Timer timer;
    const GridSpec grid = GridSpec::cube(kParams, 256, 12.0);
    SolveConfig cfg;
    cfg.newton_tol = 1e-10;
    g_ground_state =
        solve_dirichlet(grid, Nonlinearity::power(3.0, 1.0), default_initial_guess(grid), cfg);

    const double evenness = radial_y_deficit(g_ground_state.field);
    ReflectionSpec spec;
    for (int k = 1; k <= 20; ++k) {
        spec.lambdas.push_back(snap_to_half_node(grid, 1, 8.0 * k / 20.0));
    }
    const std::vector<double> deficits = reflection_deficit(g_ground_state.field, spec);
    double worst = -1e300;
    for (double d : deficits) worst = std::max(worst, d);

    const double elapsed = timer.seconds();
    const bool ok = !g_ground_state.trivial && evenness <= 1e-8 && worst <= 1e-8 && elapsed < 60.0;
    report(6, "symmetry", ok,
           fmt("sup=%.3f evenness=%.1e plane=%.1e", g_ground_state.sup_value, evenness, worst),
           elapsed);
}

void criterion_7_decay() {
    Timer timer;
    bool ok = g_ground_state.converged && !g_ground_state.trivial;
    std::string detail = "ground state unavailable";
    if (ok) {
        const DecayFit fit = decay_fit(g_ground_state.field, 4.0);
        const GridSpec grid = GridSpec::cube(kParams, 256, 12.0);
        const BarrierSpec spec{0.7, 1.0, 1.0};
        const Field psi =
            sample_field(grid, [&](const Point& z) { return barrier_value(z, spec, kParams); });
        const DecayFit exact = decay_fit(psi, 4.0);
        const double rate_err = std::abs(exact.rate - 0.7);
        ok = fit.r_squared >= 0.98 && fit.rate > 0.0 && rate_err <= 1e-10;
        detail = fmt("R2=%.4f rate=%.3f barrier_rate_err=%.1e", fit.r_squared, fit.rate, rate_err);
    }
    report(7, "decay", ok, detail, timer.seconds());
}

std::vector<SolveReport> g_sweep;  // shared between criteria 8 and 9

void criterion_8_scaling_law() {
    Timer timer;
    SolveConfig cfg;
    const Nonlinearity nl = Nonlinearity::power(3.0, 0.0);
    g_sweep = box_size_sweep(kParams, {4.0, 8.0, 16.0}, nl, 129, cfg);

    const double radii[] = {4.0, 8.0, 16.0};
    double pmin = 1e300, pmax = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double prod = g_sweep[k].sup_value * radii[k];  // R^{2/(p-1)} with p = 3
        pmin = std::min(pmin, prod);
        pmax = std::max(pmax, prod);
    }
    const double spread = pmax / pmin;

    const Field rescaled = dilation_rescaled(g_sweep[0].field, 4.0 / 16.0, 3.0);
    const DiscreteOperator op = assemble(g_sweep[2].field.grid);
    const double covariance = equation_residual(op, nl, rescaled);
    double solver_res = 0.0;
    for (const SolveReport& rep : g_sweep) {
        solver_res = std::max(solver_res, rep.residual_history.back());
    }

    const bool ok = spread <= 1.15 && covariance <= 10.0 * solver_res;
    report(8, "scaling-law", ok,
           fmt("spread=%.6f covariance=%.1e solver=%.1e", spread, covariance, solver_res),
           timer.seconds());
}

void criterion_9_blowup() {
    Timer timer;
    bool ok = g_sweep.size() == 3;
    std::string detail = "sweep unavailable";
    if (ok) {
        const BlowupSequence seq = blowup_rescale(g_sweep, 3.0, kParams);
        double norm_err = 0.0;
        for (const BlowupMember& m : seq.members) {
            norm_err = std::max(norm_err, std::abs(m.sup_v - 1.0));
            norm_err = std::max(norm_err, std::abs(m.v_at_origin - 1.0));
        }

        // Exact self-similar family from the dilation covariance.
        std::vector<SolveReport> family;
        for (double radius : {4.0, 8.0, 16.0}) {
            SolveReport rep;
            rep.converged = true;
            rep.field = dilation_rescaled(g_sweep[0].field, 4.0 / radius, 3.0);
            std::size_t best = 0;
            for (std::size_t i = 1; i < rep.field.values.size(); ++i) {
                if (rep.field.values[i] > rep.field.values[best]) best = i;
            }
            rep.sup_value = rep.field.values[best];
            std::vector<int> idx;
            rep.field.grid.unflatten(best, idx);
            rep.sup_location = rep.field.grid.point_at(idx);
            family.push_back(std::move(rep));
        }
        const BlowupSequence self_similar = blowup_rescale(family, 3.0, kParams);
        double collapse = 0.0;
        for (std::size_t a = 0; a < self_similar.members.size(); ++a) {
            for (std::size_t b = a + 1; b < self_similar.members.size(); ++b) {
                double diff = 0.0;
                for (std::size_t i = 0; i < self_similar.members[a].v.values.size(); ++i) {
                    diff = std::max(diff, std::abs(self_similar.members[a].v.values[i] -
                                                   self_similar.members[b].v.values[i]));
                }
                collapse = std::max(collapse, diff);
            }
        }
        ok = norm_err <= 1e-3 && collapse <= 1e-3;
        detail = fmt("norm_err=%.1e collapse=%.1e", norm_err, collapse);
    }
    report(9, "blowup-normalization", ok, detail, timer.seconds());
}

void criterion_10_apriori() {
    Timer timer;
    const GridSpec grid = GridSpec::cube(kParams, 97, 2.0);
    SolveConfig cfg;

    auto member = [&](double h_base, double h_bump, double g_amp) {
        Nonlinearity nl = Nonlinearity::power(4.0, 0.0);
        nl.coefficient.value = [h_base, h_bump](const Point& z) {
            const double d = grushin_distance_to_origin(z, kParams);
            return h_base + h_bump * std::exp(-d * d);
        };
        nl.perturbation.value = [g_amp](const Point& z) {
            const double d = grushin_distance_to_origin(z, kParams);
            return g_amp * std::exp(-2.0 * d * d);
        };
        return nl;
    };

    SplitMix64 rng(20240809);
    std::vector<Nonlinearity> family;
    std::vector<std::array<double, 3>> knobs;
    for (int m = 0; m < 10; ++m) {
        const double h_base = rng.uniform(0.5, 1.25);
        const double h_bump = rng.uniform(0.0, 2.0 - h_base);
        const double g_amp = rng.uniform(0.25, 0.5);
        knobs.push_back({h_base, h_bump, g_amp});
        family.push_back(member(h_base, h_bump, g_amp));
    }

    bool ok = true;
    std::string detail;
    try {
        const SolveReport baseline = solve_dirichlet(grid, member(1.0, 0.0, 0.375), Field(grid), cfg);
        const std::vector<AprioriEntry> entries = apriori_sweep(grid, family, cfg);

        std::filesystem::create_directories("acceptance_out");
        CsvWriter csv("acceptance_out/apriori.csv");
        csv.row({"member", "h_base", "h_bump", "g_amplitude", "sup", "max_x0", "max_y0",
                 "x_offset", "on_degeneracy_line"});
        double sup_max = 0.0;
        for (const AprioriEntry& e : entries) {
            ok = ok && e.report.converged;
            sup_max = std::max(sup_max, e.report.sup_value);
            csv.row({std::to_string(e.member), format_double(knobs[e.member][0]),
                     format_double(knobs[e.member][1]), format_double(knobs[e.member][2]),
                     format_double(e.report.sup_value),
                     format_double(e.report.sup_location.x[0]),
                     format_double(e.report.sup_location.y[0]), format_double(e.max_x_offset),
                     e.max_on_degeneracy_line ? "1" : "0"});
        }
        ok = ok && sup_max <= 10.0 * baseline.sup_value;
        detail = fmt("baseline=%.3f family_max=%.3f csv=acceptance_out/apriori.csv",
                     baseline.sup_value, sup_max);
    } catch (const Error& err) {
        ok = false;
        detail = err.what();
    }
    const double elapsed = timer.seconds();
    ok = ok && elapsed < 300.0;
    report(10, "apriori-sweep", ok, detail, elapsed);
}

void criterion_11_determinism() {
    Timer timer;
    bool ok = true;
    std::string detail;

    // Field files round-trip bit-exactly.
    std::filesystem::create_directories("acceptance_out");
    const GridSpec grid =
        GridSpec(GrushinParams{1, 1, 0.75}, {9, 11}, {-1.0, -2.0}, {1.5, 2.0});
    Field field(grid);
    SplitMix64 rng(20240809);
    for (double& v : field.values) v = rng.uniform(-1e3, 1e3);
    write_field("acceptance_out/roundtrip.grsh", field);
    const Field loaded = read_field("acceptance_out/roundtrip.grsh");
    ok = ok && loaded.grid == field.grid &&
         std::memcmp(loaded.values.data(), field.values.data(),
                     field.values.size() * sizeof(double)) == 0;

    // Identical config + seed => byte-identical artifacts.
    const std::string config =
        "problem = identities\ngamma = 1.0\nseed = 7\nsamples = 50\n"
        "output_dir = acceptance_out/determinism\n";
    std::ostringstream log;
    const int rc1 = run_experiment(ConfigFile::parse_string(config), log);
    const std::string csv1 = slurp("acceptance_out/determinism/identities.csv");
    const std::string json1 = slurp("acceptance_out/determinism/summary.json");
    const int rc2 = run_experiment(ConfigFile::parse_string(config), log);
    ok = ok && rc1 == 0 && rc2 == 0 && !csv1.empty() &&
         csv1 == slurp("acceptance_out/determinism/identities.csv") &&
         json1 == slurp("acceptance_out/determinism/summary.json");

    detail = fmt("roundtrip=%s reruns=%s", ok ? "bit-exact" : "MISMATCH",
                 ok ? "byte-identical" : "MISMATCH");
    report(11, "determinism-io", ok, detail, timer.seconds());
}

}  // namespace

int main() {
    std::printf("acceptance suite: Grushin operator toolkit\n");
    criterion_1_barrier_identity();
    criterion_2_power_identity();
    criterion_3_kelvin_identity();
    criterion_4_maximum_principle();
    criterion_5_manufactured_solve();
    criterion_6_symmetry();
    criterion_7_decay();
    criterion_8_scaling_law();
    criterion_9_blowup();
    criterion_10_apriori();
    criterion_11_determinism();
    if (g_failures == 0) {
        std::printf("all 11 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
