#include "grushin/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "grushin/diagnostics.hpp"
#include "grushin/io.hpp"
#include "grushin/kelvin.hpp"
#include "grushin/rng.hpp"
#include "grushin/solver.hpp"

namespace grushin {

namespace {

using ordered_json = nlohmann::ordered_json;

// Wraps the config so every value actually used (given or defaulted) lands
// in the JSON summary.
struct Resolved {
    const ConfigFile& cfg;
    ordered_json json = ordered_json::object();

    std::string str(const std::string& key, const std::string& fallback) {
        const std::string v = cfg.get_string(key, fallback);
        json[key] = v;
        return v;
    }
    double dbl(const std::string& key, double fallback) {
        const double v = cfg.get_double(key, fallback);
        json[key] = v;
        return v;
    }
    double req_dbl(const std::string& key) {
        const double v = cfg.require_double(key);
        json[key] = v;
        return v;
    }
    long long integer(const std::string& key, long long fallback) {
        const long long v = cfg.get_int(key, fallback);
        json[key] = v;
        return v;
    }
    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
        const std::vector<double> v = cfg.get_double_list(key, fallback);
        json[key] = v;
        return v;
    }
};

struct Workspace {
    std::filesystem::path dir;
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

Workspace make_workspace(Resolved& r) {
    return Workspace{r.str("output_dir", "out")};
}

// Reject unknown keys before any work happens, then create the output tree.
void seal_config(const Resolved& r, const Workspace& ws) {
    r.cfg.finalize();
    std::filesystem::create_directories(ws.dir);
}

GrushinParams read_params(Resolved& r) {
    GrushinParams params;
    params.x_dim = static_cast<int>(r.integer("N", 1));
    params.y_dim = static_cast<int>(r.integer("l", 1));
    params.gamma = r.req_dbl("gamma");
    params.validate();
    return params;
}

SolveConfig read_solve_config(Resolved& r) {
    SolveConfig cfg;
    cfg.newton_tol = r.dbl("newton_tol", 1e-10);
    cfg.newton_max = static_cast<int>(r.integer("newton_max", 50));
    cfg.cg_tol = r.dbl("cg_tol", 1e-12);
    cfg.cg_max = static_cast<int>(r.integer("cg_max", 100000));
    cfg.positivity_projection = r.integer("positivity_projection", 0) != 0;
    return cfg;
}

void write_summary(const Workspace& ws, const ordered_json& config, const ordered_json& results) {
    ordered_json doc;
    doc["config"] = config;
    doc["results"] = results;
    std::ofstream out(ws.path("summary.json"), std::ios::binary);
    out << doc.dump(2) << '\n';
}

double normalized_error(double reference, double probe) {
    return std::abs(reference - probe) / std::max(1.0, std::abs(reference));
}

// Sample in the box [-2.5, 2.5]^dim, rejecting until d(z,0) > 0.5 and
// |x| > 0.25 (away from the degeneracy line, where the closed forms hold
// classically). Coordinates are drawn x block first, in axis order.
Point identity_sample(SplitMix64& rng, const GrushinParams& params) {
    for (;;) {
        Point z;
        z.x.resize(static_cast<std::size_t>(params.x_dim));
        z.y.resize(static_cast<std::size_t>(params.y_dim));
        for (double& v : z.x) v = rng.uniform(-2.5, 2.5);
        for (double& v : z.y) v = rng.uniform(-2.5, 2.5);
        if (grushin_distance_to_origin(z, params) > 0.5 && x_block_norm(z) > 0.25) return z;
    }
}

// Annular sample for the Kelvin checks: 0.75 < d < 1.6 keeps both the point
// and its inversion inside the smooth bulk of the test bump.
Point annulus_sample(SplitMix64& rng, const GrushinParams& params) {
    for (;;) {
        Point z;
        z.x.resize(static_cast<std::size_t>(params.x_dim));
        z.y.resize(static_cast<std::size_t>(params.y_dim));
        for (double& v : z.x) v = rng.uniform(-1.8, 1.8);
        for (double& v : z.y) v = rng.uniform(-1.8, 1.8);
        const double d = grushin_distance_to_origin(z, params);
        if (d > 0.75 && d < 1.6 && x_block_norm(z) > 0.3) return z;
    }
}

// Smooth bump supported on the annulus 0.5 < d < 2, written in t = d^2 so
// everything is composed of smooth pieces away from the origin.
ScalarFunction annular_bump(const GrushinParams& params) {
    ScalarFunction f;
    f.value = [params](const Point& z) {
        const double d = grushin_distance_to_origin(z, params);
        const double t = d * d;
        if (t <= 0.25 || t >= 4.0) return 0.0;
        return std::exp(-1.0 / ((t - 0.25) * (4.0 - t)));
    };
    f.smooth_at = [params](const Point& z) {
        return grushin_distance_to_origin(z, params) > 0.05;
    };
    return f;
}

std::vector<std::string> point_header(const GrushinParams& params) {
    std::vector<std::string> header;
    for (int a = 0; a < params.x_dim; ++a) header.push_back("x" + std::to_string(a));
    for (int a = 0; a < params.y_dim; ++a) header.push_back("y" + std::to_string(a));
    return header;
}

void push_point(std::vector<std::string>& cells, const Point& z) {
    for (double v : z.x) cells.push_back(format_double(v));
    for (double v : z.y) cells.push_back(format_double(v));
}

// ---------------------------------------------------------------------------
// identities: closed forms for the barrier and the radial powers against the
// finite-difference oracle at seeded random points.
// ---------------------------------------------------------------------------

int run_identities(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const long long n_samples = r.integer("samples", 100);
    const double h = r.dbl("fd_step", 1e-3);
    const double tolerance = r.dbl("tolerance", 1e-4);
    const std::uint64_t seed = static_cast<std::uint64_t>(r.integer("seed", 1));

    BarrierSpec barrier;
    barrier.rate = r.dbl("barrier_rate", 0.7);
    barrier.amplitude = r.dbl("barrier_amplitude", 1.0);
    barrier.radius = r.dbl("barrier_radius", 1.0);
    barrier.validate();

    const double ng = params.homogeneous_dimension();
    const std::vector<double> powers = r.list("powers", {0.3, 0.5, ng - 2.0});
    seal_config(r, ws);

    SplitMix64 rng(seed);
    std::vector<Point> samples;
    samples.reserve(static_cast<std::size_t>(n_samples));
    for (long long i = 0; i < n_samples; ++i) samples.push_back(identity_sample(rng, params));

    CsvWriter csv(ws.path("identities.csv"));
    std::vector<std::string> header = {"kind", "sample"};
    for (const std::string& c : point_header(params)) header.push_back(c);
    header.insert(header.end(), {"closed_form", "finite_difference", "normalized_error"});
    csv.row(header);

    const ScalarFunction barrier_f = barrier_function(barrier, params);
    double worst = 0.0;
    auto emit = [&](const std::string& kind, std::size_t i, const Point& z, double closed,
                    double fd) {
        const double err = normalized_error(closed, fd);
        worst = std::max(worst, err);
        std::vector<std::string> cells = {kind, std::to_string(i)};
        push_point(cells, z);
        cells.push_back(format_double(closed));
        cells.push_back(format_double(fd));
        cells.push_back(format_double(err));
        csv.row(cells);
    };

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point& z = samples[i];
        emit("barrier", i, z, barrier_grushin_laplacian(z, barrier, params),
             fd_grushin_laplacian(barrier_f, z, h, params));
        for (double b : powers) {
            const ScalarFunction power_f = radial_power_function(b, params);
            emit("power_b=" + format_double(b), i, z, power_grushin_laplacian(z, b, params),
                 fd_grushin_laplacian(power_f, z, h, params));
        }
    }

    ordered_json results;
    results["max_normalized_error"] = worst;
    results["tolerance"] = tolerance;
    results["passed"] = worst <= tolerance;
    write_summary(ws, r.json, results);
    log << "identities: max normalized error " << worst << " (tolerance " << tolerance << ")\n";
    return worst <= tolerance ? 0 : 1;
}

// ---------------------------------------------------------------------------
// kelvin_verify: conjugation identity on the annular bump.
// ---------------------------------------------------------------------------

int run_kelvin_verify(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const long long n_samples = r.integer("samples", 100);
    const double h = r.dbl("fd_step", 1e-3);
    const double tolerance = r.dbl("tolerance", 1e-3);
    const std::uint64_t seed = static_cast<std::uint64_t>(r.integer("seed", 1));
    seal_config(r, ws);

    SplitMix64 rng(seed);
    std::vector<Point> samples;
    samples.reserve(static_cast<std::size_t>(n_samples));
    for (long long i = 0; i < n_samples; ++i) samples.push_back(annulus_sample(rng, params));

    const KelvinReport report = verify_kelvin_identity(annular_bump(params), samples, h, params);

    CsvWriter csv(ws.path("kelvin.csv"));
    std::vector<std::string> header = point_header(params);
    header.insert(header.end(), {"transformed_side", "original_side", "residual"});
    csv.row(header);
    for (const KelvinSample& s : report.samples) {
        std::vector<std::string> cells;
        push_point(cells, s.z_tilde);
        cells.push_back(format_double(s.transformed_side));
        cells.push_back(format_double(s.original_side));
        cells.push_back(format_double(s.residual));
        csv.row(cells);
    }

    ordered_json results;
    results["max_residual"] = report.max_residual;
    results["mean_residual"] = report.mean_residual;
    results["tolerance"] = tolerance;
    results["passed"] = report.max_residual <= tolerance;
    write_summary(ws, r.json, results);
    log << "kelvin_verify: max residual " << report.max_residual << " (tolerance " << tolerance
        << ")\n";
    return report.max_residual <= tolerance ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Ground state of -Delta_gamma u + u = u^p and its diagnostics.
// ---------------------------------------------------------------------------

ordered_json report_json(const SolveReport& report) {
    ordered_json j;
    j["converged"] = report.converged;
    j["trivial"] = report.trivial;
    j["sup_value"] = report.sup_value;
    ordered_json loc;
    loc["x"] = report.sup_location.x;
    loc["y"] = report.sup_location.y;
    j["sup_location"] = loc;
    j["newton_iterations"] = report.newton_iterations;
    j["cg_iterations"] = report.cg_iterations;
    j["final_residual"] = report.residual_history.back();
    j["residual_history"] = report.residual_history;
    return j;
}

int run_ground_state(Resolved& r, std::ostream& log, bool with_moving_plane) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const int nodes = static_cast<int>(r.integer("nodes", 129));
    const double radius = r.dbl("box_radius", 8.0);
    const double p = r.dbl("p", 3.0);
    const SolveConfig solve_cfg = read_solve_config(r);
    const double inner = r.dbl("decay_inner_radius", radius / 3.0);
    int lambda_count = 0, plane_axis = 0;
    double lambda_max = 0.0;
    if (with_moving_plane) {
        lambda_count = static_cast<int>(r.integer("lambda_count", 20));
        lambda_max = r.dbl("lambda_max", 2.0 * radius / 3.0);
        plane_axis = static_cast<int>(r.integer("plane_axis", 0));
    }
    seal_config(r, ws);

    const GridSpec grid = GridSpec::cube(params, nodes, radius);
    const Nonlinearity nl = Nonlinearity::power(p, 1.0);
    const SolveReport report = solve_dirichlet(grid, nl, default_initial_guess(grid), solve_cfg);
    write_field(ws.path("ground_state.grsh"), report.field);

    ordered_json results;
    results["solve"] = report_json(report);
    results["radial_y_deficit"] = radial_y_deficit(report.field);

    try {
        const DecayFit fit = decay_fit(report.field, inner);
        ordered_json fj;
        fj["rate"] = fit.rate;
        fj["amplitude"] = fit.amplitude;
        fj["r_squared"] = fit.r_squared;
        fj["samples_used"] = fit.samples_used;
        results["decay_fit"] = fj;
        CsvWriter fit_csv(ws.path("decay_fit.csv"));
        fit_csv.row({"inner_radius", "rate", "amplitude", "r_squared", "samples_used"});
        fit_csv.row({format_double(inner), format_double(fit.rate),
                     format_double(fit.amplitude), format_double(fit.r_squared),
                     std::to_string(fit.samples_used)});
    } catch (const InsufficientTail& err) {
        results["decay_fit"] = err.what();
    }

    if (with_moving_plane) {
        ReflectionSpec spec;
        spec.axis = plane_axis;
        for (int k = 1; k <= lambda_count; ++k) {
            spec.lambdas.push_back(
                snap_to_half_node(grid, params.x_dim + plane_axis,
                                  lambda_max * k / static_cast<double>(lambda_count)));
        }
        const std::vector<double> deficits = reflection_deficit(report.field, spec);
        CsvWriter csv(ws.path("moving_plane.csv"));
        csv.row({"lambda", "deficit"});
        double worst = -1e300;
        for (std::size_t i = 0; i < deficits.size(); ++i) {
            csv.row({format_double(spec.lambdas[i]), format_double(deficits[i])});
            worst = std::max(worst, deficits[i]);
        }
        results["max_moving_plane_deficit"] = worst;
    }

    write_summary(ws, r.json, results);
    log << "ground_state: sup " << report.sup_value << " after " << report.newton_iterations
        << " Newton steps\n";
    return report.trivial ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Pure power Dirichlet problems: single box, half-space box, radius sweep.
// ---------------------------------------------------------------------------

int run_dirichlet_power(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const int nodes = static_cast<int>(r.integer("nodes", 129));
    const double radius = r.dbl("box_radius", 4.0);
    const double p = r.dbl("p", 3.0);
    const SolveConfig solve_cfg = read_solve_config(r);
    seal_config(r, ws);

    const std::vector<SolveReport> reports =
        box_size_sweep(params, {radius}, Nonlinearity::power(p, 0.0), nodes, solve_cfg);
    write_field(ws.path("field.grsh"), reports[0].field);

    ordered_json results;
    results["solve"] = report_json(reports[0]);
    write_summary(ws, r.json, results);
    log << "dirichlet_power: sup " << reports[0].sup_value << "\n";
    return reports[0].trivial ? 1 : 0;
}

int run_halfspace(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const int nodes = static_cast<int>(r.integer("nodes", 65));
    const double radius = r.dbl("box_radius", 4.0);
    const double p = r.dbl("p", 3.0);
    const SolveConfig solve_cfg = read_solve_config(r);
    const int lambda_count = static_cast<int>(r.integer("lambda_count", 8));
    seal_config(r, ws);

    // Box with one face on the degenerate half-space boundary {y_last = 0}.
    const int n_axes = params.topological_dimension();
    std::vector<double> lo(static_cast<std::size_t>(n_axes), -radius);
    std::vector<double> hi(static_cast<std::size_t>(n_axes), radius);
    lo.back() = 0.0;
    hi.back() = 2.0 * radius;
    const GridSpec grid(params, std::vector<int>(static_cast<std::size_t>(n_axes), nodes), lo, hi);

    Field init = sample_field(grid, [&](const Point& z) {
        double v = 1.0;
        for (double c : z.x) v *= std::cos(0.5 * M_PI * c / radius);
        for (std::size_t j = 0; j + 1 < z.y.size(); ++j) {
            v *= std::cos(0.5 * M_PI * z.y[j] / radius);
        }
        v *= std::sin(0.5 * M_PI * z.y.back() / radius);
        return 1.5 * v;
    });
    init.zero_boundary();

    const Nonlinearity nl = Nonlinearity::power(p, 0.0);
    const SolveReport report = solve_dirichlet(grid, nl, init, solve_cfg);
    write_field(ws.path("halfspace.grsh"), report.field);

    // Reflection diagnostics across planes in the upper half of the box,
    // where every reflected node stays inside.
    const int y_axis = n_axes - 1;
    ReflectionSpec spec;
    spec.axis = params.y_dim - 1;
    for (int k = 0; k < lambda_count; ++k) {
        const double frac = 0.55 + 0.4 * k / std::max(1, lambda_count - 1);
        spec.lambdas.push_back(snap_to_half_node(grid, y_axis, frac * hi.back()));
    }
    const std::vector<double> deficits = reflection_deficit(report.field, spec);
    CsvWriter csv(ws.path("halfspace_planes.csv"));
    csv.row({"lambda", "deficit"});
    for (std::size_t i = 0; i < deficits.size(); ++i) {
        csv.row({format_double(spec.lambdas[i]), format_double(deficits[i])});
    }

    ordered_json results;
    results["solve"] = report_json(report);
    write_summary(ws, r.json, results);
    log << "halfspace: sup " << report.sup_value << "\n";
    return report.trivial ? 1 : 0;
}

int run_scaling_sweep(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const int nodes = static_cast<int>(r.integer("nodes", 129));
    const double p = r.dbl("p", 3.0);
    const std::vector<double> radii = r.list("radii", {4.0, 8.0, 16.0});
    const SolveConfig solve_cfg = read_solve_config(r);
    seal_config(r, ws);

    const Nonlinearity nl = Nonlinearity::power(p, 0.0);
    const std::vector<SolveReport> reports = box_size_sweep(params, radii, nl, nodes, solve_cfg);

    CsvWriter csv(ws.path("scaling.csv"));
    csv.row({"radius", "sup", "sup_times_radius_power"});
    const double exponent = 2.0 / (p - 1.0);
    for (std::size_t k = 0; k < radii.size(); ++k) {
        csv.row({format_double(radii[k]), format_double(reports[k].sup_value),
                 format_double(reports[k].sup_value * std::pow(radii[k], exponent))});
    }

    // Covariance check: rescale the first solution onto the last box and
    // measure its equation residual there.
    const Field rescaled =
        dilation_rescaled(reports.front().field, radii.front() / radii.back(), p);
    const DiscreteOperator op = assemble(reports.back().field.grid);
    const double covariance_residual = equation_residual(op, nl, rescaled);

    // Blow-up normalization of the sweep family: one summary row and one
    // rescaled field per member.
    const BlowupSequence seq = blowup_rescale(reports, p, params);
    CsvWriter blowup_csv(ws.path("blowup.csv"));
    blowup_csv.row({"member", "radius", "peak", "lambda", "sup_v", "v_at_origin"});
    for (std::size_t k = 0; k < seq.members.size(); ++k) {
        const BlowupMember& m = seq.members[k];
        blowup_csv.row({std::to_string(k), format_double(radii[k]), format_double(m.peak),
                        format_double(m.lambda), format_double(m.sup_v),
                        format_double(m.v_at_origin)});
        write_field(ws.path("blowup_" + std::to_string(k) + ".grsh"), m.v);
    }

    write_field(ws.path("sweep_last.grsh"), reports.back().field);
    ordered_json results;
    results["sup_values"] = ordered_json::array();
    for (const SolveReport& rep : reports) results["sup_values"].push_back(rep.sup_value);
    results["covariance_residual"] = covariance_residual;
    results["solver_residual"] = reports.front().residual_history.back();
    write_summary(ws, r.json, results);
    log << "scaling_sweep: covariance residual " << covariance_residual << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// A priori sweep: family of perturbed subcritical problems on one box.
// ---------------------------------------------------------------------------

Nonlinearity apriori_member(double p, double h_base, double h_bump, double g_amp,
                            const GrushinParams& params) {
    Nonlinearity nl = Nonlinearity::power(p, 0.0);
    nl.coefficient.value = [h_base, h_bump, params](const Point& z) {
        const double d = grushin_distance_to_origin(z, params);
        return h_base + h_bump * std::exp(-d * d);
    };
    nl.perturbation.value = [g_amp, params](const Point& z) {
        const double d = grushin_distance_to_origin(z, params);
        return g_amp * std::exp(-2.0 * d * d);
    };
    return nl;
}

int run_apriori_sweep(Resolved& r, std::ostream& log) {
    const GrushinParams params = read_params(r);
    const Workspace ws = make_workspace(r);
    const int nodes = static_cast<int>(r.integer("nodes", 97));
    const double radius = r.dbl("box_radius", 2.0);
    const double p = r.dbl("p", 4.0);
    const long long members = r.integer("members", 10);
    const double h_min = r.dbl("h_min", 0.5);
    const double h_max = r.dbl("h_max", 2.0);
    const double g_amplitude = r.dbl("g_amplitude", 0.5);
    const std::uint64_t seed = static_cast<std::uint64_t>(r.integer("seed", 1));
    const SolveConfig solve_cfg = read_solve_config(r);
    seal_config(r, ws);

    const CriticalExponents exponents = critical_exponents(params);
    if (p < exponents.halfspace_lower || p > exponents.serrin_upper) {
        throw Error("apriori_sweep: exponent outside the subcritical window [" +
                    format_double(exponents.halfspace_lower) + ", " +
                    format_double(exponents.serrin_upper) + "]");
    }

    const GridSpec grid = GridSpec::cube(params, nodes, radius);

    SplitMix64 rng(seed);
    std::vector<Nonlinearity> family;
    std::vector<std::array<double, 3>> knobs;
    for (long long m = 0; m < members; ++m) {
        const double h_base = rng.uniform(h_min, 0.5 * (h_min + h_max));
        const double h_bump = rng.uniform(0.0, h_max - h_base);
        const double g_amp = rng.uniform(0.5, 1.0) * g_amplitude;
        knobs.push_back({h_base, h_bump, g_amp});
        family.push_back(apriori_member(p, h_base, h_bump, g_amp, params));
    }

    const Nonlinearity baseline_nl =
        apriori_member(p, 1.0, 0.0, 0.75 * g_amplitude, params);
    const SolveReport baseline = solve_dirichlet(grid, baseline_nl, Field(grid), solve_cfg);

    const std::vector<AprioriEntry> entries = apriori_sweep(grid, family, solve_cfg);

    CsvWriter csv(ws.path("apriori.csv"));
    std::vector<std::string> header = {"member", "p", "h_base", "h_bump", "g_amplitude", "sup"};
    for (const std::string& c : point_header(params)) header.push_back("max_" + c);
    header.insert(header.end(),
                  {"x_offset", "on_degeneracy_line", "newton_iterations", "converged"});
    csv.row(header);
    double sup_max = 0.0, sup_min = 1e300;
    for (const AprioriEntry& e : entries) {
        std::vector<std::string> cells = {std::to_string(e.member), format_double(p),
                                          format_double(knobs[e.member][0]),
                                          format_double(knobs[e.member][1]),
                                          format_double(knobs[e.member][2]),
                                          format_double(e.report.sup_value)};
        push_point(cells, e.report.sup_location);
        cells.push_back(format_double(e.max_x_offset));
        cells.push_back(e.max_on_degeneracy_line ? "1" : "0");
        cells.push_back(std::to_string(e.report.newton_iterations));
        cells.push_back(e.report.converged ? "1" : "0");
        csv.row(cells);
        sup_max = std::max(sup_max, e.report.sup_value);
        sup_min = std::min(sup_min, e.report.sup_value);
    }

    ordered_json results;
    results["baseline_sup"] = baseline.sup_value;
    results["family_sup_max"] = sup_max;
    results["family_sup_min"] = sup_min;
    results["max_over_baseline"] = sup_max / baseline.sup_value;
    write_summary(ws, r.json, results);
    log << "apriori_sweep: baseline sup " << baseline.sup_value << ", family max " << sup_max
        << "\n";
    return sup_max <= 10.0 * baseline.sup_value ? 0 : 1;
}

}  // namespace

int run_experiment(const ConfigFile& cfg, std::ostream& log) {
    Resolved r{cfg};
    const std::string problem = r.str("problem", "");
    if (problem.empty()) throw ConfigParse("missing required key \"problem\"", 0);

    int code;
    if (problem == "identities") {
        code = run_identities(r, log);
    } else if (problem == "kelvin_verify") {
        code = run_kelvin_verify(r, log);
    } else if (problem == "ground_state") {
        code = run_ground_state(r, log, false);
    } else if (problem == "moving_plane") {
        code = run_ground_state(r, log, true);
    } else if (problem == "dirichlet_power") {
        code = run_dirichlet_power(r, log);
    } else if (problem == "halfspace") {
        code = run_halfspace(r, log);
    } else if (problem == "scaling_sweep") {
        code = run_scaling_sweep(r, log);
    } else if (problem == "apriori_sweep") {
        code = run_apriori_sweep(r, log);
    } else {
        throw ConfigParse("unknown problem \"" + problem + "\"", 0);
    }
    return code;
}

int run_experiment_file(const std::string& path, std::ostream& log) {
    return run_experiment(ConfigFile::parse_file(path), log);
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

namespace {

int check(std::ostream& log, const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    return ok ? 0 : 1;
}

int verify_identities(std::ostream& log) {
    const GrushinParams params{1, 1, 1.0};
    SplitMix64 rng(2024);
    BarrierSpec barrier{0.7, 1.0, 1.0};
    const ScalarFunction barrier_f = barrier_function(barrier, params);
    const double ng = params.homogeneous_dimension();
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Point z = identity_sample(rng, params);
        worst = std::max(worst, normalized_error(barrier_grushin_laplacian(z, barrier, params),
                                                 fd_grushin_laplacian(barrier_f, z, 1e-3, params)));
        for (double b : {0.3, 0.5, ng - 2.0}) {
            const ScalarFunction f = radial_power_function(b, params);
            worst = std::max(worst, normalized_error(power_grushin_laplacian(z, b, params),
                                                     fd_grushin_laplacian(f, z, 1e-3, params)));
        }
    }
    return check(log, "identities", worst <= 1e-4,
                 "max normalized error " + format_double(worst));
}

int verify_kelvin(std::ostream& log) {
    const GrushinParams params{1, 1, 1.0};
    SplitMix64 rng(2024);
    std::vector<Point> samples;
    for (int i = 0; i < 50; ++i) samples.push_back(annulus_sample(rng, params));
    const KelvinReport report =
        verify_kelvin_identity(annular_bump(params), samples, 1e-3, params);
    int failures = check(log, "kelvin identity", report.max_residual <= 1e-3,
                         "max residual " + format_double(report.max_residual));

    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        Point z;
        z.x = {rng.uniform(-3.0, 3.0)};
        z.y = {rng.uniform(-3.0, 3.0)};
        const double d = grushin_distance_to_origin(z, params);
        if (d < 0.1 || d > 10.0) continue;
        const Point back = kelvin_point(kelvin_point(z, params), params);
        worst = std::max(worst, std::abs(back.x[0] - z.x[0]) + std::abs(back.y[0] - z.y[0]));
    }
    failures += check(log, "kelvin involution", worst <= 1e-10,
                      "max roundtrip error " + format_double(worst));
    return failures;
}

int verify_operator(std::ostream& log) {
    const GrushinParams params{1, 1, 1.0};
    const GridSpec grid = GridSpec::cube(params, 33, 1.0);
    const DiscreteOperator op = assemble(grid);

    const double ritz = smallest_ritz_value(op, 50);
    int failures = check(log, "operator positive definite", ritz > 0.0,
                         "smallest Ritz value " + format_double(ritz));

    SplitMix64 rng(7);
    Field rhs = sample_field(grid, [&rng](const Point&) { return rng.uniform(); });
    rhs.zero_boundary();
    const Field sol = solve_linear(op, rhs, 1e-12, 20000);
    double min_val = 0.0;
    for (double v : sol.values) min_val = std::min(min_val, v);
    failures += check(log, "discrete maximum principle", min_val >= -1e-12,
                      "min nodal value " + format_double(min_val));
    return failures;
}

int verify_solver(std::ostream& log) {
    const GrushinParams params{1, 1, 1.0};
    const GridSpec grid = GridSpec::cube(params, 65, 6.0);
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
    const SolveReport report = solve_dirichlet(grid, nl, Field(grid), cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < target.values.size(); ++i) {
        err = std::max(err, std::abs(report.field.values[i] - target.values[i]));
    }
    return check(log, "manufactured solve", err <= 1e-6,
                 "sup error " + format_double(err) + " in " +
                     std::to_string(report.newton_iterations) + " Newton steps");
}

}  // namespace

int verify_suite(const std::string& suite, std::ostream& log) {
    int failures = 0;
    bool matched = false;
    if (suite == "identities" || suite == "all") {
        failures += verify_identities(log);
        matched = true;
    }
    if (suite == "kelvin" || suite == "all") {
        failures += verify_kelvin(log);
        matched = true;
    }
    if (suite == "operator" || suite == "all") {
        failures += verify_operator(log);
        matched = true;
    }
    if (suite == "solver" || suite == "all") {
        failures += verify_solver(log);
        matched = true;
    }
    if (!matched) {
        throw Error("unknown verify suite \"" + suite +
                    "\" (expected identities, kelvin, operator, solver, or all)");
    }
    return failures;
}

}  // namespace grushin
