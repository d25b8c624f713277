#include "grushin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grushin {

namespace {

constexpr double kNodeSnapTolerance = 1e-9;

// Value of u at (coords with axis replaced by rc): exact node when rc sits on
// the lattice, linear interpolation along that single axis otherwise.
double axis_reflected_value(const Field& u, const std::vector<int>& idx, int axis, double rc,
                            bool& inside) {
    const GridSpec& grid = u.grid;
    const double t = (rc - grid.lo[axis]) / grid.spacing[axis];
    const double rounded = std::round(t);
    inside = true;
    if (rc < grid.lo[axis] - kNodeSnapTolerance || rc > grid.hi[axis] + kNodeSnapTolerance) {
        inside = false;
        return 0.0;
    }
    std::vector<int> ridx = idx;
    if (std::abs(t - rounded) < kNodeSnapTolerance) {
        ridx[axis] = static_cast<int>(rounded);
        ridx[axis] = std::clamp(ridx[axis], 0, grid.dims[axis] - 1);
        return u.values[grid.flat_index(ridx)];
    }
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, grid.dims[axis] - 2);
    const double frac = t - i0;
    ridx[axis] = i0;
    const double lo_val = u.values[grid.flat_index(ridx)];
    ridx[axis] = i0 + 1;
    const double hi_val = u.values[grid.flat_index(ridx)];
    return (1.0 - frac) * lo_val + frac * hi_val;
}

}  // namespace

double snap_to_half_node(const GridSpec& grid, int axis, double lambda) {
    const double half = 0.5 * grid.spacing[axis];
    return grid.lo[axis] + half * std::round((lambda - grid.lo[axis]) / half);
}

std::vector<double> reflection_deficit(const Field& u, const ReflectionSpec& spec) {
    const GridSpec& grid = u.grid;
    if (spec.axis < 0 || spec.axis >= grid.params.y_dim) {
        throw Error("reflection_deficit: axis index outside the y block");
    }
    const int axis = grid.params.x_dim + spec.axis;

    std::vector<double> deficits;
    deficits.reserve(spec.lambdas.size());
    std::vector<int> idx;
    for (double lambda : spec.lambdas) {
        if (lambda <= grid.lo[axis] - kNodeSnapTolerance ||
            lambda >= grid.hi[axis] + kNodeSnapTolerance) {
            throw PlaneOutsideGrid("reflection_deficit: plane outside the grid box");
        }
        double sup = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            grid.unflatten(i, idx);
            const double c = grid.coord(axis, idx[axis]);
            if (c <= lambda + kNodeSnapTolerance) continue;
            bool inside = false;
            const double reflected = axis_reflected_value(u, idx, axis, 2.0 * lambda - c, inside);
            if (!inside) continue;
            any = true;
            sup = std::max(sup, u.values[i] - reflected);
        }
        if (!any) {
            throw PlaneOutsideGrid("reflection_deficit: no reflected pairs inside the grid");
        }
        deficits.push_back(sup);
    }
    return deficits;
}

double radial_y_deficit(const Field& u) {
    const GridSpec& grid = u.grid;
    const int nx = grid.params.x_dim;
    const int ny = grid.params.y_dim;

    // Which y axes allow exact sign flips (box symmetric about 0) and which
    // pairs allow swaps (identical extent and resolution).
    std::vector<bool> flip_ok(static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        const int a = nx + j;
        flip_ok[j] = std::abs(grid.lo[a] + grid.hi[a]) < kNodeSnapTolerance;
    }
    auto swappable = [&](int ja, int jb) {
        const int a = nx + ja, b = nx + jb;
        return grid.dims[a] == grid.dims[b] &&
               std::abs(grid.lo[a] - grid.lo[b]) < kNodeSnapTolerance &&
               std::abs(grid.hi[a] - grid.hi[b]) < kNodeSnapTolerance;
    };

    double deficit = 0.0;
    std::vector<int> idx, image;
    const unsigned flip_masks = 1u << ny;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        grid.unflatten(i, idx);
        for (unsigned mask = 0; mask < flip_masks; ++mask) {
            bool valid = true;
            image = idx;
            for (int j = 0; j < ny && valid; ++j) {
                if ((mask >> j) & 1u) {
                    if (!flip_ok[j]) valid = false;
                    image[nx + j] = grid.dims[nx + j] - 1 - idx[nx + j];
                }
            }
            if (!valid) continue;
            deficit = std::max(deficit, std::abs(u.values[i] - u.values[grid.flat_index(image)]));
            // Adjacent-swap images on top of each flip pattern cover the
            // dihedral pairs that matter at desk scale (l <= 2 exactly).
            for (int j = 0; j + 1 < ny; ++j) {
                if (!swappable(j, j + 1)) continue;
                std::swap(image[nx + j], image[nx + j + 1]);
                deficit =
                    std::max(deficit, std::abs(u.values[i] - u.values[grid.flat_index(image)]));
                std::swap(image[nx + j], image[nx + j + 1]);
            }
        }
    }
    return deficit;
}

DecayFit decay_fit(const Field& u, double inner_radius) {
    const GridSpec& grid = u.grid;
    std::vector<int> idx;
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        grid.unflatten(i, idx);
        bool kept = true;
        for (int a = 0; a < grid.axes() && kept; ++a) {
            const double center = 0.5 * (grid.lo[a] + grid.hi[a]);
            const double half = 0.5 * (grid.hi[a] - grid.lo[a]);
            kept = std::abs(grid.coord(a, idx[a]) - center) <= (2.0 / 3.0) * half;
        }
        if (!kept || u.values[i] <= 1e-14) continue;
        const double d = grushin_distance_to_origin(grid.point_at(idx), grid.params);
        if (d <= inner_radius) continue;
        ts.push_back(d - inner_radius);
        logs.push_back(std::log(u.values[i]));
    }

    const std::size_t n = ts.size();
    if (n < 16) {
        throw InsufficientTail("decay_fit: only " + std::to_string(n) + " qualifying nodes");
    }
    double t_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t_mean += ts[i];
        y_mean += logs[i];
    }
    t_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = ts[i] - t_mean;
        const double dy = logs[i] - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (stt == 0.0) throw InsufficientTail("decay_fit: degenerate distance spread");

    DecayFit fit;
    const double slope = sty / stt;
    fit.rate = -slope;
    fit.amplitude = std::exp(y_mean - slope * t_mean);
    fit.samples_used = static_cast<int>(n);
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = logs[i] - (y_mean + slope * (ts[i] - t_mean));
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

BlowupSequence blowup_rescale(const std::vector<SolveReport>& reports, double p,
                              const GrushinParams& params) {
    // 129 nodes per axis at desk scale; 3D reference grids drop to 63 per
    // axis to stay inside the 64^3 node budget (odd, so 0 stays a node).
    const int nodes = params.topological_dimension() <= 2 ? 129 : 63;
    const GridSpec reference = GridSpec::cube(params, nodes, 6.0);
    std::vector<int> origin_idx(static_cast<std::size_t>(reference.axes()), nodes / 2);
    const std::size_t origin_flat = reference.flat_index(origin_idx);

    BlowupSequence seq;
    seq.members.reserve(reports.size());
    for (const SolveReport& report : reports) {
        if (!report.converged || report.sup_value < kTrivialCollapseThreshold) {
            throw DegenerateMaximum("blowup_rescale: peak below the trivial-collapse threshold");
        }
        BlowupMember member;
        member.peak = report.sup_value;
        member.lambda = std::pow(report.sup_value, -(p - 1.0) / 2.0);
        const double amp = 1.0 / report.sup_value;  // lambda^{2/(p-1)} exactly
        const double scale_y = std::pow(member.lambda, 1.0 + params.gamma);

        member.v = Field(reference);
        std::vector<int> idx;
        std::vector<double> coords(static_cast<std::size_t>(reference.axes()));
        for (std::size_t i = 0; i < member.v.values.size(); ++i) {
            reference.unflatten(i, idx);
            for (int a = 0; a < params.x_dim; ++a) {
                coords[a] = member.lambda * reference.coord(a, idx[a]) + report.sup_location.x[a];
            }
            for (int j = 0; j < params.y_dim; ++j) {
                const int a = params.x_dim + j;
                coords[a] = scale_y * reference.coord(a, idx[a]) + report.sup_location.y[j];
            }
            member.v.values[i] = amp * report.field.interpolate(coords);
        }
        member.sup_v = *std::max_element(member.v.values.begin(), member.v.values.end());
        member.v_at_origin = member.v.values[origin_flat];
        seq.members.push_back(std::move(member));
    }
    return seq;
}

Field stretch_normalize(const Field& v, double h_q, const GrushinParams& params) {
    if (!(h_q > 0.0)) {
        throw NonpositiveCoefficient("stretch_normalize: coefficient must be positive");
    }
    const double sx = std::sqrt(h_q);
    const double sy = std::pow(sx, 1.0 + params.gamma);
    std::vector<double> lo = v.grid.lo, hi = v.grid.hi;
    for (int a = 0; a < v.grid.axes(); ++a) {
        const double s = a < params.x_dim ? sx : sy;
        lo[a] *= s;
        hi[a] *= s;
    }
    GridSpec stretched(params, v.grid.dims, std::move(lo), std::move(hi));
    return Field(std::move(stretched), v.values);
}

}  // namespace grushin
