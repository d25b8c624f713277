#include "grushin/grid.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace grushin {

GridSpec::GridSpec(GrushinParams p, std::vector<int> dims_, std::vector<double> lo_,
                   std::vector<double> hi_)
    : params(p), dims(std::move(dims_)), lo(std::move(lo_)), hi(std::move(hi_)) {
    params.validate();
    const std::size_t n_axes = static_cast<std::size_t>(params.topological_dimension());
    if (dims.size() != n_axes || lo.size() != n_axes || hi.size() != n_axes) {
        throw Error("GridSpec: axis count must match x_dim + y_dim");
    }
    spacing.resize(n_axes);
    for (std::size_t a = 0; a < n_axes; ++a) {
        if (dims[a] < 3) throw GridTooSmall("GridSpec: need at least 3 nodes per axis");
        if (!(hi[a] > lo[a])) throw Error("GridSpec: upper bound must exceed lower bound");
        spacing[a] = (hi[a] - lo[a]) / (dims[a] - 1);
    }
    // Desk scale: grids with three or more axes stay within 64^3 nodes.
    if (n_axes >= 3 && node_count() > 64ull * 64ull * 64ull) {
        throw Error("GridSpec: grids with 3+ axes are bounded to 64^3 nodes");
    }
}

GridSpec GridSpec::cube(GrushinParams p, int n, double radius) {
    const int n_axes = p.topological_dimension();
    return GridSpec(p, std::vector<int>(n_axes, n), std::vector<double>(n_axes, -radius),
                    std::vector<double>(n_axes, radius));
}

GridSpec GridSpec::dilation_box(GrushinParams p, int n, double radius) {
    const int n_axes = p.topological_dimension();
    const double ry = std::pow(radius, 1.0 + p.gamma);
    std::vector<double> lo(n_axes), hi(n_axes);
    for (int a = 0; a < n_axes; ++a) {
        const double r = a < p.x_dim ? radius : ry;
        lo[a] = -r;
        hi[a] = r;
    }
    return GridSpec(p, std::vector<int>(n_axes, n), std::move(lo), std::move(hi));
}

std::size_t GridSpec::node_count() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

std::size_t GridSpec::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        flat = flat * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
    }
    return flat;
}

void GridSpec::unflatten(std::size_t flat, std::vector<int>& idx) const {
    idx.resize(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        const std::size_t n = static_cast<std::size_t>(dims[a]);
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
}

Point GridSpec::point_at(const std::vector<int>& idx) const {
    Point z;
    z.x.resize(static_cast<std::size_t>(params.x_dim));
    z.y.resize(static_cast<std::size_t>(params.y_dim));
    for (int a = 0; a < params.x_dim; ++a) z.x[a] = coord(a, idx[a]);
    for (int a = 0; a < params.y_dim; ++a) {
        z.y[a] = coord(params.x_dim + a, idx[params.x_dim + a]);
    }
    return z;
}

bool GridSpec::is_boundary(const std::vector<int>& idx) const {
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (idx[a] == 0 || idx[a] == dims[a] - 1) return true;
    }
    return false;
}

double GridSpec::x_norm_at(const std::vector<int>& idx) const {
    double s = 0.0;
    for (int a = 0; a < params.x_dim; ++a) {
        const double v = coord(a, idx[a]);
        s += v * v;
    }
    return std::sqrt(s);
}

bool GridSpec::operator==(const GridSpec& other) const {
    return params.x_dim == other.params.x_dim && params.y_dim == other.params.y_dim &&
           params.gamma == other.params.gamma && dims == other.dims && lo == other.lo &&
           hi == other.hi;
}

Field::Field(GridSpec g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.node_count()) {
        throw GridMismatch("Field: value count does not match grid");
    }
}

double Field::interpolate(const std::vector<double>& coords) const {
    const int n_axes = grid.axes();
    // Per-axis lower node and fraction; outside the box the Dirichlet
    // extension is identically zero.
    std::vector<int> base(static_cast<std::size_t>(n_axes));
    std::vector<double> frac(static_cast<std::size_t>(n_axes));
    for (int a = 0; a < n_axes; ++a) {
        const double c = coords[static_cast<std::size_t>(a)];
        if (c < grid.lo[a] || c > grid.hi[a]) return 0.0;
        double t = (c - grid.lo[a]) / grid.spacing[a];
        int i = static_cast<int>(std::floor(t));
        if (i >= grid.dims[a] - 1) i = grid.dims[a] - 2;
        if (i < 0) i = 0;
        base[a] = i;
        frac[a] = t - i;
    }
    double acc = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(n_axes));
    const unsigned corners = 1u << n_axes;
    for (unsigned corner = 0; corner < corners; ++corner) {
        double weight = 1.0;
        for (int a = 0; a < n_axes; ++a) {
            const bool high = (corner >> a) & 1u;
            idx[a] = base[a] + (high ? 1 : 0);
            weight *= high ? frac[a] : 1.0 - frac[a];
        }
        if (weight != 0.0) acc += weight * values[grid.flat_index(idx)];
    }
    return acc;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void Field::zero_boundary() {
    std::vector<int> idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        grid.unflatten(i, idx);
        if (grid.is_boundary(idx)) values[i] = 0.0;
    }
}

Field sample_field(const GridSpec& grid, const std::function<double(const Point&)>& f) {
    Field out(grid);
    std::vector<int> idx;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        grid.unflatten(i, idx);
        out.values[i] = f(grid.point_at(idx));
    }
    return out;
}

std::function<double(const Point&)> field_evaluator(const Field& u) {
    return [u](const Point& z) {
        std::vector<double> coords;
        coords.reserve(z.x.size() + z.y.size());
        coords.insert(coords.end(), z.x.begin(), z.x.end());
        coords.insert(coords.end(), z.y.begin(), z.y.end());
        return u.interpolate(coords);
    };
}

}  // namespace grushin
