#include "grushin/closed_form.hpp"

#include <cmath>

namespace grushin {

void BarrierSpec::validate() const {
    if (!(rate > 0.0) || !(amplitude > 0.0) || !(radius >= 0.0)) {
        throw Error("BarrierSpec: rate and amplitude must be positive, radius nonnegative");
    }
}

double barrier_value(const Point& z, const BarrierSpec& spec, const GrushinParams& params) {
    const double d = grushin_distance_to_origin(z, params);
    return spec.amplitude * std::exp(-spec.rate * (d - spec.radius));
}

double barrier_grushin_laplacian(const Point& z, const BarrierSpec& spec,
                                 const GrushinParams& params) {
    const double g = params.gamma;
    const double d = grushin_distance_to_origin(z, params);
    if (d < kOriginThreshold) {
        throw OriginSingularity("barrier_grushin_laplacian: undefined at the origin");
    }
    const double a = spec.rate;
    const double psi = barrier_value(z, spec, params);
    const double xg = std::pow(x_block_norm(z), 2.0 * g);
    const double w = 1.0 / ((1.0 + g) * (1.0 + g));
    const double ng = params.homogeneous_dimension();
    return a * a * psi * w * xg * std::pow(d, -2.0 * g)
         - psi * (ng - 1.0) * w * a * xg * std::pow(d, -1.0 - 2.0 * g);
}

double power_grushin_laplacian(const Point& z, double b, const GrushinParams& params) {
    const double g = params.gamma;
    const double d = grushin_distance_to_origin(z, params);
    if (d < kOriginThreshold) {
        throw OriginSingularity("power_grushin_laplacian: undefined at the origin");
    }
    const double ng = params.homogeneous_dimension();
    const double w = 1.0 / ((1.0 + g) * (1.0 + g));
    const double xg = std::pow(x_block_norm(z), 2.0 * g);
    return b * (b - ng + 2.0) * w * xg * std::pow(d, -b - 2.0 - 2.0 * g);
}

namespace {

Point shifted(const Point& z, bool x_block, int axis, double delta) {
    Point out = z;
    if (x_block) {
        out.x[static_cast<std::size_t>(axis)] += delta;
    } else {
        out.y[static_cast<std::size_t>(axis)] += delta;
    }
    return out;
}

void require_smooth(const ScalarFunction& f, const Point& z) {
    if (!f.is_smooth_at(z)) {
        throw OutsideSmoothRegion("fd_grushin_laplacian: stencil leaves the smooth region");
    }
}

}  // namespace

double fd_grushin_laplacian(const ScalarFunction& f, const Point& z, double h,
                            const GrushinParams& params) {
    if (!(h > 0.0)) throw Error("fd_grushin_laplacian: step must be positive");
    require_smooth(f, z);
    const double center = f(z);
    const double inv_h2 = 1.0 / (h * h);

    double lap_x = 0.0;
    for (int i = 0; i < params.x_dim; ++i) {
        const Point zp = shifted(z, true, i, h);
        const Point zm = shifted(z, true, i, -h);
        require_smooth(f, zp);
        require_smooth(f, zm);
        lap_x += (f(zp) - 2.0 * center + f(zm)) * inv_h2;
    }

    double lap_y = 0.0;
    for (int j = 0; j < params.y_dim; ++j) {
        const Point zp = shifted(z, false, j, h);
        const Point zm = shifted(z, false, j, -h);
        require_smooth(f, zp);
        require_smooth(f, zm);
        lap_y += (f(zp) - 2.0 * center + f(zm)) * inv_h2;
    }

    const double xg = std::pow(x_block_norm(z), 2.0 * params.gamma);
    return lap_x + xg * lap_y;
}

double fd_grushin_laplacian_refined(const ScalarFunction& f, const Point& z, double h,
                                    const GrushinParams& params) {
    const double coarse = fd_grushin_laplacian(f, z, h, params);
    const double fine = fd_grushin_laplacian(f, z, 0.5 * h, params);
    return (4.0 * fine - coarse) / 3.0;
}

double degeneracy_weight(const Point& z, const GrushinParams& params) {
    const double g = params.gamma;
    const double d = grushin_distance_to_origin(z, params);
    if (d < kOriginThreshold) {
        throw OriginSingularity("degeneracy_weight: undefined at the origin");
    }
    const double ratio = x_block_norm(z) / d;
    return std::pow(ratio, 2.0 * g) / ((1.0 + g) * (1.0 + g));
}

ScalarFunction barrier_function(const BarrierSpec& spec, const GrushinParams& params) {
    ScalarFunction f;
    f.value = [spec, params](const Point& z) { return barrier_value(z, spec, params); };
    f.smooth_at = [params](const Point& z) {
        return grushin_distance_to_origin(z, params) > kOriginThreshold;
    };
    return f;
}

ScalarFunction radial_power_function(double b, const GrushinParams& params) {
    ScalarFunction f;
    f.value = [b, params](const Point& z) {
        return std::pow(grushin_distance_to_origin(z, params), -b);
    };
    f.smooth_at = [params](const Point& z) {
        return grushin_distance_to_origin(z, params) > kOriginThreshold;
    };
    return f;
}

}  // namespace grushin
