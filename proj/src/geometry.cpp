#include "grushin/geometry.hpp"

#include <cmath>
#include <cstddef>

namespace grushin {

void GrushinParams::validate() const {
    if (x_dim < 1 || y_dim < 1) {
        throw Error("GrushinParams: need at least one x and one y coordinate");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error("GrushinParams: gamma must be a positive real");
    }
}

double x_block_norm(const Point& z) {
    double s = 0.0;
    for (double v : z.x) s += v * v;
    return std::sqrt(s);
}

double y_block_norm(const Point& z) {
    double s = 0.0;
    for (double v : z.y) s += v * v;
    return std::sqrt(s);
}

Point point_difference(const Point& z, const Point& w) {
    Point out = z;
    for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] -= w.x[i];
    for (std::size_t j = 0; j < out.y.size(); ++j) out.y[j] -= w.y[j];
    return out;
}

double homogeneous_dimension(const GrushinParams& params) {
    return params.homogeneous_dimension();
}

CriticalExponents critical_exponents(const GrushinParams& params) {
    params.validate();
    const double ng = params.homogeneous_dimension();
    if (ng <= 2.0) {
        throw DegenerateDimension("critical_exponents: homogeneous dimension must exceed 2");
    }
    CriticalExponents e;
    e.sobolev = 2.0 * ng / (ng - 2.0);
    e.serrin_upper = (ng + 2.0) / (ng - 2.0);
    e.halfspace_lower = 1.0 + 4.0 / ng;
    return e;
}

double grushin_distance_to_origin(const Point& z, const GrushinParams& params) {
    const double g = params.gamma;
    const double xn = x_block_norm(z);
    const double yn = y_block_norm(z);
    const double w = 1.0 / ((1.0 + g) * (1.0 + g));
    const double q = w * std::pow(xn, 2.0 + 2.0 * g) + yn * yn;
    return std::pow(q, 1.0 / (2.0 + 2.0 * g));
}

double grushin_distance(const Point& z, const Point& w, const GrushinParams& params) {
    return grushin_distance_to_origin(point_difference(z, w), params);
}

Point dilate(double lambda, const Point& z, const GrushinParams& params) {
    const double ly = std::pow(lambda, 1.0 + params.gamma);
    Point out = z;
    for (double& v : out.x) v *= lambda;
    for (double& v : out.y) v *= ly;
    return out;
}

Point kelvin_point(const Point& z, const GrushinParams& params) {
    const double d = grushin_distance_to_origin(z, params);
    if (d < kOriginThreshold) {
        throw OriginSingularity("kelvin_point: point too close to the origin");
    }
    const double inv_d2 = 1.0 / (d * d);
    const double inv_dp = std::pow(d, -(2.0 + 2.0 * params.gamma));
    Point out = z;
    for (double& v : out.x) v *= inv_d2;
    for (double& v : out.y) v *= inv_dp;
    return out;
}

}  // namespace grushin
