#pragma once

#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

/// Distances below this are treated as the origin when inverting.
inline constexpr double kOriginThreshold = 1e-14;

/// Parameters of the Grushin setting on R^{x_dim} x R^{y_dim}.
/// The operator Delta_x + |x|^{2 gamma} Delta_y is elliptic off {x = 0}
/// and degenerates on it; gamma > 0 controls the degeneracy strength.
struct GrushinParams {
    int x_dim = 1;       // number of x coordinates
    int y_dim = 1;       // number of y coordinates
    double gamma = 1.0;  // degeneracy exponent

    double homogeneous_dimension() const { return x_dim + (1.0 + gamma) * y_dim; }
    int topological_dimension() const { return x_dim + y_dim; }

    /// Throws Error on invalid dimensions or gamma <= 0.
    void validate() const;
};

/// A point z = (x, y) with the two coordinate blocks kept separate.
struct Point {
    std::vector<double> x;
    std::vector<double> y;
};

struct CriticalExponents {
    double sobolev;          // 2 N_g / (N_g - 2)
    double serrin_upper;     // (N_g + 2) / (N_g - 2)
    double halfspace_lower;  // 1 + 4 / N_g
};

double x_block_norm(const Point& z);
double y_block_norm(const Point& z);
Point point_difference(const Point& z, const Point& w);

double homogeneous_dimension(const GrushinParams& params);

/// Throws DegenerateDimension when the homogeneous dimension is <= 2.
CriticalExponents critical_exponents(const GrushinParams& params);

/// The anisotropic quasi-distance to the origin,
///   d(z,0) = ((1/(1+gamma)^2) |x|^{2+2gamma} + |y|^2)^{1/(2+2gamma)}.
double grushin_distance_to_origin(const Point& z, const GrushinParams& params);

/// d(z,w) := d(z - w, 0). Symmetric; zero iff z == w.
double grushin_distance(const Point& z, const Point& w, const GrushinParams& params);

/// The anisotropic dilation (x, y) -> (lambda x, lambda^{1+gamma} y).
/// Satisfies d(dilate(lambda, z), 0) = lambda d(z, 0).
Point dilate(double lambda, const Point& z, const GrushinParams& params);

/// Inversion at the unit d-sphere: z -> (x / d^2, y / d^{2+2gamma}).
/// An involution with d(kelvin_point(z), 0) = 1 / d(z, 0).
/// Throws OriginSingularity when d(z, 0) < kOriginThreshold.
Point kelvin_point(const Point& z, const GrushinParams& params);

}  // namespace grushin
