#pragma once

#include <functional>

#include "grushin/geometry.hpp"

namespace grushin {

/// Exponentially decaying barrier Psi(z) = amplitude * exp(-rate * (d(z,0) - radius)).
struct BarrierSpec {
    double rate = 1.0;       // decay rate, > 0
    double amplitude = 1.0;  // value on the sphere d = radius, > 0
    double radius = 0.0;     // offset radius, > 0 in the decay estimates

    void validate() const;
};

/// A pointwise scalar function together with the region where it is smooth
/// enough for finite-difference stencils.
struct ScalarFunction {
    std::function<double(const Point&)> value;
    std::function<bool(const Point&)> smooth_at;  // empty predicate = everywhere

    double operator()(const Point& z) const { return value(z); }
    bool is_smooth_at(const Point& z) const { return !smooth_at || smooth_at(z); }
};

double barrier_value(const Point& z, const BarrierSpec& spec, const GrushinParams& params);

/// Closed form of Delta_gamma Psi away from the origin:
///   a^2 Psi |x|^{2g} d^{-2g} / (1+g)^2  -  (N_g - 1) a Psi |x|^{2g} d^{-1-2g} / (1+g)^2.
/// Throws OriginSingularity at d(z,0) = 0.
double barrier_grushin_laplacian(const Point& z, const BarrierSpec& spec,
                                 const GrushinParams& params);

/// Closed form of Delta_gamma d^{-b}:
///   b (b - N_g + 2) |x|^{2g} d^{-b-2-2g} / (1+g)^2.
/// Vanishes identically for b = 0 and for b = N_g - 2; nonpositive between.
double power_grushin_laplacian(const Point& z, double b, const GrushinParams& params);

/// Second-order central-difference approximation of
///   Delta_x f + |x|^{2 gamma} Delta_y f
/// at z with step h. The independent oracle for all identity checks.
/// Throws OutsideSmoothRegion when the stencil leaves f's smooth region.
double fd_grushin_laplacian(const ScalarFunction& f, const Point& z, double h,
                            const GrushinParams& params);

/// One Richardson extrapolation of fd_grushin_laplacian: (4 L(h/2) - L(h)) / 3.
double fd_grushin_laplacian_refined(const ScalarFunction& f, const Point& z, double h,
                                    const GrushinParams& params);

/// (|x| / d(z,0))^{2 gamma} / (1 + gamma)^2, the weight in the barrier
/// supersolution estimate. Bounded by 1; the sharp bound is
/// (|x|/d)^{2+2gamma} <= (1+gamma)^2.
double degeneracy_weight(const Point& z, const GrushinParams& params);

ScalarFunction barrier_function(const BarrierSpec& spec, const GrushinParams& params);

/// d(z,0)^{-b} as a ScalarFunction, smooth away from the origin.
ScalarFunction radial_power_function(double b, const GrushinParams& params);

}  // namespace grushin
