#pragma once

#include <vector>

#include "grushin/closed_form.hpp"

namespace grushin {

/// Regularizer in relative residuals; prevents 0/0 on harmonic tests.
inline constexpr double kResidualEpsilon = 1e-12;

/// The Kelvin transformation of u:
///   w(zt) = d(z,0)^{N_g - 2} u(z),  z = kelvin_point(zt).
/// Applying the transform twice reproduces u where defined.
ScalarFunction kelvin_transform(const ScalarFunction& u, const GrushinParams& params);

struct KelvinSample {
    Point z_tilde;
    double transformed_side;  // Delta_gamma w at z_tilde (finite differences)
    double original_side;     // d^{N_g + 2}(z, 0) Delta_gamma u at z (finite differences)
    double residual;          // |lhs - rhs| / (|rhs| + eps)
};

struct KelvinReport {
    std::vector<KelvinSample> samples;
    double max_residual = 0.0;
    double mean_residual = 0.0;
};

/// Checks the conjugation identity
///   Delta_gamma^{(zt)} w(zt) = d^{N_g + 2}(z, 0) Delta_gamma u(z)
/// at each sample, both sides by central differences in their own
/// coordinates with the closed-form point map between them.
KelvinReport verify_kelvin_identity(const ScalarFunction& u,
                                    const std::vector<Point>& samples, double h,
                                    const GrushinParams& params);

}  // namespace grushin
