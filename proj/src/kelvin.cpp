#include "grushin/kelvin.hpp"

#include <cmath>

namespace grushin {

ScalarFunction kelvin_transform(const ScalarFunction& u, const GrushinParams& params) {
    const double ng = params.homogeneous_dimension();
    ScalarFunction w;
    w.value = [u, params, ng](const Point& zt) {
        const Point z = kelvin_point(zt, params);
        const double d = grushin_distance_to_origin(z, params);
        return std::pow(d, ng - 2.0) * u(z);
    };
    w.smooth_at = [u, params](const Point& zt) {
        if (grushin_distance_to_origin(zt, params) < kOriginThreshold) return false;
        return u.is_smooth_at(kelvin_point(zt, params));
    };
    return w;
}

KelvinReport verify_kelvin_identity(const ScalarFunction& u,
                                    const std::vector<Point>& samples, double h,
                                    const GrushinParams& params) {
    const double ng = params.homogeneous_dimension();
    const ScalarFunction w = kelvin_transform(u, params);

    KelvinReport report;
    report.samples.reserve(samples.size());
    double sum = 0.0;
    for (const Point& zt : samples) {
        const Point z = kelvin_point(zt, params);
        const double d = grushin_distance_to_origin(z, params);
        KelvinSample s;
        s.z_tilde = zt;
        s.transformed_side = fd_grushin_laplacian(w, zt, h, params);
        s.original_side = std::pow(d, ng + 2.0) * fd_grushin_laplacian(u, z, h, params);
        s.residual = std::abs(s.transformed_side - s.original_side) /
                     (std::abs(s.original_side) + kResidualEpsilon);
        sum += s.residual;
        if (s.residual > report.max_residual) report.max_residual = s.residual;
        report.samples.push_back(s);
    }
    if (!report.samples.empty()) {
        report.mean_residual = sum / static_cast<double>(report.samples.size());
    }
    return report;
}

}  // namespace grushin
