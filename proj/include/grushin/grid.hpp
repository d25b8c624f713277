#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "grushin/geometry.hpp"

namespace grushin {

/// Tensor-product node-centered grid over a box, boundary nodes included.
/// Axes are ordered x-block first, then y-block; flat node indices are
/// lexicographic with the first axis most significant (x-major), so the
/// last y axis varies fastest.
struct GridSpec {
    GrushinParams params;
    std::vector<int> dims;     // nodes per axis, >= 3 each
    std::vector<double> lo;    // per-axis lower bounds
    std::vector<double> hi;    // per-axis upper bounds
    std::vector<double> spacing;  // derived, (hi - lo) / (dims - 1)

    GridSpec() = default;
    GridSpec(GrushinParams p, std::vector<int> dims_, std::vector<double> lo_,
             std::vector<double> hi_);

    /// Uniform box [-radius, radius]^(x_dim+y_dim) with n nodes per axis.
    static GridSpec cube(GrushinParams p, int n, double radius);

    /// Dilation-compatible box: [-radius, radius] per x axis and
    /// [-radius^{1+gamma}, radius^{1+gamma}] per y axis, n nodes per axis.
    static GridSpec dilation_box(GrushinParams p, int n, double radius);

    int axes() const { return static_cast<int>(dims.size()); }
    std::size_t node_count() const;
    double coord(int axis, int i) const { return lo[axis] + spacing[axis] * i; }

    std::size_t flat_index(const std::vector<int>& idx) const;
    void unflatten(std::size_t flat, std::vector<int>& idx) const;
    Point point_at(const std::vector<int>& idx) const;
    bool is_boundary(const std::vector<int>& idx) const;

    /// Euclidean norm of the x block at a node.
    double x_norm_at(const std::vector<int>& idx) const;

    bool operator==(const GridSpec& other) const;
    bool operator!=(const GridSpec& other) const { return !(*this == other); }
};

/// Nodal values bound to a grid, stored in flat lexicographic order.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(GridSpec g) : grid(std::move(g)), values(grid.node_count(), 0.0) {}
    Field(GridSpec g, std::vector<double> v);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Multilinear interpolation at arbitrary coordinates; zero outside the box
    /// (homogeneous Dirichlet extension).
    double interpolate(const std::vector<double>& coords) const;

    double max_abs() const;
    void zero_boundary();
};

/// Samples a pointwise function at every node.
Field sample_field(const GridSpec& grid, const std::function<double(const Point&)>& f);

/// Wraps a field as a ScalarFunction via multilinear interpolation
/// (exact at grid nodes).
std::function<double(const Point&)> field_evaluator(const Field& u);

}  // namespace grushin
