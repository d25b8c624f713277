#pragma once

#include <vector>

#include "grushin/solver.hpp"

namespace grushin {

/// Moving-plane reflection setup: hyperplanes {y_axis = lambda}.
struct ReflectionSpec {
    int axis = 0;  // index into the y block
    std::vector<double> lambdas;
};

/// Least-squares fit of log u against the distance to the origin.
struct DecayFit {
    double rate = 0.0;       // fitted a in c exp(-a (d - inner))
    double amplitude = 0.0;  // fitted c
    double r_squared = 0.0;
    int samples_used = 0;
};

struct BlowupMember {
    double lambda = 0.0;  // lambda_k = M_k^{-(p-1)/2}
    double peak = 0.0;    // M_k = sup u_k
    Field v;              // rescaled field on the reference grid
    double sup_v = 0.0;
    double v_at_origin = 0.0;
};

struct BlowupSequence {
    std::vector<BlowupMember> members;
};

/// Snaps lambda to the nearest half-node multiple on the given global axis,
/// which makes reflections across the plane land on grid nodes exactly.
double snap_to_half_node(const GridSpec& grid, int axis, double lambda);

/// For each lambda, sup over nodes above the plane of
///   u(z) - u(x, 2 lambda - y_axis, rest),
/// restricted to nodes whose reflection stays inside the box. Reflected
/// values are linearly interpolated when the plane is off the half-node
/// lattice. Throws PlaneOutsideGrid when no reflected pair exists.
std::vector<double> reflection_deficit(const Field& u, const ReflectionSpec& spec);

/// Deviation of u from radial symmetry in the y block: the sup of |u(z) - u(z')|
/// over node pairs related by y sign flips and y coordinate swaps (all of which
/// preserve (|x|, |y|) and land on nodes exactly). For y_dim = 1 this is the
/// evenness deficit.
double radial_y_deficit(const Field& u);

/// Fits log u ~ log c - a (d(z,0) - inner_radius) over nodes with
/// d > inner_radius, u > 1e-14, and lying in the inner two thirds of the box
/// (the outer shell is contaminated by the Dirichlet truncation).
/// Throws InsufficientTail when too few nodes qualify.
DecayFit decay_fit(const Field& u, double inner_radius);

/// Rescales each solution by lambda_k = M_k^{-(p-1)/2} onto the fixed
/// reference grid (129 nodes per axis on [-6,6]^dim; 63 per axis for three
/// or more axes), recentered at the maximizer, so that sup v_k = v_k(0) = 1
/// up to interpolation.
/// Throws DegenerateMaximum when a peak is below the trivial-collapse threshold.
BlowupSequence blowup_rescale(const std::vector<SolveReport>& reports, double p,
                              const GrushinParams& params);

/// Removes a constant coefficient h_q from -Delta_gamma v = h_q v^p by the
/// anisotropic stretch x' = sqrt(h_q) x, y' = sqrt(h_q)^{1+gamma} y: returns
/// the same nodal values bound to the stretched grid.
/// Throws NonpositiveCoefficient for h_q <= 0.
Field stretch_normalize(const Field& v, double h_q, const GrushinParams& params);

}  // namespace grushin
