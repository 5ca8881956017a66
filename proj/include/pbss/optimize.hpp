#pragma once

#include <functional>
#include <vector>

#include "pbss/linalg.hpp"

namespace pbss {

/// Fixed-budget Nelder-Mead settings. The iteration count is exact, not a
/// maximum: statistic acquisitions are the dominant cost, so the cycle
/// budget must be predictable.
struct NelderMeadConfig {
    int iterations = 40;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_step = 0.1;        // fraction of per-dimension domain width
    double sphere_initial_step = 0.3; // initial simplex edge in angle space, radians
};

void validate_nm_config(const NelderMeadConfig& cfg);

using Objective = std::function<double(const Vec&)>;

struct FieldResult {
    Vec best;
    double best_value = 0.0;
    Vec trace;      // best value after each iteration, monotone non-increasing
    int evals = 0;  // actual objective calls (penalized vertices are not called)
};

/// Box-bounded Nelder-Mead from a regular initial simplex anchored at x0.
/// Out-of-bounds vertices receive +inf without touching the objective, so
/// the simplex geometry stays intact and the eval count stays within
/// 2 * iterations + dim + 1.
FieldResult minimize_field(const Objective& objective, const Vec& x0, const Vec& lower,
                           const Vec& upper, const NelderMeadConfig& cfg);

/// Feasible set for a sphere search: {center + radius u : |u| = 1,
/// u orthogonal to every constraint}. Constraints must be mutually
/// orthonormal within 1e-9.
struct SphereDomain {
    Vec center;
    double radius = 0.0;
    std::vector<Vec> orthogonal_to;
};

struct SphereResult {
    Vec direction;           // unit vector, orthogonal to all constraints
    double value = 0.0;      // objective at direction
    Vec trace;               // best objective per iteration (sign as supplied)
    int evals = 0;
};

/// Optimize a function of a unit vector over the constrained sphere. The
/// feasible subspace is parameterized with spherical-coordinate angles, so
/// every evaluated point is exactly feasible. When only one direction
/// remains the two signs are compared directly. init_direction seeds the
/// starting angles; when empty the first feasible basis vector is used.
SphereResult optimize_on_sphere(const Objective& objective, const SphereDomain& dom,
                                const NelderMeadConfig& cfg, bool maximize,
                                const Vec& init_direction = {});

/// Orthonormal basis of the subspace orthogonal to the given (orthonormal)
/// constraint vectors. Columns returned as vectors.
std::vector<Vec> orthogonal_complement_basis(std::size_t dim, const std::vector<Vec>& constraints);

}  // namespace pbss
