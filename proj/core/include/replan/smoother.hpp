// Soft-constraint path refinement: gradient descent on a weighted sum of
// clearance-field, curvature, and displacement-change costs.

#pragma once

#include <vector>

#include "replan/field_map.hpp"
#include "replan/geometry.hpp"

namespace replan {

struct SmoothingWeights {
    double lambda_obs{0.5};
    double lambda_cur{0.3};
    double lambda_path{0.2};
    double k_max{0.625};           // 1 / rho_min [1/m]
    int max_iters{200};
    double initial_step{0.1};      // meters
    double min_step{1e-4};         // meters
    bool hinge_curvature{false};   // penalize only |k| above k_max

    void validate() const;
};

/// Open polyline being refined; the first and last points are anchors the
/// smoother never moves.
struct Waypath {
    std::vector<Point2> points;

    size_t size() const { return points.size(); }
};

/// Sum of the clearance field over all points. Throws OutOfBoundsError
/// when a point lies outside the grid.
double cost_obs(const Waypath& path, const FieldMap& map);

/// Discrete curvature penalty. Per consecutive segment pair, the heading
/// change (wrapped) divided by the first segment's length gives k_p;
/// default penalty (k_p - sign(k_p) k_max)^2 with sign(0) = 0, hinge
/// variant max(|k_p| - k_max, 0)^2. Throws DegenerateSegmentError when
/// consecutive points coincide.
double cost_curvature(const Waypath& path, double k_max, bool hinge = false);

/// Sum of squared second differences of the point sequence.
double cost_path(const Waypath& path);

/// lambda_obs J_obs + lambda_cur J_cur + lambda_path J_path.
double total_cost(const Waypath& path, const FieldMap& map,
                  const SmoothingWeights& weights);

/// Finite-difference step used for smoothing gradients.
inline constexpr double kGradientStep = 1e-6;

/// Gradient of total_cost with respect to point p, by central finite
/// differences of the cost terms that touch p (identical to differencing
/// the full objective).
Point2 smoothing_gradient(const Waypath& path, const FieldMap& map,
                          const SmoothingWeights& weights, size_t p);

struct SmoothResult {
    Waypath path;
    std::vector<double> cost_history;  // accepted costs, starting at the input's
    int iterations{0};
};

/// Gradient descent with backtracking step halving. Endpoints stay
/// bit-identical, accepted costs are non-increasing, and no point is
/// moved into an occupied cell or out of the grid. A path that cannot be
/// improved is returned unchanged.
SmoothResult smooth_detailed(const Waypath& path, const FieldMap& map,
                             const SmoothingWeights& weights);
Waypath smooth(const Waypath& path, const FieldMap& map,
               const SmoothingWeights& weights);

/// Arc-length reparameterization at uniform spacing (the last segment
/// absorbs the remainder); endpoints preserved.
Waypath resample(const Waypath& path, double spacing);

}  // namespace replan
