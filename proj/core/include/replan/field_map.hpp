// Distance transform, generalized Voronoi diagram, and the combined
// clearance field evaluated by the smoother, plus environment metrics.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "replan/grid_map.hpp"

namespace replan {

struct FieldParams {
    double lambda_v{1.0};   // field decay rate [m], > 0
    double d_obs_max{2.5};  // clearance beyond which the field is zero [m], > 0
};

/// Squared Euclidean distance (cell units, cell centers) from every cell
/// to its nearest occupied cell. Exact. Throws EmptyMapError when the
/// grid has no occupied cell.
std::vector<int64_t> compute_squared_distance_map(const OccupancyGrid& grid);

/// Metric version of compute_squared_distance_map: resolution * sqrt(sq).
std::vector<double> compute_distance_map(const OccupancyGrid& grid);

/// 8-connected component label per cell (-1 for free cells).
/// `count` receives the number of components.
std::vector<int> obstacle_components(const OccupancyGrid& grid, int& count);

/// Discrete GVD edge criterion on squared cell distances to the two
/// nearest distinct obstacle components: sqrt(d2) - sqrt(d1) <= sqrt(2),
/// evaluated in exact integer arithmetic.
bool gvd_edge_test(int64_t d1_sq, int64_t d2_sq);

/// Immutable per-grid field data: obstacle clearance, distance to the
/// nearest Voronoi edge, and the potential combining the two. Construction
/// recomputes everything from scratch; queries are thread-safe.
class FieldMap {
public:
    explicit FieldMap(OccupancyGrid grid, FieldParams params = {});

    const OccupancyGrid& grid() const { return grid_; }
    const FieldParams& params() const { return params_; }

    int component_count() const { return component_count_; }
    /// False when fewer than two obstacle basins exist; d_vor is then
    /// +infinity and the field decays as a pure distance penalty.
    bool has_voronoi_edges() const { return has_edges_; }

    double d_obs(int ix, int iy) const { return d_obs_[grid_.index(ix, iy)]; }
    double d_vor(int ix, int iy) const { return d_vor_[grid_.index(ix, iy)]; }
    bool voronoi_edge(int ix, int iy) const { return edge_[grid_.index(ix, iy)] != 0; }
    /// Component id of the nearest obstacle (-1 when the grid is empty).
    int basin(int ix, int iy) const { return basin_[grid_.index(ix, iy)]; }

    const std::vector<double>& d_obs_map() const { return d_obs_; }
    const std::vector<double>& d_vor_map() const { return d_vor_; }

    /// Field value at a world point from bilinearly interpolated d_obs
    /// and d_vor; in [0, 1], zero wherever d_obs >= d_obs_max.
    /// Throws OutOfBoundsError outside the grid.
    double field_at(Point2 p) const;
    /// Like field_at but returns `fallback` outside the grid.
    double field_at_or(Point2 p, double fallback = 1.0) const noexcept;

    /// Bilinear clearance at a world point (meters); +infinity when the
    /// grid has no obstacles, `fallback` outside the grid.
    double clearance_at_or(Point2 p, double fallback = 0.0) const noexcept;

private:
    double interpolate(const std::vector<double>& f, Point2 p) const;

    OccupancyGrid grid_;
    FieldParams params_;
    int component_count_{0};
    bool has_edges_{false};
    std::vector<double> d_obs_;
    std::vector<double> d_vor_;
    std::vector<uint8_t> edge_;
    std::vector<int> basin_;
};

/// Percentage of previously free space consumed by obstacles added
/// between `before` and `after`: 100 * (1 - free_after / free_before).
double obstacle_density(const OccupancyGrid& before, const OccupancyGrid& after);

/// Mean of the two smallest pairwise clearances between distinct obstacle
/// components (center-to-center, meters); a single pair returns its own
/// clearance. Throws InsufficientObstaclesError below two components.
double narrow_gap_metric(const OccupancyGrid& grid);

}  // namespace replan
