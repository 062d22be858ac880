// Brute-force reference implementations the unit and acceptance tests
// check the library against. Everything here is deliberately naive and
// independent of the code paths under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "replan/grid_map.hpp"
#include "replan/kinematics.hpp"
#include "replan/scenario.hpp"

namespace oracles {

// O(n^2) nearest-occupied scan, squared distances in cell units.
inline std::vector<int64_t> brute_distance_sq(const replan::OccupancyGrid& grid) {
    std::vector<std::pair<int, int>> occupied;
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
            if (grid.occupied(x, y)) occupied.emplace_back(x, y);

    std::vector<int64_t> out(grid.cells.size(), std::numeric_limits<int64_t>::max());
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            int64_t best = std::numeric_limits<int64_t>::max();
            for (auto [ox, oy] : occupied) {
                const int64_t dx = x - ox, dy = y - oy;
                best = std::min(best, dx * dx + dy * dy);
            }
            out[grid.index(x, y)] = best;
        }
    }
    return out;
}

// Nearest and second-nearest-distinct-component squared distances for one
// cell, given per-cell component labels of occupied cells. Ties resolve
// to the lowest label.
inline void brute_two_basins(const replan::OccupancyGrid& grid,
                             const std::vector<int>& labels, int label_count, int x,
                             int y, int64_t& d1, int64_t& d2, int& basin1) {
    std::vector<int64_t> min_by_label(label_count, std::numeric_limits<int64_t>::max());
    for (int oy = 0; oy < grid.height; ++oy) {
        for (int ox = 0; ox < grid.width; ++ox) {
            if (!grid.occupied(ox, oy)) continue;
            const int64_t dx = x - ox, dy = y - oy;
            auto& slot = min_by_label[labels[grid.index(ox, oy)]];
            slot = std::min(slot, dx * dx + dy * dy);
        }
    }
    d1 = d2 = std::numeric_limits<int64_t>::max();
    basin1 = -1;
    for (int label = 0; label < label_count; ++label) {
        if (min_by_label[label] < d1) {
            d2 = d1;
            d1 = min_by_label[label];
            basin1 = label;
        } else if (min_by_label[label] < d2) {
            d2 = min_by_label[label];
        }
    }
}

// Footprint oracle: exhaustive point-in-rotated-rectangle test over every
// cell center, rectangle placed like the planner's (rear share behind the
// axle).
inline bool footprint_free_oracle(const replan::Pose2D& pose,
                                  const replan::OccupancyGrid& grid,
                                  const replan::VehicleParams& params,
                                  double rear_share) {
    if (!grid.world_in_bounds(pose.x, pose.y)) return false;
    const double rear = rear_share * params.footprint_length;
    const double front = params.footprint_length - rear;
    const double half_w = 0.5 * params.footprint_width;
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            if (!grid.occupied(ix, iy)) continue;
            const replan::Point2 cc = grid.cell_center(ix, iy);
            const double dx = cc.x - pose.x, dy = cc.y - pose.y;
            const double u = dx * c + dy * s;
            const double v = -dx * s + dy * c;
            if (u >= -rear && u <= front && std::abs(v) <= half_w) return false;
        }
    }
    return true;
}

// Exhaustive BFS over the motion-primitive graph restricted to one travel
// direction; true when any goal-tolerance state is reachable. Node
// deduplication matches the planner's lattice so "provably fails" means
// "fails for this primitive set and binning".
inline bool primitive_bfs_reachable(const replan::OccupancyGrid& grid,
                                    const replan::Pose2D& start,
                                    const replan::Pose2D& goal,
                                    const replan::VehicleParams& params,
                                    replan::Direction direction, double xy_tol,
                                    double theta_tol, int max_nodes = 200000) {
    const auto primitives = replan::control_set(direction, params);
    auto key = [&](const replan::Pose2D& p) {
        int ix, iy;
        grid.world_to_cell(p.x, p.y, ix, iy);
        const int it = static_cast<int>(
            std::floor((replan::normalize_angle(p.theta) + M_PI) / (2.0 * M_PI / 72)));
        return (static_cast<int64_t>(ix) << 40) | (static_cast<int64_t>(iy) << 20) |
               (it >= 72 ? 0 : it);
    };
    auto pose_free = [&](const replan::Pose2D& p) {
        return replan::collision_free(p, grid, params);
    };

    std::vector<int64_t> seen;
    std::queue<replan::Pose2D> frontier;
    frontier.push(start);
    seen.push_back(key(start));
    int popped = 0;
    while (!frontier.empty() && popped < max_nodes) {
        const replan::Pose2D p = frontier.front();
        frontier.pop();
        ++popped;
        if (replan::distance_xy(p, goal) <= xy_tol &&
            std::abs(replan::angle_diff(p.theta, goal.theta)) <= theta_tol)
            return true;
        for (const auto& prim : primitives) {
            const replan::Pose2D next = replan::propagate(p, prim, params);
            bool blocked = false;
            for (const auto& q :
                 replan::sample_arc(p, prim, params, 0.5 * grid.resolution)) {
                if (!pose_free(q)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            const int64_t k = key(next);
            if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
            seen.push_back(k);
            frontier.push(next);
        }
    }
    return false;
}

// Closed-form trapezoid / triangle timing for a straight run.
inline double trapezoid_duration(double length, double v_max, double a_max) {
    if (length < v_max * v_max / a_max) return 2.0 * std::sqrt(length / a_max);
    return length / v_max + v_max / a_max;
}

// Octile (8-connected grid) distance between two points.
inline double octile_distance(replan::Point2 a, replan::Point2 b) {
    const double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    return std::max(dx, dy) + (M_SQRT2 - 1.0) * std::min(dx, dy);
}

inline replan::OccupancyGrid random_grid(uint64_t seed, int w, int h,
                                         double occupancy, double resolution = 1.0) {
    replan::OccupancyGrid grid(w, h, resolution);
    replan::Rng rng(seed);
    for (auto& cell : grid.cells) cell = rng.uniform(0.0, 1.0) < occupancy ? 1 : 0;
    return grid;
}

}  // namespace oracles
