// Seeded scenario generation at a target obstacle density, plus the
// grid-based shortest-path reference used by the path-efficiency metric.

#pragma once

#include <cstdint>

#include "replan/grid_map.hpp"
#include "replan/kinematics.hpp"

namespace replan {

/// splitmix64: tiny deterministic generator, identical streams on every
/// platform for a given seed.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform double in [a, b).
    double uniform(double a, double b) {
        return a + (b - a) * ((next() >> 11) * 0x1.0p-53);
    }
};

/// Per-trial seed derivation from a master seed and two indices.
uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b);

struct ScenarioSpec {
    uint64_t seed{0};
    OccupancyGrid base_grid;
    double target_density{30.0};  // percent of free space to consume
    double min_spacing{2.5};      // clearance between obstacles [m]
    Pose2D start;
    Pose2D goal;
    double density_tolerance{2.0};  // percentage points
    int max_attempts{10000};
};

/// Scatter axis-aligned rectangular obstacles (sides uniform in
/// [0.5, 1.5] m) until the density reaches target +- tolerance. Every
/// obstacle keeps min_spacing to every other and to the start/goal
/// footprints. Identical seeds produce identical grids. Throws
/// DensityUnreachableError when the attempt budget runs out first.
OccupancyGrid generate_scenario(const ScenarioSpec& spec, const VehicleParams& params);

/// Shortest-path reference length between start and goal on the grid
/// inflated by half the footprint width: 8-connected Dijkstra with
/// diagonal cost sqrt(2). Throws NoReferencePathError when disconnected.
double reference_path_length(const OccupancyGrid& grid, const Pose2D& start,
                             const Pose2D& goal, const VehicleParams& params);

/// Shortest achievable length divided by the executed length; <= ~1 up to
/// the octile-metric slack.
double path_efficiency(double actual_length, const OccupancyGrid& grid,
                       const Pose2D& start, const Pose2D& goal,
                       const VehicleParams& params);

}  // namespace replan
