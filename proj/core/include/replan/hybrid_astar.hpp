// Recovery trajectory search: A* over exact motion-primitive arcs with
// duplicate detection on a discretized (x, y, theta, direction) lattice.

#pragma once

#include <optional>
#include <vector>

#include "replan/field_map.hpp"
#include "replan/grid_map.hpp"
#include "replan/kinematics.hpp"

namespace replan {

struct HeuristicWeights {
    double lambda_f{1.0};    // forward arc penalty per meter
    double lambda_b{1.0};    // reverse arc penalty per meter
    double lambda_s{0.5};    // steering penalty per rad*meter
    double lambda_sc{0.01};  // steering-change penalty per rad
    double lambda_heu{5.0};  // heuristic weight
    double eta{1.0001};      // tie-breaking factor, > 1

    void validate() const;
};

struct SearchNode {
    Pose2D state;
    Direction direction{Direction::Forward};     // sign of the arriving arc
    std::optional<MotionPrimitive> arrived_by;   // none for the root
    int parent{-1};                              // arena index
    double g_score{0.0};
    double f_score{0.0};
};

/// Cost of expanding `primitive` from `parent`:
///   g_parent + (lambda_f or lambda_b) |a| + lambda_s |delta| |a|
///            + lambda_sc |delta - phi_t|
/// where phi_t is the parent's arriving steering angle (0 for the root)
/// and the forward/backward penalty follows the sign of the arc.
double transition_cost(const SearchNode& parent, const MotionPrimitive& primitive,
                       const HeuristicWeights& weights);

/// Weighted tie-broken Euclidean distance over (x, y):
/// lambda_heu * eta * ||state - goal||.
double heuristic_cost(const Pose2D& state, const Pose2D& goal,
                      const HeuristicWeights& weights);

/// Oriented-rectangle footprint test at a rear-axle pose. The rectangle
/// spans kRearAxleShare * length behind the axle and the rest ahead of it.
/// True iff no occupied cell center falls inside; poses outside the grid
/// are infeasible.
bool collision_free(const Pose2D& state, const OccupancyGrid& grid,
                    const VehicleParams& params);

/// Fraction of footprint_length behind the rear axle.
inline constexpr double kRearAxleShare = 0.25;

/// Footprint collision test with cached geometry. When a FieldMap is
/// supplied, poses whose clearance exceeds the footprint circumradius
/// skip the cell scan (same result, faster).
class FootprintChecker {
public:
    FootprintChecker(const OccupancyGrid& grid, const VehicleParams& params,
                     const FieldMap* field = nullptr);
    bool free(const Pose2D& pose) const;

private:
    const OccupancyGrid& grid_;
    const FieldMap* field_;
    double rear_, front_, half_width_, circumradius_;
};

struct SearchLimits {
    long max_expansions{200000};
    double goal_xy_tol{0.2};      // meters
    double goal_theta_tol{0.1};   // radians
};

enum class SearchStatus { Success, NoPath, ExpansionLimit };

struct PathStep {
    Pose2D pose;
    std::optional<MotionPrimitive> arrived_by;  // none on the first step
};

struct SearchResult {
    SearchStatus status{SearchStatus::NoPath};
    std::vector<PathStep> path;  // starts at the query start pose
    double cost{0.0};
    long expansions{0};

    bool ok() const { return status == SearchStatus::Success; }
};

/// Hybrid A* from start to within the goal tolerances. Both travel
/// directions are offered at every node; each expansion is collision
/// checked along the arc at half grid resolution. Deterministic:
/// priority ties resolve by lower heuristic, then insertion order.
SearchResult hybrid_astar_search(const OccupancyGrid& grid, const Pose2D& start,
                                 const Pose2D& goal, const VehicleParams& vparams,
                                 const HeuristicWeights& weights,
                                 const SearchLimits& limits,
                                 const FieldMap* field = nullptr);

}  // namespace replan
