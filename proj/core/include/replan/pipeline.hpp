// Resilient planning orchestration: straight-line global route, footprint
// feasibility monitoring, search-and-smooth repair of blocked stretches,
// goal alignment, time parameterization, and the kinematic executor the
// benchmark metrics are computed from.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "replan/hybrid_astar.hpp"
#include "replan/smoother.hpp"

namespace replan {

struct PlanningQuery {
    OccupancyGrid grid;
    Pose2D start;
    Pose2D goal;
    std::vector<Pose2D> waypoints;  // optional global route
};

struct GoalAlignmentConfig {
    double d_i{1.0};                // intermediate-pose offset [m]
    double d_r{0.1};                // arrival threshold [m]
    double activation_radius{3.0};  // engage within this distance of the goal [m]

    void validate() const;
};

/// Intermediate pose one alignment offset behind the goal along the goal
/// heading, plus the arrival test against it.
struct GoalAlignment {
    Pose2D intermediate;
    double d_r;

    bool arrived(const Pose2D& robot) const {
        return distance_xy(robot, intermediate) <= d_r;
    }
};

GoalAlignment goal_alignment(const Pose2D& goal, const GoalAlignmentConfig& cfg);

struct TrajectorySample {
    double t{0.0};
    Pose2D pose;
    double v{0.0};      // signed linear velocity [m/s]
    double omega{0.0};  // angular velocity [rad/s]
};

struct TimedTrajectory {
    std::vector<TrajectorySample> samples;

    double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// Geometric route: polyline with per-segment travel direction and the
/// vertex indices where the vehicle stops (direction switches and declared
/// corner stops; heading may jump only there).
struct DirectedRoute {
    std::vector<Point2> points;
    std::vector<int8_t> seg_dir;  // points.size()-1 entries, +1 fwd / -1 rev
    std::vector<size_t> stops;    // sorted interior vertex indices

    double length() const;
    static DirectedRoute forward(std::vector<Point2> pts);
};

struct RouteSample {
    Point2 pos;
    double heading;  // vehicle heading (tangent, flipped when reversing)
    int8_t dir;
    double arc;      // arc length from the route start
    size_t vertex;   // index of the segment's first vertex
};

/// Poses along the route at spacing <= step (vertices always included).
std::vector<RouteSample> sample_route(const DirectedRoute& route, double step,
                                      double fallback_heading = 0.0);

/// Polyline through start and the surviving waypoints: waypoints within
/// skip_threshold of the start position are skipped, and the goal position
/// terminates the route. No obstacle avoidance.
Waypath global_path(const PlanningQuery& query, double skip_threshold);

struct FeasibilityResult {
    bool feasible{true};
    size_t blocked_sample{0};
    double blocked_arc{0.0};
    Pose2D blocked_pose;
};

/// Walks the route with footprint checks at half grid resolution and
/// reports the first blocked sample.
FeasibilityResult check_feasibility(const DirectedRoute& route, const OccupancyGrid& grid,
                                    const VehicleParams& params,
                                    double fallback_heading = 0.0,
                                    const FieldMap* field = nullptr);
FeasibilityResult check_feasibility(const Waypath& path, const OccupancyGrid& grid,
                                    const VehicleParams& params);

/// Trapezoidal speed profile per stop-to-stop chunk (accelerate at a_max
/// toward v_max, decelerate to rest at chunk ends), sampled every dt.
/// omega follows the local path curvature.
TimedTrajectory time_parameterize(const DirectedRoute& route, const VehicleParams& params,
                                  double dt, double fallback_heading = 0.0);

struct ExecutionTrace {
    double total_distance{0.0};
    double total_time{0.0};
    double control_effort{0.0};  // integral of v^2 + omega^2 over t
    double speed_min{0.0};
    double speed_max{0.0};
};

/// Ideal-tracker execution: effort by trapezoidal integration, distance as
/// sum |v| dt, speed range over samples.
ExecutionTrace execute(const TimedTrajectory& traj);

struct RecoveryReport {
    bool recovery_fired{false};
    int search_invocations{0};
    long expansions_total{0};
    int repair_rounds{0};
    long work_units{0};  // deterministic planning-cost proxy
    double t_global_ms{0.0};
    double t_check_ms{0.0};
    double t_search_ms{0.0};
    double t_smooth_ms{0.0};
    double t_parameterize_ms{0.0};
    double total_ms{0.0};

    /// Deterministic stand-in for the wall-clock total, derived from
    /// work_units; used wherever reproducible output is required.
    double virtual_ms() const { return static_cast<double>(work_units) / 200.0 + 0.05; }
};

struct PlannerSettings {
    VehicleParams vehicle;
    HeuristicWeights heuristic;
    SmoothingWeights smoothing;
    GoalAlignmentConfig alignment;
    FieldParams field;
    SearchLimits limits;
    double skip_threshold{2.0};    // global-path edge skip [m]
    double dt{0.05};               // trajectory sample period [s]
    double resample_spacing{0.25}; // waypoint spacing fed to the smoother [m]

    void validate() const;
};

struct PlanOptions {
    bool enable_recovery{true};
    int max_repairs{10};
};

enum class PlanStatus { Success, NoPath, ExpansionLimit, Infeasible };

struct PlanResult {
    PlanStatus status{PlanStatus::NoPath};
    TimedTrajectory trajectory;
    DirectedRoute route;
    RecoveryReport report;

    bool ok() const { return status == PlanStatus::Success; }
};

/// Full pipeline: global route -> goal alignment -> feasibility loop with
/// search-and-smooth repair of blocked stretches -> time parameterization.
/// The repair search never runs while the current route is feasible.
PlanResult plan_resilient(const PlanningQuery& query, const PlannerSettings& settings,
                          const PlanOptions& options = {});

/// Trajectory text format: header "t,x,y,theta,v,omega" and one
/// comma-separated row per sample at 6 significant digits.
void save_trajectory(const TimedTrajectory& traj, std::ostream& out);
void save_trajectory_file(const TimedTrajectory& traj, const std::string& path);

}  // namespace replan
