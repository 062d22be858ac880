#include "replan/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "replan/errors.hpp"

namespace replan {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kPointEpsilon = 1e-9;

// Corner-stop thresholds: splice and alignment junctions must stay under
// the heading-jump budget, anything sharper than kHardTurn stops the
// vehicle regardless of provenance.
constexpr double kJunctionTurn = 0.1;  // radians
constexpr double kHardTurn = 0.5;      // radians

void append_point(std::vector<Point2>& pts, Point2 p) {
    if (pts.empty() || distance(pts.back(), p) > kPointEpsilon) pts.push_back(p);
}

}  // namespace

void GoalAlignmentConfig::validate() const {
    if (d_i <= 0.0 || d_r <= 0.0 || activation_radius <= 0.0)
        throw std::invalid_argument("goal alignment distances must be > 0");
    if (d_r >= d_i) throw std::invalid_argument("d_r must be < d_i");
}

GoalAlignment goal_alignment(const Pose2D& goal, const GoalAlignmentConfig& cfg) {
    cfg.validate();
    return {{goal.x - cfg.d_i * std::cos(goal.theta),
             goal.y - cfg.d_i * std::sin(goal.theta), normalize_angle(goal.theta)},
            cfg.d_r};
}

void PlannerSettings::validate() const {
    vehicle.validate();
    heuristic.validate();
    smoothing.validate();
    alignment.validate();
    if (skip_threshold < 0.0) throw std::invalid_argument("skip_threshold must be >= 0");
    if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");
    if (resample_spacing <= 0.0)
        throw std::invalid_argument("resample_spacing must be > 0");
}

double DirectedRoute::length() const {
    double sum = 0.0;
    for (size_t i = 0; i + 1 < points.size(); ++i)
        sum += distance(points[i], points[i + 1]);
    return sum;
}

DirectedRoute DirectedRoute::forward(std::vector<Point2> pts) {
    DirectedRoute route;
    route.points = std::move(pts);
    if (!route.points.empty())
        route.seg_dir.assign(route.points.size() - 1, int8_t{1});
    return route;
}

std::vector<RouteSample> sample_route(const DirectedRoute& route, double step,
                                      double fallback_heading) {
    if (step <= 0.0) throw std::invalid_argument("step must be > 0");
    std::vector<RouteSample> samples;
    const auto& pts = route.points;
    double arc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double len = distance(pts[i], pts[i + 1]);
        if (len < kPointEpsilon) continue;
        const Point2 d = pts[i + 1] - pts[i];
        const double tangent = std::atan2(d.y, d.x);
        const int8_t dir = route.seg_dir[i];
        const double heading =
            dir > 0 ? tangent : normalize_angle(tangent + M_PI);
        const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int j = 0; j <= n; ++j) {
            const double t = static_cast<double>(j) / n;
            samples.push_back(
                {pts[i] + t * d, heading, dir, arc + t * len, i});
        }
        arc += len;
    }
    if (samples.empty()) {
        const Point2 p = pts.empty() ? Point2{} : pts.front();
        samples.push_back({p, fallback_heading, 1, 0.0, 0});
    }
    return samples;
}

Waypath global_path(const PlanningQuery& query, double skip_threshold) {
    Waypath path;
    append_point(path.points, query.start.position());
    for (const Pose2D& w : query.waypoints) {
        if (distance_xy(w, query.start) <= skip_threshold) continue;  // skip close edge
        append_point(path.points, w.position());
    }
    append_point(path.points, query.goal.position());
    if (path.points.size() == 1) path.points.push_back(path.points.front());
    return path;
}

FeasibilityResult check_feasibility(const DirectedRoute& route, const OccupancyGrid& grid,
                                    const VehicleParams& params, double fallback_heading,
                                    const FieldMap* field) {
    FootprintChecker checker(grid, params, field);
    const auto samples = sample_route(route, 0.5 * grid.resolution, fallback_heading);
    for (size_t i = 0; i < samples.size(); ++i) {
        const Pose2D pose{samples[i].pos.x, samples[i].pos.y, samples[i].heading};
        if (!checker.free(pose)) return {false, i, samples[i].arc, pose};
    }
    return {};
}

FeasibilityResult check_feasibility(const Waypath& path, const OccupancyGrid& grid,
                                    const VehicleParams& params) {
    return check_feasibility(DirectedRoute::forward(path.points), grid, params);
}

TimedTrajectory time_parameterize(const DirectedRoute& route, const VehicleParams& params,
                                  double dt, double fallback_heading) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");
    TimedTrajectory traj;
    const auto& pts = route.points;

    const Pose2D rest_pose{pts.empty() ? 0.0 : pts.front().x,
                           pts.empty() ? 0.0 : pts.front().y, fallback_heading};
    if (pts.size() < 2 || route.length() < kPointEpsilon) {
        traj.samples.push_back({0.0, rest_pose, 0.0, 0.0});
        return traj;
    }

    // Chunk boundaries: direction switches and declared stops.
    std::vector<size_t> bounds{0};
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const bool dir_switch = route.seg_dir[i] != route.seg_dir[i - 1];
        const bool stop = std::binary_search(route.stops.begin(), route.stops.end(), i);
        if (dir_switch || stop) bounds.push_back(i);
    }
    bounds.push_back(pts.size() - 1);

    double t0 = 0.0;
    bool first_chunk = true;
    for (size_t b = 0; b + 1 < bounds.size(); ++b) {
        const size_t lo = bounds[b], hi = bounds[b + 1];

        // Per-segment geometry inside the chunk.
        std::vector<double> cum{0.0}, heading, kappa;
        for (size_t i = lo; i < hi; ++i) {
            const double len = distance(pts[i], pts[i + 1]);
            if (len < kPointEpsilon) continue;
            const Point2 d = pts[i + 1] - pts[i];
            const double tangent = std::atan2(d.y, d.x);
            const double h =
                route.seg_dir[i] > 0 ? tangent : normalize_angle(tangent + M_PI);
            if (heading.empty())
                kappa.push_back(0.0);
            else
                kappa.push_back(angle_diff(h, heading.back()) / len);
            heading.push_back(h);
            cum.push_back(cum.back() + len);
        }
        if (heading.empty()) continue;
        const double total = cum.back();
        const int8_t dir = route.seg_dir[lo];

        // Trapezoidal (or triangular) speed profile over this chunk.
        const double peak = total < params.v_max * params.v_max / params.a_max
                                ? std::sqrt(total * params.a_max)
                                : params.v_max;
        const double t_ramp = peak / params.a_max;
        const double t_cruise = (total - peak * peak / params.a_max) / peak;
        const double duration = 2.0 * t_ramp + std::max(t_cruise, 0.0);

        auto profile = [&](double t, double& s, double& speed) {
            if (t <= t_ramp) {
                speed = params.a_max * t;
                s = 0.5 * params.a_max * t * t;
            } else if (t <= t_ramp + t_cruise) {
                speed = peak;
                s = 0.5 * peak * t_ramp + peak * (t - t_ramp);
            } else {
                const double r = std::max(duration - t, 0.0);
                speed = params.a_max * r;
                s = total - 0.5 * params.a_max * r * r;
            }
        };

        auto emit = [&](double t_local) {
            double s, speed;
            profile(t_local, s, speed);
            s = std::clamp(s, 0.0, total);
            size_t j =
                std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
            j = std::clamp<size_t>(j, 1, cum.size() - 1) - 1;
            const double seg_len = cum[j + 1] - cum[j];
            const double t_seg = seg_len > 0.0 ? (s - cum[j]) / seg_len : 0.0;
            // map back to the vertex range [lo, hi]; segments with zero
            // length were skipped, so walk by cumulative index
            // (j indexes the filtered segments in order)
            size_t vi = lo, seen = 0;
            for (size_t i = lo; i < hi; ++i) {
                if (distance(pts[i], pts[i + 1]) < kPointEpsilon) continue;
                if (seen == j) {
                    vi = i;
                    break;
                }
                ++seen;
            }
            const Point2 pos = pts[vi] + t_seg * (pts[vi + 1] - pts[vi]);
            traj.samples.push_back({t0 + t_local,
                                    {pos.x, pos.y, heading[j]},
                                    dir * speed,
                                    std::abs(speed) * kappa[j]});
        };

        double t_local = first_chunk ? 0.0 : dt;
        for (; t_local < duration - 1e-9; t_local += dt) emit(t_local);
        emit(duration);
        t0 += duration;
        first_chunk = false;
    }

    if (traj.samples.empty()) traj.samples.push_back({0.0, rest_pose, 0.0, 0.0});
    return traj;
}

ExecutionTrace execute(const TimedTrajectory& traj) {
    ExecutionTrace trace;
    const auto& s = traj.samples;
    if (s.empty()) return trace;
    trace.total_time = s.back().t;
    trace.speed_min = s.front().v;
    trace.speed_max = s.front().v;
    for (const auto& sample : s) {
        trace.speed_min = std::min(trace.speed_min, sample.v);
        trace.speed_max = std::max(trace.speed_max, sample.v);
    }
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        const double dt = s[i + 1].t - s[i].t;
        const double u0 = s[i].v * s[i].v + s[i].omega * s[i].omega;
        const double u1 = s[i + 1].v * s[i + 1].v + s[i + 1].omega * s[i + 1].omega;
        trace.control_effort += 0.5 * (u0 + u1) * dt;
        trace.total_distance += std::abs(s[i].v) * dt;
    }
    return trace;
}

namespace {

// One forward- or reverse-only stretch of a recovered search path.
struct RecoveredRun {
    std::vector<Point2> pts;
    int8_t dir{1};
};

std::vector<RecoveredRun> search_to_runs(const SearchResult& sr,
                                         const VehicleParams& params, double step) {
    std::vector<RecoveredRun> runs;
    for (size_t i = 1; i < sr.path.size(); ++i) {
        const MotionPrimitive prim = *sr.path[i].arrived_by;
        const int8_t dir = prim.direction() == Direction::Forward ? 1 : -1;
        const Pose2D& from = sr.path[i - 1].pose;
        if (runs.empty() || runs.back().dir != dir) {
            runs.push_back({{from.position()}, dir});
        }
        for (const Pose2D& p : sample_arc(from, prim, params, step))
            append_point(runs.back().pts, p.position());
    }
    return runs;
}

struct RouteAssembly {
    DirectedRoute route;
    std::vector<uint8_t> junction;  // per-vertex: heading-jump budget applies
};

// Declared stops: junction vertices above the jump budget, any vertex
// above the hard-turn limit.
void rebuild_stops(RouteAssembly& assembly) {
    auto& route = assembly.route;
    route.stops.clear();
    const auto& pts = route.points;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const Point2 din = pts[i] - pts[i - 1];
        const Point2 dout = pts[i + 1] - pts[i];
        if (norm(din) < kPointEpsilon || norm(dout) < kPointEpsilon) continue;
        if (route.seg_dir[i - 1] != route.seg_dir[i]) continue;  // already a cusp
        const double turn = std::abs(
            angle_diff(std::atan2(dout.y, dout.x), std::atan2(din.y, din.x)));
        const double budget = assembly.junction[i] ? kJunctionTurn : kHardTurn;
        if (turn > budget) route.stops.push_back(i);
    }
}

}  // namespace

PlanResult plan_resilient(const PlanningQuery& query, const PlannerSettings& settings,
                          const PlanOptions& options) {
    settings.validate();
    const auto t_start = Clock::now();

    PlanResult result;
    RecoveryReport& report = result.report;

    FieldMap field(query.grid, settings.field);
    FootprintChecker checker(query.grid, settings.vehicle, &field);
    if (!checker.free(query.start) || !checker.free(query.goal)) {
        result.status = PlanStatus::Infeasible;
        report.total_ms = ms_since(t_start);
        return result;
    }

    // Degenerate query: already at the goal.
    if (distance_xy(query.start, query.goal) < kPointEpsilon &&
        std::abs(angle_diff(query.start.theta, query.goal.theta)) < kPointEpsilon) {
        result.status = PlanStatus::Success;
        result.route = DirectedRoute::forward({query.start.position()});
        result.trajectory =
            time_parameterize(result.route, settings.vehicle, settings.dt,
                              query.start.theta);
        report.total_ms = ms_since(t_start);
        report.work_units += 1;
        return result;
    }

    // Global route plus goal alignment: trailing waypoints inside the
    // activation radius give way to the intermediate pose and the final
    // straight approach along the goal heading.
    auto t0 = Clock::now();
    Waypath global = global_path(query, settings.skip_threshold);
    const GoalAlignment alignment = goal_alignment(query.goal, settings.alignment);

    RouteAssembly assembly;
    {
        std::vector<Point2> pts = global.points;
        while (pts.size() > 1 &&
               distance(pts.back(), query.goal.position()) <=
                   settings.alignment.activation_radius + kPointEpsilon)
            pts.pop_back();
        std::vector<uint8_t> junction(pts.size(), 0);
        if (distance(pts.back(), alignment.intermediate.position()) > kPointEpsilon) {
            pts.push_back(alignment.intermediate.position());
            junction.push_back(1);
        }
        if (distance(pts.back(), query.goal.position()) > kPointEpsilon) {
            pts.push_back(query.goal.position());
            junction.push_back(0);
        }
        assembly.route = DirectedRoute::forward(std::move(pts));
        assembly.junction = std::move(junction);
        rebuild_stops(assembly);
    }
    report.t_global_ms = ms_since(t0);

    const double sample_step = 0.5 * query.grid.resolution;
    const double margin = 0.5 * settings.vehicle.s_max;

    for (int round = 0;; ++round) {
        t0 = Clock::now();
        const auto samples =
            sample_route(assembly.route, sample_step, query.start.theta);
        size_t blocked = samples.size();
        for (size_t i = 0; i < samples.size(); ++i) {
            const Pose2D pose{samples[i].pos.x, samples[i].pos.y, samples[i].heading};
            if (!checker.free(pose)) {
                blocked = i;
                break;
            }
        }
        report.t_check_ms += ms_since(t0);
        report.work_units += static_cast<long>(samples.size()) / 10 + 1;

        if (blocked == samples.size()) break;  // feasible

        if (!options.enable_recovery || round >= options.max_repairs) {
            result.status = PlanStatus::Infeasible;
            report.total_ms = ms_since(t_start);
            return result;
        }

        report.recovery_fired = true;
        ++report.repair_rounds;
        const double blocked_arc = samples[blocked].arc;

        // Anchor: last validated sample comfortably before the blockage.
        size_t anchor = 0;
        for (size_t i = blocked; i-- > 0;) {
            if (samples[i].arc <= blocked_arc - margin) {
                anchor = i;
                break;
            }
        }
        const Pose2D anchor_pose =
            anchor == 0 ? query.start
                        : Pose2D{samples[anchor].pos.x, samples[anchor].pos.y,
                                 samples[anchor].heading};

        // Target: first free sample past the blockage with some margin.
        size_t target = samples.size() - 1;
        bool target_found = false;
        for (size_t i = blocked + 1; i < samples.size(); ++i) {
            if (samples[i].arc < blocked_arc + margin) continue;
            const Pose2D pose{samples[i].pos.x, samples[i].pos.y, samples[i].heading};
            if (checker.free(pose)) {
                target = i;
                target_found = true;
                break;
            }
        }
        if (!target_found) target = samples.size() - 1;  // goal pose is free
        const Pose2D target_pose{samples[target].pos.x, samples[target].pos.y,
                                 samples[target].heading};

        t0 = Clock::now();
        ++report.search_invocations;
        SearchResult sr =
            hybrid_astar_search(query.grid, anchor_pose, target_pose, settings.vehicle,
                                settings.heuristic, settings.limits, &field);
        report.t_search_ms += ms_since(t0);
        report.expansions_total += sr.expansions;
        report.work_units += 10 * sr.expansions + 5;

        if (!sr.ok()) {
            result.status = sr.status == SearchStatus::ExpansionLimit
                                ? PlanStatus::ExpansionLimit
                                : PlanStatus::NoPath;
            report.total_ms = ms_since(t_start);
            return result;
        }

        // Convert the search path to waypoint runs (split at cusps), pin
        // the achieved end onto the route, and smooth each run.
        auto runs = search_to_runs(sr, settings.vehicle, 0.5 * settings.resample_spacing);
        if (!runs.empty() && !runs.back().pts.empty())
            runs.back().pts.back() = samples[target].pos;

        t0 = Clock::now();
        for (auto& run : runs) {
            Waypath wp{run.pts};
            if (wp.size() >= 2) wp = resample(wp, settings.resample_spacing);
            if (wp.size() < 3) {
                run.pts = wp.points;
                continue;
            }
            SmoothResult sm = smooth_detailed(wp, field, settings.smoothing);
            report.work_units +=
                static_cast<long>(sm.iterations) * static_cast<long>(wp.size()) / 10;

            DirectedRoute probe;
            probe.points = sm.path.points;
            probe.seg_dir.assign(probe.points.size() - 1, run.dir);
            const bool run_ok =
                check_feasibility(probe, query.grid, settings.vehicle,
                                  query.start.theta, &field)
                    .feasible;
            run.pts = run_ok ? sm.path.points : wp.points;
        }
        report.t_smooth_ms += ms_since(t0);

        // Splice: validated prefix + recovered runs + original suffix.
        RouteAssembly next;
        auto& pts = next.route.points;
        auto& dirs = next.route.seg_dir;
        auto push_vertex = [&](Point2 p, int8_t dir_into, uint8_t junction_flag) {
            if (!pts.empty() && distance(pts.back(), p) <= kPointEpsilon) {
                if (junction_flag && !next.junction.empty())
                    next.junction.back() = 1;
                return;
            }
            if (!pts.empty()) dirs.push_back(dir_into);
            pts.push_back(p);
            next.junction.push_back(junction_flag);
        };

        const auto& old_pts = assembly.route.points;
        const auto& old_dirs = assembly.route.seg_dir;
        const size_t av = samples[anchor].vertex;
        const size_t tv = samples[target].vertex;
        for (size_t i = 0; i <= av; ++i)
            push_vertex(old_pts[i], i > 0 ? old_dirs[i - 1] : int8_t{1},
                        assembly.junction[i]);
        push_vertex(samples[anchor].pos, old_dirs[av], 1);
        for (const auto& run : runs)
            for (const Point2& p : run.pts) push_vertex(p, run.dir, 0);
        if (!pts.empty() && !next.junction.empty()) next.junction.back() = 1;
        for (size_t i = tv + 1; i < old_pts.size(); ++i) {
            const int8_t dir_into = i == tv + 1 ? old_dirs[tv] : old_dirs[i - 1];
            push_vertex(old_pts[i], dir_into, assembly.junction[i]);
        }
        if (pts.size() < 2) {
            pts.push_back(old_pts.back());
            dirs.push_back(1);
            next.junction.push_back(0);
        }
        rebuild_stops(next);
        assembly = std::move(next);
    }

    t0 = Clock::now();
    result.route = assembly.route;
    result.trajectory = time_parameterize(result.route, settings.vehicle, settings.dt,
                                          query.start.theta);
    report.t_parameterize_ms = ms_since(t0);
    report.work_units += static_cast<long>(result.route.points.size()) / 10 + 1;
    report.total_ms = ms_since(t_start);
    result.status = PlanStatus::Success;
    return result;
}

void save_trajectory(const TimedTrajectory& traj, std::ostream& out) {
    out << "t,x,y,theta,v,omega\n";
    char buf[160];
    for (const auto& s : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", s.t,
                      s.pose.x, s.pose.y, s.pose.theta, s.v, s.omega);
        out << buf;
    }
}

void save_trajectory_file(const TimedTrajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    save_trajectory(traj, out);
}

}  // namespace replan
