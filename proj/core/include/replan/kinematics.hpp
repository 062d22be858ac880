// Car-like (bicycle) vehicle model: arc-based state propagation and the
// admissible control set used by the recovery search.

#pragma once

#include <vector>

#include "replan/geometry.hpp"

namespace replan {

enum class Direction { Forward, Reverse };

/// One control: hold a steering angle while driving a signed arc length.
/// The kinematic image is an exact circular arc (or straight segment).
struct MotionPrimitive {
    double steering{0.0};    // radians, |steering| <= delta_max
    double arc_length{0.0};  // meters, signed, never 0

    Direction direction() const {
        return arc_length > 0.0 ? Direction::Forward : Direction::Reverse;
    }
};

struct VehicleParams {
    double wheelbase{0.65};        // rear-to-front axle distance [m]
    double delta_max{0.4};         // max steering angle [rad]
    double s_max{1.0};             // base arc length [m]
    double r_s{0.3};               // steering sampling resolution (stride fraction)
    double r_a{0.5};               // arc sampling resolution (stride fraction)
    double rho_min{1.6};           // minimum turning radius [m]
    double v_max{1.0};             // speed limit [m/s]
    double a_max{1.0};             // acceleration limit [m/s^2]
    double footprint_length{0.98}; // bounding rectangle [m]
    double footprint_width{0.74};  // bounding rectangle [m]

    /// Throws std::invalid_argument when a bound is violated
    /// (wheelbase > 0, delta_max in (0, pi/2), s_max > 0, resolutions in
    /// (0, 1], rho_min >= wheelbase / tan(delta_max)).
    void validate() const;
};

/// Steering angles below this are treated as straight motion; keeps
/// L / tan(steering) finite.
inline constexpr double kStraightSteeringEpsilon = 1e-6;

/// Exact arc endpoint of driving `primitive` from `state`.
/// Turning case uses k = wheelbase / tan(steering):
///   x' = x + k (sin(theta + s/k) - sin theta)
///   y' = y - k (cos(theta + s/k) - cos theta)
///   theta' = theta + s/k
/// Straight case translates by arc_length along the heading.
Pose2D propagate(const Pose2D& state, const MotionPrimitive& primitive,
                 const VehicleParams& params);

/// Admissible control set for one travel direction: the Cartesian product
/// of steering samples (stride r_s * delta_max, symmetric about zero,
/// endpoints +-delta_max included) and arc samples (stride r_a * s_max
/// over [s_max, 2 s_max], negated for reverse).
std::vector<MotionPrimitive> control_set(Direction direction,
                                         const VehicleParams& params);

/// Poses along the primitive at arc-length intervals <= step, endpoint
/// included, start excluded. Each pose is propagate() with a scaled arc.
std::vector<Pose2D> sample_arc(const Pose2D& state, const MotionPrimitive& primitive,
                               const VehicleParams& params, double step);

}  // namespace replan
