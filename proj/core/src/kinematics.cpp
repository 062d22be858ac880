#include "replan/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace replan {

void VehicleParams::validate() const {
    if (wheelbase <= 0.0) throw std::invalid_argument("wheelbase must be > 0");
    if (delta_max <= 0.0 || delta_max >= M_PI / 2.0)
        throw std::invalid_argument("delta_max must be in (0, pi/2)");
    if (s_max <= 0.0) throw std::invalid_argument("s_max must be > 0");
    if (r_s <= 0.0 || r_s > 1.0) throw std::invalid_argument("r_s must be in (0, 1]");
    if (r_a <= 0.0 || r_a > 1.0) throw std::invalid_argument("r_a must be in (0, 1]");
    if (rho_min < wheelbase / std::tan(delta_max) - 1e-12)
        throw std::invalid_argument("rho_min below kinematic bound wheelbase/tan(delta_max)");
    if (v_max <= 0.0 || a_max <= 0.0)
        throw std::invalid_argument("v_max and a_max must be > 0");
    if (footprint_length <= 0.0 || footprint_width <= 0.0)
        throw std::invalid_argument("footprint dimensions must be > 0");
}

Pose2D propagate(const Pose2D& state, const MotionPrimitive& primitive,
                 const VehicleParams& params) {
    const double s = primitive.arc_length;
    if (std::abs(primitive.steering) < kStraightSteeringEpsilon) {
        return {state.x + s * std::cos(state.theta),
                state.y + s * std::sin(state.theta),
                normalize_angle(state.theta)};
    }
    const double k = params.wheelbase / std::tan(primitive.steering);
    const double heading = state.theta + s / k;
    return {state.x + k * (std::sin(heading) - std::sin(state.theta)),
            state.y - k * (std::cos(heading) - std::cos(state.theta)),
            normalize_angle(heading)};
}

std::vector<MotionPrimitive> control_set(Direction direction,
                                         const VehicleParams& params) {
    const int n_steer = static_cast<int>(std::ceil(1.0 / params.r_s));
    const int n_arc = static_cast<int>(std::ceil(1.0 / params.r_a));

    std::vector<double> steerings;
    steerings.reserve(2 * n_steer + 1);
    for (int k = -n_steer; k <= n_steer; ++k) {
        const double frac = std::min(std::abs(k) * params.r_s, 1.0);
        steerings.push_back((k < 0 ? -frac : frac) * params.delta_max);
    }

    const double sign = direction == Direction::Forward ? 1.0 : -1.0;
    std::vector<MotionPrimitive> primitives;
    primitives.reserve(steerings.size() * (n_arc + 1));
    for (double steering : steerings) {
        for (int j = 0; j <= n_arc; ++j) {
            const double arc = (1.0 + std::min(j * params.r_a, 1.0)) * params.s_max;
            primitives.push_back({steering, sign * arc});
        }
    }
    return primitives;
}

std::vector<Pose2D> sample_arc(const Pose2D& state, const MotionPrimitive& primitive,
                               const VehicleParams& params, double step) {
    if (step <= 0.0) throw std::invalid_argument("step must be > 0");
    const double len = std::abs(primitive.arc_length);
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    std::vector<Pose2D> poses;
    poses.reserve(n);
    for (int i = 1; i <= n; ++i) {
        MotionPrimitive partial{primitive.steering,
                                primitive.arc_length * (static_cast<double>(i) / n)};
        poses.push_back(propagate(state, partial, params));
    }
    return poses;
}

}  // namespace replan
