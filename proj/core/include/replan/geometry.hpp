// Planar pose and point primitives shared by all planner modules.

#pragma once

#include <cmath>

namespace replan {

/// Wrap an angle to (-pi, pi].
inline double normalize_angle(double a) {
    double r = std::fmod(a + M_PI, 2.0 * M_PI);
    if (r <= 0.0) r += 2.0 * M_PI;
    return r - M_PI;
}

/// Smallest signed difference a - b, wrapped to (-pi, pi].
inline double angle_diff(double a, double b) {
    return normalize_angle(a - b);
}

struct Point2 {
    double x{0.0};
    double y{0.0};

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Robot state: position plus heading. Every operation that returns a
/// Pose2D keeps theta in (-pi, pi].
struct Pose2D {
    double x{0.0};
    double y{0.0};
    double theta{0.0};

    Point2 position() const { return {x, y}; }

    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

inline double distance_xy(const Pose2D& a, const Pose2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace replan
