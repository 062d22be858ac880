#include "replan/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "replan/errors.hpp"

namespace replan {

void SmoothingWeights::validate() const {
    if (lambda_obs < 0 || lambda_cur < 0 || lambda_path < 0)
        throw std::invalid_argument("smoothing weights must be >= 0");
    if (k_max <= 0) throw std::invalid_argument("k_max must be > 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (min_step <= 0 || min_step > initial_step)
        throw std::invalid_argument("need 0 < min_step <= initial_step");
}

double cost_obs(const Waypath& path, const FieldMap& map) {
    double sum = 0.0;
    for (const Point2& p : path.points) sum += map.field_at(p);
    return sum;
}

namespace {

// Curvature term for the segment pair starting at point q.
double curvature_term(const std::vector<Point2>& pts, size_t q, double k_max,
                      bool hinge) {
    const Point2 d0 = pts[q + 1] - pts[q];
    const Point2 d1 = pts[q + 2] - pts[q + 1];
    const double len = norm(d0);
    if (len < 1e-12 || norm(d1) < 1e-12)
        throw DegenerateSegmentError("coincident consecutive waypoints");
    const double dtheta =
        normalize_angle(std::atan2(d1.y, d1.x) - std::atan2(d0.y, d0.x));
    const double k = dtheta / len;
    if (hinge) {
        const double excess = std::max(std::abs(k) - k_max, 0.0);
        return excess * excess;
    }
    const double sign = k > 0 ? 1.0 : (k < 0 ? -1.0 : 0.0);
    const double dev = k - sign * k_max;
    return dev * dev;
}

double path_term(const std::vector<Point2>& pts, size_t q) {
    const Point2 d0 = pts[q + 1] - pts[q];
    const Point2 d1 = pts[q + 2] - pts[q + 1];
    const Point2 dd = d1 - d0;
    return dd.x * dd.x + dd.y * dd.y;
}

}  // namespace

double cost_curvature(const Waypath& path, double k_max, bool hinge) {
    const auto& pts = path.points;
    double sum = 0.0;
    for (size_t q = 0; q + 2 < pts.size(); ++q)
        sum += curvature_term(pts, q, k_max, hinge);
    return sum;
}

double cost_path(const Waypath& path) {
    const auto& pts = path.points;
    double sum = 0.0;
    for (size_t q = 0; q + 2 < pts.size(); ++q) sum += path_term(pts, q);
    return sum;
}

double total_cost(const Waypath& path, const FieldMap& map,
                  const SmoothingWeights& weights) {
    return weights.lambda_obs * cost_obs(path, map) +
           weights.lambda_cur * cost_curvature(path, weights.k_max, weights.hinge_curvature) +
           weights.lambda_path * cost_path(path);
}

namespace {

// The cost terms that involve point p; out-of-grid probes cost the field
// maximum so the descent never steps outside.
double local_cost(const Waypath& path, const FieldMap& map,
                  const SmoothingWeights& weights, size_t p) {
    const auto& pts = path.points;
    double sum = weights.lambda_obs * map.field_at_or(pts[p], 1.0);
    const size_t lo = p >= 2 ? p - 2 : 0;
    for (size_t q = lo; q <= p && q + 2 < pts.size(); ++q) {
        sum += weights.lambda_cur *
               curvature_term(pts, q, weights.k_max, weights.hinge_curvature);
        sum += weights.lambda_path * path_term(pts, q);
    }
    return sum;
}

}  // namespace

Point2 smoothing_gradient(const Waypath& path, const FieldMap& map,
                          const SmoothingWeights& weights, size_t p) {
    Waypath probe = path;
    const double h = kGradientStep;
    Point2 g;

    probe.points[p].x = path.points[p].x + h;
    const double xp = local_cost(probe, map, weights, p);
    probe.points[p].x = path.points[p].x - h;
    const double xm = local_cost(probe, map, weights, p);
    probe.points[p].x = path.points[p].x;
    g.x = (xp - xm) / (2.0 * h);

    probe.points[p].y = path.points[p].y + h;
    const double yp = local_cost(probe, map, weights, p);
    probe.points[p].y = path.points[p].y - h;
    const double ym = local_cost(probe, map, weights, p);
    g.y = (yp - ym) / (2.0 * h);
    return g;
}

SmoothResult smooth_detailed(const Waypath& path, const FieldMap& map,
                             const SmoothingWeights& weights) {
    weights.validate();
    SmoothResult result;
    result.path = path;
    if (path.size() < 3) return result;

    double cost = total_cost(result.path, map, weights);  // throws if out of bounds
    result.cost_history.push_back(cost);

    const size_t n = path.size();
    std::vector<Point2> gradient(n);

    for (int iter = 0; iter < weights.max_iters; ++iter) {
        double max_norm = 0.0;
        for (size_t p = 1; p + 1 < n; ++p) {
            gradient[p] = smoothing_gradient(result.path, map, weights, p);
            max_norm = std::max(max_norm, norm(gradient[p]));
        }
        if (max_norm < 1e-12) break;  // stationary

        bool accepted = false;
        for (double step = weights.initial_step; step >= weights.min_step;
             step *= 0.5) {
            Waypath candidate = result.path;
            const double scale = step / max_norm;
            bool safe = true;
            for (size_t p = 1; p + 1 < n; ++p) {
                candidate.points[p] = candidate.points[p] - scale * gradient[p];
                const Point2& c = candidate.points[p];
                if (!map.grid().world_in_bounds(c.x, c.y) ||
                    map.grid().occupied_at(c.x, c.y)) {
                    safe = false;
                    break;
                }
            }
            if (!safe) continue;
            const double candidate_cost = total_cost(candidate, map, weights);
            if (candidate_cost < cost) {
                result.path = std::move(candidate);
                cost = candidate_cost;
                result.cost_history.push_back(cost);
                accepted = true;
                break;
            }
        }
        ++result.iterations;
        if (!accepted) break;
    }
    return result;
}

Waypath smooth(const Waypath& path, const FieldMap& map,
               const SmoothingWeights& weights) {
    return smooth_detailed(path, map, weights).path;
}

Waypath resample(const Waypath& path, double spacing) {
    if (spacing <= 0.0) throw std::invalid_argument("spacing must be > 0");
    const auto& pts = path.points;
    if (pts.size() < 2) return path;

    std::vector<double> cumulative(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i)
        cumulative[i] = cumulative[i - 1] + distance(pts[i - 1], pts[i]);
    const double total = cumulative.back();
    if (total < 1e-12) return Waypath{{pts.front(), pts.back()}};

    Waypath out;
    out.points.push_back(pts.front());
    size_t seg = 1;
    for (double target = spacing; target < total - 1e-9; target += spacing) {
        while (seg < pts.size() && cumulative[seg] < target) ++seg;
        const double seg_len = cumulative[seg] - cumulative[seg - 1];
        const double t = seg_len > 0.0 ? (target - cumulative[seg - 1]) / seg_len : 0.0;
        out.points.push_back(pts[seg - 1] + t * (pts[seg] - pts[seg - 1]));
    }
    out.points.push_back(pts.back());
    return out;
}

}  // namespace replan
