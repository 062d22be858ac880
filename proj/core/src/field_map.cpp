#include "replan/field_map.hpp"

#include <algorithm>
#include <cmath>

#include "replan/errors.hpp"

namespace replan {

namespace {

constexpr int64_t kUnreachable = std::numeric_limits<int64_t>::max() / 4;

// 1D squared distance transform (Felzenszwalb & Huttenlocher): lower
// envelope of parabolas rooted at the sample values.
void transform_1d(const std::vector<int64_t>& f, std::vector<int64_t>& d, int n,
                  std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            int p = v[k];
            s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
                 static_cast<double>(p) * p) /
                (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        int64_t dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Exact 2D squared EDT with the given per-cell source indicator
// (0 at sources, kUnreachable elsewhere). Grid passed for dimensions only.
std::vector<int64_t> squared_edt(const OccupancyGrid& grid, std::vector<int64_t> f) {
    const int w = grid.width, h = grid.height;
    const int n = std::max(w, h);
    std::vector<int64_t> tmp(n), out(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);

    // columns
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) tmp[y] = f[grid.index(x, y)];
        transform_1d(tmp, out, h, v, z);
        for (int y = 0; y < h; ++y) f[grid.index(x, y)] = out[y];
    }
    // rows
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) tmp[x] = f[grid.index(x, y)];
        transform_1d(tmp, out, w, v, z);
        for (int x = 0; x < w; ++x) f[grid.index(x, y)] = out[x];
    }
    return f;
}

std::vector<int64_t> source_indicator(const OccupancyGrid& grid,
                                      const std::vector<uint8_t>& mask) {
    std::vector<int64_t> f(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) f[i] = mask[i] ? 0 : kUnreachable;
    return f;
}

}  // namespace

std::vector<int64_t> compute_squared_distance_map(const OccupancyGrid& grid) {
    if (grid.occupied_count() == 0)
        throw EmptyMapError("distance map undefined: grid has no occupied cell");
    return squared_edt(grid, source_indicator(grid, grid.cells));
}

std::vector<double> compute_distance_map(const OccupancyGrid& grid) {
    auto sq = compute_squared_distance_map(grid);
    std::vector<double> d(sq.size());
    for (size_t i = 0; i < sq.size(); ++i)
        d[i] = grid.resolution * std::sqrt(static_cast<double>(sq[i]));
    return d;
}

std::vector<int> obstacle_components(const OccupancyGrid& grid, int& count) {
    std::vector<int> labels(grid.cells.size(), -1);
    count = 0;
    std::vector<size_t> stack;
    for (int sy = 0; sy < grid.height; ++sy) {
        for (int sx = 0; sx < grid.width; ++sx) {
            if (!grid.occupied(sx, sy) || labels[grid.index(sx, sy)] >= 0) continue;
            int label = count++;
            stack.push_back(grid.index(sx, sy));
            labels[grid.index(sx, sy)] = label;
            while (!stack.empty()) {
                size_t idx = stack.back();
                stack.pop_back();
                int cx = static_cast<int>(idx % grid.width);
                int cy = static_cast<int>(idx / grid.width);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = cx + dx, ny = cy + dy;
                        if (!grid.in_bounds(nx, ny) || !grid.occupied(nx, ny)) continue;
                        size_t nidx = grid.index(nx, ny);
                        if (labels[nidx] < 0) {
                            labels[nidx] = label;
                            stack.push_back(nidx);
                        }
                    }
                }
            }
        }
    }
    return labels;
}

bool gvd_edge_test(int64_t d1_sq, int64_t d2_sq) {
    // sqrt(d2) - sqrt(d1) <= sqrt(2), squared out to stay in integers:
    // d1 + d2 - 2 <= 2 sqrt(d1 d2)  <=>  (d1 + d2 - 2)^2 <= 4 d1 d2 (LHS >= 0)
    const int64_t lhs = d1_sq + d2_sq - 2;
    if (lhs <= 0) return true;
    return lhs * lhs <= 4 * d1_sq * d2_sq;
}

FieldMap::FieldMap(OccupancyGrid grid, FieldParams params)
    : grid_(std::move(grid)), params_(params) {
    if (params_.lambda_v <= 0.0 || params_.d_obs_max <= 0.0)
        throw std::invalid_argument("lambda_v and d_obs_max must be > 0");

    const size_t n = grid_.cells.size();
    const double inf = std::numeric_limits<double>::infinity();
    d_obs_.assign(n, inf);
    d_vor_.assign(n, inf);
    edge_.assign(n, 0);

    basin_ = obstacle_components(grid_, component_count_);
    if (component_count_ == 0) return;  // no obstacles: field is identically 0

    // Nearest and second-nearest-distinct-basin squared distances, built
    // one component at a time so they match brute force exactly.
    std::vector<int64_t> d1_sq(n, kUnreachable), d2_sq(n, kUnreachable);
    std::vector<uint8_t> mask(n);
    for (int comp = 0; comp < component_count_; ++comp) {
        for (size_t i = 0; i < n; ++i) mask[i] = basin_[i] == comp ? 1 : 0;
        auto dist = squared_edt(grid_, source_indicator(grid_, mask));
        for (size_t i = 0; i < n; ++i) {
            if (dist[i] < d1_sq[i]) {
                d2_sq[i] = d1_sq[i];
                d1_sq[i] = dist[i];
                basin_[i] = comp;
            } else if (dist[i] < d2_sq[i]) {
                d2_sq[i] = dist[i];
            }
        }
    }

    for (size_t i = 0; i < n; ++i)
        d_obs_[i] = grid_.resolution * std::sqrt(static_cast<double>(d1_sq[i]));

    if (component_count_ >= 2) {
        for (size_t i = 0; i < n; ++i) {
            if (grid_.cells[i]) continue;  // edges are free cells
            if (gvd_edge_test(d1_sq[i], d2_sq[i])) edge_[i] = 1;
        }
        has_edges_ = std::find(edge_.begin(), edge_.end(), uint8_t{1}) != edge_.end();
    }

    if (has_edges_) {
        auto vor_sq = squared_edt(grid_, source_indicator(grid_, edge_));
        for (size_t i = 0; i < n; ++i)
            d_vor_[i] = grid_.resolution * std::sqrt(static_cast<double>(vor_sq[i]));
    }
}

double FieldMap::interpolate(const std::vector<double>& f, Point2 p) const {
    const double u = (p.x - grid_.origin_x) / grid_.resolution - 0.5;
    const double v = (p.y - grid_.origin_y) / grid_.resolution - 0.5;
    int i0 = static_cast<int>(std::floor(u));
    int j0 = static_cast<int>(std::floor(v));
    const double fx = u - i0;
    const double fy = v - j0;
    auto clampi = [](int i, int hi) { return std::clamp(i, 0, hi); };
    const int i1 = clampi(i0 + 1, grid_.width - 1);
    const int j1 = clampi(j0 + 1, grid_.height - 1);
    i0 = clampi(i0, grid_.width - 1);
    j0 = clampi(j0, grid_.height - 1);
    const double f00 = f[grid_.index(i0, j0)];
    const double f10 = f[grid_.index(i1, j0)];
    const double f01 = f[grid_.index(i0, j1)];
    const double f11 = f[grid_.index(i1, j1)];
    return (1 - fx) * (1 - fy) * f00 + fx * (1 - fy) * f10 + (1 - fx) * fy * f01 +
           fx * fy * f11;
}

double FieldMap::field_at(Point2 p) const {
    if (!grid_.world_in_bounds(p.x, p.y))
        throw OutOfBoundsError("field query outside grid");
    if (component_count_ == 0) return 0.0;

    const double dob = interpolate(d_obs_, p);
    if (dob >= params_.d_obs_max) return 0.0;

    const double a = 1.0 - (dob / params_.d_obs_max) * (dob / params_.d_obs_max);
    const double s = params_.lambda_v / (params_.lambda_v + dob);
    double r = 1.0;
    if (has_edges_) {
        const double dvo = interpolate(d_vor_, p);
        r = (dob + dvo) > 0.0 ? dvo / (dob + dvo) : 1.0;
    }
    return std::clamp(a * s * r, 0.0, 1.0);
}

double FieldMap::field_at_or(Point2 p, double fallback) const noexcept {
    if (!grid_.world_in_bounds(p.x, p.y)) return fallback;
    return field_at(p);
}

double FieldMap::clearance_at_or(Point2 p, double fallback) const noexcept {
    if (!grid_.world_in_bounds(p.x, p.y)) return fallback;
    if (component_count_ == 0) return std::numeric_limits<double>::infinity();
    return interpolate(d_obs_, p);
}

double obstacle_density(const OccupancyGrid& before, const OccupancyGrid& after) {
    if (before.width != after.width || before.height != after.height)
        throw DimensionMismatchError("obstacle_density: grid dimensions differ");
    const double free_before = static_cast<double>(before.free_count());
    if (free_before == 0.0)
        throw NoFreeSpaceError("obstacle_density: no free space in base grid");
    const double free_after = static_cast<double>(after.free_count());
    return 100.0 * (1.0 - free_after / free_before);
}

double narrow_gap_metric(const OccupancyGrid& grid) {
    int count = 0;
    auto labels = obstacle_components(grid, count);
    if (count < 2)
        throw InsufficientObstaclesError("narrow_gap_metric needs >= 2 obstacle components");

    // Boundary cells are enough: the closest pair always lies on component
    // boundaries.
    struct Cell { int x, y, label; };
    std::vector<Cell> boundary;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            if (!grid.occupied(x, y)) continue;
            bool edge = false;
            for (int dy = -1; dy <= 1 && !edge; ++dy)
                for (int dx = -1; dx <= 1 && !edge; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if (!grid.in_bounds(nx, ny) || !grid.occupied(nx, ny)) edge = true;
                }
            if (edge) boundary.push_back({x, y, labels[grid.index(x, y)]});
        }
    }

    std::vector<double> min_sq(static_cast<size_t>(count) * count,
                               std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < boundary.size(); ++i) {
        for (size_t j = i + 1; j < boundary.size(); ++j) {
            const auto& a = boundary[i];
            const auto& b = boundary[j];
            if (a.label == b.label) continue;
            const double dx = (a.x - b.x) * grid.resolution;
            const double dy = (a.y - b.y) * grid.resolution;
            double& slot = min_sq[static_cast<size_t>(std::min(a.label, b.label)) * count +
                                  std::max(a.label, b.label)];
            slot = std::min(slot, dx * dx + dy * dy);
        }
    }

    std::vector<double> gaps;
    for (int a = 0; a < count; ++a)
        for (int b = a + 1; b < count; ++b) {
            double g = min_sq[static_cast<size_t>(a) * count + b];
            if (std::isfinite(g)) gaps.push_back(std::sqrt(g));
        }
    std::sort(gaps.begin(), gaps.end());
    if (gaps.size() == 1) return gaps[0];
    return 0.5 * (gaps[0] + gaps[1]);
}

}  // namespace replan
