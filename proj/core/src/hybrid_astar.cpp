#include "replan/hybrid_astar.hpp"

#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace replan {

void HeuristicWeights::validate() const {
    if (lambda_f < 0 || lambda_b < 0 || lambda_s < 0 || lambda_sc < 0 || lambda_heu < 0)
        throw std::invalid_argument("heuristic weights must be >= 0");
    if (eta <= 1.0) throw std::invalid_argument("eta must be > 1");
}

double transition_cost(const SearchNode& parent, const MotionPrimitive& primitive,
                       const HeuristicWeights& weights) {
    const double a = primitive.arc_length;
    const double delta = primitive.steering;
    const double phi_t = parent.arrived_by ? parent.arrived_by->steering : 0.0;
    const double direction_penalty = a > 0.0 ? weights.lambda_f : weights.lambda_b;
    return parent.g_score + direction_penalty * std::abs(a) +
           weights.lambda_s * std::abs(delta) * std::abs(a) +
           weights.lambda_sc * std::abs(delta - phi_t);
}

double heuristic_cost(const Pose2D& state, const Pose2D& goal,
                      const HeuristicWeights& weights) {
    return weights.lambda_heu * weights.eta * distance_xy(state, goal);
}

FootprintChecker::FootprintChecker(const OccupancyGrid& grid,
                                   const VehicleParams& params, const FieldMap* field)
    : grid_(grid), field_(field) {
    rear_ = kRearAxleShare * params.footprint_length;
    front_ = params.footprint_length - rear_;
    half_width_ = 0.5 * params.footprint_width;
    circumradius_ = std::hypot(0.5 * params.footprint_length, half_width_);
}

bool FootprintChecker::free(const Pose2D& pose) const {
    if (!grid_.world_in_bounds(pose.x, pose.y)) return false;

    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const double mid = 0.5 * (front_ - rear_);
    const Point2 center{pose.x + mid * c, pose.y + mid * s};

    if (field_ && grid_.world_in_bounds(center.x, center.y)) {
        int cx, cy;
        grid_.world_to_cell(center.x, center.y, cx, cy);
        // exact clearance at the cell center, minus the worst-case offset
        // of the footprint center within the cell
        const double margin = field_->d_obs(cx, cy) - M_SQRT1_2 * grid_.resolution;
        if (margin > circumradius_) return true;
    }

    const double reach = circumradius_ + grid_.resolution;
    int x0, y0, x1, y1;
    grid_.world_to_cell(center.x - reach, center.y - reach, x0, y0);
    grid_.world_to_cell(center.x + reach, center.y + reach, x1, y1);
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, grid_.width - 1);
    y1 = std::min(y1, grid_.height - 1);

    for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
            if (!grid_.occupied(ix, iy)) continue;
            const Point2 cc = grid_.cell_center(ix, iy);
            const double dx = cc.x - pose.x;
            const double dy = cc.y - pose.y;
            const double u = dx * c + dy * s;   // along heading
            const double v = -dx * s + dy * c;  // lateral
            if (u >= -rear_ && u <= front_ && std::abs(v) <= half_width_) return false;
        }
    }
    return true;
}

bool collision_free(const Pose2D& state, const OccupancyGrid& grid,
                    const VehicleParams& params) {
    return FootprintChecker(grid, params).free(state);
}

namespace {

struct OpenEntry {
    double f;
    double h;
    long seq;
    int node;
};

struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        return a.seq > b.seq;
    }
};

constexpr int kThetaBins = 72;  // 5 degree sectors

uint64_t bin_key(const OccupancyGrid& grid, const Pose2D& pose, Direction dir) {
    int ix, iy;
    grid.world_to_cell(pose.x, pose.y, ix, iy);
    const double sector = 2.0 * M_PI / kThetaBins;
    int itheta =
        static_cast<int>(std::floor((normalize_angle(pose.theta) + M_PI) / sector));
    if (itheta >= kThetaBins) itheta = 0;  // theta == pi wraps to the -pi sector
    return static_cast<uint64_t>(ix) | (static_cast<uint64_t>(iy) << 20) |
           (static_cast<uint64_t>(itheta) << 40) |
           (static_cast<uint64_t>(dir == Direction::Reverse ? 1 : 0) << 48);
}

}  // namespace

SearchResult hybrid_astar_search(const OccupancyGrid& grid, const Pose2D& start,
                                 const Pose2D& goal, const VehicleParams& vparams,
                                 const HeuristicWeights& weights,
                                 const SearchLimits& limits, const FieldMap* field) {
    weights.validate();
    vparams.validate();

    SearchResult result;
    FootprintChecker checker(grid, vparams, field);
    if (!checker.free(start) || !checker.free(goal)) return result;  // NoPath

    const auto forward_set = control_set(Direction::Forward, vparams);
    const auto reverse_set = control_set(Direction::Reverse, vparams);
    const double collision_step = 0.5 * grid.resolution;

    std::vector<SearchNode> arena;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::unordered_map<uint64_t, double> best_g;
    std::unordered_set<uint64_t> closed;
    long seq = 0;

    SearchNode root{start, Direction::Forward, std::nullopt, -1, 0.0,
                    heuristic_cost(start, goal, weights)};
    arena.push_back(root);
    best_g[bin_key(grid, start, root.direction)] = 0.0;
    open.push({root.f_score, root.f_score, seq++, 0});

    auto goal_reached = [&](const Pose2D& p) {
        return distance_xy(p, goal) <= limits.goal_xy_tol &&
               std::abs(angle_diff(p.theta, goal.theta)) <= limits.goal_theta_tol;
    };

    while (!open.empty()) {
        const OpenEntry entry = open.top();
        open.pop();
        const SearchNode node = arena[entry.node];
        const uint64_t key = bin_key(grid, node.state, node.direction);
        if (closed.count(key)) continue;
        closed.insert(key);

        if (goal_reached(node.state)) {
            result.status = SearchStatus::Success;
            result.cost = node.g_score;
            for (int i = entry.node; i >= 0; i = arena[i].parent)
                result.path.push_back({arena[i].state, arena[i].arrived_by});
            std::reverse(result.path.begin(), result.path.end());
            return result;
        }

        if (result.expansions >= limits.max_expansions) {
            result.status = SearchStatus::ExpansionLimit;
            return result;
        }
        ++result.expansions;

        for (const auto* primitives : {&forward_set, &reverse_set}) {
            for (const MotionPrimitive& primitive : *primitives) {
                const Pose2D next = propagate(node.state, primitive, vparams);
                const Direction dir = primitive.direction();
                const uint64_t child_key = bin_key(grid, next, dir);
                if (closed.count(child_key)) continue;

                const double g = transition_cost(node, primitive, weights);
                auto it = best_g.find(child_key);
                if (it != best_g.end() && it->second <= g) continue;

                bool blocked = false;
                for (const Pose2D& p :
                     sample_arc(node.state, primitive, vparams, collision_step)) {
                    if (!checker.free(p)) {
                        blocked = true;
                        break;
                    }
                }
                if (blocked) continue;

                const double h = heuristic_cost(next, goal, weights);
                best_g[child_key] = g;
                arena.push_back({next, dir, primitive, entry.node, g, g + h});
                open.push({g + h, h, seq++, static_cast<int>(arena.size()) - 1});
            }
        }
    }
    return result;  // NoPath: open set exhausted
}

}  // namespace replan
