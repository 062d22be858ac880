// Static SVG renders of grids, fields, and planned trajectories.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "replan/field_map.hpp"
#include "replan/pipeline.hpp"

namespace replan {

struct SvgOptions {
    double pixels_per_meter{40.0};
    bool draw_voronoi_edges{false};
    const FieldMap* field{nullptr};  // heat overlay when set
};

/// One <polyline> element per trajectory, distinct stroke per index;
/// obstacles as filled rectangles, optional start/goal markers.
void render_svg(const OccupancyGrid& grid, const std::vector<std::vector<Point2>>& trajectories,
                std::ostream& out, const SvgOptions& options = {},
                const Pose2D* start = nullptr, const Pose2D* goal = nullptr);

void render_svg_file(const OccupancyGrid& grid,
                     const std::vector<std::vector<Point2>>& trajectories,
                     const std::string& path, const SvgOptions& options = {},
                     const Pose2D* start = nullptr, const Pose2D* goal = nullptr);

/// Field heat levels plus GVD edge cells.
void render_field_svg(const FieldMap& field, std::ostream& out);
void render_field_svg_file(const FieldMap& field, const std::string& path);

/// Scenario render used by the benchmark: grid, planned route, markers.
void render_plan_svg_file(const OccupancyGrid& grid, const PlanResult& plan,
                          const Pose2D& start, const Pose2D& goal,
                          const std::string& path);

}  // namespace replan
