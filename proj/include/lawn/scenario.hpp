#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "lawn/geometry.hpp"

namespace lawn {

enum class ObstacleKind : std::uint8_t { Cylinder, Rectangle };

struct ObstacleRef {
    ObstacleKind kind = ObstacleKind::Cylinder;
    int index = 0;
    bool operator==(const ObstacleRef&) const = default;
};

// One urgency tier: steepness per bit/s, target rate in bit/s, sampling weight.
struct UrgencyTier {
    double urgency = 1e-6;
    double target_rate = 2e6;
    double weight = 1.0;
};

struct UserDevice {
    Vec2 position;
    double urgency = 1e-6;      // 1/(bit/s)
    double target_rate = 2e6;   // bit/s
    std::optional<ObstacleRef> hosting_obstacle;
};

// Static world description: flight box, obstacle footprints, ground users.
struct Scenario {
    Workspace workspace;
    std::vector<CylindricalObstacle> cylinders;
    std::vector<RectangularObstacle> rectangles;
    std::vector<UserDevice> users;

    // first obstacle (cylinders before rectangles) whose footprint contains p
    std::optional<ObstacleRef> hosting_obstacle(Vec2 p) const {
        for (int i = 0; i < static_cast<int>(cylinders.size()); ++i)
            if (contains_cyl(p, cylinders[i])) return ObstacleRef{ObstacleKind::Cylinder, i};
        for (int j = 0; j < static_cast<int>(rectangles.size()); ++j)
            if (contains_rect(p, rectangles[j])) return ObstacleRef{ObstacleKind::Rectangle, j};
        return std::nullopt;
    }

    void refresh_hosting_obstacles() {
        for (auto& u : users) u.hosting_obstacle = hosting_obstacle(u.position);
    }

    void validate() const {
        if (!(workspace.x_max > 0.0) || !(workspace.y_max > 0.0))
            throw std::invalid_argument("workspace: horizontal extents must be positive");
        if (!(workspace.h_min > 0.0) || !(workspace.h_min < workspace.h_max))
            throw std::invalid_argument("workspace: need 0 < h_min < h_max");
        for (const auto& o : cylinders) {
            if (!(o.radius > 0.0)) throw std::invalid_argument("cylinder: radius must be positive");
            if (!(o.height > workspace.h_min) || !(o.height < workspace.h_max))
                throw std::invalid_argument("cylinder: height must lie in (h_min, h_max)");
        }
        for (const auto& o : rectangles) {
            if (!(o.half_extents.x > 0.0) || !(o.half_extents.y > 0.0))
                throw std::invalid_argument("rectangle: half extents must be positive");
            if (!(o.height > workspace.h_min) || !(o.height < workspace.h_max))
                throw std::invalid_argument("rectangle: height must lie in (h_min, h_max)");
        }
        for (const auto& u : users) {
            if (!(u.urgency > 0.0)) throw std::invalid_argument("user: urgency must be positive");
            if (!(u.target_rate > 0.0))
                throw std::invalid_argument("user: target rate must be positive");
            if (u.position.x < 0.0 || u.position.x > workspace.x_max || u.position.y < 0.0 ||
                u.position.y > workspace.y_max)
                throw std::invalid_argument("user: position outside workspace footprint");
        }
    }
};

}  // namespace lawn
