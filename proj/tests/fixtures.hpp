#pragma once

#include <tukey3d/core.hpp>
#include <tukey3d/region.hpp>
#include <tukey3d/scenario.hpp>

namespace fixtures {

using tukey3d::PointCloud;
using tukey3d::Vec3;

/// (0,0,0), (1,0,0), (0,1,0), (0,0,1).
inline PointCloud tetrahedron() { return PointCloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}); }

inline PointCloud cloud(std::size_t n, std::uint64_t seed, tukey3d::Scenario kind = tukey3d::Scenario::D1) {
    return tukey3d::generate({kind, n, 0.0, 9.0, seed});
}

/// #{i : u.X_i < offset - tie}.
inline std::size_t strictly_below(const PointCloud& c, const tukey3d::Halfspace& h) {
    std::size_t k = 0;
    for (const auto& p : c)
        if (h.slack(p) < -c.tie_eps()) ++k;
    return k;
}

inline std::size_t on_plane(const PointCloud& c, const tukey3d::Halfspace& h) {
    std::size_t k = 0;
    for (const auto& p : c)
        if (std::abs(h.slack(p)) <= c.tie_eps()) ++k;
    return k;
}

}  // namespace fixtures
