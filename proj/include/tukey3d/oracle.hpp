#pragma once

// Brute-force enumeration of every tau-critical halfspace, used as ground
// truth for the tuple search on small clouds.

#include <cstddef>
#include <vector>

#include "core.hpp"
#include "region.hpp"

namespace tukey3d {

struct OracleOptions {
    std::size_t max_points = 200;
    bool allow_large = false;
};

/// Tests both orientations of the plane through every triple a < b < c
/// (lexicographic order, + before -). Cost O(n^4).
inline CriticalDirectionSet brute_force_critical_directions(const PointCloud& cloud, const Tau& tau,
                                                            const OracleOptions& options = {}) {
    const std::size_t n = cloud.size();
    if (n > options.max_points && !options.allow_large)
        throw Error(ErrorCode::RefuseTooLarge, "brute-force oracle refuses n = " + std::to_string(n));
    const double tie = cloud.tie_eps();

    std::vector<Halfspace> found;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                const Vec3 w = cross(cloud[b] - cloud[a], cloud[c] - cloud[a]);
                const double len = norm(w);
                if (len == 0.0) continue;
                const Vec3 u = w / len;
                const double level = dot(u, cloud[a]);
                std::size_t below = 0, above = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = dot(u, cloud[i]) - level;
                    if (d < -tie) ++below;
                    else if (d > tie) ++above;
                }
                if (below == tau.floor_ntau) found.push_back({UnitVector3::from_unit(u), level});
                if (above == tau.floor_ntau) found.push_back({-UnitVector3::from_unit(u), -level});
            }
    return dedupe_directions(found, cloud.scale(), n);
}

/// True if every halfspace of `subset` appears in `superset` with normals
/// matching within `normal_tol` per component and offsets within
/// `offset_tol`.
inline bool directions_subset(const CriticalDirectionSet& subset, const CriticalDirectionSet& superset,
                              double normal_tol = 1e-9, double offset_tol = 1e-9) {
    for (const auto& h : subset.halfspaces) {
        bool hit = false;
        for (const auto& g : superset.halfspaces) {
            const Vec3 d = h.normal.vec() - g.normal.vec();
            if (max_abs(d) <= normal_tol && std::abs(h.offset - g.offset) <= offset_tol) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace tukey3d
