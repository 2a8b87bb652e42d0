#pragma once

// Exact pointwise halfspace depth in three dimensions.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace tukey3d {

/// Depth as the exact fraction count / n.
struct DepthValue {
    std::size_t count = 0;
    std::size_t n = 0;

    double value() const { return n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n); }
    bool operator==(const DepthValue&) const = default;
};

/// #{i : u.X_i <= u.x + tie_eps}.
inline std::size_t halfspace_count(const Vec3& x, const UnitVector3& u, const PointCloud& cloud) {
    const double ux = dot(u.vec(), x) + cloud.tie_eps();
    std::size_t count = 0;
    for (const auto& p : cloud)
        if (dot(u.vec(), p) <= ux) ++count;
    return count;
}

/// Minimum closed-halfspace count over all directions.
///
/// A direction minimising the closed count is a limit of directions normal
/// to a plane through x and two data points a, b. For every such plane and
/// orientation v, the four limits v + e*d with d in span{a-x, b-x} and
/// sign(d.(a-x)), sign(d.(b-x)) ranging over {+,-}^2 are evaluated: points
/// off the plane keep the sign of v, points on it take the sign of d. Data
/// points within tie_eps of x coincide with it and are always counted.
inline DepthValue tukey_depth(const Vec3& x, const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    const double tie = cloud.tie_eps();
    std::vector<Vec3> y(n);
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = cloud[i] - x;
        if (norm(y[i]) > tie) nonzero.push_back(i);
    }

    std::size_t best = n;
    std::vector<std::size_t> on_plane;
    for (std::size_t ia = 0; ia < nonzero.size(); ++ia) {
        const Vec3& ya = y[nonzero[ia]];
        const double la = norm(ya);
        for (std::size_t ib = ia + 1; ib < nonzero.size(); ++ib) {
            const Vec3& yb = y[nonzero[ib]];
            const double lb = norm(yb);
            const Vec3 w = cross(ya, yb);
            const double lw = norm(w);
            // x, a and b (nearly) collinear: no plane.
            if (lw <= 1e-12 * la * lb) continue;
            const Vec3 v = w / lw;
            // A tie_eps error in x tilts v by about tie * (la + lb) / lw.
            const double tilt = std::min(tie * (la + lb) / lw, 1e-9);

            std::size_t below = 0, above = 0;
            on_plane.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const double d = dot(v, y[i]);
                const double band = tie + tilt * norm(y[i]);
                if (d < -band) ++below;
                else if (d > band) ++above;
                else on_plane.push_back(i);
            }
            if (std::min(below, above) >= best) continue;

            // d = alpha*ya + beta*yb solving d.ya = sa*la, d.yb = sb*lb.
            const double g11 = dot(ya, ya), g12 = dot(ya, yb), g22 = dot(yb, yb);
            const double det = g11 * g22 - g12 * g12;
            for (int sa = -1; sa <= 1; sa += 2)
                for (int sb = -1; sb <= 1; sb += 2) {
                    const double ra = sa * la, rb = sb * lb;
                    const double alpha = (ra * g22 - rb * g12) / det;
                    const double beta = (rb * g11 - ra * g12) / det;
                    const Vec3 dir = alpha * ya + beta * yb;
                    const double ldir = norm(dir);
                    std::size_t on_closed = 0;
                    for (std::size_t i : on_plane) {
                        const double li = norm(y[i]);
                        if (li <= tie || dot(dir, y[i]) <= 1e-12 * ldir * li) ++on_closed;
                    }
                    // Tilting +v or -v by the same dir leaves the on-plane split unchanged.
                    best = std::min(best, std::min(below, above) + on_closed);
                }
        }
    }
    return {best, n};
}

}  // namespace tukey3d
