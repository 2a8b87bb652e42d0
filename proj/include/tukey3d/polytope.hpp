#pragma once

// Explicit polytope of a halfspace intersection.
//
// With an interior point p and h_i = u_i.p - c_i > 0, the constraint
// u_i.x >= c_i becomes d_i.(x - p) <= 1 for the dual point d_i = -u_i / h_i.
// Facets of the dual hull are primal vertices, dual hull vertices are primal
// facets, and dual points strictly inside the hull are redundant halfspaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hull.hpp"
#include "lp.hpp"
#include "predicates.hpp"
#include "region.hpp"
#include "rng.hpp"

namespace tukey3d {

enum class RegionStatus { Nonempty, Empty, Degenerate };

inline const char* to_string(RegionStatus s) {
    switch (s) {
        case RegionStatus::Nonempty: return "Nonempty";
        case RegionStatus::Empty: return "Empty";
        case RegionStatus::Degenerate: return "Degenerate";
    }
    return "?";
}

struct Facet {
    /// Index into DepthRegion::defining.halfspaces.
    std::size_t halfspace = 0;
    /// Counter-clockwise seen from outside.
    std::vector<std::size_t> vertices;
};

struct DepthRegion {
    Tau tau;
    CriticalDirectionSet defining;
    std::vector<Vec3> vertices;
    std::vector<Facet> facets;
    RegionStatus status = RegionStatus::Empty;
    /// Chebyshev center and radius; the radius is negative for Empty regions.
    Vec3 interior;
    double radius = 0.0;
    /// Set when the dual points had to be perturbed to get a valid complex.
    bool joggled = false;

    double scale() const { return defining.scale; }
    std::size_t facet_count() const { return facets.size(); }
};

struct InteriorPoint {
    RegionStatus status = RegionStatus::Empty;
    Vec3 point;
    double radius = 0.0;
};

/// Chebyshev center classified with interior_eps = 1e-10 * scale.
inline InteriorPoint interior_point(std::span<const Halfspace> halfspaces, double scale = 1.0) {
    const ChebyshevCenter c = chebyshev_center(halfspaces, scale);
    const double eps = 1e-10 * scale;
    InteriorPoint out{RegionStatus::Degenerate, c.center, c.radius};
    if (c.radius > eps) out.status = RegionStatus::Nonempty;
    else if (c.radius < -eps) out.status = RegionStatus::Empty;
    return out;
}

struct PolytopeOptions {
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    /// Joggled retries after the exact dual hull fails validation.
    int joggle_attempts = 3;
    /// Relative perturbation of the dual points per retry.
    double joggle = 1e-12;
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

inline double triple_det(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

/// Vertex-graph adjacency from facet boundaries.
inline std::vector<std::vector<std::size_t>> vertex_graph(const DepthRegion& r) {
    std::vector<std::vector<std::size_t>> adj(r.vertices.size());
    for (const auto& f : r.facets)
        for (std::size_t k = 0; k < f.vertices.size(); ++k) {
            const std::size_t a = f.vertices[k], b = f.vertices[(k + 1) % f.vertices.size()];
            adj[a].push_back(b);
        }
    return adj;
}

/// Why the assembled region is invalid, or an empty string.
inline std::string check_region(const DepthRegion& r) {
    const double tol = 1e-9 * r.scale();
    const auto& hs = r.defining.halfspaces;
    if (r.vertices.size() < 4 || r.facets.size() < 4) return "fewer than 4 vertices or facets";

    std::map<std::pair<std::size_t, std::size_t>, int> directed;
    for (const auto& f : r.facets) {
        if (f.vertices.size() < 3) return "facet with fewer than 3 vertices";
        for (std::size_t k = 0; k < f.vertices.size(); ++k) {
            const std::size_t a = f.vertices[k], b = f.vertices[(k + 1) % f.vertices.size()];
            if (a == b) return "repeated facet vertex";
            if (++directed[{a, b}] > 1) return "edge used twice in the same direction";
            if (std::abs(hs[f.halfspace].slack(r.vertices[a])) > tol) return "facet vertex off its plane";
        }
    }
    for (const auto& [e, cnt] : directed)
        if (!directed.count({e.second, e.first})) return "edge not shared by two facets";
    const long long V = static_cast<long long>(r.vertices.size());
    const long long E = static_cast<long long>(directed.size() / 2);
    const long long F = static_cast<long long>(r.facets.size());
    if (V - E + F != 2) return "Euler characteristic " + std::to_string(V - E + F);

    std::vector<bool> is_facet(hs.size(), false);
    for (const auto& f : r.facets) is_facet[f.halfspace] = true;
    if (hs.size() * r.vertices.size() <= 20'000'000) {
        for (const auto& h : hs)
            for (const auto& v : r.vertices)
                if (h.slack(v) < -tol) return "vertex violates a halfspace";
    } else {
        // Minimum of a linear function over a polytope by descent on the vertex graph.
        const auto adj = vertex_graph(r);
        std::size_t start = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (is_facet[i]) continue;
            std::size_t at = start;
            double val = hs[i].slack(r.vertices[at]);
            for (bool moved = true; moved;) {
                moved = false;
                for (std::size_t nb : adj[at]) {
                    const double s = hs[i].slack(r.vertices[nb]);
                    if (s < val) val = s, at = nb, moved = true;
                }
            }
            if (val < -tol) return "vertex violates a halfspace";
            start = at;
        }
    }
    return {};
}

/// Builds vertices and facets from the hull of (possibly perturbed) dual points.
inline DepthRegion assemble(const DepthRegion& base, const std::vector<Vec3>& dual, const std::vector<double>& h,
                            std::uint64_t seed) {
    const auto& hs = base.defining.halfspaces;
    const double scale = base.scale();
    const Vec3 p = base.interior;
    const ConvexHull hull = convex_hull(dual, seed);

    for (const auto& f : hull.faces)
        if (predicates::orient3d(dual[f[0]], dual[f[1]], dual[f[2]], Vec3{}) >= 0)
            throw Error(ErrorCode::Unbounded, "interior point is not strictly inside every halfspace");

    const std::size_t T = hull.faces.size();
    std::vector<Vec3> z(T);
    std::vector<double> conditioning(T, 0.0);
    std::vector<bool> solved(T, false);
    constexpr double kSliver = 1e-11;
    for (std::size_t t = 0; t < T; ++t) {
        const auto [a, b, c] = hull.faces[t];
        const Vec3 &ua = hs[a].normal.vec(), &ub = hs[b].normal.vec(), &uc = hs[c].normal.vec();
        const double det = triple_det(ua, ub, uc);
        if (std::abs(det) < kSliver) continue;
        // u_i.z = -h_i for the three planes (z = x - p).
        z[t] = -(h[a] * cross(ub, uc) + h[b] * cross(uc, ua) + h[c] * cross(ua, ub)) / det;
        conditioning[t] = std::abs(det);
        solved[t] = true;
    }

    const double tol = 1e-9 * scale;
    auto residual = [&](const Vec3& zz, std::size_t i) { return std::abs(dot(hs[i].normal.vec(), zz) + h[i]); };
    auto max_residual = [&](const Vec3& zz, std::size_t t) {
        const auto& f = hull.faces[t];
        return std::max({residual(zz, f[0]), residual(zz, f[1]), residual(zz, f[2])});
    };

    UnionFind uf(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (!solved[t]) continue;
        for (int e = 0; e < 3; ++e) {
            const int s = hull.neighbors[t][e];
            if (!solved[s] || static_cast<std::size_t>(s) < t) continue;
            if (max_residual(z[t], s) <= tol && max_residual(z[s], t) <= tol) uf.unite(static_cast<int>(t), s);
        }
    }
    // Sliver triangles (three planes of a pencil) join the neighbouring vertex
    // that satisfies their planes best.
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t t = 0; t < T; ++t) {
            if (solved[t]) continue;
            int best = -1;
            double best_res = tol;
            for (int e = 0; e < 3; ++e) {
                const int s = hull.neighbors[t][e];
                if (!solved[s]) continue;
                const double res = max_residual(z[s], t);
                if (res <= best_res) best_res = res, best = s;
            }
            if (best < 0) continue;
            uf.unite(static_cast<int>(t), best);
            z[t] = z[best];
            solved[t] = true;
            progress = true;
        }
    }

    DepthRegion r = base;
    r.vertices.clear();
    r.facets.clear();
    for (std::size_t t = 0; t < T; ++t)
        if (!solved[t]) throw Error(ErrorCode::DualDegeneracy, "unresolved sliver in the dual hull");

    // Best-conditioned triangle represents each group.
    std::vector<int> group_vertex(T, -1), rep(T, -1);
    for (std::size_t t = 0; t < T; ++t) {
        const int g = uf.find(static_cast<int>(t));
        if (rep[g] < 0 || conditioning[t] > conditioning[rep[g]]) rep[g] = static_cast<int>(t);
    }
    for (std::size_t t = 0; t < T; ++t) {
        const int g = uf.find(static_cast<int>(t));
        if (group_vertex[g] < 0) {
            group_vertex[g] = static_cast<int>(r.vertices.size());
            r.vertices.push_back(p + z[rep[g]]);
        }
    }

    // Fan of triangles around each dual hull vertex is one primal facet.
    std::vector<int> some_face(dual.size(), -1);
    for (std::size_t t = 0; t < T; ++t)
        for (int v : hull.faces[t]) some_face[v] = static_cast<int>(t);
    for (std::size_t i = 0; i < dual.size(); ++i) {
        if (some_face[i] < 0) continue;
        std::vector<std::size_t> ring;
        int t = some_face[i];
        do {
            const auto& f = hull.faces[t];
            const int k = f[0] == static_cast<int>(i) ? 0 : (f[1] == static_cast<int>(i) ? 1 : 2);
            const auto v = static_cast<std::size_t>(group_vertex[uf.find(t)]);
            if (ring.empty() || ring.back() != v) ring.push_back(v);
            // Across the edge (v_{k-1}, v_k) is the next triangle around vertex i.
            t = hull.neighbors[t][(k + 2) % 3];
        } while (t != some_face[i]);
        while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
        if (ring.size() < 3) continue;

        Vec3 newell;
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const Vec3& a = r.vertices[ring[k]];
            const Vec3& b = r.vertices[ring[(k + 1) % ring.size()]];
            newell += cross(a - p, b - p);
        }
        if (dot(newell, hs[i].normal.vec()) > 0.0) std::reverse(ring.begin(), ring.end());
        r.facets.push_back({i, std::move(ring)});
    }
    return r;
}

}  // namespace detail

/// Throws std::logic_error if the region has more than n(n-1) facets.
inline void assert_facet_bound(const DepthRegion& r) {
    const std::size_t n = r.defining.n_points;
    if (n > 0 && r.facets.size() > n * (n - 1))
        throw std::logic_error("facet count " + std::to_string(r.facets.size()) + " exceeds n(n-1) = " +
                               std::to_string(n * (n - 1)));
}

/// Explicit polytope of the intersection of `set`. Empty and Degenerate
/// regions carry no vertices or facets.
inline DepthRegion intersect_halfspaces(const CriticalDirectionSet& set, const Tau& tau,
                                        const PolytopeOptions& options = {}) {
    DepthRegion base;
    base.tau = tau;
    base.defining = set;
    const InteriorPoint ip = interior_point(set.halfspaces, set.scale);
    base.status = ip.status;
    base.interior = ip.point;
    base.radius = ip.radius;
    if (ip.status != RegionStatus::Nonempty) return base;

    const auto& hs = set.halfspaces;
    std::vector<double> h(hs.size());
    std::vector<Vec3> dual(hs.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        h[i] = hs[i].slack(ip.point);
        dual[i] = -hs[i].normal.vec() / h[i];
        dmax = std::max(dmax, max_abs(dual[i]));
    }

    std::string why;
    Rng rng(options.seed);
    for (int attempt = 0; attempt <= options.joggle_attempts; ++attempt) {
        std::vector<Vec3> pts = dual;
        if (attempt > 0) {
            const double mag = options.joggle * attempt * dmax;
            for (auto& d : pts) d += Vec3{rng.uniform(-mag, mag), rng.uniform(-mag, mag), rng.uniform(-mag, mag)};
        }
        DepthRegion r;
        try {
            r = detail::assemble(base, pts, h, hash_combine(options.seed, static_cast<std::uint64_t>(attempt)));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DualDegeneracy) throw;
            why = e.what();
            continue;
        }
        why = detail::check_region(r);
        if (why.empty()) {
            r.joggled = attempt > 0;
            assert_facet_bound(r);
            return r;
        }
    }
    throw Error(ErrorCode::DualDegeneracy, "could not assemble a valid polytope: " + why);
}

/// True iff x satisfies every defining halfspace within 1e-9 * scale.
inline bool contains(const DepthRegion& r, const Vec3& x) {
    if (r.status != RegionStatus::Nonempty)
        throw Error(ErrorCode::InvalidQuery, std::string("membership query on a ") + to_string(r.status) + " region");
    const double tol = 1e-9 * r.scale();
    return std::all_of(r.defining.halfspaces.begin(), r.defining.halfspaces.end(),
                       [&](const Halfspace& h) { return h.contains(x, tol); });
}

inline double volume(const DepthRegion& r) {
    if (r.status != RegionStatus::Nonempty)
        throw Error(ErrorCode::InvalidQuery, std::string("volume of a ") + to_string(r.status) + " region");
    Vec3 c;
    for (const auto& v : r.vertices) c += v;
    c = c / static_cast<double>(r.vertices.size());
    double vol = 0.0;
    for (const auto& f : r.facets) {
        const Vec3 a = r.vertices[f.vertices[0]] - c;
        for (std::size_t k = 1; k + 1 < f.vertices.size(); ++k)
            vol += detail::triple_det(a, r.vertices[f.vertices[k]] - c, r.vertices[f.vertices[k + 1]] - c);
    }
    return std::max(vol / 6.0, 0.0);
}

/// Centroid of a facet's vertices.
inline Vec3 facet_centroid(const DepthRegion& r, const Facet& f) {
    Vec3 c;
    for (std::size_t v : f.vertices) c += r.vertices[v];
    return c / static_cast<double>(f.vertices.size());
}

}  // namespace tukey3d
