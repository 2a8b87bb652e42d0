#pragma once

// Randomized incremental 3-D convex hull with conflict lists.
//
// Every point not yet inserted is attached to one hull face it sees. Points
// are inserted in seeded-shuffle order; when a face is removed its conflict
// points are re-attached to the new faces or discarded as interior. All
// visibility decisions go through the exact orientation predicate, so points
// on a face plane are never "visible" and coplanar faces simply stay as
// adjacent triangles.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "predicates.hpp"
#include "rng.hpp"

namespace tukey3d {

struct ConvexHull {
    /// Triangles, counter-clockwise seen from outside.
    std::vector<std::array<int, 3>> faces;
    /// neighbors[f][e] is the face across edge (faces[f][e], faces[f][(e+1)%3]).
    std::vector<std::array<int, 3>> neighbors;
    /// True for input points that are hull vertices.
    std::vector<bool> is_vertex;
};

namespace detail {

class IncrementalHull {
public:
    explicit IncrementalHull(std::span<const Vec3> pts) : p_(pts), assigned_(pts.size(), -1) {}

    ConvexHull run(std::uint64_t seed) {
        const int n = static_cast<int>(p_.size());
        if (n < 4) throw Error(ErrorCode::DualDegeneracy, "hull needs at least 4 points");
        const auto tet = initial_simplex();

        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        Rng rng(seed);
        for (int i = n - 1; i > 0; --i) std::swap(order[i], order[static_cast<int>(rng.below(i + 1))]);

        std::vector<bool> used(n, false);
        for (int v : tet) used[v] = true;
        for (int i : order) {
            if (used[i]) continue;
            for (int f = 0; f < 4; ++f)
                if (sees(f, i)) {
                    attach(i, f);
                    break;
                }
        }
        for (int i : order)
            if (!used[i] && assigned_[i] >= 0) insert(i);
        return collect();
    }

private:
    struct Face {
        std::array<int, 3> v;
        std::array<int, 3> nbr{-1, -1, -1};
        std::vector<int> conflicts;
        bool alive = true;
        std::uint32_t stamp = 0;
    };

    bool sees(int f, int q) const {
        const auto& v = faces_[f].v;
        return predicates::orient3d(p_[v[0]], p_[v[1]], p_[v[2]], p_[q]) > 0;
    }

    void attach(int q, int f) {
        assigned_[q] = f;
        faces_[f].conflicts.push_back(q);
    }

    std::array<int, 4> initial_simplex() {
        const int n = static_cast<int>(p_.size());
        int a = 0;
        for (int i = 1; i < n; ++i)
            if (p_[i].x < p_[a].x) a = i;
        int b = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double d = norm(p_[i] - p_[a]);
            if (d > best) best = d, b = i;
        }
        int c = -1;
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double d = norm(cross(p_[b] - p_[a], p_[i] - p_[a]));
            if (d > best) best = d, c = i;
        }
        int d = -1;
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double v = std::abs(dot(cross(p_[b] - p_[a], p_[c] - p_[a]), p_[i] - p_[a]));
            if (v > best) best = v, d = i;
        }
        int s = (best > 0.0) ? predicates::orient3d(p_[a], p_[b], p_[c], p_[d]) : 0;
        if (s == 0) {
            for (int i = 0; i < n && s == 0; ++i) {
                s = predicates::orient3d(p_[a], p_[b], p_[c], p_[i]);
                if (s != 0) d = i;
            }
        }
        if (s == 0 || a == b || c < 0) throw Error(ErrorCode::DualDegeneracy, "all hull input points are coplanar");
        if (s > 0) std::swap(b, c);
        // Now d lies below (a, b, c).
        add_face({a, b, c});
        add_face({a, d, b});
        add_face({b, d, c});
        add_face({c, d, a});
        link_all();
        return {a, b, c, d};
    }

    int add_face(std::array<int, 3> v) {
        faces_.push_back(Face{v, {}});
        return static_cast<int>(faces_.size()) - 1;
    }

    void link_all() {
        std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
        auto key = [](int u, int w) { return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(w); };
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
            for (int e = 0; e < 3; ++e) edges[key(faces_[f].v[e], faces_[f].v[(e + 1) % 3])] = {f, e};
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
            for (int e = 0; e < 3; ++e) faces_[f].nbr[e] = edges.at(key(faces_[f].v[(e + 1) % 3], faces_[f].v[e])).first;
    }

    void insert(int q) {
        ++stamp_;
        std::vector<int> visible;
        std::vector<int> stack{assigned_[q]};
        faces_[assigned_[q]].stamp = stamp_;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            visible.push_back(f);
            for (int nb : faces_[f].nbr) {
                if (faces_[nb].stamp == stamp_) continue;
                faces_[nb].stamp = stamp_;
                if (sees(nb, q)) stack.push_back(nb);
                else hidden_.push_back(nb);
            }
        }
        // Faces stamped but not visible are reset so `stamp_` means visible.
        for (int h : hidden_) faces_[h].stamp = stamp_ - 1;
        hidden_.clear();

        struct Horizon {
            int a, b, outside;
        };
        std::vector<Horizon> horizon;
        for (int f : visible)
            for (int e = 0; e < 3; ++e) {
                const int nb = faces_[f].nbr[e];
                if (faces_[nb].stamp != stamp_) horizon.push_back({faces_[f].v[e], faces_[f].v[(e + 1) % 3], nb});
            }

        std::unordered_map<int, int> starts_at, ends_at;
        std::vector<int> created;
        created.reserve(horizon.size());
        for (const auto& h : horizon) {
            const int nf = add_face({h.a, h.b, q});
            created.push_back(nf);
            faces_[nf].nbr[0] = h.outside;
            auto& out = faces_[h.outside];
            for (int e = 0; e < 3; ++e)
                if (out.v[e] == h.b && out.v[(e + 1) % 3] == h.a) out.nbr[e] = nf;
            starts_at[h.a] = nf;
            ends_at[h.b] = nf;
        }
        for (int nf : created) {
            auto& face = faces_[nf];
            face.nbr[1] = starts_at.at(face.v[1]);
            face.nbr[2] = ends_at.at(face.v[0]);
        }

        for (int f : visible) {
            faces_[f].alive = false;
            for (int r : faces_[f].conflicts) {
                if (r == q) continue;
                assigned_[r] = -1;
                for (int nf : created)
                    if (sees(nf, r)) {
                        attach(r, nf);
                        break;
                    }
            }
            faces_[f].conflicts.clear();
            faces_[f].conflicts.shrink_to_fit();
        }
        assigned_[q] = -1;
    }

    ConvexHull collect() const {
        ConvexHull hull;
        std::vector<int> remap(faces_.size(), -1);
        for (std::size_t f = 0; f < faces_.size(); ++f)
            if (faces_[f].alive) {
                remap[f] = static_cast<int>(hull.faces.size());
                hull.faces.push_back(faces_[f].v);
            }
        hull.neighbors.resize(hull.faces.size());
        hull.is_vertex.assign(p_.size(), false);
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (!faces_[f].alive) continue;
            const int g = remap[f];
            for (int e = 0; e < 3; ++e) {
                hull.neighbors[g][e] = remap[faces_[f].nbr[e]];
                hull.is_vertex[faces_[f].v[e]] = true;
            }
        }
        return hull;
    }

    std::span<const Vec3> p_;
    std::vector<Face> faces_;
    std::vector<int> assigned_;
    std::vector<int> hidden_;
    std::uint32_t stamp_ = 0;
};

}  // namespace detail

/// Convex hull of at least four non-coplanar points. Points on the boundary
/// but not extreme are not reported as vertices.
inline ConvexHull convex_hull(std::span<const Vec3> points, std::uint64_t seed = 0x5eed) {
    return detail::IncrementalHull(points).run(seed);
}

}  // namespace tukey3d
