#pragma once

// Critical-direction search over subscript tuples.
//
// A tuple (i0, j0), i0 > j0, names the line through X_i0 and X_j0. Every plane
// through that line and a third observation X_k is tested at once by sorting
// the polar angles of the other observations around the line; planes leaving
// exactly floor(n*tau) observations strictly on one side are tau-critical. Each
// critical plane found through (i0, j0, k) makes (i0, k) and (j0, k) candidate
// tuples, and the search runs until no candidate tuple is left.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <queue>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core.hpp"

namespace tukey3d {

/// Depth level tau with its integer companions floor(n*tau) and floor(n*tau) + 1.
struct Tau {
    double tau = 0.0;
    std::size_t floor_ntau = 0;
    std::size_t k_tau = 1;

    static Tau make(double tau, std::size_t n) {
        if (!(tau >= 0.0 && tau < 1.0))
            throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1), got " + std::to_string(tau));
        Tau t;
        t.tau = tau;
        // Guard against 0.3 * 10 = 2.9999... style truncation.
        t.floor_ntau = static_cast<std::size_t>(std::floor(static_cast<double>(n) * tau + 1e-9));
        t.k_tau = t.floor_ntau + 1;
        if (t.k_tau > n) throw Error(ErrorCode::InvalidArgument, "k_tau exceeds n");
        return t;
    }

    /// True when n*tau is an integer, in which case floor(n*tau) + 1 > n*tau.
    bool integral(std::size_t n) const {
        const double nt = static_cast<double>(n) * tau;
        return std::abs(nt - std::round(nt)) < 1e-9;
    }
};

/// Visited / pending flags over ordered tuples (i, j), i > j, stored as two
/// n*n bitsets. Pending tuples are handed out in row-major order.
class TupleState {
public:
    explicit TupleState(std::size_t n) : n_(n), visited_((n * n + 63) / 64, 0), pending_((n * n + 63) / 64, 0) {}

    std::size_t n() const { return n_; }
    bool visited(std::size_t i, std::size_t j) const { return test(visited_, index(i, j)); }
    bool pending(std::size_t i, std::size_t j) const { return test(pending_, index(i, j)); }
    bool any_pending() const { return !queue_.empty(); }
    std::size_t pending_count() const { return queue_.size(); }

    /// Marks (i, j) visited and, if it was not visited before, pending.
    /// Returns whether the tuple was newly queued.
    bool enqueue(std::size_t i, std::size_t j) {
        const std::size_t at = index(i, j);
        if (test(visited_, at)) return false;
        set(visited_, at);
        set(pending_, at);
        queue_.push(at);
        return true;
    }

    /// Removes and returns the first pending tuple in row-major order.
    std::pair<std::size_t, std::size_t> pop() {
        const std::size_t at = queue_.top();
        queue_.pop();
        clear(pending_, at);
        return {at / n_, at % n_};
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (!(i > j) || i >= n_) throw Error(ErrorCode::InvalidArgument, "tuples must satisfy n > i > j");
        return i * n_ + j;
    }
    static bool test(const std::vector<std::uint64_t>& b, std::size_t at) { return (b[at >> 6] >> (at & 63)) & 1U; }
    static void set(std::vector<std::uint64_t>& b, std::size_t at) { b[at >> 6] |= (std::uint64_t{1} << (at & 63)); }
    static void clear(std::vector<std::uint64_t>& b, std::size_t at) { b[at >> 6] &= ~(std::uint64_t{1} << (at & 63)); }

    std::size_t n_;
    std::vector<std::uint64_t> visited_;
    std::vector<std::uint64_t> pending_;
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> queue_;
};

struct CriticalDirectionSet {
    std::vector<Halfspace> halfspaces;
    /// Scale of the source cloud; all absolute tolerances are multiples of it.
    double scale = 1.0;
    /// Number of observations in the source cloud (0 if unknown).
    std::size_t n_points = 0;

    std::size_t count() const { return halfspaces.size(); }
    bool empty() const { return halfspaces.empty(); }
};

namespace detail {

inline std::string direction_key(const UnitVector3& u) {
    char buf[96];
    auto clean = [](double c) { return std::abs(c) < 1e-13 ? 0.0 : c; };
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g", clean(u[0]), clean(u[1]), clean(u[2]));
    return buf;
}

}  // namespace detail

/// Removes repeated halfspaces: normals equal after rounding every component
/// to 12 significant digits and offsets within 1e-9 * scale. The first
/// occurrence is kept; opposite normals are distinct keys and never merge.
inline CriticalDirectionSet dedupe_directions(const std::vector<Halfspace>& raw, double scale = 1.0,
                                              std::size_t n_points = 0) {
    CriticalDirectionSet out;
    out.scale = scale;
    out.n_points = n_points;
    std::unordered_map<std::string, std::vector<std::size_t>> seen;
    seen.reserve(raw.size());
    const double offset_tol = 1e-9 * scale;
    for (const auto& h : raw) {
        auto& bucket = seen[detail::direction_key(h.normal)];
        const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t k) {
            return std::abs(out.halfspaces[k].offset - h.offset) <= offset_tol;
        });
        if (dup) continue;
        bucket.push_back(out.halfspaces.size());
        out.halfspaces.push_back(h);
    }
    return out;
}

/// Halfspace through X_a, X_b, X_c with the normal computed from the
/// ascending index triple, so every discovery of a plane is bit-identical.
/// The sign is chosen to agree with `orientation`.
inline Halfspace triple_halfspace(const PointCloud& cloud, std::size_t a, std::size_t b, std::size_t c,
                                  const Vec3& orientation) {
    std::size_t t[3] = {a, b, c};
    std::sort(t, t + 3);
    Vec3 w = cross(cloud[t[1]] - cloud[t[0]], cloud[t[2]] - cloud[t[0]]);
    if (dot(w, orientation) < 0.0) w = -w;
    const UnitVector3 u = UnitVector3::normalize(w);
    return {u, dot(u.vec(), cloud[t[0]])};
}

struct TupleIndex {
    std::size_t i0;
    std::size_t j0;
    bool operator==(const TupleIndex&) const = default;
};

/// Starting tuple from a given direction u0: sort the projections onto u0,
/// take the observation at rank k_tau, and pair it with the observation whose
/// separating plane {s : (X_i - X_{i_k}).s = 0} is closest to u0. Ties go to
/// the lowest index. A projection tied with the pivot raises DegenerateInput.
inline TupleIndex initial_tuple_from_direction(const PointCloud& cloud, const Tau& tau, const UnitVector3& u0) {
    const std::size_t n = cloud.size();
    std::vector<double> proj(n);
    for (std::size_t i = 0; i < n; ++i) proj[i] = dot(u0.vec(), cloud[i]);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
    // Only a tie at the pivot rank makes the ordering ambiguous.
    const std::size_t rank = tau.k_tau - 1;
    const std::size_t pivot = perm[rank];
    if ((rank > 0 && proj[pivot] - proj[perm[rank - 1]] <= cloud.tie_eps()) ||
        (rank + 1 < n && proj[perm[rank + 1]] - proj[pivot] <= cloud.tie_eps()))
        throw Error(ErrorCode::DegenerateInput, "tied projections at the pivot rank");

    std::size_t best = n;
    double best_dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == pivot) continue;
        const Vec3 d = cloud[i] - cloud[pivot];
        const double dist = std::abs(dot(d, u0.vec())) / norm(d);
        if (best == n || dist < best_dist * (1.0 - 1e-12)) {
            best = i;
            best_dist = dist;
        }
    }
    return {std::max(best, pivot), std::min(best, pivot)};
}

/// Seeded random starting tuple; redraws the direction (up to 100 times)
/// while the pivot projection is tied.
inline TupleIndex initial_tuple(const PointCloud& cloud, const Tau& tau, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vec3 g{rng.normal(), rng.normal(), rng.normal()};
        if (norm(g) < 1e-6) continue;
        try {
            return initial_tuple_from_direction(cloud, tau, UnitVector3::normalize(g));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateInput) throw;
        }
    }
    throw Error(ErrorCode::DegenerateInput, "projections stay tied after 100 random directions");
}

struct Neighbor {
    std::size_t k0;
    Halfspace halfspace;
};

/// All k such that {X_i0, X_j0, X_k} spans a tau-critical plane, in
/// O(n log n): each X_k is projected onto the plane through X_j0 orthogonal
/// to the axis X_i0 - X_j0, the polar angles are sorted, and a circular sweep
/// counts the angles in the open half-turn (theta_k, theta_k + pi).
inline std::vector<Neighbor> neighbors_for_tuple(const PointCloud& cloud, std::size_t i0, std::size_t j0,
                                                 const Tau& tau) {
    const std::size_t n = cloud.size();
    if (i0 == j0 || i0 >= n || j0 >= n) throw Error(ErrorCode::InvalidArgument, "invalid tuple");
    const double tie = cloud.tie_eps();
    const Vec3 axis_raw = cloud[i0] - cloud[j0];
    const UnitVector3 alpha = UnitVector3::normalize(axis_raw);
    const Vec3& a = alpha.vec();

    // Orthonormal frame (e1, e2) of the projection plane with e1 x e2 = alpha.
    std::size_t weakest = 0;
    for (std::size_t d = 1; d < 3; ++d)
        if (std::abs(a[d]) < std::abs(a[weakest])) weakest = d;
    Vec3 axis{};
    axis[weakest] = 1.0;
    const Vec3 e1 = UnitVector3::normalize(axis - dot(axis, a) * a).vec();
    const Vec3 e2 = cross(a, e1);

    const std::size_t m = n - 2;
    std::vector<std::size_t> others;
    others.reserve(m);
    std::vector<double> px(m), py(m), theta(m);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i0 || k == j0) continue;
        const Vec3 beta = cloud[k] - cloud[j0];
        const std::size_t s = others.size();
        px[s] = dot(beta, e1);
        py[s] = dot(beta, e2);
        if (std::hypot(px[s], py[s]) < tie)
            throw Error(ErrorCode::DegenerateInput, "observation " + std::to_string(k) + " is collinear with tuple (" +
                                                        std::to_string(i0) + ", " + std::to_string(j0) + ")");
        double t = std::atan2(py[s], px[s]);
        if (t >= std::numbers::pi) t -= 2.0 * std::numbers::pi;
        theta[s] = t;
        others.push_back(k);
    }

    std::vector<std::size_t> order(m);
    for (std::size_t s = 0; s < m; ++s) order[s] = s;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return theta[l] < theta[r]; });

    constexpr double kAngleTie = 1e-12;
    constexpr double kPi = std::numbers::pi;
    std::vector<double> ext(2 * m);
    for (std::size_t s = 0; s < m; ++s) {
        ext[s] = theta[order[s]];
        ext[s + m] = ext[s] + 2.0 * kPi;
    }
    for (std::size_t s = 0; s < m; ++s)
        if (ext[s + 1] - ext[s] < kAngleTie)
            throw Error(ErrorCode::DegenerateInput, "four observations are coplanar (tied polar angles)");

    const std::size_t f = tau.floor_ntau;
    std::vector<Neighbor> out;
    std::size_t r = 0;
    for (std::size_t l = 0; l < m; ++l) {
        const double bound = ext[l] + kPi;
        if (r <= l) r = l + 1;
        while (r < l + m && ext[r] < bound) ++r;
        if ((r < l + m && ext[r] - bound < kAngleTie) || (r > l + 1 && bound - ext[r - 1] < kAngleTie))
            throw Error(ErrorCode::DegenerateInput, "four observations are coplanar (antipodal polar angles)");
        const std::size_t n1 = r - l - 1;
        const std::size_t n2 = m - 1 - n1;
        if (n1 != f && n2 != f) continue;

        const std::size_t s = order[l];
        const std::size_t k = others[s];
        // Normal of the plane pointing to the side holding the n1 angles.
        const Vec3 n1_side = px[s] * e2 - py[s] * e1;
        if (n1 == f) out.push_back({k, triple_halfspace(cloud, i0, j0, k, -n1_side)});
        if (n2 == f) out.push_back({k, triple_halfspace(cloud, i0, j0, k, n1_side)});
    }
    return out;
}

struct SearchOptions {
    /// Worker threads for batched neighbour evaluation; 1 keeps the plain loop.
    unsigned threads = 1;
    std::size_t batch = 256;
};

struct SearchStats {
    TupleIndex initial{0, 0};
    std::size_t tuples_popped = 0;
    std::size_t raw_directions = 0;
};

/// The tau-critical direction set whose halfspace intersection is the depth
/// region. Returns an empty set when floor(n*tau) > n - 3 (no plane through
/// three observations can leave that many strictly below).
inline CriticalDirectionSet critical_directions(const PointCloud& cloud, const Tau& tau, std::uint64_t seed,
                                                const SearchOptions& options = {}, SearchStats* stats = nullptr) {
    const std::size_t n = cloud.size();
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    st = SearchStats{};
    if (tau.floor_ntau + 3 > n) return dedupe_directions({}, cloud.scale(), n);

    TupleState state(n);
    const TupleIndex start = initial_tuple(cloud, tau, seed);
    st.initial = start;
    state.enqueue(start.i0, start.j0);

    std::vector<Halfspace> raw;
    auto absorb = [&](std::size_t i0, std::size_t j0, const std::vector<Neighbor>& found) {
        for (const auto& nb : found) raw.push_back(nb.halfspace);
        std::size_t last = n;
        for (const auto& nb : found) {
            if (nb.k0 == last) continue;
            last = nb.k0;
            state.enqueue(std::max(i0, nb.k0), std::min(i0, nb.k0));
            state.enqueue(std::max(j0, nb.k0), std::min(j0, nb.k0));
        }
    };

    const std::size_t max_pops = n * (n - 1) / 2;
    bool first = true;
    if (options.threads <= 1) {
        while (state.any_pending()) {
            const auto [i0, j0] = state.pop();
            ++st.tuples_popped;
            auto found = neighbors_for_tuple(cloud, i0, j0, tau);
            if (first && found.empty())
                throw Error(ErrorCode::EmptySearch, "the initial tuple has no critical plane");
            first = false;
            absorb(i0, j0, found);
        }
    } else {
        std::vector<std::pair<std::size_t, std::size_t>> batch;
        std::vector<std::vector<Neighbor>> results;
        std::vector<std::exception_ptr> errors;
        while (state.any_pending()) {
            batch.clear();
            while (state.any_pending() && batch.size() < options.batch) batch.push_back(state.pop());
            results.assign(batch.size(), {});
            errors.assign(options.threads, nullptr);
            std::vector<std::thread> workers;
            for (unsigned w = 0; w < options.threads; ++w)
                workers.emplace_back([&, w] {
                    try {
                        for (std::size_t b = w; b < batch.size(); b += options.threads)
                            results[b] = neighbors_for_tuple(cloud, batch[b].first, batch[b].second, tau);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto& t : workers) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
            for (std::size_t b = 0; b < batch.size(); ++b) {
                ++st.tuples_popped;
                if (first && results[b].empty())
                    throw Error(ErrorCode::EmptySearch, "the initial tuple has no critical plane");
                first = false;
                absorb(batch[b].first, batch[b].second, results[b]);
            }
        }
    }
    if (st.tuples_popped > max_pops) throw Error(ErrorCode::EmptySearch, "tuple loop visited a tuple twice");
    st.raw_directions = raw.size();
    return dedupe_directions(raw, cloud.scale(), n);
}

}  // namespace tukey3d
