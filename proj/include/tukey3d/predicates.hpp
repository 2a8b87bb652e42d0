#pragma once

// Orientation predicate with an exact fallback.
//
// orient3d first evaluates the determinant in double precision with a
// forward error bound; only when the sign is not certified does it redo the
// computation with floating-point expansions (sums of non-overlapping
// doubles), which is exact for any finite double input.

#include <cmath>
#include <vector>

#include "core.hpp"

namespace tukey3d::predicates {

using Expansion = std::vector<double>;

namespace detail {

inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    const double bv = x - a;
    const double av = x - bv;
    y = (a - av) + (b - bv);
}

inline void fast_two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    y = b - (x - a);
}

inline void two_product(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

/// e + b for a non-overlapping expansion e (increasing magnitude); zeros dropped.
inline Expansion grow(const Expansion& e, double b) {
    Expansion h;
    h.reserve(e.size() + 1);
    double q = b;
    for (double ei : e) {
        double sum, err;
        two_sum(q, ei, sum, err);
        q = sum;
        if (err != 0.0) h.push_back(err);
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

inline Expansion scale(const Expansion& e, double b) {
    Expansion h;
    if (e.empty()) return h;
    h.reserve(2 * e.size());
    double q, hh;
    two_product(e[0], b, q, hh);
    if (hh != 0.0) h.push_back(hh);
    for (std::size_t i = 1; i < e.size(); ++i) {
        double p1, p0, sum;
        two_product(e[i], b, p1, p0);
        two_sum(q, p0, sum, hh);
        if (hh != 0.0) h.push_back(hh);
        fast_two_sum(p1, sum, q, hh);
        if (hh != 0.0) h.push_back(hh);
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

}  // namespace detail

inline Expansion add(const Expansion& e, const Expansion& f) {
    Expansion h = e;
    for (double fi : f) h = detail::grow(h, fi);
    return h;
}

inline Expansion negate(Expansion e) {
    for (double& c : e) c = -c;
    return e;
}

inline Expansion mul(const Expansion& e, const Expansion& f) {
    Expansion h{0.0};
    for (double fi : f) h = add(h, detail::scale(e, fi));
    return h;
}

inline Expansion diff(double a, double b) {
    double x, y;
    detail::two_sum(a, -b, x, y);
    if (y == 0.0) return {x};
    return {y, x};
}

inline int sign(const Expansion& e) {
    for (auto it = e.rbegin(); it != e.rend(); ++it)
        if (*it != 0.0) return *it > 0.0 ? 1 : -1;
    return 0;
}

/// Exact sign of det[b - a, c - a, d - a], i.e. positive when d lies on the
/// side of the plane (a, b, c) that (b - a) x (c - a) points to.
inline int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Expansion bax = diff(b.x, a.x), bay = diff(b.y, a.y), baz = diff(b.z, a.z);
    const Expansion cax = diff(c.x, a.x), cay = diff(c.y, a.y), caz = diff(c.z, a.z);
    const Expansion dax = diff(d.x, a.x), day = diff(d.y, a.y), daz = diff(d.z, a.z);
    // (b-a) x (c-a)
    const Expansion nx = add(mul(bay, caz), negate(mul(baz, cay)));
    const Expansion ny = add(mul(baz, cax), negate(mul(bax, caz)));
    const Expansion nz = add(mul(bax, cay), negate(mul(bay, cax)));
    return sign(add(add(mul(nx, dax), mul(ny, day)), mul(nz, daz)));
}

/// Sign of det[b - a, c - a, d - a]; certified by a static error bound and
/// recomputed exactly when the bound does not decide.
inline int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    // Evaluated as det[a - d, b - d, c - d], which equals -det[b - a, c - a, d - a].
    const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
    const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
    const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;

    const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                             (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                             (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
    constexpr double eps = 0x1.0p-53;
    constexpr double bound_a = (7.0 + 56.0 * eps) * eps;
    const double errbound = bound_a * permanent;
    if (det > errbound) return -1;
    if (-det > errbound) return 1;
    return orient3d_exact(a, b, c, d);
}

}  // namespace tukey3d::predicates
