#pragma once

// Geometric vocabulary types, the point-cloud container, general-position
// checks and the whitening transform.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rng.hpp"

namespace tukey3d {

enum class ErrorCode {
    InputTooSmall,
    DegenerateInput,
    SingularCovariance,
    EmptySearch,
    RefuseTooLarge,
    Unbounded,
    InvalidQuery,
    DualDegeneracy,
    InvalidArgument,
    ParseError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InputTooSmall: return "InputTooSmall";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::EmptySearch: return "EmptySearch";
        case ErrorCode::RefuseTooLarge: return "RefuseTooLarge";
        case ErrorCode::Unbounded: return "Unbounded";
        case ErrorCode::InvalidQuery: return "InvalidQuery";
        case ErrorCode::DualDegeneracy: return "DualDegeneracy";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double max_abs(const Vec3& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }
inline bool is_finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

/// Unit-norm direction. Construction normalises and rejects zero vectors.
class UnitVector3 {
public:
    static constexpr double kNormTolerance = 1e-12;

    UnitVector3() = default;

    static UnitVector3 normalize(const Vec3& v) {
        const double len = norm(v);
        if (!(len > 0.0) || !std::isfinite(len))
            throw Error(ErrorCode::InvalidArgument, "cannot normalise a zero or non-finite vector");
        UnitVector3 u;
        u.v_ = v / len;
        return u;
    }

    /// Wraps a vector that is already unit length (checked).
    static UnitVector3 from_unit(const Vec3& v) {
        if (std::abs(norm(v) - 1.0) > kNormTolerance)
            throw Error(ErrorCode::InvalidArgument, "vector is not unit length");
        UnitVector3 u;
        u.v_ = v;
        return u;
    }

    const Vec3& vec() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }
    UnitVector3 operator-() const { UnitVector3 u; u.v_ = -v_; return u; }

private:
    Vec3 v_{1.0, 0.0, 0.0};
};

/// Closed halfspace {x : normal . x >= offset}.
struct Halfspace {
    UnitVector3 normal;
    double offset = 0.0;

    double slack(const Vec3& x) const { return dot(normal.vec(), x) - offset; }
    bool contains(const Vec3& x, double eps) const { return slack(x) >= -eps; }
};

class PointCloud {
public:
    PointCloud() = default;

    explicit PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
        if (points_.size() < 4)
            throw Error(ErrorCode::InputTooSmall,
                        "a 3-D cloud needs at least 4 points, got " + std::to_string(points_.size()));
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!is_finite(points_[i]))
                throw Error(ErrorCode::InvalidArgument, "point " + std::to_string(i) + " is not finite");
        lo_ = hi_ = points_.front();
        for (const auto& p : points_)
            for (std::size_t d = 0; d < 3; ++d) {
                lo_[d] = std::min(lo_[d], p[d]);
                hi_[d] = std::max(hi_[d], p[d]);
            }
        scale_ = std::max({hi_.x - lo_.x, hi_.y - lo_.y, hi_.z - lo_.z});
        if (!(scale_ > 0.0)) scale_ = 1.0;
    }

    std::size_t size() const { return points_.size(); }
    const Vec3& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Vec3> points() const { return points_; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    /// Largest coordinate range; the unit for every absolute tolerance.
    double scale() const { return scale_; }
    /// Tolerance under which two projections are considered tied.
    double tie_eps() const { return 1e-12 * scale_; }
    Vec3 min_corner() const { return lo_; }
    Vec3 max_corner() const { return hi_; }

private:
    std::vector<Vec3> points_;
    Vec3 lo_, hi_;
    double scale_ = 1.0;
};

enum class ViolationKind { Duplicate, Collinear, Coplanar };

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Duplicate: return "duplicate";
        case ViolationKind::Collinear: return "collinear";
        case ViolationKind::Coplanar: return "coplanar";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> indices;  // zero-based, ascending
};

struct GeneralPositionReport {
    bool ok = true;
    bool exhaustive = true;
    std::vector<Violation> violations;
};

struct ValidationOptions {
    double tol = 1e-9;
    /// Clouds larger than this are checked on seeded random subsets unless forced.
    std::size_t exhaustive_limit = 200;
    bool force_exhaustive = false;
    std::uint64_t seed = 0x5eed;
};

namespace detail {

inline double pair_measure(const Vec3& a, const Vec3& b, double scale) { return norm(b - a) / scale; }

/// Sine of the angle at a; 0 for collinear triples.
inline double triple_measure(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 e1 = b - a, e2 = c - a;
    const double denom = norm(e1) * norm(e2);
    if (denom == 0.0) return 0.0;
    return norm(cross(e1, e2)) / denom;
}

/// |det[b-a, c-a, d-a]| over the product of the three edge lengths.
inline double quad_measure(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 e1 = b - a, e2 = c - a, e3 = d - a;
    const double denom = norm(e1) * norm(e2) * norm(e3);
    if (denom == 0.0) return 0.0;
    return std::abs(dot(cross(e1, e2), e3)) / denom;
}

template <std::size_t K>
std::array<std::size_t, K> sorted_distinct_sample(Rng& rng, std::size_t n) {
    std::array<std::size_t, K> idx{};
    for (std::size_t filled = 0; filled < K;) {
        const auto c = static_cast<std::size_t>(rng.below(n));
        if (std::find(idx.begin(), idx.begin() + filled, c) == idx.begin() + filled) idx[filled++] = c;
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace detail

/// Reports duplicate pairs, collinear triples and coplanar quadruples whose
/// scale-free measure falls below `opt.tol`. Triples and quadruples that
/// contain a duplicate pair are not reported again; a quadruple holding a
/// collinear triple is reported as coplanar.
inline GeneralPositionReport validate_general_position(const PointCloud& cloud,
                                                       const ValidationOptions& opt = {}) {
    const std::size_t n = cloud.size();
    if (n < 4) throw Error(ErrorCode::InputTooSmall, "need at least 4 points");
    if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

    GeneralPositionReport report;
    report.exhaustive = opt.force_exhaustive || n <= opt.exhaustive_limit;
    const double scale = cloud.scale();

    std::vector<std::uint8_t> dup(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (detail::pair_measure(cloud[a], cloud[b], scale) < opt.tol) {
                dup[a * n + b] = 1;
                report.violations.push_back({ViolationKind::Duplicate, {a, b}});
            }
    auto has_dup = [&](std::size_t a, std::size_t b) { return dup[std::min(a, b) * n + std::max(a, b)] != 0; };

    auto triple_has_dup = [&](std::size_t a, std::size_t b, std::size_t c) {
        return has_dup(a, b) || has_dup(a, c) || has_dup(b, c);
    };
    auto check_quad = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        if (triple_has_dup(a, b, c) || has_dup(a, d) || has_dup(b, d) || has_dup(c, d)) return false;
        return detail::quad_measure(cloud[a], cloud[b], cloud[c], cloud[d]) < opt.tol;
    };

    if (report.exhaustive) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                if (has_dup(a, b)) continue;
                for (std::size_t c = b + 1; c < n; ++c)
                    if (!has_dup(a, c) && !has_dup(b, c) &&
                        detail::triple_measure(cloud[a], cloud[b], cloud[c]) < opt.tol)
                        report.violations.push_back({ViolationKind::Collinear, {a, b, c}});
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c) {
                    if (triple_has_dup(a, b, c)) continue;
                    for (std::size_t d = c + 1; d < n; ++d)
                        if (check_quad(a, b, c, d))
                            report.violations.push_back({ViolationKind::Coplanar, {a, b, c, d}});
                }
    } else {
        Rng rng(opt.seed);
        const std::size_t samples = 10 * n * n;
        std::vector<std::array<std::size_t, 3>> seen_triples;
        std::vector<std::array<std::size_t, 4>> seen_quads;
        for (std::size_t s = 0; s < samples; ++s) {
            const auto t = detail::sorted_distinct_sample<3>(rng, n);
            if (!has_dup(t[0], t[1]) && !has_dup(t[0], t[2]) && !has_dup(t[1], t[2]) &&
                detail::triple_measure(cloud[t[0]], cloud[t[1]], cloud[t[2]]) < opt.tol &&
                std::find(seen_triples.begin(), seen_triples.end(), t) == seen_triples.end()) {
                seen_triples.push_back(t);
                report.violations.push_back({ViolationKind::Collinear, {t[0], t[1], t[2]}});
            }
            const auto q = detail::sorted_distinct_sample<4>(rng, n);
            if (check_quad(q[0], q[1], q[2], q[3]) &&
                std::find(seen_quads.begin(), seen_quads.end(), q) == seen_quads.end()) {
                seen_quads.push_back(q);
                report.violations.push_back({ViolationKind::Coplanar, {q[0], q[1], q[2], q[3]}});
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

/// Adds seeded uniform noise in [-magnitude, magnitude] to every coordinate
/// and re-validates; retries with derived seeds up to 10 attempts.
inline PointCloud jitter(const PointCloud& cloud, double magnitude, std::uint64_t seed,
                         const ValidationOptions& validation = {}) {
    if (!(magnitude > 0.0)) throw Error(ErrorCode::InvalidArgument, "jitter magnitude must be positive");
    std::uint64_t attempt_seed = seed;
    for (int attempt = 0; attempt < 10; ++attempt) {
        Rng rng(attempt_seed);
        std::vector<Vec3> pts(cloud.begin(), cloud.end());
        for (auto& p : pts)
            for (std::size_t d = 0; d < 3; ++d) p[d] += rng.uniform(-magnitude, magnitude);
        PointCloud out(std::move(pts));
        if (validate_general_position(out, validation).ok) return out;
        attempt_seed = hash_combine(seed, static_cast<std::uint64_t>(attempt + 1));
    }
    throw Error(ErrorCode::DegenerateInput, "jittered cloud still violates general position after 10 attempts");
}

/// Y = S^{-1/2} (X - mean) with S the (n-1)-normalised sample covariance and
/// S^{-1/2} its symmetric inverse square root.
inline PointCloud whiten(const PointCloud& cloud, double max_condition = 1e12) {
    const auto n = static_cast<double>(cloud.size());
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& p : cloud) mean += Eigen::Vector3d(p.x, p.y, p.z);
    mean /= n;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : cloud) {
        const Eigen::Vector3d d = Eigen::Vector3d(p.x, p.y, p.z) - mean;
        cov += d * d.transpose();
    }
    cov /= (n - 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::SingularCovariance, "eigen-decomposition of the covariance failed");
    const Eigen::Vector3d lambda = eig.eigenvalues();
    if (!(lambda(0) > 0.0) || lambda(2) / lambda(0) > max_condition)
        throw Error(ErrorCode::SingularCovariance, "sample covariance is singular or ill-conditioned");

    const Eigen::Matrix3d inv_sqrt =
        eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    std::vector<Vec3> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud) {
        const Eigen::Vector3d y = inv_sqrt * (Eigen::Vector3d(p.x, p.y, p.z) - mean);
        out.push_back({y(0), y(1), y(2)});
    }
    return PointCloud(std::move(out));
}

}  // namespace tukey3d
