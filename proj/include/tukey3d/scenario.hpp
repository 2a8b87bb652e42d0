#pragma once

// Simulation scenarios: a clean distribution contaminated per point, with
// probability epsilon, by N(0, sigma0^2 I).
//
//   D1  N(0, I)
//   D2  U([-0.5, 0.5]^3)
//   D3  componentwise squares of N(0, S), S = [[1 .8 .8] [.8 4 1.6] [.8 1.6 4]]

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace tukey3d {

enum class Scenario { D1, D2, D3 };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::D1: return "D1";
        case Scenario::D2: return "D2";
        case Scenario::D3: return "D3";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string& s) {
    if (s == "D1" || s == "d1") return Scenario::D1;
    if (s == "D2" || s == "d2") return Scenario::D2;
    if (s == "D3" || s == "d3") return Scenario::D3;
    throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + s + "' (expected D1, D2 or D3)");
}

struct ScenarioSpec {
    Scenario kind = Scenario::D1;
    std::size_t n = 100;
    double epsilon = 0.0;
    double sigma0_sq = 9.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline constexpr double kD3Cov[3][3] = {{1.0, 0.8, 0.8}, {0.8, 4.0, 1.6}, {0.8, 1.6, 4.0}};

/// Lower Cholesky factor of kD3Cov.
inline std::array<std::array<double, 3>, 3> d3_cholesky() {
    std::array<std::array<double, 3>, 3> l{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c <= r; ++c) {
            double s = kD3Cov[r][c];
            for (int k = 0; k < c; ++k) s -= l[r][k] * l[c][k];
            l[r][c] = (r == c) ? std::sqrt(s) : s / l[c][c];
        }
    return l;
}

inline PointCloud draw(const ScenarioSpec& params, std::uint64_t seed) {
    Rng rng(seed);
    const double sigma0 = std::sqrt(params.sigma0_sq);
    const auto chol = detail::d3_cholesky();
    std::vector<Vec3> pts;
    pts.reserve(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        const bool outlier = rng.uniform() < params.epsilon;
        Vec3 p;
        if (outlier) {
            p = Vec3{rng.normal(), rng.normal(), rng.normal()} * sigma0;
        } else {
            switch (params.kind) {
                case Scenario::D1: p = {rng.normal(), rng.normal(), rng.normal()}; break;
                case Scenario::D2: p = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}; break;
                case Scenario::D3: {
                    const double z[3] = {rng.normal(), rng.normal(), rng.normal()};
                    for (int r = 0; r < 3; ++r) {
                        double s = 0.0;
                        for (int c = 0; c <= r; ++c) s += chol[r][c] * z[c];
                        p[r] = s * s;
                    }
                    break;
                }
            }
        }
        pts.push_back(p);
    }
    return PointCloud(std::move(pts));
}

}  // namespace detail

/// Validation used for generated clouds: exhaustive only for small n.
inline ValidationOptions generator_validation() {
    ValidationOptions v;
    v.exhaustive_limit = 60;
    return v;
}

/// Seeded draw. Each point consumes one uniform for the mixture label, then
/// three coordinates from the selected component. A draw that fails
/// validation is replaced by a redraw from hash_combine(seed, attempt).
inline PointCloud generate(const ScenarioSpec& params, const ValidationOptions& validation = generator_validation()) {
    if (params.n < 4) throw Error(ErrorCode::InputTooSmall, "scenario needs n >= 4");
    if (!(params.epsilon >= 0.0 && params.epsilon < 1.0))
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1)");
    if (!(params.sigma0_sq > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0^2 must be positive");

    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
        const std::uint64_t seed = attempt == 0 ? params.seed : hash_combine(params.seed, attempt);
        PointCloud cloud = detail::draw(params, seed);
        if (validate_general_position(cloud, validation).ok) return cloud;
    }
    throw Error(ErrorCode::DegenerateInput, "generated clouds keep failing general-position validation");
}

}  // namespace tukey3d
