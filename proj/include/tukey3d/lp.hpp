#pragma once

// Chebyshev center of {x : u_i.x >= c_i} by a revised simplex on the dual.
//
// Primal:  max r  s.t.  u_i.x - r >= c_i.
// Dual:    min sum -c_i y_i  s.t.  sum y_i (-u_i, 1) = (0, 0, 0, 1),  y >= 0.
// The basis is 4x4; simplex multipliers of an optimal dual basis are (x, r).

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "core.hpp"

namespace tukey3d {

struct ChebyshevCenter {
    Vec3 center;
    /// Largest inscribed radius; negative when the halfspaces have no common point.
    double radius = 0.0;
    std::size_t iterations = 0;
};

namespace detail {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;  // row-major

/// LU with partial pivoting; false when (numerically) singular.
struct Lu4 {
    Mat4 a{};
    std::array<int, 4> perm{0, 1, 2, 3};

    bool factor(const Mat4& m) {
        a = m;
        perm = {0, 1, 2, 3};
        for (int k = 0; k < 4; ++k) {
            int p = k;
            for (int i = k + 1; i < 4; ++i)
                if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
            if (std::abs(a[p][k]) < 1e-14) return false;
            std::swap(a[p], a[k]);
            std::swap(perm[p], perm[k]);
            for (int i = k + 1; i < 4; ++i) {
                a[i][k] /= a[k][k];
                for (int j = k + 1; j < 4; ++j) a[i][j] -= a[i][k] * a[k][j];
            }
        }
        return true;
    }

    Vec4 solve(const Vec4& b) const {
        Vec4 x;
        for (int i = 0; i < 4; ++i) {
            x[i] = b[perm[i]];
            for (int j = 0; j < i; ++j) x[i] -= a[i][j] * x[j];
        }
        for (int i = 3; i >= 0; --i) {
            for (int j = i + 1; j < 4; ++j) x[i] -= a[i][j] * x[j];
            x[i] /= a[i][i];
        }
        return x;
    }

    /// Solves A^T y = b.
    Vec4 solve_transposed(const Vec4& b) const {
        // A = P^T L U, so A^T y = U^T L^T P y = b.
        Vec4 z;
        for (int i = 0; i < 4; ++i) {
            z[i] = b[i];
            for (int j = 0; j < i; ++j) z[i] -= a[j][i] * z[j];
            z[i] /= a[i][i];
        }
        for (int i = 3; i >= 0; --i)
            for (int j = i + 1; j < 4; ++j) z[i] -= a[j][i] * z[j];
        Vec4 y;
        for (int i = 0; i < 4; ++i) y[perm[i]] = z[i];
        return y;
    }
};

class ChebyshevLp {
public:
    ChebyshevLp(std::span<const Halfspace> hs, double scale) : hs_(hs), m_(static_cast<int>(hs.size())) {
        double cmax = 1.0;
        for (const auto& h : hs) cmax = std::max(cmax, std::abs(h.offset));
        tol_ = 1e-12 * std::max(cmax, scale);
    }

    ChebyshevCenter solve() {
        basis_ = {m_, m_ + 1, m_ + 2, m_ + 3};
        if (!run(true)) throw Error(ErrorCode::Unbounded, "Chebyshev LP did not converge in phase 1");
        double infeas = 0.0;
        for (int r = 0; r < 4; ++r)
            if (basis_[r] >= m_) infeas += xb_[r];
        if (infeas > 1e-9) throw Error(ErrorCode::Unbounded, "halfspace normals do not positively span R^3");
        drive_out_artificials();
        if (!run(false)) throw Error(ErrorCode::Unbounded, "Chebyshev LP did not converge in phase 2");
        return {{pi_[0], pi_[1], pi_[2]}, pi_[3], iterations_};
    }

private:
    Vec4 column(int j) const {
        if (j >= m_) {
            Vec4 e{0, 0, 0, 0};
            e[j - m_] = 1.0;
            return e;
        }
        const Vec3 u = hs_[j].normal.vec();
        return {-u.x, -u.y, -u.z, 1.0};
    }

    double cost(int j, bool phase1) const {
        if (phase1) return j >= m_ ? 1.0 : 0.0;
        return j >= m_ ? 0.0 : -hs_[j].offset;
    }

    bool refactor() {
        Mat4 b{};
        for (int r = 0; r < 4; ++r) {
            const Vec4 col = column(basis_[r]);
            for (int i = 0; i < 4; ++i) b[i][r] = col[i];
        }
        if (!lu_.factor(b)) return false;
        xb_ = lu_.solve({0, 0, 0, 1});
        for (double& v : xb_) v = std::max(v, 0.0);
        return true;
    }

    double reduced_cost(int j, bool phase1) const {
        const Vec4 a = column(j);
        return cost(j, phase1) - (a[0] * pi_[0] + a[1] * pi_[1] + a[2] * pi_[2] + a[3] * pi_[3]);
    }

    void drive_out_artificials() {
        for (int r = 0; r < 4; ++r) {
            if (basis_[r] < m_) continue;
            int best = -1;
            double best_piv = 1e-9;
            for (int j = 0; j < m_; ++j) {
                if (in_basis(j)) continue;
                const double piv = std::abs(lu_.solve(column(j))[r]);
                if (piv > best_piv) best_piv = piv, best = j;
            }
            if (best < 0) throw Error(ErrorCode::Unbounded, "halfspace normals do not span R^3");
            basis_[r] = best;
            if (!refactor()) throw Error(ErrorCode::Unbounded, "singular basis");
        }
    }

    bool in_basis(int j) const {
        for (int b : basis_)
            if (b == j) return true;
        return false;
    }

    bool run(bool phase1) {
        if (!refactor()) return false;
        const std::size_t cap = 100000 + 50 * static_cast<std::size_t>(m_);
        int degenerate_streak = 0;
        for (std::size_t it = 0; it < cap; ++it, ++iterations_) {
            Vec4 cb;
            for (int r = 0; r < 4; ++r) cb[r] = cost(basis_[r], phase1);
            pi_ = lu_.solve_transposed(cb);

            // Dantzig pricing; Bland's rule after a run of degenerate pivots.
            const bool bland = degenerate_streak > 30;
            int enter = -1;
            double most = -tol_;
            for (int j = 0; j < m_; ++j) {
                const double d = reduced_cost(j, phase1);
                if (d < most && !in_basis(j)) {
                    enter = j;
                    if (bland) break;
                    most = d;
                }
            }
            if (enter < 0) return true;

            const Vec4 w = lu_.solve(column(enter));
            int leave = -1;
            double theta = std::numeric_limits<double>::infinity();
            for (int r = 0; r < 4; ++r) {
                if (w[r] <= 1e-11) continue;
                const double t = xb_[r] / w[r];
                if (t < theta - 1e-15 || (t <= theta + 1e-15 && leave >= 0 && basis_[r] < basis_[leave])) {
                    theta = std::min(theta, t);
                    leave = r;
                }
            }
            // Dual unbounded would mean an infeasible primal, impossible here.
            if (leave < 0) return false;
            degenerate_streak = theta <= 1e-14 ? degenerate_streak + 1 : 0;
            const int old = basis_[leave];
            basis_[leave] = enter;
            if (!refactor()) {
                basis_[leave] = old;
                refactor();
                return false;
            }
        }
        return false;
    }

    std::span<const Halfspace> hs_;
    int m_;
    double tol_;
    std::array<int, 4> basis_{};
    Lu4 lu_;
    Vec4 xb_{};
    Vec4 pi_{};
    std::size_t iterations_ = 0;
};

}  // namespace detail

/// Center and radius of the largest ball inside all halfspaces u.x >= c.
/// Throws Unbounded when the intersection is unbounded in some direction.
inline ChebyshevCenter chebyshev_center(std::span<const Halfspace> halfspaces, double scale = 1.0) {
    if (halfspaces.size() < 4) throw Error(ErrorCode::Unbounded, "fewer than four halfspaces");
    return detail::ChebyshevLp(halfspaces, scale).solve();
}

}  // namespace tukey3d
