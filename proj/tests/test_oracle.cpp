#include <gtest/gtest.h>

#include <cmath>

#include <tukey3d/oracle.hpp>

#include "fixtures.hpp"

using namespace tukey3d;

TEST(Oracle, TetrahedronTauZeroInwardFaces) {
    const auto c = fixtures::tetrahedron();
    const auto s = brute_force_critical_directions(c, Tau::make(0.0, 4));
    ASSERT_EQ(s.count(), 4U);
    for (const auto& h : s.halfspaces) {
        EXPECT_EQ(fixtures::strictly_below(c, h), 0U);
        EXPECT_EQ(fixtures::on_plane(c, h), 3U);
    }
}

TEST(Oracle, TetrahedronTauPointThreeOutwardFaces) {
    const auto c = fixtures::tetrahedron();
    const auto s = brute_force_critical_directions(c, Tau::make(0.3, 4));
    ASSERT_EQ(s.count(), 4U);
    for (const auto& h : s.halfspaces) {
        EXPECT_EQ(fixtures::strictly_below(c, h), 1U);
        // The centroid lies strictly on the wrong side of every outward face.
        EXPECT_LT(h.slack({0.25, 0.25, 0.25}), 0.0);
    }
}

TEST(Oracle, RefusesLargeInput) {
    const auto c = fixtures::cloud(201, 3);
    try {
        brute_force_critical_directions(c, Tau::make(0.1, 201));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RefuseTooLarge);
    }
    OracleOptions opt;
    opt.max_points = 10;
    EXPECT_THROW(brute_force_critical_directions(fixtures::cloud(11, 1), Tau::make(0.1, 11), opt), Error);
    opt.allow_large = true;
    EXPECT_NO_THROW(brute_force_critical_directions(fixtures::cloud(11, 1), Tau::make(0.1, 11), opt));
}

TEST(Oracle, EveryPlaneHoldsExactlyThreePoints) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto c = fixtures::cloud(25, seed, static_cast<Scenario>(seed % 3));
        for (double tv : {0.0, 0.1, 0.25}) {
            const Tau tau = Tau::make(tv, 25);
            for (const auto& h : brute_force_critical_directions(c, tau).halfspaces) {
                EXPECT_EQ(fixtures::on_plane(c, h), 3U);
                EXPECT_EQ(fixtures::strictly_below(c, h), tau.floor_ntau);
            }
        }
    }
}

TEST(Oracle, CountsBothOrientationsOfEveryPlane) {
    // n = 5, floor = 1: each of the 10 planes splits the other two points
    // either 1/1 (both orientations critical) or 2/0 (neither).
    const auto c = fixtures::cloud(5, 4);
    const Tau tau = Tau::make(0.2, 5);
    std::size_t expected = 0;
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a + 1; b < 5; ++b)
            for (std::size_t d = b + 1; d < 5; ++d) {
                const Vec3 w = cross(c[b] - c[a], c[d] - c[a]);
                int pos = 0;
                for (std::size_t i = 0; i < 5; ++i)
                    if (i != a && i != b && i != d && dot(w, c[i] - c[a]) > 0) ++pos;
                if (pos == 1) expected += 2;
            }
    EXPECT_EQ(brute_force_critical_directions(c, tau).count(), expected);
}

TEST(Oracle, SubsetRelation) {
    const auto c = fixtures::cloud(12, 6);
    const auto all = brute_force_critical_directions(c, Tau::make(0.1, 12));
    CriticalDirectionSet part = all;
    part.halfspaces.resize(all.count() / 2);
    EXPECT_TRUE(directions_subset(part, all));
    EXPECT_FALSE(directions_subset(all, part));
}
