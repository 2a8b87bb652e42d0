#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <tukey3d/oracle.hpp>
#include <tukey3d/region.hpp>

#include "fixtures.hpp"

using namespace tukey3d;

namespace {

bool has_normal(const CriticalDirectionSet& s, const Vec3& u, double offset) {
    for (const auto& h : s.halfspaces)
        if (max_abs(h.normal.vec() - u) < 1e-12 && std::abs(h.offset - offset) < 1e-12) return true;
    return false;
}

void expect_critical(const PointCloud& c, const Tau& tau, const Halfspace& h) {
    EXPECT_EQ(fixtures::strictly_below(c, h), tau.floor_ntau);
    EXPECT_GE(fixtures::on_plane(c, h), 3U);
}

}  // namespace

TEST(Tau, FloorAndRank) {
    const Tau t = Tau::make(0.3, 10);
    EXPECT_EQ(t.floor_ntau, 3U);
    EXPECT_EQ(t.k_tau, 4U);
    EXPECT_TRUE(t.integral(10));
    EXPECT_FALSE(Tau::make(0.05, 10).integral(10));
    EXPECT_THROW(Tau::make(1.0, 10), Error);
    EXPECT_THROW(Tau::make(-0.1, 10), Error);
}

TEST(TupleState, VisitedAndPendingFlags) {
    TupleState s(5);
    EXPECT_TRUE(s.enqueue(3, 1));
    EXPECT_FALSE(s.enqueue(3, 1));
    EXPECT_TRUE(s.enqueue(2, 0));
    EXPECT_TRUE(s.visited(3, 1));
    EXPECT_TRUE(s.pending(3, 1));
    const auto first = s.pop();
    EXPECT_EQ(first, (std::pair<std::size_t, std::size_t>{2, 0}));
    EXPECT_TRUE(s.visited(2, 0));
    EXPECT_FALSE(s.pending(2, 0));
    EXPECT_EQ(s.pending_count(), 1U);
    EXPECT_THROW(s.enqueue(1, 3), Error);
    EXPECT_THROW(s.enqueue(2, 2), Error);
}

TEST(InitialTuple, TetrahedronDiagonalDirection) {
    const auto c = fixtures::tetrahedron();
    const auto t = initial_tuple_from_direction(c, Tau::make(0.0, 4), UnitVector3::normalize({1, 1, 1}));
    // (2, 1) in one-based numbering.
    EXPECT_EQ(t, (TupleIndex{1, 0}));
}

TEST(InitialTuple, OrderedAndProductive) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = fixtures::cloud(30, seed, static_cast<Scenario>(seed % 3));
        for (double tv : {0.0, 0.1, 0.3}) {
            const Tau tau = Tau::make(tv, c.size());
            const auto t = initial_tuple(c, tau, seed * 7 + 1);
            EXPECT_GT(t.i0, t.j0);
            EXPECT_FALSE(neighbors_for_tuple(c, t.i0, t.j0, tau).empty());
        }
    }
}

TEST(Neighbors, TetrahedronFaces) {
    const auto c = fixtures::tetrahedron();
    const Tau tau = Tau::make(0.0, 4);
    const auto found = neighbors_for_tuple(c, 1, 0, tau);
    ASSERT_EQ(found.size(), 2U);
    std::set<std::size_t> ks;
    for (const auto& nb : found) ks.insert(nb.k0);
    EXPECT_EQ(ks, (std::set<std::size_t>{2, 3}));
    for (const auto& nb : found) {
        const Vec3 expected = nb.k0 == 2 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
        EXPECT_LT(max_abs(nb.halfspace.normal.vec() - expected), 1e-15);
        EXPECT_NEAR(nb.halfspace.offset, 0.0, 1e-15);
    }
}

TEST(Neighbors, PostconditionOnRandomTuples) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto c = fixtures::cloud(40, 50 + seed, static_cast<Scenario>(seed % 3));
        for (double tv : {0.0, 0.05, 0.2, 0.45}) {
            const Tau tau = Tau::make(tv, c.size());
            for (std::size_t i0 = 1; i0 < c.size(); i0 += 7)
                for (std::size_t j0 = 0; j0 < i0; j0 += 5)
                    for (const auto& nb : neighbors_for_tuple(c, i0, j0, tau)) {
                        expect_critical(c, tau, nb.halfspace);
                        EXPECT_NEAR(nb.halfspace.slack(c[i0]), 0.0, c.tie_eps());
                        EXPECT_NEAR(nb.halfspace.slack(c[j0]), 0.0, c.tie_eps());
                        EXPECT_NEAR(nb.halfspace.slack(c[nb.k0]), 0.0, c.tie_eps());
                    }
        }
    }
}

TEST(Neighbors, CollinearThrows) {
    const PointCloud c({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {0, 0, 1}, {0, 1, 0}});
    try {
        neighbors_for_tuple(c, 1, 0, Tau::make(0.0, 5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
    }
}

TEST(Neighbors, BothSidesWhenHalfSplit) {
    // n - 3 = 2 floor(n tau): n = 7, tau = 0.3 gives floor = 2, so a plane
    // through the tuple and k that splits the other four points 2 + 2 matches
    // with both orientations.
    const auto c = fixtures::cloud(7, 77);
    const Tau tau = Tau::make(0.3, 7);
    ASSERT_EQ(tau.floor_ntau, 2U);
    bool twice = false;
    for (std::size_t i0 = 1; i0 < 7; ++i0)
        for (std::size_t j0 = 0; j0 < i0; ++j0) {
            const auto found = neighbors_for_tuple(c, i0, j0, tau);
            for (std::size_t a = 0; a + 1 < found.size(); ++a)
                if (found[a].k0 == found[a + 1].k0) {
                    twice = true;
                    EXPECT_LT(max_abs(found[a].halfspace.normal.vec() + found[a + 1].halfspace.normal.vec()), 1e-15);
                }
        }
    EXPECT_TRUE(twice);
}

TEST(Dedupe, Examples) {
    const Halfspace h{UnitVector3::normalize({1, 2, 3}), 0.5};
    Halfspace near = h;
    near = {UnitVector3::normalize(h.normal.vec() + Vec3{1e-15, 0, 0}), 0.5};
    EXPECT_EQ(dedupe_directions({h, near}).count(), 1U);
    EXPECT_EQ(dedupe_directions({h, {-h.normal, -0.5}}).count(), 2U);
    EXPECT_TRUE(dedupe_directions({}).empty());
    // Same normal, different offsets: parallel planes are distinct constraints.
    EXPECT_EQ(dedupe_directions({h, {h.normal, 0.7}}).count(), 2U);
}

TEST(CriticalDirections, TetrahedronInwardFaces) {
    const auto c = fixtures::tetrahedron();
    const auto s = critical_directions(c, Tau::make(0.0, 4), 3);
    ASSERT_EQ(s.count(), 4U);
    EXPECT_TRUE(has_normal(s, {1, 0, 0}, 0.0));
    EXPECT_TRUE(has_normal(s, {0, 1, 0}, 0.0));
    EXPECT_TRUE(has_normal(s, {0, 0, 1}, 0.0));
    const double r3 = 1.0 / std::sqrt(3.0);
    EXPECT_TRUE(has_normal(s, {-r3, -r3, -r3}, -r3));
}

TEST(CriticalDirections, EmptyWhenNoPlaneCanBeCritical) {
    const auto s = critical_directions(fixtures::tetrahedron(), Tau::make(0.9, 4), 1);
    EXPECT_TRUE(s.empty());
}

TEST(CriticalDirections, SubsetOfOracleAndInvariants) {
    for (std::uint64_t seed = 0; seed < 6; ++seed)
        for (std::size_t n : {10, 20, 40})
            for (double tv : {0.0, 0.05, 0.1, 0.2, 0.3}) {
                const auto c = fixtures::cloud(n, 900 + seed, static_cast<Scenario>(seed % 3));
                const Tau tau = Tau::make(tv, n);
                SearchStats st;
                const auto s = critical_directions(c, tau, seed, {}, &st);
                const auto truth = brute_force_critical_directions(c, tau);
                EXPECT_LE(s.count(), truth.count());
                EXPECT_TRUE(directions_subset(s, truth, 1e-9, 1e-9 * c.scale()));
                EXPECT_LE(st.tuples_popped, n * (n - 1) / 2);
                for (const auto& h : s.halfspaces) expect_critical(c, tau, h);
            }
}

TEST(CriticalDirections, NeighborsAtHundredPointsAreOracleHalfspaces) {
    const auto c = fixtures::cloud(100, 4242);
    const Tau tau = Tau::make(0.3, 100);
    const auto truth = brute_force_critical_directions(c, tau);
    const auto s = critical_directions(c, tau, 5);
    EXPECT_TRUE(directions_subset(s, truth, 1e-9, 1e-9 * c.scale()));
    RecordProperty("directions", std::to_string(s.count()));
    RecordProperty("soft_bound_n(n-1)", std::to_string(s.count() <= 100 * 99));
}

TEST(CriticalDirections, ThreadedMatchesSequential) {
    const auto c = fixtures::cloud(60, 31);
    const Tau tau = Tau::make(0.1, 60);
    const auto a = critical_directions(c, tau, 9);
    const auto b = critical_directions(c, tau, 9, {.threads = 3, .batch = 17});
    EXPECT_EQ(a.count(), b.count());
    EXPECT_TRUE(directions_subset(a, b, 0.0, 0.0));
    EXPECT_TRUE(directions_subset(b, a, 0.0, 0.0));
}

TEST(CriticalDirections, AnySeedStaysInsideOracle) {
    const auto c = fixtures::cloud(20, 8);
    const Tau tau = Tau::make(0.1, 20);
    const auto a = critical_directions(c, tau, 1);
    const auto b = critical_directions(c, tau, 2);
    const auto truth = brute_force_critical_directions(c, tau);
    EXPECT_TRUE(directions_subset(a, truth));
    EXPECT_TRUE(directions_subset(b, truth));
}
