#include <gtest/gtest.h>

#include <map>

#include <tukey3d/hull.hpp>
#include <tukey3d/predicates.hpp>
#include <tukey3d/rng.hpp>

using namespace tukey3d;

namespace {

void expect_valid(const std::vector<Vec3>& p, const ConvexHull& h) {
    std::map<std::pair<int, int>, int> edges;
    for (std::size_t f = 0; f < h.faces.size(); ++f)
        for (int e = 0; e < 3; ++e) {
            ++edges[{h.faces[f][e], h.faces[f][(e + 1) % 3]}];
            const int g = h.neighbors[f][e];
            ASSERT_GE(g, 0);
            // The neighbour holds the same edge reversed.
            bool back = false;
            for (int k = 0; k < 3; ++k)
                back |= h.faces[g][k] == h.faces[f][(e + 1) % 3] && h.faces[g][(k + 1) % 3] == h.faces[f][e];
            EXPECT_TRUE(back);
        }
    for (const auto& [e, n] : edges) {
        EXPECT_EQ(n, 1);
        EXPECT_TRUE(edges.count({e.second, e.first}));
    }
    std::size_t V = 0;
    for (bool v : h.is_vertex) V += v;
    EXPECT_EQ(static_cast<long>(V) - static_cast<long>(edges.size() / 2) + static_cast<long>(h.faces.size()), 2);
    // Every input point is on or below every face.
    for (const auto& f : h.faces)
        for (const auto& q : p) EXPECT_LE(predicates::orient3d(p[f[0]], p[f[1]], p[f[2]], q), 0);
}

}  // namespace

TEST(Hull, Tetrahedron) {
    const std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto h = convex_hull(p);
    EXPECT_EQ(h.faces.size(), 4U);
    expect_valid(p, h);
}

TEST(Hull, CubeWithInteriorAndFacePoints) {
    std::vector<Vec3> p;
    for (int i = 0; i < 8; ++i) p.push_back({double(i & 1), double(i >> 1 & 1), double(i >> 2 & 1)});
    p.push_back({0.5, 0.5, 0.5});
    p.push_back({0.5, 0.5, 0.0});  // on a face
    p.push_back({0.5, 0.0, 0.0});  // on an edge
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto h = convex_hull(p, seed);
        expect_valid(p, h);
        for (int i = 0; i < 8; ++i) EXPECT_TRUE(h.is_vertex[i]);
        EXPECT_FALSE(h.is_vertex[8]);
    }
}

TEST(Hull, RandomSphereAllVertices) {
    Rng r(4);
    std::vector<Vec3> p;
    for (int i = 0; i < 500; ++i) {
        Vec3 v{r.normal(), r.normal(), r.normal()};
        p.push_back(v / norm(v));
    }
    const auto h = convex_hull(p, 9);
    expect_valid(p, h);
    EXPECT_EQ(h.faces.size(), 2U * 500 - 4);
}

TEST(Hull, RandomBallMatchesBruteForceVertices) {
    Rng r(5);
    std::vector<Vec3> p;
    for (int i = 0; i < 60; ++i) p.push_back({r.normal(), r.normal(), r.normal()});
    const auto h = convex_hull(p, 1);
    expect_valid(p, h);
    // Brute force: i is extreme iff some triple (i, j, k) has all points on one side.
    for (int i = 0; i < 60; ++i) {
        bool extreme = false;
        for (int j = 0; j < 60 && !extreme; ++j)
            for (int k = j + 1; k < 60 && !extreme; ++k) {
                if (j == i || k == i) continue;
                int pos = 0, neg = 0;
                for (int q = 0; q < 60; ++q) {
                    const int s = predicates::orient3d(p[i], p[j], p[k], p[q]);
                    pos += s > 0, neg += s < 0;
                }
                extreme = pos == 0 || neg == 0;
            }
        EXPECT_EQ(h.is_vertex[i], extreme) << i;
    }
}

TEST(Hull, CoplanarInputThrows) {
    const std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}};
    EXPECT_THROW(convex_hull(p), Error);
}
