#include "ccdec/lattice.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ccdec/gf2.hpp"

using namespace ccdec;

namespace {

std::set<std::pair<int, int>> edge_set(const ColorLattice& lat) {
    std::set<std::pair<int, int>> s;
    for (const LatticeEdge& e : lat.edges) s.insert({e.v0, e.v1});
    return s;
}

}  // namespace

TEST(Lattice, RejectsBadDistance) {
    EXPECT_THROW(build_triangular(2), std::invalid_argument);
    EXPECT_THROW(build_triangular(4), std::invalid_argument);
    EXPECT_THROW(build_triangular(1), std::invalid_argument);
}

TEST(Lattice, CountsMatchClosedForms) {
    for (int d = 3; d <= 13; d += 2) {
        ColorLattice lat = build_triangular(d);
        EXPECT_EQ(static_cast<int>(lat.vertices.size()), (3 * d * d + 1) / 4) << "d=" << d;
        EXPECT_EQ(static_cast<int>(lat.faces.size()), 3 * (d * d - 1) / 8) << "d=" << d;
        for (int c = 0; c < 3; ++c)
            EXPECT_EQ(static_cast<int>(lat.boundary_vertices[c].size()), d) << "d=" << d;

        // Color symmetry: equal share of faces and edges per color.
        std::array<int, 3> fc{0, 0, 0}, ec{0, 0, 0};
        for (const LatticeFace& f : lat.faces) fc[static_cast<int>(f.color)]++;
        for (const LatticeEdge& e : lat.edges) ec[static_cast<int>(e.color)]++;
        EXPECT_EQ(fc[0], fc[1]);
        EXPECT_EQ(fc[1], fc[2]);
        EXPECT_EQ(ec[0], ec[1]);
        EXPECT_EQ(ec[1], ec[2]);
    }
}

TEST(Lattice, CheckMatrixRank) {
    // Combined X and Z checks have rank (vertex count - 1): both sectors use
    // the same face-vertex incidence, which itself has rank (n-1)/2.
    for (int d = 3; d <= 11; d += 2) {
        ColorLattice lat = build_triangular(d);
        Gf2Matrix h(lat.faces.size(), lat.vertices.size());
        for (const LatticeFace& f : lat.faces)
            for (int v : f.vertices) h.set(f.id, v, true);
        size_t n = lat.vertices.size();
        EXPECT_EQ(2 * h.rank(), n - 1) << "d=" << d;
    }
}

TEST(Lattice, FaceAndVertexLocalStructure) {
    for (int d : {3, 5, 7, 9}) {
        ColorLattice lat = build_triangular(d);
        for (const LatticeFace& f : lat.faces) {
            EXPECT_TRUE(f.vertices.size() == 4 || f.vertices.size() == 6);
            std::set<Color> corner_edge_colors;
            for (int e : f.edges) {
                EXPECT_NE(lat.edges[e].color, f.color);
                EXPECT_TRUE(lat.edges[e].faces[0] == f.id || lat.edges[e].faces[1] == f.id);
            }
        }
        for (const LatticeVertex& v : lat.vertices) {
            EXPECT_GE(v.faces.size(), 1u);
            EXPECT_LE(v.faces.size(), 3u);
            EXPECT_GE(v.edges.size(), 2u);
            EXPECT_LE(v.edges.size(), 3u);
            std::set<Color> fcols, ecols;
            for (int f : v.faces) fcols.insert(lat.faces[f].color);
            for (int e : v.edges) ecols.insert(lat.edges[e].color);
            EXPECT_EQ(fcols.size(), v.faces.size()) << "two faces of one color at a vertex";
            EXPECT_EQ(ecols.size(), v.edges.size()) << "two edges of one color at a vertex";
            for (int c = 0; c < 3; ++c)
                EXPECT_TRUE(v.color_edge[c] >= 0 || v.color_face[c] >= 0);
        }
    }
}

TEST(Lattice, HandEnumeratedDistance3) {
    ColorLattice lat = build_triangular(3);
    ASSERT_EQ(lat.vertices.size(), 7u);
    ASSERT_EQ(lat.faces.size(), 3u);
    ASSERT_EQ(lat.edges.size(), 9u);

    // Faces in scan order: green (bottom row), blue (left), red (middle).
    EXPECT_EQ(lat.faces[0].color, Color::kGreen);
    EXPECT_EQ(lat.faces[1].color, Color::kBlue);
    EXPECT_EQ(lat.faces[2].color, Color::kRed);
    auto sorted = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    EXPECT_EQ(sorted(lat.faces[0].vertices), (std::vector<int>{1, 2, 3, 4}));
    EXPECT_EQ(sorted(lat.faces[1].vertices), (std::vector<int>{0, 1, 3, 5}));
    EXPECT_EQ(sorted(lat.faces[2].vertices), (std::vector<int>{3, 4, 5, 6}));

    EXPECT_EQ(lat.boundary_vertices[static_cast<int>(Color::kRed)], (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(lat.boundary_vertices[static_cast<int>(Color::kGreen)], (std::vector<int>{0, 5, 6}));
    EXPECT_EQ(lat.boundary_vertices[static_cast<int>(Color::kBlue)], (std::vector<int>{2, 4, 6}));

    std::set<std::pair<int, int>> expected = {{0, 1}, {1, 3}, {3, 5}, {0, 5}, {1, 2},
                                              {2, 4}, {3, 4}, {4, 6}, {5, 6}};
    EXPECT_EQ(edge_set(lat), expected);

    std::map<std::pair<int, int>, Color> expected_colors = {
        {{0, 1}, Color::kGreen}, {{1, 3}, Color::kRed},  {{3, 5}, Color::kGreen},
        {{0, 5}, Color::kRed},   {{1, 2}, Color::kBlue}, {{2, 4}, Color::kRed},
        {{3, 4}, Color::kBlue},  {{4, 6}, Color::kGreen}, {{5, 6}, Color::kBlue}};
    for (const LatticeEdge& e : lat.edges) {
        auto it = expected_colors.find({e.v0, e.v1});
        ASSERT_NE(it, expected_colors.end());
        EXPECT_EQ(e.color, it->second) << "edge " << e.v0 << "," << e.v1;
    }
}

TEST(Lattice, RestrictedGraphBijection) {
    for (int d : {3, 5, 7, 9}) {
        ColorLattice lat = build_triangular(d);
        for (int ci = 0; ci < 3; ++ci) {
            Color c = static_cast<Color>(ci);
            RestrictedGraph rg = restricted_graph(lat, c);

            int expected_nodes = 0;
            for (const LatticeFace& f : lat.faces)
                if (f.color != c) ++expected_nodes;
            EXPECT_EQ(rg.graph.num_vertices, expected_nodes + 1);
            EXPECT_EQ(rg.graph.boundary_vertex, expected_nodes);

            // One graph edge per c-colored lattice edge, payloads distinct,
            // endpoints consistent with the bounding faces.
            std::set<int64_t> payloads;
            for (const MatchEdge& e : rg.graph.edges) {
                const LatticeEdge& le = lat.edges[e.payload];
                EXPECT_EQ(le.color, c);
                EXPECT_TRUE(payloads.insert(e.payload).second);
                std::set<int> got{e.u, e.v};
                std::set<int> want{rg.face_node[le.faces[0]],
                                   le.faces[1] == -1 ? rg.graph.boundary_vertex
                                                     : rg.face_node[le.faces[1]]};
                EXPECT_EQ(got, want);
            }
            int c_edges = 0;
            for (const LatticeEdge& e : lat.edges)
                if (e.color == c) ++c_edges;
            EXPECT_EQ(static_cast<int>(rg.graph.edges.size()), c_edges);

            // Node map round trip.
            for (int n = 0; n < rg.graph.num_vertices - 1; ++n)
                EXPECT_EQ(rg.face_node[rg.node_face[n]], n);
        }
    }
}

TEST(Lattice, RestrictedGraphDistance3ByHand) {
    ColorLattice lat = build_triangular(3);
    RestrictedGraph rg = restricted_graph(lat, Color::kRed);
    // Nodes: green face (0), blue face (1), boundary (2).
    ASSERT_EQ(rg.graph.num_vertices, 3);
    std::set<std::pair<int, int>> got;
    for (const MatchEdge& e : rg.graph.edges) got.insert(std::minmax(e.u, e.v));
    EXPECT_EQ(got, (std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(Lattice, MonochromeGraphBijection) {
    for (int d : {3, 5, 7, 9}) {
        ColorLattice lat = build_triangular(d);
        for (int ci = 0; ci < 3; ++ci) {
            Color c = static_cast<Color>(ci);
            MonochromeGraph mg = monochrome_graph(lat, c);
            // One graph edge per qubit, payloads a permutation of qubit ids.
            ASSERT_EQ(mg.graph.edges.size(), lat.vertices.size());
            std::set<int64_t> payloads;
            for (const MatchEdge& e : mg.graph.edges) {
                EXPECT_TRUE(payloads.insert(e.payload).second);
                const LatticeVertex& v = lat.vertices[e.payload];
                int en = v.color_edge[ci] >= 0 ? mg.edge_node[v.color_edge[ci]]
                                               : mg.graph.boundary_vertex;
                int fn = v.color_face[ci] >= 0 ? mg.face_node[v.color_face[ci]]
                                               : mg.graph.boundary_vertex;
                EXPECT_EQ(std::minmax(e.u, e.v), std::minmax(en, fn));
            }
            // Node maps round trip.
            for (int n = 0; n < mg.graph.num_vertices; ++n) {
                if (mg.node_edge[n] >= 0) EXPECT_EQ(mg.edge_node[mg.node_edge[n]], n);
                if (mg.node_face[n] >= 0) EXPECT_EQ(mg.face_node[mg.node_face[n]], n);
            }
        }
    }
}

TEST(Lattice, LogicalSupportIsBoundary) {
    ColorLattice lat = build_triangular(7);
    for (int c = 0; c < 3; ++c) {
        const std::vector<int>& sup = logical_support(lat, static_cast<Color>(c));
        EXPECT_EQ(static_cast<int>(sup.size()), 7);
        EXPECT_EQ(sup, lat.boundary_vertices[c]);
    }
}
