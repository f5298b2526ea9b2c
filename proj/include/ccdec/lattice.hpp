#ifndef CCDEC_LATTICE_HPP
#define CCDEC_LATTICE_HPP

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccdec/matcher.hpp"

namespace ccdec {

enum class Color : int { kRed = 0, kGreen = 1, kBlue = 2 };

inline const char* color_name(Color c) {
    switch (c) {
        case Color::kRed: return "R";
        case Color::kGreen: return "G";
        case Color::kBlue: return "B";
    }
    return "?";
}

inline Color third_color(Color a, Color b) {
    return static_cast<Color>(3 - static_cast<int>(a) - static_cast<int>(b));
}

// Triangular patch of the hexagonal-face color code. Qubits sit on lattice
// vertices, one stabilizer pair per face. Vertices use doubled-x integer
// coordinates so all positions stay integral: site (row y, index i) is at
// (x2, y) = (2i + y, y). The bottom row is the red boundary, the left slope
// green, the right slope blue.
struct LatticeVertex {
    int id = -1;
    int x2 = 0;
    int y = 0;
    std::vector<int> faces;                       // incident face ids
    std::vector<int> edges;                       // incident edge ids
    std::array<int, 3> color_edge{-1, -1, -1};    // per color: incident edge of that color
    std::array<int, 3> color_face{-1, -1, -1};    // per color: incident face of that color
};

struct LatticeEdge {
    int id = -1;
    int v0 = -1, v1 = -1;
    Color color = Color::kRed;
    std::array<int, 2> faces{-1, -1};  // bounding faces; faces[1] == -1 on the patch border
};

struct LatticeFace {
    int id = -1;
    int x2 = 0;
    int y = 0;
    Color color = Color::kRed;
    std::vector<int> vertices;  // corners present, cyclic order
    std::vector<int> edges;
    // Corner slot per hexagon position (left, below-left, below-right,
    // right, above-right, above-left); -1 where the patch is cut off.
    std::array<int, 6> corner_slots{-1, -1, -1, -1, -1, -1};
};

struct ColorLattice {
    int distance = 0;
    std::vector<LatticeVertex> vertices;
    std::vector<LatticeEdge> edges;
    std::vector<LatticeFace> faces;
    std::array<std::vector<int>, 3> boundary_vertices;  // per color, ordered along the boundary
};

inline ColorLattice build_triangular(int d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
    ColorLattice lat;
    lat.distance = d;

    const int row0 = (3 * d - 1) / 2;  // sites in the bottom row
    auto row_len = [&](int y) { return row0 - y; };
    auto is_face_site = [](int y, int i) { return (i + 2 * y) % 3 == 2; };
    // Face colors cycle Green, Blue, Red up the rows.
    auto row_color = [](int y) {
        static constexpr Color cycle[3] = {Color::kGreen, Color::kBlue, Color::kRed};
        return cycle[y % 3];
    };

    // Site grid: vertex id, face id, or -1.
    std::vector<std::vector<int>> vid(row0), fid(row0);
    for (int y = 0; y < row0; ++y) {
        vid[y].assign(row_len(y), -1);
        fid[y].assign(row_len(y), -1);
        for (int i = 0; i < row_len(y); ++i) {
            if (is_face_site(y, i)) {
                LatticeFace f;
                f.id = static_cast<int>(lat.faces.size());
                f.x2 = 2 * i + y;
                f.y = y;
                f.color = row_color(y);
                fid[y][i] = f.id;
                lat.faces.push_back(f);
            } else {
                LatticeVertex v;
                v.id = static_cast<int>(lat.vertices.size());
                v.x2 = 2 * i + y;
                v.y = y;
                vid[y][i] = v.id;
                lat.vertices.push_back(v);
            }
        }
    }

    auto vertex_at = [&](int x2, int y) -> int {
        if (y < 0 || y >= row0) return -1;
        if ((x2 - y) % 2 != 0) return -1;
        int i = (x2 - y) / 2;
        if (i < 0 || i >= row_len(y)) return -1;
        return vid[y][i];
    };

    // Corner offsets in doubled coordinates, cyclic around the hexagon:
    // left, below-left, below-right, right, above-right, above-left.
    static constexpr std::array<std::pair<int, int>, 6> kCorner = {
        {{-2, 0}, {-1, -1}, {+1, -1}, {+2, 0}, {+1, +1}, {-1, +1}}};

    std::map<std::pair<int, int>, int> edge_ids;
    for (LatticeFace& f : lat.faces) {
        std::vector<int> corners;
        for (int s = 0; s < 6; ++s) {
            auto [dx, dy] = kCorner[s];
            int v = vertex_at(f.x2 + dx, f.y + dy);
            f.corner_slots[s] = v;
            if (v >= 0) corners.push_back(v);
        }
        f.vertices = corners;
        for (int v : corners) lat.vertices[v].faces.push_back(f.id);
        int m = static_cast<int>(corners.size());
        for (int j = 0; j < m; ++j) {
            int a = corners[j], b = corners[(j + 1) % m];
            auto key = std::minmax(a, b);
            auto [it, inserted] = edge_ids.try_emplace({key.first, key.second},
                                                       static_cast<int>(lat.edges.size()));
            if (inserted) {
                LatticeEdge e;
                e.id = it->second;
                e.v0 = key.first;
                e.v1 = key.second;
                lat.edges.push_back(e);
            }
            LatticeEdge& e = lat.edges[it->second];
            if (e.faces[0] == -1)
                e.faces[0] = f.id;
            else if (e.faces[0] != f.id && e.faces[1] == -1)
                e.faces[1] = f.id;
            f.edges.push_back(it->second);
        }
    }

    // Boundary membership per vertex: red = bottom row, green = left slope,
    // blue = right slope.
    auto boundary_mask = [&](int v) {
        const LatticeVertex& vx = lat.vertices[v];
        int i = (vx.x2 - vx.y) / 2;
        int mask = 0;
        if (vx.y == 0) mask |= 1 << static_cast<int>(Color::kRed);
        if (i == 0) mask |= 1 << static_cast<int>(Color::kGreen);
        if (i == row_len(vx.y) - 1) mask |= 1 << static_cast<int>(Color::kBlue);
        return mask;
    };

    for (LatticeEdge& e : lat.edges) {
        if (e.faces[1] != -1) {
            e.color = third_color(lat.faces[e.faces[0]].color, lat.faces[e.faces[1]].color);
        } else {
            int common = boundary_mask(e.v0) & boundary_mask(e.v1);
            if (common == 0 || (common & (common - 1)) != 0)
                throw std::logic_error("border edge must lie on exactly one boundary");
            Color bc = static_cast<Color>(__builtin_ctz(common));
            e.color = third_color(lat.faces[e.faces[0]].color, bc);
        }
        for (int v : {e.v0, e.v1}) {
            lat.vertices[v].edges.push_back(e.id);
            int& slot = lat.vertices[v].color_edge[static_cast<int>(e.color)];
            if (slot != -1) throw std::logic_error("vertex with two same-colored edges");
            slot = e.id;
        }
    }

    for (const LatticeFace& f : lat.faces) {
        for (int v : f.vertices) {
            int& slot = lat.vertices[v].color_face[static_cast<int>(f.color)];
            if (slot != -1) throw std::logic_error("vertex with two same-colored faces");
            slot = f.id;
        }
    }
    for (const LatticeVertex& v : lat.vertices)
        for (int c = 0; c < 3; ++c)
            if (v.color_edge[c] == -1 && v.color_face[c] == -1)
                throw std::logic_error("vertex with no object of some color");

    for (int y = 0; y < row0; ++y)
        for (int i = 0; i < row_len(y); ++i) {
            if (vid[y][i] < 0) continue;
            int mask = boundary_mask(vid[y][i]);
            if (y == 0) lat.boundary_vertices[static_cast<int>(Color::kRed)].push_back(vid[y][i]);
            if (mask & (1 << static_cast<int>(Color::kGreen)) && i == 0)
                lat.boundary_vertices[static_cast<int>(Color::kGreen)].push_back(vid[y][i]);
            if (mask & (1 << static_cast<int>(Color::kBlue)))
                lat.boundary_vertices[static_cast<int>(Color::kBlue)].push_back(vid[y][i]);
        }

    return lat;
}

// Qubits supporting the logical operator representative along the c boundary.
inline const std::vector<int>& logical_support(const ColorLattice& lat, Color c) {
    return lat.boundary_vertices[static_cast<int>(c)];
}

// Restricted graph for color c: one node per face of the other two colors
// plus a merged boundary node; one graph edge per c-colored lattice edge.
// Graph edge payloads are lattice edge ids.
struct RestrictedGraph {
    Color color = Color::kRed;
    MatchGraph graph;
    std::vector<int> node_face;  // graph node -> face id (-1 for the boundary node)
    std::vector<int> face_node;  // face id -> graph node (-1 for c-colored faces)
};

inline RestrictedGraph restricted_graph(const ColorLattice& lat, Color c) {
    RestrictedGraph rg;
    rg.color = c;
    rg.face_node.assign(lat.faces.size(), -1);
    for (const LatticeFace& f : lat.faces) {
        if (f.color == c) continue;
        rg.face_node[f.id] = static_cast<int>(rg.node_face.size());
        rg.node_face.push_back(f.id);
    }
    int boundary = static_cast<int>(rg.node_face.size());
    rg.node_face.push_back(-1);
    rg.graph.num_vertices = boundary + 1;
    rg.graph.boundary_vertex = boundary;
    for (const LatticeEdge& e : lat.edges) {
        if (e.color != c) continue;
        int a = rg.face_node[e.faces[0]];
        int b = (e.faces[1] == -1) ? boundary : rg.face_node[e.faces[1]];
        if (a < 0 || b < 0) throw std::logic_error("restricted edge touches a c-colored face");
        rg.graph.edges.push_back({a, b, 1.0, e.id});
    }
    return rg;
}

// Monochromatic graph for color c: one node per c-colored edge and face plus
// a merged boundary node; one graph edge per qubit, joining the qubit's
// c-edge and c-face (boundary when one of them is absent). Graph edge
// payloads are qubit (vertex) ids.
struct MonochromeGraph {
    Color color = Color::kRed;
    MatchGraph graph;
    std::vector<int> node_edge;  // graph node -> lattice edge id (-1 otherwise)
    std::vector<int> node_face;  // graph node -> lattice face id (-1 otherwise)
    std::vector<int> edge_node;  // lattice edge id -> graph node
    std::vector<int> face_node;  // face id -> graph node
};

inline MonochromeGraph monochrome_graph(const ColorLattice& lat, Color c) {
    MonochromeGraph mg;
    mg.color = c;
    mg.edge_node.assign(lat.edges.size(), -1);
    mg.face_node.assign(lat.faces.size(), -1);
    auto add_node = [&](int edge_id, int face_id) {
        int n = static_cast<int>(mg.node_edge.size());
        mg.node_edge.push_back(edge_id);
        mg.node_face.push_back(face_id);
        return n;
    };
    for (const LatticeEdge& e : lat.edges)
        if (e.color == c) mg.edge_node[e.id] = add_node(e.id, -1);
    for (const LatticeFace& f : lat.faces)
        if (f.color == c) mg.face_node[f.id] = add_node(-1, f.id);
    int boundary = add_node(-1, -1);
    mg.graph.num_vertices = boundary + 1;
    mg.graph.boundary_vertex = boundary;
    int ci = static_cast<int>(c);
    for (const LatticeVertex& v : lat.vertices) {
        int en = (v.color_edge[ci] >= 0) ? mg.edge_node[v.color_edge[ci]] : -1;
        int fn = (v.color_face[ci] >= 0) ? mg.face_node[v.color_face[ci]] : -1;
        int a = (en >= 0) ? en : boundary;
        int b = (fn >= 0) ? fn : boundary;
        if (a == boundary && b == boundary)
            throw std::logic_error("qubit with neither c-edge nor c-face");
        mg.graph.edges.push_back({a, b, 1.0, v.id});
    }
    return mg;
}

}  // namespace ccdec

#endif
