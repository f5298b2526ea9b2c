#ifndef CCDEC_DECODER2D_HPP
#define CCDEC_DECODER2D_HPP

#include <algorithm>
#include <array>
#include <memory>
#include <set>
#include <vector>

#include "ccdec/lattice.hpp"
#include "ccdec/matcher.hpp"

namespace ccdec {

// Violated face ids for a set of flipped qubits, sorted.
inline std::vector<int> syndrome_from_error(const ColorLattice& lat,
                                            const std::vector<int>& error_qubits) {
    std::vector<uint8_t> par(lat.faces.size(), 0);
    for (int q : error_qubits) {
        if (q < 0 || q >= static_cast<int>(lat.vertices.size()))
            throw std::invalid_argument("qubit out of range");
        for (int f : lat.vertices[q].faces) par[f] ^= 1;
    }
    std::vector<int> out;
    for (size_t f = 0; f < par.size(); ++f)
        if (par[f]) out.push_back(static_cast<int>(f));
    return out;
}

inline std::vector<int> xor_sets(const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> s(a.begin(), a.end());
    for (int x : b) {
        auto [it, inserted] = s.insert(x);
        if (!inserted) s.erase(it);
    }
    return {s.begin(), s.end()};
}

// Two-stage matching decoder for a single round of bit-flip noise. For each
// color c: first pair up the violated non-c checks across c-colored lattice
// edges, then lift that edge string to a qubit set by matching on the
// monochromatic graph. The color whose qubit set is smallest wins (ties:
// red, green, blue).
class Decoder2d {
  public:
    struct ColorResult {
        Color color = Color::kRed;
        std::vector<int> edge_string;  // stage-1 c-colored lattice edges
        std::vector<int> qubits;       // stage-2 predicted flips, sorted
        double stage1_weight = 0.0;
        double stage2_weight = 0.0;
    };
    struct Result {
        std::array<ColorResult, 3> per_color;
        Color chosen = Color::kRed;
        const std::vector<int>& correction() const {
            return per_color[static_cast<int>(chosen)].qubits;
        }
    };

    explicit Decoder2d(ColorLattice lat) : lat_(std::move(lat)) {
        for (int c = 0; c < 3; ++c) {
            restricted_[c] = restricted_graph(lat_, static_cast<Color>(c));
            mono_[c] = monochrome_graph(lat_, static_cast<Color>(c));
            rctx_[c] = std::make_unique<MatchContext>(restricted_[c].graph,
                                                      MatchContext::Strategy::kApsp);
            mctx_[c] = std::make_unique<MatchContext>(mono_[c].graph,
                                                      MatchContext::Strategy::kApsp);
        }
    }

    const ColorLattice& lattice() const { return lat_; }
    const RestrictedGraph& restricted(Color c) const { return restricted_[static_cast<int>(c)]; }
    const MonochromeGraph& mono(Color c) const { return mono_[static_cast<int>(c)]; }
    const MatchContext& mono_context(Color c) const { return *mctx_[static_cast<int>(c)]; }
    const MatchContext& restricted_context(Color c) const { return *rctx_[static_cast<int>(c)]; }

    ColorResult decode_color(Color c, const std::vector<int>& violated_faces) const {
        int ci = static_cast<int>(c);
        const RestrictedGraph& rg = restricted_[ci];
        const MonochromeGraph& mg = mono_[ci];

        std::vector<int> defects1;
        for (int f : violated_faces)
            if (lat_.faces[f].color != c) defects1.push_back(rg.face_node[f]);
        Matching m1 = rctx_[ci]->solve(defects1);

        ColorResult res;
        res.color = c;
        res.stage1_weight = m1.weight;
        std::vector<int> defects2;
        for (int eid : m1.edge_ids) {
            int lattice_edge = static_cast<int>(rg.graph.edges[eid].payload);
            res.edge_string.push_back(lattice_edge);
            defects2.push_back(mg.edge_node[lattice_edge]);
        }
        for (int f : violated_faces)
            if (lat_.faces[f].color == c) defects2.push_back(mg.face_node[f]);
        Matching m2 = mctx_[ci]->solve(defects2);
        res.stage2_weight = m2.weight;
        for (int eid : m2.edge_ids)
            res.qubits.push_back(static_cast<int>(mg.graph.edges[eid].payload));
        std::sort(res.qubits.begin(), res.qubits.end());
        return res;
    }

    Result decode(const std::vector<int>& violated_faces) const {
        Result r;
        for (int c = 0; c < 3; ++c) r.per_color[c] = decode_color(static_cast<Color>(c), violated_faces);
        r.chosen = Color::kRed;
        for (int c = 1; c < 3; ++c)
            if (r.per_color[c].qubits.size() <
                r.per_color[static_cast<int>(r.chosen)].qubits.size())
                r.chosen = static_cast<Color>(c);
        return r;
    }

    // True when error + correction implements a logical flip. The residual
    // must be a stabilizer product (empty syndrome); it flips the logical
    // operator iff it overlaps the red boundary an odd number of times.
    bool is_logical_failure(const std::vector<int>& error_qubits,
                            const std::vector<int>& correction) const {
        std::vector<int> residual = xor_sets(error_qubits, correction);
        if (!syndrome_from_error(lat_, residual).empty())
            throw std::logic_error("correction does not reproduce the syndrome");
        const std::vector<int>& support = logical_support(lat_, Color::kRed);
        std::set<int> sup(support.begin(), support.end());
        int overlap = 0;
        for (int q : residual) overlap += sup.count(q);
        return overlap % 2 == 1;
    }

  private:
    ColorLattice lat_;
    std::array<RestrictedGraph, 3> restricted_;
    std::array<MonochromeGraph, 3> mono_;
    std::array<std::unique_ptr<MatchContext>, 3> rctx_, mctx_;
};

// A string of qubits anchored on a single violated c-colored face: the
// minimum-weight qubit set whose syndrome is exactly that face, found by
// matching the face against the boundary on the monochromatic graph.
inline std::vector<int> face_to_boundary_string(const Decoder2d& dec, int face_id) {
    Color c = dec.lattice().faces[face_id].color;
    const MonochromeGraph& mg = dec.mono(c);
    Matching m = dec.mono_context(c).solve({mg.face_node[face_id]});
    std::vector<int> qubits;
    for (int eid : m.edge_ids)
        qubits.push_back(static_cast<int>(mg.graph.edges[eid].payload));
    std::sort(qubits.begin(), qubits.end());
    return qubits;
}

// Error family that defeats single-stage (projection-style) matching but not
// the two-stage decoder: one central qubit flip plus a c-colored string that
// moves the violated c check to the boundary, leaving one violated check of
// each of the other two colors far from their own boundaries.
inline std::vector<int> gen_projection_hard_error(const Decoder2d& dec, Color c) {
    const ColorLattice& lat = dec.lattice();
    double cx = 0, cy = 0;
    for (const LatticeVertex& v : lat.vertices) {
        cx += v.x2;
        cy += v.y;
    }
    cx /= lat.vertices.size();
    cy /= lat.vertices.size();
    int center = -1;
    double best = 0;
    for (const LatticeVertex& v : lat.vertices) {
        if (v.faces.size() != 3) continue;
        double dx = v.x2 - cx, dy = 2.0 * (v.y - cy);
        double d2 = dx * dx + dy * dy;
        if (center < 0 || d2 < best) {
            center = v.id;
            best = d2;
        }
    }
    int fc = lat.vertices[center].color_face[static_cast<int>(c)];
    std::vector<int> str = face_to_boundary_string(dec, fc);
    return xor_sets(str, {center});
}

struct ConcatHardError {
    int distance = 0;
    std::vector<int> qubits;  // sorted
    std::array<int, 3> faces{-1, -1, -1};  // the violated check of each color
};

// Searches (deterministically) for a weight-12 error made of three strings,
// one per color, each connecting a violated check to the boundary with
// weight 4, with pairwise restricted-graph separation 7 between the violated
// checks. Such configurations make every per-color sub-decoding pick the
// cheap direct pairing and the combined decoder fails.
inline ConcatHardError gen_concat_hard_error() {
    const int d = 25;
    Decoder2d dec{build_triangular(d)};
    const ColorLattice& lat = dec.lattice();
    const int64_t one = static_cast<int64_t>(kWeightScale);

    auto mono_bdry_dist = [&](int f) {
        Color c = lat.faces[f].color;
        const MonochromeGraph& mg = dec.mono(c);
        return dec.mono_context(c).distance(mg.face_node[f], mg.graph.boundary_vertex) / one;
    };
    auto restricted_bdry_dist = [&](Color rc, int f) {
        const RestrictedGraph& rg = dec.restricted(rc);
        return dec.restricted_context(rc).distance(rg.face_node[f],
                                                   rg.graph.boundary_vertex) / one;
    };
    auto restricted_gap = [&](Color rc, int f1, int f2) {
        const RestrictedGraph& rg = dec.restricted(rc);
        return dec.restricted_context(rc).distance(rg.face_node[f1], rg.face_node[f2]) / one;
    };

    // Candidate checks: weight-4 string to the boundary, and distance 4 to
    // the merged boundary in both foreign restricted graphs.
    std::array<std::vector<int>, 3> cand;
    for (const LatticeFace& f : lat.faces) {
        if (mono_bdry_dist(f.id) != 4) continue;
        bool ok = true;
        for (int rc = 0; rc < 3 && ok; ++rc) {
            if (static_cast<Color>(rc) == f.color) continue;
            if (restricted_bdry_dist(static_cast<Color>(rc), f.id) != 4) ok = false;
        }
        if (ok) cand[static_cast<int>(f.color)].push_back(f.id);
    }

    for (int fr : cand[static_cast<int>(Color::kRed)]) {
        for (int fg : cand[static_cast<int>(Color::kGreen)]) {
            if (restricted_gap(Color::kBlue, fr, fg) != 7) continue;
            for (int fb : cand[static_cast<int>(Color::kBlue)]) {
                if (restricted_gap(Color::kRed, fg, fb) != 7) continue;
                if (restricted_gap(Color::kGreen, fr, fb) != 7) continue;
                std::vector<int> sr = face_to_boundary_string(dec, fr);
                std::vector<int> sg = face_to_boundary_string(dec, fg);
                std::vector<int> sb = face_to_boundary_string(dec, fb);
                std::vector<int> err = xor_sets(xor_sets(sr, sg), sb);
                if (err.size() != 12) continue;
                std::vector<int> syn = syndrome_from_error(lat, err);
                if (syn.size() != 3) continue;
                Decoder2d::Result r = dec.decode(syn);
                if (dec.is_logical_failure(err, r.correction())) {
                    ConcatHardError out;
                    out.distance = d;
                    out.qubits = err;
                    out.faces = {fr, fg, fb};
                    return out;
                }
            }
        }
    }
    throw std::runtime_error("no weight-12 three-string counterexample found");
}

}  // namespace ccdec

#endif
