#ifndef CCDEC_DECODER_CL_HPP
#define CCDEC_DECODER_CL_HPP

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ccdec/dem.hpp"
#include "ccdec/matcher.hpp"

namespace ccdec {

// Log-likelihood weight of an error mechanism with flip probability q.
inline double mechanism_weight(double q) {
    if (!(q > 0.0) || q >= 0.5) throw std::invalid_argument("mechanism probability out of range");
    return std::log((1.0 - q) / q);
}

struct CircuitDecoderConfig {
    // When set, color selection compares stage-1 + stage-2 weight instead of
    // the stage-2 weight alone.
    bool include_stage1_weight = false;
};

// Two-stage matching decoder for one color of a decomposed error model.
// Stage 1 matches the fired non-c detectors on the restricted graph; each
// matched restricted mechanism fires its virtual detector. Stage 2 matches
// the fired c detectors together with those virtual detectors on the "only"
// graph; the logical correction is the parity of observable flips over the
// chosen stage-2 mechanisms.
class CircuitDecoder {
  public:
    struct ColorResult {
        Color color = Color::kRed;
        bool feasible = false;
        std::vector<int> restricted_mechanisms;  // stage-1 selection
        std::vector<int> only_mechanisms;        // stage-2 selection
        double stage1_weight = 0.0;
        double stage2_weight = 0.0;
        uint8_t correction = 0;
        double total_weight(bool include_stage1) const {
            return include_stage1 ? stage1_weight + stage2_weight : stage2_weight;
        }
    };
    struct Result {
        std::array<ColorResult, 3> per_color;
        Color chosen = Color::kRed;
        uint8_t correction = 0;
    };

    CircuitDecoder(const MemoryCircuit& circuit, double p, CircuitDecoderConfig config = {})
        : config_(config) {
        dem_ = separate_by_type(compress_dem(extract_dem(circuit, p)));
        init();
    }

    // Decodes a pre-built type-separated model directly (e.g. one parsed from
    // a file).
    explicit CircuitDecoder(Dem separated_dem, CircuitDecoderConfig config = {})
        : config_(config), dem_(std::move(separated_dem)) {
        init();
    }

    const Dem& dem() const { return dem_; }
    const DecomposedDem& decomposition(Color c) const { return decomp_[static_cast<int>(c)]; }

    // `events` holds one bit per circuit detector. Detectors of the basis not
    // covered by the model (X-type here: they cannot flip the Z observable)
    // are ignored.
    Result decode(const std::vector<uint8_t>& events) const {
        if (events.size() != dem_.detectors.size())
            throw std::invalid_argument("event vector size mismatch");
        Result res;
        double best = std::numeric_limits<double>::infinity();
        bool any = false;
        for (int ci = 0; ci < 3; ++ci) {
            ColorResult& cr = res.per_color[ci];
            cr = decode_color(static_cast<Color>(ci), events);
            if (!cr.feasible) continue;
            double w = cr.total_weight(config_.include_stage1_weight);
            if (!any || w < best) {
                any = true;
                best = w;
                res.chosen = cr.color;
                res.correction = cr.correction;
            }
        }
        if (!any) throw MatchInfeasibleError("no color admits a matching");
        return res;
    }

    ColorResult decode_color(Color c, const std::vector<uint8_t>& events) const {
        const PerColor& pc = per_color_[static_cast<int>(c)];
        const DecomposedDem& dd = decomp_[static_cast<int>(c)];
        ColorResult cr;
        cr.color = c;
        std::vector<int> defects;
        for (size_t d = 0; d < events.size(); ++d)
            if (events[d] && pc.restricted_node[d] >= 0) defects.push_back(pc.restricted_node[d]);
        try {
            Matching m1 = pc.restricted_ctx->solve(defects);
            cr.stage1_weight = m1.weight;
            defects.clear();
            for (size_t d = 0; d < events.size(); ++d)
                if (events[d] && pc.only_node[d] >= 0) defects.push_back(pc.only_node[d]);
            for (int eid : m1.edge_ids) {
                int mech = static_cast<int>(pc.restricted_ctx->graph().edges[eid].payload);
                cr.restricted_mechanisms.push_back(mech);
                defects.push_back(pc.virtual_node[mech]);
            }
            Matching m2 = pc.only_ctx->solve(defects);
            cr.stage2_weight = m2.weight;
            for (int eid : m2.edge_ids) {
                int mech = static_cast<int>(pc.only_ctx->graph().edges[eid].payload);
                cr.only_mechanisms.push_back(mech);
                for (int o : dd.only.mechanisms[mech].observables)
                    if (o == 0) cr.correction ^= 1;
            }
            cr.feasible = true;
        } catch (const MatchInfeasibleError&) {
            cr.feasible = false;
        }
        return cr;
    }

  private:
    struct PerColor {
        std::vector<int> restricted_node;  // circuit detector id -> node or -1
        std::vector<int> only_node;        // circuit detector id -> node or -1
        std::vector<int> virtual_node;     // restricted mechanism -> node
        std::unique_ptr<MatchContext> restricted_ctx, only_ctx;
    };

    void init() {
        // Only the Z-type part of the model can flip the Z-basis observable;
        // its mechanisms are matched, the X-type ones are dropped here.
        Dem zdem;
        zdem.detectors = dem_.detectors;
        zdem.num_observables = dem_.num_observables;
        for (const Mechanism& m : dem_.mechanisms) {
            bool pure_z = true;
            for (int d : m.detectors)
                if (dem_.detectors[d].type != PauliType::kZ) pure_z = false;
            if (pure_z && !m.detectors.empty()) zdem.mechanisms.push_back(m);
        }
        int nd = static_cast<int>(dem_.detectors.size());
        for (int ci = 0; ci < 3; ++ci) {
            Color c = static_cast<Color>(ci);
            decomp_[ci] = decompose_dem(zdem, c);
            const DecomposedDem& dd = decomp_[ci];
            PerColor& pc = per_color_[ci];

            pc.restricted_node.assign(nd, -1);
            MatchGraph rg;
            for (int d = 0; d < nd; ++d)
                if (dem_.detectors[d].type == PauliType::kZ && dem_.detectors[d].color != c)
                    pc.restricted_node[d] = rg.num_vertices++;
            rg.boundary_vertex = rg.num_vertices++;
            for (size_t i = 0; i < dd.restricted.mechanisms.size(); ++i) {
                const Mechanism& m = dd.restricted.mechanisms[i];
                MatchEdge e;
                e.u = pc.restricted_node[m.detectors[0]];
                e.v = m.detectors.size() == 2 ? pc.restricted_node[m.detectors[1]]
                                              : rg.boundary_vertex;
                e.weight = mechanism_weight(m.q);
                e.payload = static_cast<int64_t>(i);
                rg.edges.push_back(e);
            }
            pc.restricted_ctx = std::make_unique<MatchContext>(std::move(rg));

            pc.only_node.assign(nd, -1);
            pc.virtual_node.assign(dd.restricted.mechanisms.size(), -1);
            MatchGraph og;
            std::vector<int> hubs;
            for (int d = 0; d < nd; ++d)
                if (dem_.detectors[d].type == PauliType::kZ && dem_.detectors[d].color == c) {
                    pc.only_node[d] = og.num_vertices;
                    hubs.push_back(og.num_vertices++);
                }
            for (size_t e = 0; e < dd.restricted.mechanisms.size(); ++e)
                pc.virtual_node[e] = og.num_vertices++;
            og.boundary_vertex = og.num_vertices++;
            hubs.push_back(og.boundary_vertex);
            auto map_only = [&](int d) {
                return d < nd ? pc.only_node[d]
                              : pc.virtual_node[dd.only.detectors[d].source_mechanism];
            };
            for (size_t i = 0; i < dd.only.mechanisms.size(); ++i) {
                const Mechanism& m = dd.only.mechanisms[i];
                if (m.detectors.empty()) continue;  // undetectable; nothing to match
                MatchEdge e;
                e.u = map_only(m.detectors[0]);
                e.v = m.detectors.size() == 2 ? map_only(m.detectors[1]) : og.boundary_vertex;
                e.weight = mechanism_weight(m.q);
                e.payload = static_cast<int64_t>(i);
                og.edges.push_back(e);
            }
            // Virtual detectors never share a mechanism, so they form an
            // independent set and the hub strategy stays exact on big graphs.
            pc.only_ctx = std::make_unique<MatchContext>(std::move(og), MatchContext::Strategy::kAuto,
                                                         std::move(hubs));
        }
    }

    CircuitDecoderConfig config_;
    Dem dem_;
    std::array<DecomposedDem, 3> decomp_;
    std::array<PerColor, 3> per_color_;
};

}  // namespace ccdec

#endif
