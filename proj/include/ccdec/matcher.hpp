#ifndef CCDEC_MATCHER_HPP
#define CCDEC_MATCHER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccdec/blossom.hpp"

namespace ccdec {

// Weights are quantized to a fixed-point grid so that all path arithmetic is
// exact integer arithmetic.
constexpr double kWeightScale = 65536.0;

struct MatchEdge {
    int u = -1;
    int v = -1;
    double weight = 0.0;
    int64_t payload = -1;  // caller-defined id (lattice edge, mechanism index, ...)
};

struct MatchGraph {
    int num_vertices = 0;
    int boundary_vertex = -1;  // -1 when the graph has no boundary
    std::vector<MatchEdge> edges;
};

struct Matching {
    std::vector<int> edge_ids;  // indices into MatchGraph::edges, sorted
    int64_t weight_ticks = 0;
    double weight = 0.0;
};

class MatchInfeasibleError : public std::runtime_error {
  public:
    explicit MatchInfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Exact minimum-weight matcher over a weighted graph with an optional
// boundary vertex. Defect sets are paired up (or absorbed by the boundary)
// along shortest paths; the reduced complete graph is solved exactly with
// Blossom matching.
//
// Distance strategies:
//   kApsp     - all-pairs shortest paths cached up front (small graphs).
//   kHub      - Dijkstra trees cached from a designated hub set; every
//               non-hub vertex must only neighbor hubs.
//   kDijkstra - per-solve Dijkstra from each defect.
// All strategies return identical matchings up to tie-breaking by
// deterministic input ordering.
class MatchContext {
  public:
    enum class Strategy { kAuto, kApsp, kHub, kDijkstra };

    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

    explicit MatchContext(MatchGraph graph, Strategy strategy = Strategy::kAuto,
                          std::vector<int> hubs = {})
        : g_(std::move(graph)) {
        if (g_.num_vertices < 0) throw std::invalid_argument("negative vertex count");
        if (g_.boundary_vertex >= g_.num_vertices)
            throw std::invalid_argument("boundary vertex out of range");
        ticks_.reserve(g_.edges.size());
        for (const MatchEdge& e : g_.edges) {
            if (e.u < 0 || e.u >= g_.num_vertices || e.v < 0 || e.v >= g_.num_vertices)
                throw std::invalid_argument("edge endpoint out of range");
            if (e.u == e.v) throw std::invalid_argument("self-loop edge");
            if (!std::isfinite(e.weight) || e.weight < 0.0)
                throw std::invalid_argument("edge weight must be finite and nonnegative");
            ticks_.push_back(static_cast<int64_t>(std::llround(e.weight * kWeightScale)));
        }
        adj_head_.assign(g_.num_vertices + 1, 0);
        for (const MatchEdge& e : g_.edges) {
            adj_head_[e.u + 1]++;
            adj_head_[e.v + 1]++;
        }
        for (int v = 0; v < g_.num_vertices; ++v) adj_head_[v + 1] += adj_head_[v];
        adj_.resize(g_.edges.size() * 2);
        std::vector<int> fill(adj_head_.begin(), adj_head_.end() - 1);
        for (size_t i = 0; i < g_.edges.size(); ++i) {
            const MatchEdge& e = g_.edges[i];
            adj_[fill[e.u]++] = {e.v, static_cast<int>(i)};
            adj_[fill[e.v]++] = {e.u, static_cast<int>(i)};
        }

        if (strategy == Strategy::kAuto) {
            if (g_.num_vertices <= 1200)
                strategy = Strategy::kApsp;
            else if (!hubs.empty())
                strategy = Strategy::kHub;
            else
                strategy = Strategy::kDijkstra;
        }
        strategy_ = strategy;

        if (strategy_ == Strategy::kApsp) {
            apsp_dist_.resize(g_.num_vertices);
            apsp_pred_.resize(g_.num_vertices);
            for (int v = 0; v < g_.num_vertices; ++v)
                dijkstra(v, apsp_dist_[v], apsp_pred_[v]);
        } else if (strategy_ == Strategy::kHub) {
            is_hub_.assign(g_.num_vertices, 0);
            for (int h : hubs) {
                if (h < 0 || h >= g_.num_vertices)
                    throw std::invalid_argument("hub out of range");
                is_hub_[h] = 1;
            }
            if (g_.boundary_vertex >= 0) is_hub_[g_.boundary_vertex] = 1;
            for (const MatchEdge& e : g_.edges)
                if (!is_hub_[e.u] && !is_hub_[e.v])
                    throw std::invalid_argument("non-hub vertices must form an independent set");
            hub_slot_.assign(g_.num_vertices, -1);
            for (int v = 0; v < g_.num_vertices; ++v) {
                if (!is_hub_[v]) continue;
                hub_slot_[v] = static_cast<int>(hub_dist_.size());
                hub_dist_.emplace_back();
                hub_pred_.emplace_back();
                dijkstra(v, hub_dist_.back(), hub_pred_.back());
            }
        }
    }

    const MatchGraph& graph() const { return g_; }
    int64_t edge_ticks(int edge_id) const { return ticks_[edge_id]; }

    // Shortest-path distance in ticks; kApsp strategy only.
    int64_t distance(int a, int b) const {
        if (strategy_ != Strategy::kApsp)
            throw std::logic_error("distance() requires the APSP strategy");
        if (a < 0 || a >= g_.num_vertices || b < 0 || b >= g_.num_vertices)
            throw std::invalid_argument("vertex out of range");
        return apsp_dist_[a][b];
    }

    Matching solve(const std::vector<int>& defects) const {
        validate_defects(defects);
        Matching result;
        int k = static_cast<int>(defects.size());
        if (k == 0) return result;

        // Per-solve Dijkstra trees when nothing is cached.
        std::vector<std::vector<int64_t>> local_dist;
        std::vector<std::vector<int>> local_pred;
        std::vector<int> defect_slot(g_.num_vertices, -1);
        if (strategy_ == Strategy::kDijkstra) {
            local_dist.resize(k);
            local_pred.resize(k);
            for (int i = 0; i < k; ++i) {
                defect_slot[defects[i]] = i;
                dijkstra(defects[i], local_dist[i], local_pred[i]);
            }
        }

        auto pair_dist = [&](int a, int b, int* via_edge) -> int64_t {
            *via_edge = -1;
            switch (strategy_) {
                case Strategy::kApsp:
                    return apsp_dist_[a][b];
                case Strategy::kDijkstra:
                    return local_dist[defect_slot[a]][b];
                case Strategy::kHub: {
                    if (is_hub_[a]) return hub_dist_[hub_slot_[a]][b];
                    if (is_hub_[b]) return hub_dist_[hub_slot_[b]][a];
                    int64_t best = kInf;
                    for (int ai = adj_head_[a]; ai < adj_head_[a + 1]; ++ai) {
                        auto [h, eid] = adj_[ai];
                        int64_t dh = hub_dist_[hub_slot_[h]][b];
                        if (dh >= kInf) continue;
                        int64_t d = ticks_[eid] + dh;
                        if (d < best) {
                            best = d;
                            *via_edge = eid;
                        }
                    }
                    return best;
                }
                default:
                    return kInf;
            }
        };

        bool has_boundary = g_.boundary_vertex >= 0;
        int n = has_boundary ? 2 * k : k;

        struct ReducedEdge {
            int a, b;
            int64_t w;
            int via;  // hub-mode first hop, -1 otherwise
        };
        std::vector<ReducedEdge> reduced;
        int64_t max_w = 0;
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                int via = -1;
                int64_t d = pair_dist(defects[i], defects[j], &via);
                if (d >= kInf) continue;
                reduced.push_back({i, j, d, via});
                max_w = std::max(max_w, d);
            }
            if (has_boundary) {
                int via = -1;
                int64_t d = pair_dist(defects[i], g_.boundary_vertex, &via);
                if (d < kInf) {
                    reduced.push_back({i, k + i, d, via});
                    max_w = std::max(max_w, d);
                }
            }
        }
        if (has_boundary)
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) reduced.push_back({k + i, k + j, 0, -1});

        // Max-weight transform; the offset is large enough that maximum
        // weight implies maximum cardinality, so a non-perfect result means
        // the instance is infeasible.
        int64_t big = max_w * static_cast<int64_t>((n + 2) / 2) + 1;
        BlossomMatcher bm(n);
        for (const ReducedEdge& e : reduced) bm.add_edge(e.a + 1, e.b + 1, big - e.w);
        bm.solve();
        for (int i = 0; i < n; ++i)
            if (bm.mate(i + 1) == 0)
                throw MatchInfeasibleError("no perfect matching: defect set cannot be paired");

        // XOR shortest paths of matched pairs into an edge set.
        std::vector<uint8_t> used(g_.edges.size(), 0);
        auto xor_tree_path = [&](const std::vector<int>& pred, int from_root_to) {
            int v = from_root_to;
            while (pred[v] >= 0) {
                int eid = pred[v];
                used[eid] ^= 1;
                const MatchEdge& e = g_.edges[eid];
                v = (e.u == v) ? e.v : e.u;
            }
        };
        auto xor_path = [&](int a, int b) {
            switch (strategy_) {
                case Strategy::kApsp:
                    xor_tree_path(apsp_pred_[a], b);
                    return;
                case Strategy::kDijkstra:
                    xor_tree_path(local_pred[defect_slot[a]], b);
                    return;
                case Strategy::kHub: {
                    if (is_hub_[a]) {
                        xor_tree_path(hub_pred_[hub_slot_[a]], b);
                        return;
                    }
                    if (is_hub_[b]) {
                        xor_tree_path(hub_pred_[hub_slot_[b]], a);
                        return;
                    }
                    int via = -1;
                    pair_dist(a, b, &via);
                    used[via] ^= 1;
                    const MatchEdge& e = g_.edges[via];
                    int h = (e.u == a) ? e.v : e.u;
                    xor_tree_path(hub_pred_[hub_slot_[h]], b);
                    return;
                }
                default:
                    return;
            }
        };
        for (int i = 0; i < n; ++i) {
            int j = bm.mate(i + 1) - 1;
            if (j < i) continue;
            if (i >= k) continue;  // dual-dual pair, no path
            int src = defects[i];
            int dst = (j < k) ? defects[j] : g_.boundary_vertex;
            xor_path(src, dst);
        }

        for (size_t eid = 0; eid < used.size(); ++eid) {
            if (!used[eid]) continue;
            result.edge_ids.push_back(static_cast<int>(eid));
            result.weight_ticks += ticks_[eid];
        }
        result.weight = static_cast<double>(result.weight_ticks) / kWeightScale;
        return result;
    }

  private:
    void validate_defects(const std::vector<int>& defects) const {
        std::vector<uint8_t> seen(g_.num_vertices, 0);
        for (int d : defects) {
            if (d < 0 || d >= g_.num_vertices)
                throw std::invalid_argument("defect out of range");
            if (d == g_.boundary_vertex)
                throw std::invalid_argument("boundary vertex cannot be a defect");
            if (seen[d]) throw std::invalid_argument("duplicate defect");
            seen[d] = 1;
        }
    }

    void dijkstra(int src, std::vector<int64_t>& dist, std::vector<int>& pred) const {
        dist.assign(g_.num_vertices, kInf);
        pred.assign(g_.num_vertices, -1);
        dist[src] = 0;
        using Item = std::pair<int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d != dist[v]) continue;
            for (int ai = adj_head_[v]; ai < adj_head_[v + 1]; ++ai) {
                auto [u, eid] = adj_[ai];
                int64_t nd = d + ticks_[eid];
                if (nd < dist[u]) {
                    dist[u] = nd;
                    pred[u] = eid;
                    pq.push({nd, u});
                }
            }
        }
    }

    MatchGraph g_;
    Strategy strategy_ = Strategy::kAuto;
    std::vector<int64_t> ticks_;
    std::vector<int> adj_head_;
    std::vector<std::pair<int, int>> adj_;  // (neighbor, edge id)
    std::vector<std::vector<int64_t>> apsp_dist_;
    std::vector<std::vector<int>> apsp_pred_;
    std::vector<uint8_t> is_hub_;
    std::vector<int> hub_slot_;
    std::vector<std::vector<int64_t>> hub_dist_;
    std::vector<std::vector<int>> hub_pred_;
};

}  // namespace ccdec

#endif
