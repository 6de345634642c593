#include "damcr/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "damcr/channel.hpp"

namespace damcr::routing {

double bit_error_prob(double snr_db) {
    const double snr = channel::db_to_linear(snr_db);
    return 0.5 * std::erfc(std::sqrt(snr));
}

double packet_success_prob(double snr_db, std::uint32_t packet_bits) {
    if (packet_bits == 0) return 1.0;
    const double ber = bit_error_prob(snr_db);
    return std::exp(static_cast<double>(packet_bits) * std::log1p(-ber));
}

std::optional<double> link_weight(double p_succ, double energy_norm, const RoutingParams& params) {
    if (energy_norm <= params.energy_floor || energy_norm <= 0.0) return std::nullopt;
    // Same operation order as simd::routing_weights.
    return params.alpha * (1.0 - p_succ) + params.beta / energy_norm;
}

std::optional<RadioKind> select_radio(RadioSet a, RadioSet b) {
    if (a.has(RadioKind::WiFi) && b.has(RadioKind::WiFi)) return RadioKind::WiFi;
    if (a.has(RadioKind::LoRa) && b.has(RadioKind::LoRa)) return RadioKind::LoRa;
    return std::nullopt;
}

void WeightedGraph::add_edge(NodeId from, const Edge& e) {
    if (e.weight < 0.0) throw std::invalid_argument("negative link weight");
    out_.at(from).push_back(e);
}

const Edge* WeightedGraph::find(NodeId from, NodeId to) const {
    for (const auto& e : out_[from])
        if (e.to == to) return &e;
    return nullptr;
}

namespace {

std::vector<NodeId> unwind(const std::vector<NodeId>& pred, NodeId v, NodeId none) {
    std::vector<NodeId> path;
    for (NodeId x = v; x != none; x = pred[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<std::vector<NodeId>> compute_path(const WeightedGraph& graph, NodeId src, NodeId dst) {
    const auto n = graph.size();
    if (src >= n || dst >= n) throw std::invalid_argument("node id out of range");
    if (src == dst) throw std::invalid_argument("source and destination coincide");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const NodeId none = static_cast<NodeId>(n);
    std::vector<double> dist(n, inf);
    std::vector<NodeId> pred(n, none);
    std::vector<bool> done(n, false);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

    dist[src] = 0.0;
    queue.emplace(0.0, src);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (done[u] || d > dist[u]) continue;
        done[u] = true;
        if (u == dst) break;
        for (const auto& e : graph.edges(u)) {
            const auto v = e.to;
            if (done[v]) continue;
            const double cand = dist[u] + e.weight;
            if (cand < dist[v]) {
                dist[v] = cand;
                pred[v] = u;
                queue.emplace(cand, v);
            } else if (cand == dist[v] && pred[v] != u) {
                auto via_u = unwind(pred, u, none);
                auto current = unwind(pred, pred[v], none);
                via_u.push_back(v);
                current.push_back(v);
                if (via_u < current) pred[v] = u;
            }
        }
    }
    if (dist[dst] == inf) return std::nullopt;
    return unwind(pred, dst, none);
}

double path_weight(const WeightedGraph& graph, std::span<const NodeId> path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto* e = graph.find(path[i], path[i + 1]);
        if (!e) return std::numeric_limits<double>::infinity();
        total += e->weight;
    }
    return total;
}

std::optional<NodeId> select_relay(std::span<const RelayCandidate> candidates, Rng& rng,
                                   double p_r) {
    std::vector<RelayCandidate> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.node < b.node; });
    std::optional<RelayCandidate> best;
    for (const auto& c : sorted) {
        if (!rng.bernoulli(p_r)) continue;
        if (!best || c.snr_to_next_hop_db > best->snr_to_next_hop_db) best = c;
    }
    if (!best) return std::nullopt;
    return best->node;
}

}  // namespace damcr::routing
