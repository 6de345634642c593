#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "damcr/model.hpp"
#include "damcr/rng.hpp"

namespace damcr::routing {

/// Bit error probability 0.5 * erfc(sqrt(snr)) with snr in linear scale.
double bit_error_prob(double snr_db);

/// (1 - BER)^bits evaluated as exp(bits * log1p(-BER)).
double packet_success_prob(double snr_db, std::uint32_t packet_bits);

/// alpha * (1 - p_succ) + beta / energy_norm, or nullopt when the sender's
/// normalized residual energy is at or below the floor.
std::optional<double> link_weight(double p_succ, double energy_norm, const RoutingParams& params);

/// WiFi when both ends have it, else LoRa when both have it, else nothing.
std::optional<RadioKind> select_radio(RadioSet a, RadioSet b);

struct Edge {
    NodeId to = 0;
    RadioKind radio = RadioKind::LoRa;
    double weight = 0.0;
    double p_succ = 0.0;
};

/// Directed graph; link weights depend on the sender's energy so (i, j) and
/// (j, i) may differ.
class WeightedGraph {
public:
    WeightedGraph() = default;
    explicit WeightedGraph(std::size_t n) : out_(n) {}

    std::size_t size() const { return out_.size(); }
    void add_edge(NodeId from, const Edge& e);
    std::span<const Edge> edges(NodeId from) const { return out_[from]; }
    const Edge* find(NodeId from, NodeId to) const;

private:
    std::vector<std::vector<Edge>> out_;
};

/// Minimum total weight path from src to dst (inclusive of both). Among
/// equal-weight paths the lexicographically smallest node sequence wins
/// (exact for strictly positive weights). nullopt when dst is unreachable.
/// Throws std::invalid_argument when src == dst or either id is out of range.
std::optional<std::vector<NodeId>> compute_path(const WeightedGraph& graph, NodeId src, NodeId dst);

/// Sum of edge weights along the path, accumulated from the source.
double path_weight(const WeightedGraph& graph, std::span<const NodeId> path);

struct RelayCandidate {
    NodeId node = 0;
    double snr_to_next_hop_db = 0.0;
};

/// Each candidate volunteers independently with probability p_r (draws made
/// in ascending node id order); the volunteer with the highest SNR toward
/// the next hop wins, ties to the lower id.
std::optional<NodeId> select_relay(std::span<const RelayCandidate> candidates, Rng& rng,
                                   double p_r);

}  // namespace damcr::routing
