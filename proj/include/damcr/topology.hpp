#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "damcr/model.hpp"
#include "damcr/rng.hpp"

namespace damcr {

/// Symmetric unit-disk connectivity: i and j are linked iff their distance
/// is at most the communication range. Self links never exist.
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(std::size_t n) : n_(n), bits_(n * n, 0), neighbors_(n) {}

    std::size_t size() const { return n_; }
    bool operator()(NodeId i, NodeId j) const { return bits_[index(i, j)] != 0; }
    std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }
    std::size_t link_count() const;

    void connect(NodeId i, NodeId j);

private:
    std::size_t index(NodeId i, NodeId j) const { return std::size_t{i} * n_ + j; }

    std::size_t n_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<std::vector<NodeId>> neighbors_;
};

Adjacency build_adjacency(std::span<const NodeState> nodes, double comm_range_m);

struct Topology {
    std::vector<NodeState> nodes;
    Adjacency adjacency;
    std::vector<NodeId> gateway_ids;
};

/// Number of dual-radio gateways for n nodes: round(fraction * n), halves
/// rounded away from zero.
std::uint32_t gateway_count(std::uint32_t n, double dual_radio_fraction);

/// Uniform deployment over the square area. round(phi*N) randomly chosen
/// nodes are dual-radio gateways; the rest split LoRa-only / WiFi-only with
/// the odd node going to LoRa. Draws again, up to cfg.deploy_attempts
/// times, while some node cannot reach the rest over links whose ends share
/// a radio; the last draw is kept if none qualifies.
Topology deploy(const SimConfig& cfg, Rng& rng);

/// Assembles a topology from explicit node states (ids are reassigned to
/// positions in the list, gateways are the dual-radio nodes).
Topology make_topology(std::vector<NodeState> nodes, double comm_range_m);

struct ConnectivityReport {
    bool connected = true;
    // Largest first.
    std::vector<std::size_t> component_sizes;
};

/// Components of the range graph. With `radio_compatible`, only links whose
/// endpoints share a radio count.
ConnectivityReport is_connected(const Topology& topo, bool radio_compatible = false);

}  // namespace damcr
