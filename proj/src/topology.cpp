#include "damcr/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace damcr {

std::size_t Adjacency::link_count() const {
    std::size_t twice = 0;
    for (const auto& nb : neighbors_) twice += nb.size();
    return twice / 2;
}

void Adjacency::connect(NodeId i, NodeId j) {
    if (i == j || (*this)(i, j)) return;
    bits_[index(i, j)] = 1;
    bits_[index(j, i)] = 1;
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
}

Adjacency build_adjacency(std::span<const NodeState> nodes, double comm_range_m) {
    Adjacency adj(nodes.size());
    for (NodeId i = 0; i < nodes.size(); ++i) {
        for (NodeId j = i + 1; j < nodes.size(); ++j) {
            if (distance(nodes[i].position, nodes[j].position) <= comm_range_m) adj.connect(i, j);
        }
    }
    return adj;
}

std::uint32_t gateway_count(std::uint32_t n, double dual_radio_fraction) {
    return static_cast<std::uint32_t>(std::lround(dual_radio_fraction * n));
}

namespace {

Topology draw_deployment(const SimConfig& cfg, Rng& rng) {
    const auto n = cfg.node_count;
    std::vector<NodeState> nodes(n);
    for (NodeId i = 0; i < n; ++i) {
        auto& node = nodes[i];
        node.id = i;
        node.position = {rng.uniform(0.0, cfg.area_side_m), rng.uniform(0.0, cfg.area_side_m)};
        double h = rng.uniform(0.05, 0.95);
        while (h <= 0.05) h = rng.uniform(0.05, 0.95);
        node.chaos_state = h;
        node.residual_energy_j = cfg.initial_energy_j;
        for (auto k : {RadioKind::LoRa, RadioKind::WiFi})
            node.tx_power_dbm[radio_index(k)] = cfg.radio(k).tx_power_init_dbm;
    }

    // Random role assignment: partial Fisher-Yates over node ids.
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto j = i + rng.index(order.size() - i);
        std::swap(order[i], order[j]);
    }
    const auto gateways = gateway_count(n, cfg.dual_radio_fraction);
    const auto rest = n - gateways;
    const auto lora_only = rest - rest / 2;
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto& node = nodes[order[k]];
        if (k < gateways) {
            node.radios = RadioSet::both();
            node.is_gateway = true;
        } else if (k < gateways + lora_only) {
            node.radios = RadioSet::lora();
        } else {
            node.radios = RadioSet::wifi();
        }
    }
    return make_topology(std::move(nodes), cfg.comm_range_m);
}

}  // namespace

Topology deploy(const SimConfig& cfg, Rng& rng) {
    validate(cfg);
    auto topo = draw_deployment(cfg, rng);
    for (std::uint32_t a = 0; a < cfg.deploy_attempts && !is_connected(topo, true).connected; ++a)
        topo = draw_deployment(cfg, rng);
    return topo;
}

Topology make_topology(std::vector<NodeState> nodes, double comm_range_m) {
    Topology topo;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        nodes[i].id = i;
        nodes[i].is_gateway = nodes[i].radios.dual();
        if (nodes[i].is_gateway) topo.gateway_ids.push_back(i);
    }
    topo.adjacency = build_adjacency(nodes, comm_range_m);
    topo.nodes = std::move(nodes);
    return topo;
}

ConnectivityReport is_connected(const Topology& topo, bool radio_compatible) {
    const auto n = topo.nodes.size();
    ConnectivityReport report;
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::size_t size = 0;
        stack.push_back(s);
        seen[s] = true;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            ++size;
            for (auto v : topo.adjacency.neighbors(u)) {
                if (radio_compatible &&
                    (topo.nodes[u].radios.bits() & topo.nodes[v].radios.bits()) == 0)
                    continue;
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        report.component_sizes.push_back(size);
    }
    std::sort(report.component_sizes.begin(), report.component_sizes.end(), std::greater<>());
    report.connected = report.component_sizes.size() <= 1;
    return report;
}

}  // namespace damcr
