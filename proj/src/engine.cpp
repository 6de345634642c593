#include "damcr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "damcr/channel.hpp"
#include "damcr/simd/kernels.hpp"

namespace damcr {

namespace {

constexpr std::uint32_t kNoLink = std::numeric_limits<std::uint32_t>::max();
// Channel used by every transmission in baseline mode.
constexpr std::uint32_t kFixedChannel = 0;

}  // namespace

std::string_view to_string(Protocol p) {
    return p == Protocol::Baseline ? "baseline" : "damcr";
}

double hop_energy_j(const RadioProfile& radio, const EnergyParams& energy,
                    std::uint32_t packet_bits) {
    if (!(radio.bitrate_bps > 0.0)) throw std::invalid_argument("bitrate must be positive");
    const double airtime_s = static_cast<double>(packet_bits) / radio.bitrate_bps;
    return (energy.p_tx_w + energy.p_rx_w + energy.p_cpu_w) * airtime_s;
}

Priority classify_priority(TrafficKind kind) {
    return kind == TrafficKind::FaultAlert ? Priority::High : Priority::Normal;
}

TrafficKind draw_traffic_kind(Rng& rng, double fault_fraction) {
    return rng.bernoulli(fault_fraction) ? TrafficKind::FaultAlert : TrafficKind::Telemetry;
}

Simulation::Simulation(const SimConfig& cfg, std::uint64_t seed, Protocol protocol,
                       RunOptions options)
    : cfg_(cfg), seed_(seed), protocol_(protocol), options_(options) {
    validate(cfg_);
    Rng rng(seed_, StreamTag::Topology);
    topo_ = deploy(cfg_, rng);
    init();
}

Simulation::Simulation(const SimConfig& cfg, Topology topology, std::uint64_t seed,
                       Protocol protocol, RunOptions options)
    : cfg_(cfg), seed_(seed), protocol_(protocol), options_(options), topo_(std::move(topology)) {
    validate(cfg_);
    if (topo_.nodes.size() != cfg_.node_count)
        throw ConfigError("topology size does not match node_count");
    init();
}

void Simulation::init() {
    n_ = topo_.nodes.size();
    const bool baseline = protocol_ == Protocol::Baseline;

    hoppers_.clear();
    power_.assign(n_, {});
    last_sinr_.assign(n_, {});
    spent_.assign(n_, 0.0);
    for (NodeId i = 0; i < n_; ++i) {
        auto& node = topo_.nodes[i];
        node.residual_energy_j = cfg_.initial_energy_j;
        hoppers_.emplace_back(node.chaos_state, cfg_.chaos_mu, cfg_.fhss_channels);
        for (auto k : {RadioKind::LoRa, RadioKind::WiFi}) {
            const auto& radio = cfg_.radio(k);
            const double start = baseline ? radio.tx_power_max_dbm : radio.tx_power_init_dbm;
            power_[i][radio_index(k)] = power::PowerState(start, power::bounds_of(radio));
            node.tx_power_dbm[radio_index(k)] = power_[i][radio_index(k)].tx_power_dbm();
        }
    }
    for (auto k : {RadioKind::LoRa, RadioKind::WiFi}) {
        hop_energy_[radio_index(k)] = hop_energy_j(cfg_.radio(k), cfg_.energy_for(k), cfg_.packet_bits);
        noise_dbm_[radio_index(k)] =
            channel::noise_floor_dbm(cfg_.radio(k).bandwidth_hz, cfg_.channel.noise_figure_db);
    }

    Rng jam_rng(seed_, StreamTag::Jammer);
    jammer_ = spectrum::make_jammer(cfg_, jam_rng);

    // Undirected links from the connectivity graph.
    link_index_.assign(n_ * n_, kNoLink);
    link_mean_pl_db_.clear();
    for (NodeId i = 0; i < n_; ++i) {
        for (auto j : topo_.adjacency.neighbors(i)) {
            if (j < i) continue;
            const auto id = static_cast<std::uint32_t>(link_mean_pl_db_.size());
            link_index_[std::size_t{i} * n_ + j] = id;
            link_index_[std::size_t{j} * n_ + i] = id;
            const double d = distance(topo_.nodes[i].position, topo_.nodes[j].position);
            link_mean_pl_db_.push_back(
                channel::mean_path_loss_db(std::max(d, cfg_.channel.d0_m), cfg_.channel));
        }
    }
    link_shadow_db_.assign(link_mean_pl_db_.size(), 0.0);

    // Directed edges usable on each link's preferred radio.
    edges_.clear();
    edge_begin_.assign(n_ + 1, 0);
    for (NodeId i = 0; i < n_; ++i) {
        edge_begin_[i] = edges_.size();
        std::vector<NodeId> nb(topo_.adjacency.neighbors(i).begin(),
                               topo_.adjacency.neighbors(i).end());
        std::sort(nb.begin(), nb.end());
        for (auto j : nb) {
            auto radio = routing::select_radio(topo_.nodes[i].radios, topo_.nodes[j].radios);
            if (!radio) continue;
            if (baseline && *radio != RadioKind::WiFi) continue;
            edges_.push_back({i, j, *radio, link_id(i, j)});
        }
    }
    edge_begin_[n_] = edges_.size();
    const auto m = edges_.size();
    edge_mean_pl_.resize(m);
    for (std::size_t e = 0; e < m; ++e) edge_mean_pl_[e] = link_mean_pl_db_[edges_[e].link];
    edge_tx_power_.assign(m, 0.0);
    edge_shadow_.assign(m, 0.0);
    edge_noise_.resize(m);
    for (std::size_t e = 0; e < m; ++e) edge_noise_[e] = noise_dbm_[radio_index(edges_[e].radio)];
    edge_fading_.assign(m, 0.0);
    edge_probe_snr_.assign(m, 0.0);
    edge_measured_sinr_.assign(m, 0.0);
    edge_p_succ_.assign(m, 0.0);
    edge_energy_norm_.assign(m, 1.0);
    edge_weight_.assign(m, 0.0);
    have_measurement_ = false;
    graph_ = routing::WeightedGraph(n_);
}

bool Simulation::alive(NodeId node) const {
    return residual_energy_j(node) / cfg_.initial_energy_j > cfg_.routing.energy_floor;
}

bool Simulation::can_transmit(NodeId node, RadioKind radio) const {
    return topo_.nodes[node].radios.has(radio) &&
           residual_energy_j(node) >= hop_energy_[radio_index(radio)];
}

std::optional<std::size_t> Simulation::edge_index(NodeId from, NodeId to, RadioKind radio) const {
    for (auto e = edge_begin_[from]; e < edge_begin_[from + 1]; ++e) {
        if (edges_[e].to == to && edges_[e].radio == radio) return e;
    }
    return std::nullopt;
}

void Simulation::update_channels(std::uint32_t epoch) {
    Rng rng(seed_, StreamTag::Channel, {epoch});
    const double sigma = cfg_.channel.shadow_sigma_db;
    for (auto& s : link_shadow_db_) s = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        edge_tx_power_[e] = power_[edge.from][radio_index(edge.radio)].tx_power_dbm();
        edge_shadow_[e] = link_shadow_db_[edge.link];
        edge_fading_[e] = channel::fading_gain_db(cfg_.fading_model, cfg_.channel, rng);
    }
    const bool tr = protocol_ == Protocol::Damcr && channel::tr_applies(cfg_.fading_model);
    simd::link_budget_db({edge_tx_power_, edge_mean_pl_, edge_shadow_, edge_noise_, edge_fading_},
                         cfg_.channel.gt_dbi + cfg_.channel.gr_dbi, tr ? cfg_.tr_gain_db : 0.0,
                         edge_probe_snr_);
}

void Simulation::build_graph() {
    graph_ = routing::WeightedGraph(n_);
    if (protocol_ == Protocol::Baseline) {
        for (const auto& edge : edges_) {
            if (!alive(edge.from) || !alive(edge.to)) continue;
            graph_.add_edge(edge.from, {edge.to, edge.radio, 1.0, 1.0});
        }
        return;
    }

    // Nodes act on last epoch's measurements; the first epoch uses its probe.
    const auto& sinr = have_measurement_ ? edge_measured_sinr_ : edge_probe_snr_;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        edge_p_succ_[e] = routing::packet_success_prob(sinr[e], cfg_.packet_bits);
        edge_energy_norm_[e] = residual_energy_j(edges_[e].from) / cfg_.initial_energy_j;
    }
    simd::routing_weights(edge_p_succ_, edge_energy_norm_, cfg_.routing.alpha, cfg_.routing.beta,
                          edge_weight_);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        if (!alive(edge.from) || !alive(edge.to)) continue;
        graph_.add_edge(edge.from, {edge.to, edge.radio, edge_weight_[e], edge_p_succ_[e]});
    }
}

std::uint32_t Simulation::next_channel(NodeId node, std::uint32_t epoch) {
    if (protocol_ == Protocol::Baseline) return kFixedChannel;
    const auto ch = hoppers_[node].next_channel();
    topo_.nodes[node].chaos_state = hoppers_[node].state();
    if (options_.record_hops) hop_log_.push_back({epoch, node, hoppers_[node].state(), ch});
    return ch;
}

double Simulation::sample_sinr(NodeId from, NodeId to, RadioKind radio, std::uint32_t channel,
                               double fading_db) const {
    const auto link = link_id(from, to);
    const double pl = link_mean_pl_db_[link] + link_shadow_db_[link];
    const double noise = noise_dbm_[radio_index(radio)];
    const bool damcr = protocol_ == Protocol::Damcr;
    const double snr = channel::link_snr_db(
        power_[from][radio_index(radio)].tx_power_dbm(), cfg_.channel.gt_dbi, cfg_.channel.gr_dbi, pl,
        noise, fading_db, damcr && channel::tr_applies(cfg_.fading_model), cfg_.tr_gain_db);
    if (!jam_now_) return snr;

    // A hopping radio is hit only on the jammed channel; the fixed-channel
    // baseline sits on the jammed channel for the whole window.
    const bool hit = !damcr || (jammer_.jammed_channel && channel == *jammer_.jammed_channel);
    if (!hit) return snr;
    const double d = distance(jammer_.position, topo_.nodes[to].position);
    const double jam_rx = jammer_.tx_power_dbm + cfg_.channel.gt_dbi + cfg_.channel.gr_dbi -
                          channel::mean_path_loss_db(std::max(d, cfg_.channel.d0_m), cfg_.channel);
    return spectrum::effective_sinr_db(snr, snr + noise, jam_rx, noise, true,
                                       damcr ? cfg_.chaos_gain_db : 0.0);
}

bool Simulation::transmit(NodeId from, NodeId to, RadioKind radio, std::uint32_t channel,
                          double fading_db, bool relay, Packet& packet, Rng& rng,
                          EpochMetrics& m) {
    const double sinr = sample_sinr(from, to, radio, channel, fading_db);
    const double energy = hop_energy_[radio_index(radio)];
    spent_[from] += energy;
    topo_.nodes[from].residual_energy_j = residual_energy_j(from);
    packet.energy_j += energy;
    ++packet.transmissions;
    m.energy_j += energy;
    ++m.transmissions;
    m.sinr_sum_db += sinr;
    last_sinr_[from][radio_index(radio)] = sinr;
    if (auto e = edge_index(from, to, radio)) edge_measured_sinr_[*e] = sinr;

    const bool ok = rng.bernoulli(routing::packet_success_prob(sinr, cfg_.packet_bits));
    if (options_.record_transmissions) {
        tx_log_.push_back({m.epoch, packet.id, from, to, radio, channel, relay, ok, sinr, energy});
    }
    return ok;
}

std::optional<Simulation::RelayChoice> Simulation::find_relay(NodeId from, NodeId to,
                                                              RadioKind radio,
                                                              std::uint32_t channel,
                                                              Rng& rng) const {
    std::vector<routing::RelayCandidate> candidates;
    std::vector<RelayChoice> choices;
    std::vector<NodeId> nb(topo_.adjacency.neighbors(from).begin(),
                           topo_.adjacency.neighbors(from).end());
    std::sort(nb.begin(), nb.end());
    for (auto k : nb) {
        if (k == to || !topo_.nodes[k].radios.has(radio) || !alive(k)) continue;
        if (!topo_.adjacency(k, to)) continue;
        const auto onward = routing::select_radio(topo_.nodes[k].radios, topo_.nodes[to].radios);
        if (!onward || !can_transmit(k, *onward)) continue;

        // Overhearing the failed attempt on the sender's channel.
        const double f_in = channel::fading_gain_db(cfg_.fading_model, cfg_.channel, rng);
        const double heard = sample_sinr(from, k, radio, channel, f_in);
        if (!rng.bernoulli(routing::packet_success_prob(heard, cfg_.packet_bits))) continue;

        // Instantaneous SNR toward the next hop; the same realization carries
        // the forward if this candidate is picked.
        const double f_out = channel::fading_gain_db(cfg_.fading_model, cfg_.channel, rng);
        const auto link = link_id(k, to);
        const double snr = channel::link_snr_db(
            power_[k][radio_index(*onward)].tx_power_dbm(), cfg_.channel.gt_dbi,
            cfg_.channel.gr_dbi, link_mean_pl_db_[link] + link_shadow_db_[link],
            noise_dbm_[radio_index(*onward)], f_out, channel::tr_applies(cfg_.fading_model),
            cfg_.tr_gain_db);
        candidates.push_back({k, snr});
        choices.push_back({k, *onward, f_out});
    }
    if (candidates.empty()) return std::nullopt;
    const auto pick = routing::select_relay(candidates, rng, cfg_.relay_probability);
    if (!pick) return std::nullopt;
    for (const auto& c : choices)
        if (c.node == *pick) return c;
    return std::nullopt;
}

void Simulation::deliver(Packet& packet, Rng& rng, EpochMetrics& m) {
    const auto path = routing::compute_path(graph_, packet.src, packet.dst);
    if (!path) {
        ++m.unroutable;
        return;
    }
    const auto budget = std::max<std::uint32_t>(1, cfg_.max_retries(packet.priority));
    const bool damcr = protocol_ == Protocol::Damcr;
    for (std::size_t h = 0; h + 1 < path->size(); ++h) {
        const NodeId u = (*path)[h];
        const NodeId v = (*path)[h + 1];
        const auto radio = graph_.find(u, v)->radio;
        HopRecord hop{v, radio, 0, 0};
        bool done = false;
        while (!done && hop.transmissions < budget) {
            if (!can_transmit(u, radio)) break;
            const auto ch = next_channel(u, m.epoch);
            hop.channel = ch;
            hop.transmissions++;
            const double fading = channel::fading_gain_db(cfg_.fading_model, cfg_.channel, rng);
            if (transmit(u, v, radio, ch, fading, false, packet, rng, m)) {
                done = true;
                break;
            }
            if (!damcr || hop.transmissions >= budget) continue;
            const auto relay = find_relay(u, v, radio, ch, rng);
            if (!relay) continue;
            const auto rch = next_channel(relay->node, m.epoch);
            hop.channel = rch;
            hop.transmissions++;
            done = transmit(relay->node, v, relay->radio, rch, relay->fading_db, true, packet, rng, m);
        }
        packet.hop_trace.push_back(hop);
        if (!done) return;
    }
    packet.delivered = true;
    packet.latency_ms = static_cast<double>(packet.transmissions) * cfg_.per_hop_delay_ms;
    ++m.delivered;
    m.delivered_transmissions += packet.transmissions;
    m.latency_sum_ms += packet.latency_ms;
}

EpochMetrics Simulation::run_epoch(std::uint32_t epoch) {
    if (epoch < next_epoch_) throw std::logic_error("epochs must be run in increasing order");
    next_epoch_ = epoch + 1;

    EpochMetrics m;
    m.epoch = epoch;

    // (1) Jammer.
    jam_now_ = jammer_.active(epoch);
    m.jammer_active = jam_now_;
    jammer_.jammed_channel.reset();
    if (jam_now_) {
        Rng jam_rng(seed_, StreamTag::Jammer, {epoch});
        jammer_.jammed_channel = spectrum::jammer_channel(jam_rng, cfg_.fhss_channels);
    }

    // Channel realizations for this epoch; routing acts on last epoch's.
    update_channels(epoch);
    build_graph();
    edge_measured_sinr_ = edge_probe_snr_;
    have_measurement_ = true;
    for (auto& per_radio : last_sinr_) per_radio = {};

    // (2) Traffic.
    Rng traffic(seed_, StreamTag::Traffic, {epoch});
    std::vector<Packet> batch(cfg_.packets_per_epoch);
    for (auto& p : batch) {
        p.id = packet_counter_++;
        p.src = static_cast<NodeId>(traffic.index(n_));
        std::vector<NodeId> sinks;
        for (auto g : topo_.gateway_ids)
            if (g != p.src) sinks.push_back(g);
        if (sinks.empty()) {
            for (NodeId i = 0; i < n_; ++i)
                if (i != p.src) sinks.push_back(i);
        }
        p.dst = sinks[traffic.index(sinks.size())];
        p.priority = classify_priority(draw_traffic_kind(traffic, cfg_.high_priority_fraction));
    }
    m.generated = static_cast<std::uint32_t>(batch.size());

    // (3) Forwarding.
    for (std::size_t k = 0; k < batch.size(); ++k) {
        Rng rng(seed_, StreamTag::Transmission, {epoch, k});
        deliver(batch[k], rng, m);
    }

    // (4) Power control for every radio that transmitted.
    if (protocol_ == Protocol::Damcr) {
        for (NodeId i = 0; i < n_; ++i) {
            for (auto k : {RadioKind::LoRa, RadioKind::WiFi}) {
                const auto& sinr = last_sinr_[i][radio_index(k)];
                if (!sinr) continue;
                power_[i][radio_index(k)].update(*sinr, cfg_.power);
                topo_.nodes[i].tx_power_dbm[radio_index(k)] =
                    power_[i][radio_index(k)].tx_power_dbm();
            }
        }
    }

    // (5) Metrics.
    if (options_.record_packets)
        packets_.insert(packets_.end(), batch.begin(), batch.end());
    metrics_.push_back(m);
    return m;
}

RunSummary Simulation::run() {
    for (std::uint32_t e = next_epoch_; e < cfg_.epochs; ++e) run_epoch(e);
    return summarize(cfg_, seed_, protocol_, metrics_);
}

RunSummary summarize(const SimConfig& cfg, std::uint64_t seed, Protocol protocol,
                     std::vector<EpochMetrics> epochs) {
    RunSummary s;
    s.protocol = protocol;
    s.seed = seed;
    s.config = cfg;
    std::uint64_t delivered_tx = 0;
    double sinr_sum = 0.0;
    double latency_sum = 0.0;
    for (const auto& m : epochs) {
        s.generated += m.generated;
        s.delivered += m.delivered;
        s.unroutable += m.unroutable;
        s.transmissions += m.transmissions;
        delivered_tx += m.delivered_transmissions;
        sinr_sum += m.sinr_sum_db;
        latency_sum += m.latency_sum_ms;
        s.total_energy_j += m.energy_j;
    }
    s.epochs = std::move(epochs);
    if (s.generated) s.pdr = static_cast<double>(s.delivered) / static_cast<double>(s.generated);
    if (s.transmissions) s.mean_snr_db = sinr_sum / static_cast<double>(s.transmissions);
    if (s.delivered) {
        const auto d = static_cast<double>(s.delivered);
        s.mean_latency_ms = latency_sum / d;
        s.mean_hops = static_cast<double>(delivered_tx) / d;
        s.mean_energy_per_delivered_j = s.total_energy_j / d;
    }
    return s;
}

RunSummary run_simulation(const SimConfig& cfg, std::uint64_t seed) {
    return Simulation(cfg, seed, Protocol::Damcr).run();
}

RunSummary run_baseline(const SimConfig& cfg, std::uint64_t seed) {
    return Simulation(cfg, seed, Protocol::Baseline).run();
}

RunSummary aggregate_trials(std::span<const RunSummary> trials) {
    if (trials.empty()) throw std::invalid_argument("no trials to aggregate");
    if (trials.size() == 1) return trials.front();
    // Summing in seed order keeps the mean independent of trial order.
    std::vector<const RunSummary*> sorted;
    for (const auto& t : trials) sorted.push_back(&t);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->seed < b->seed; });

    RunSummary agg;
    agg.protocol = sorted.front()->protocol;
    agg.config = sorted.front()->config;
    agg.seed = sorted.front()->seed;
    const auto n = static_cast<double>(sorted.size());
    for (const auto* t : sorted) {
        agg.generated += t->generated;
        agg.delivered += t->delivered;
        agg.unroutable += t->unroutable;
        agg.transmissions += t->transmissions;
        agg.pdr += t->pdr;
        agg.mean_snr_db += t->mean_snr_db;
        agg.mean_latency_ms += t->mean_latency_ms;
        agg.mean_hops += t->mean_hops;
        agg.mean_energy_per_delivered_j += t->mean_energy_per_delivered_j;
        agg.total_energy_j += t->total_energy_j;
    }
    agg.pdr /= n;
    agg.mean_snr_db /= n;
    agg.mean_latency_ms /= n;
    agg.mean_hops /= n;
    agg.mean_energy_per_delivered_j /= n;
    agg.total_energy_j /= n;
    return agg;
}

MonteCarloResult run_monte_carlo(const SimConfig& cfg, Protocol protocol) {
    validate(cfg);
    std::vector<std::future<RunSummary>> jobs;
    for (auto seed : cfg.seeds) {
        jobs.push_back(std::async(std::launch::async, [&cfg, seed, protocol] {
            return Simulation(cfg, seed, protocol).run();
        }));
    }
    MonteCarloResult out;
    for (auto& j : jobs) out.trials.push_back(j.get());
    out.aggregate = aggregate_trials(out.trials);
    return out;
}

}  // namespace damcr
