#include "damcr/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace damcr {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename Int>
std::string fmt_int(Int v) {
    return std::to_string(v);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view unquote(std::string_view v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

double parse_double(std::string_view v, const std::string& key) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': expected a number, got '" + std::string(v) + "'");
    return out;
}

std::uint64_t parse_u64(std::string_view v, const std::string& key) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" +
                          std::string(v) + "'");
    return out;
}

std::uint32_t parse_u32(std::string_view v, const std::string& key) {
    const auto x = parse_u64(v, key);
    if (x > 0xffffffffull) throw ConfigError("key '" + key + "': value out of range");
    return static_cast<std::uint32_t>(x);
}

std::vector<std::uint64_t> parse_u64_list(std::string_view v, const std::string& key) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError("key '" + key + "': expected a list like [1, 2, 3]");
    std::vector<std::uint64_t> out;
    auto body = trim(v.substr(1, v.size() - 2));
    while (!body.empty()) {
        const auto comma = body.find(',');
        out.push_back(parse_u64(trim(body.substr(0, comma)), key));
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const SimConfig&)> get;
    std::function<void(SimConfig&, std::string_view)> set;
};

Field dbl(std::string section, std::string key, double SimConfig::*m) {
    auto name = key;
    return {std::move(section), std::move(key),
            [m](const SimConfig& c) { return fmt_double(c.*m); },
            [m, name](SimConfig& c, std::string_view v) { c.*m = parse_double(v, name); }};
}

Field u32(std::string section, std::string key, std::uint32_t SimConfig::*m) {
    auto name = key;
    return {std::move(section), std::move(key),
            [m](const SimConfig& c) { return fmt_int(c.*m); },
            [m, name](SimConfig& c, std::string_view v) { c.*m = parse_u32(v, name); }};
}

template <typename Sub>
Field sub_dbl(std::string section, std::string key, std::function<Sub&(SimConfig&)> sub,
              double Sub::*m) {
    auto name = key;
    return {std::move(section), std::move(key),
            [sub, m](const SimConfig& c) { return fmt_double(sub(const_cast<SimConfig&>(c)).*m); },
            [sub, m, name](SimConfig& c, std::string_view v) { sub(c).*m = parse_double(v, name); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(dbl("sim", "area_side_m", &SimConfig::area_side_m));
        f.push_back(u32("sim", "node_count", &SimConfig::node_count));
        f.push_back(dbl("sim", "comm_range_m", &SimConfig::comm_range_m));
        f.push_back(u32("sim", "epochs", &SimConfig::epochs));
        f.push_back(u32("sim", "packet_bits", &SimConfig::packet_bits));
        f.push_back(dbl("sim", "per_hop_delay_ms", &SimConfig::per_hop_delay_ms));
        f.push_back(dbl("sim", "dual_radio_fraction", &SimConfig::dual_radio_fraction));
        f.push_back(u32("sim", "fhss_channels", &SimConfig::fhss_channels));
        f.push_back(dbl("sim", "relay_probability", &SimConfig::relay_probability));
        f.push_back(dbl("sim", "tr_gain_db", &SimConfig::tr_gain_db));
        f.push_back(dbl("sim", "chaos_gain_db", &SimConfig::chaos_gain_db));
        f.push_back(dbl("sim", "chaos_mu", &SimConfig::chaos_mu));
        f.push_back({"sim", "fading_model",
                     [](const SimConfig& c) { return "\"" + std::string(to_string(c.fading_model)) + "\""; },
                     [](SimConfig& c, std::string_view v) { c.fading_model = parse_fading(unquote(v)); }});
        f.push_back({"sim", "attack",
                     [](const SimConfig& c) { return "\"" + std::string(to_string(c.attack)) + "\""; },
                     [](SimConfig& c, std::string_view v) { c.attack = parse_attack(unquote(v)); }});
        f.push_back(u32("sim", "jam_start_epoch", &SimConfig::jam_start_epoch));
        f.push_back(u32("sim", "jam_end_epoch", &SimConfig::jam_end_epoch));
        f.push_back(dbl("sim", "jam_tx_power_dbm", &SimConfig::jam_tx_power_dbm));
        f.push_back(u32("sim", "trials", &SimConfig::trials));
        f.push_back({"sim", "seeds",
                     [](const SimConfig& c) {
                         std::string s = "[";
                         for (std::size_t i = 0; i < c.seeds.size(); ++i) {
                             if (i) s += ", ";
                             s += fmt_int(c.seeds[i]);
                         }
                         return s + "]";
                     },
                     [](SimConfig& c, std::string_view v) { c.seeds = parse_u64_list(v, "seeds"); }});
        f.push_back(u32("sim", "packets_per_epoch", &SimConfig::packets_per_epoch));
        f.push_back(dbl("sim", "high_priority_fraction", &SimConfig::high_priority_fraction));
        f.push_back(u32("sim", "max_retries_normal", &SimConfig::max_retries_normal));
        f.push_back(u32("sim", "max_retries_high", &SimConfig::max_retries_high));
        f.push_back(u32("sim", "deploy_attempts", &SimConfig::deploy_attempts));

        for (auto kind : {RadioKind::LoRa, RadioKind::WiFi}) {
            const std::string sec(to_string(kind));
            std::function<RadioProfile&(SimConfig&)> sub = [kind](SimConfig& c) -> RadioProfile& {
                return c.radio(kind);
            };
            f.push_back(sub_dbl<RadioProfile>(sec, "tx_power_init_dbm", sub, &RadioProfile::tx_power_init_dbm));
            f.push_back(sub_dbl<RadioProfile>(sec, "tx_power_min_dbm", sub, &RadioProfile::tx_power_min_dbm));
            f.push_back(sub_dbl<RadioProfile>(sec, "tx_power_max_dbm", sub, &RadioProfile::tx_power_max_dbm));
            f.push_back(sub_dbl<RadioProfile>(sec, "bandwidth_hz", sub, &RadioProfile::bandwidth_hz));
            f.push_back(sub_dbl<RadioProfile>(sec, "bitrate_bps", sub, &RadioProfile::bitrate_bps));
            f.push_back(sub_dbl<RadioProfile>(sec, "carrier_hz", sub, &RadioProfile::carrier_hz));
            f.push_back(sub_dbl<RadioProfile>(sec, "channel_step_hz", sub, &RadioProfile::channel_step_hz));
        }

        std::function<ChannelParams&(SimConfig&)> ch = [](SimConfig& c) -> ChannelParams& { return c.channel; };
        f.push_back(sub_dbl<ChannelParams>("channel", "pl0_db", ch, &ChannelParams::pl0_db));
        f.push_back(sub_dbl<ChannelParams>("channel", "d0_m", ch, &ChannelParams::d0_m));
        f.push_back(sub_dbl<ChannelParams>("channel", "exponent", ch, &ChannelParams::exponent));
        f.push_back(sub_dbl<ChannelParams>("channel", "shadow_sigma_db", ch, &ChannelParams::shadow_sigma_db));
        f.push_back(sub_dbl<ChannelParams>("channel", "gt_dbi", ch, &ChannelParams::gt_dbi));
        f.push_back(sub_dbl<ChannelParams>("channel", "gr_dbi", ch, &ChannelParams::gr_dbi));
        f.push_back(sub_dbl<ChannelParams>("channel", "noise_figure_db", ch, &ChannelParams::noise_figure_db));
        f.push_back(sub_dbl<ChannelParams>("channel", "rician_k_db", ch, &ChannelParams::rician_k_db));

        std::function<PowerCtlParams&(SimConfig&)> pw = [](SimConfig& c) -> PowerCtlParams& { return c.power; };
        f.push_back(sub_dbl<PowerCtlParams>("power", "target_snr_db", pw, &PowerCtlParams::target_snr_db));
        f.push_back(sub_dbl<PowerCtlParams>("power", "step_db", pw, &PowerCtlParams::step_db));
        f.push_back(sub_dbl<PowerCtlParams>("power", "hysteresis_db", pw, &PowerCtlParams::hysteresis_db));

        std::function<RoutingParams&(SimConfig&)> rt = [](SimConfig& c) -> RoutingParams& { return c.routing; };
        f.push_back(sub_dbl<RoutingParams>("routing", "alpha", rt, &RoutingParams::alpha));
        f.push_back(sub_dbl<RoutingParams>("routing", "beta", rt, &RoutingParams::beta));
        f.push_back(sub_dbl<RoutingParams>("routing", "energy_floor", rt, &RoutingParams::energy_floor));

        f.push_back(dbl("energy", "initial_energy_j", &SimConfig::initial_energy_j));
        for (auto kind : {RadioKind::LoRa, RadioKind::WiFi}) {
            const std::string prefix = std::string(to_string(kind)) + "_";
            std::function<EnergyParams&(SimConfig&)> en = [kind](SimConfig& c) -> EnergyParams& {
                return c.energy_for(kind);
            };
            f.push_back(sub_dbl<EnergyParams>("energy", prefix + "p_tx_w", en, &EnergyParams::p_tx_w));
            f.push_back(sub_dbl<EnergyParams>("energy", prefix + "p_rx_w", en, &EnergyParams::p_rx_w));
            f.push_back(sub_dbl<EnergyParams>("energy", prefix + "p_cpu_w", en, &EnergyParams::p_cpu_w));
        }
        return f;
    }();
    return table;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
    SimConfig cfg = default_config(30, FadingModel::Awgn, Attack::None);
    std::string section;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            bool known = false;
            for (const auto& f : fields()) known = known || f.section == section;
            if (!known) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const Field* field = nullptr;
        for (const auto& f : fields()) {
            if (f.section == section && f.key == key) field = &f;
        }
        if (!field) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        const auto full = section + "." + key;
        if (!seen.insert(full).second) throw ConfigError(where + "duplicate key '" + full + "'");
        try {
            field->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    const bool has_seeds = seen.count("sim.seeds") > 0;
    const bool has_trials = seen.count("sim.trials") > 0;
    if (has_seeds && !has_trials) {
        cfg.trials = static_cast<std::uint32_t>(cfg.seeds.size());
    } else if (has_trials && !has_seeds) {
        cfg.seeds.clear();
        for (std::uint32_t i = 1; i <= cfg.trials; ++i) cfg.seeds.push_back(i);
    }
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const SimConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get(cfg) + "\n";
    }
    return out;
}

}  // namespace damcr
