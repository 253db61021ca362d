#include "urllc/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "urllc/outage.hpp"
#include "urllc/presets.hpp"
#include "urllc/queueing.hpp"
#include "urllc/traffic.hpp"
#include "urllc/v2i.hpp"

namespace urllc {

namespace {

void check_token_list(const std::string& value, std::initializer_list<const char*> allowed,
                      const std::string& key) {
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        const std::string item = value.substr(start, comma - start);
        bool known = false;
        for (const char* a : allowed) {
            known = known || item == a;
        }
        if (!known) {
            throw config_error(0, "key '" + key + "' does not accept '" + item + "'");
        }
        start = comma + 1;
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ParamValue parse_value(const ParamSpec& spec, const std::string& text, int line) {
    ParamValue v;
    v.type = spec.type;
    const char* cstr = text.c_str();
    char* end = nullptr;
    switch (spec.type) {
        case ParamType::Int: {
            v.int_v = std::strtoll(cstr, &end, 10);
            if (end == cstr || *end != '\0') {
                throw config_error(line, "key '" + spec.key + "' expects an integer, got '" +
                                             text + "'");
            }
            break;
        }
        case ParamType::Double: {
            v.double_v = std::strtod(cstr, &end);
            if (end == cstr || *end != '\0') {
                throw config_error(line, "key '" + spec.key + "' expects a number, got '" + text +
                                             "'");
            }
            break;
        }
        case ParamType::String: {
            v.string_v = text;
            break;
        }
        case ParamType::DoubleList: {
            std::size_t start = 0;
            while (start <= text.size()) {
                auto comma = text.find(',', start);
                if (comma == std::string::npos) comma = text.size();
                const std::string item = trim(text.substr(start, comma - start));
                if (item.empty()) {
                    throw config_error(line, "key '" + spec.key + "' has an empty list item");
                }
                const char* istr = item.c_str();
                v.list_v.push_back(std::strtod(istr, &end));
                if (end == istr || *end != '\0') {
                    throw config_error(line, "key '" + spec.key + "' expects numbers, got '" +
                                                 item + "'");
                }
                start = comma + 1;
            }
            break;
        }
    }
    return v;
}

std::string serialize_value(const ParamValue& v) {
    switch (v.type) {
        case ParamType::Int: return std::to_string(v.int_v);
        case ParamType::Double: return format_double(v.double_v);
        case ParamType::String: return v.string_v;
        case ParamType::DoubleList: {
            std::string out;
            for (std::size_t i = 0; i < v.list_v.size(); ++i) {
                if (i) out += ",";
                out += format_double(v.list_v[i]);
            }
            return out;
        }
    }
    return "";
}

// Cross-checks the module preconditions the experiment will rely on, so a
// bad config fails before any work starts.
void validate_against_modules(const ExperimentConfig& cfg) {
    if (cfg.experiment == "outage-sweep") {
        const auto grid = ResourceGridConfig::from_spacing(
            numerology_spacing_hz(static_cast<int>(cfg.get_int("numerology"))),
            cfg.get_double("bandwidth_hz"), static_cast<int>(cfg.get_int("packet_bits")));
        DiversityChannel probe{1, 1.0, cfg.get_double("correlation")};
        probe.validate();
        for (double n_rx : cfg.get_list("n_rx_list")) {
            if (n_rx != static_cast<int>(n_rx)) {
                throw config_error(0, "n_rx_list entries must be integers");
            }
            DiversityChannel ch{static_cast<int>(n_rx), 1.0, 0.0};
            ch.validate();
        }
        if (cfg.get_int("latency_points") < 1 || cfg.get_double("latency_ms_min") <= 0.0 ||
            cfg.get_double("latency_ms_max") < cfg.get_double("latency_ms_min")) {
            throw config_error(0, "latency grid must be positive and ordered");
        }
        snr_threshold(grid, cfg.get_double("latency_ms_min") * 1e-3);  // degenerate-grid check
        if (cfg.get_double("correlation") > 0.0 && cfg.get_int("mc_trials") < 10000) {
            throw config_error(0, "mc_trials must be >= 1e4 for the correlated path");
        }
    } else if (cfg.experiment == "fbl-surface" || cfg.experiment == "v2i-latency") {
        UnderwoodModel model{cfg.get_double("free_flow_kmh"), cfg.get_double("max_density")};
        model.validate();
        FreewayLayout layout;
        layout.road_length_m = cfg.get_double("road_length_m");
        layout.bs_offset_m = cfg.get_double("bs_offset_m");
        layout.max_density_per_m = model.max_density_per_m;
        layout.density_per_m = cfg.experiment == "fbl-surface" ? cfg.get_double("kappa")
                                                               : cfg.get_double("kappa_sweep_max");
        layout.validate();
        if (cfg.experiment == "v2i-latency") {
            layout.density_per_m = cfg.get_double("kappa_sweep_min");
            layout.validate();
            if (cfg.get_double("kappa_sweep_min") > cfg.get_double("kappa_sweep_max") ||
                cfg.get_int("kappa_points") < 1) {
                throw config_error(0, "kappa sweep must be ordered with >= 1 point");
            }
            UserQos qos{cfg.get_double("rate_kbps") * 1e3, cfg.get_double("error_prob")};
            qos.validate();
        } else {
            if (!(cfg.get_double("epsilon_min") > 0.0) ||
                !(cfg.get_double("epsilon_max") < 1.0) ||
                cfg.get_double("epsilon_min") > cfg.get_double("epsilon_max") ||
                cfg.get_int("epsilon_points") < 1 || cfg.get_int("latency_points") < 1 ||
                !(cfg.get_double("latency_ms_min") > 0.0) ||
                cfg.get_double("latency_ms_min") > cfg.get_double("latency_ms_max")) {
                throw config_error(0, "surface grid must be positive and ordered");
            }
        }
        if (cfg.get_int("antennas") <= 1) {
            throw config_error(0, "antennas must exceed the user count");
        }
        check_token_list(cfg.get_string("placement"), {"equispaced", "uniform_random"},
                         "placement");
        if (cfg.experiment == "fbl-surface") {
            check_token_list(cfg.get_string("precoder"), {"mf", "zf"}, "precoder");
            check_token_list(cfg.get_string("reference_user"), {"worst", "median"},
                             "reference_user");
        } else {
            check_token_list(cfg.get_string("precoders"), {"mf", "zf"}, "precoders");
            check_token_list(cfg.get_string("schemes"), {"epa", "minmax"}, "schemes");
        }
    } else if (cfg.experiment == "v2v-episode") {
        ManhattanGridSpec grid;
        grid.blocks_x = static_cast<int>(cfg.get_int("blocks_x"));
        grid.blocks_y = static_cast<int>(cfg.get_int("blocks_y"));
        grid.block_pitch_x_m = cfg.get_double("block_pitch_x_m");
        grid.block_pitch_y_m = cfg.get_double("block_pitch_y_m");
        grid.building_x_m = cfg.get_double("building_x_m");
        grid.building_y_m = cfg.get_double("building_y_m");
        grid.sidewalk_width_m = cfg.get_double("sidewalk_width_m");
        grid.lanes_per_direction = static_cast<int>(cfg.get_int("lanes_per_direction"));
        grid.lane_width_m = cfg.get_double("lane_width_m");
        grid.vehicle_speed_kmh = cfg.get_double("vehicle_speed_kmh");
        build_manhattan_grid(grid);  // geometry consistency
        if (cfg.get_int("num_vue_pairs") > cfg.get_int("num_cues")) {
            throw config_error(0, "num_vue_pairs must not exceed num_cues (one RB per CUE)");
        }
        const std::string preset = cfg.get_string("qos_preset");
        if (!preset.empty()) {
            find_preset(preset);
        }
        QosRequirement qos{cfg.get_double("latency_bound_ms") * 1e-3,
                           cfg.get_double("violation_prob")};
        qos.validate();
        ArrivalProcess arrivals{cfg.get_double("arrival_rate_per_s"),
                                static_cast<double>(cfg.get_int("packet_bits"))};
        arrivals.validate();
        if (cfg.get_int("episode_packets") < 1) {
            throw config_error(0, "episode_packets must be >= 1");
        }
        check_token_list(cfg.get_string("modes"), {"effective_bandwidth", "static"}, "modes");
    }
}

}  // namespace

std::uint64_t ExperimentConfig::seed() const {
    return static_cast<std::uint64_t>(get_int("seed"));
}

long long ExperimentConfig::get_int(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end() || it->second.type != ParamType::Int) {
        throw std::domain_error("config key '" + key + "' missing or not an integer");
    }
    return it->second.int_v;
}

double ExperimentConfig::get_double(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end() || it->second.type != ParamType::Double) {
        throw std::domain_error("config key '" + key + "' missing or not a number");
    }
    return it->second.double_v;
}

const std::string& ExperimentConfig::get_string(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end() || it->second.type != ParamType::String) {
        throw std::domain_error("config key '" + key + "' missing or not a string");
    }
    return it->second.string_v;
}

const std::vector<double>& ExperimentConfig::get_list(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end() || it->second.type != ParamType::DoubleList) {
        throw std::domain_error("config key '" + key + "' missing or not a list");
    }
    return it->second.list_v;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"outage-sweep", "fbl-surface", "v2i-latency",
                                                   "v2v-episode"};
    return names;
}

const std::vector<ParamSpec>& experiment_schema(const std::string& experiment) {
    using PT = ParamType;
    static const std::vector<ParamSpec> outage = {
        {"seed", PT::Int, "1"},
        {"packet_bits", PT::Int, "256"},
        {"bandwidth_hz", PT::Double, "180e3"},
        {"numerology", PT::Int, "0"},
        {"latency_ms_min", PT::Double, "1"},
        {"latency_ms_max", PT::Double, "100"},
        {"latency_points", PT::Int, "20"},
        {"n_rx_list", PT::DoubleList, "1,2,4"},
        {"avg_snr_db_list", PT::DoubleList, "10,20"},
        {"correlation", PT::Double, "0"},
        {"mc_trials", PT::Int, "1000000"},
    };
    static const std::vector<ParamSpec> fbl = {
        {"seed", PT::Int, "1"},
        {"kappa", PT::Double, "0.05"},
        {"max_density", PT::Double, "0.15"},
        {"free_flow_kmh", PT::Double, "80"},
        {"road_length_m", PT::Double, "200"},
        {"bs_offset_m", PT::Double, "20"},
        {"antennas", PT::Int, "300"},
        {"bandwidth_hz", PT::Double, "200e3"},
        {"total_power_dbw", PT::Double, "10"},
        {"pathloss_exponent", PT::Double, "2.5"},
        {"placement", PT::String, "equispaced"},
        {"precoder", PT::String, "mf"},
        {"reference_user", PT::String, "worst"},
        {"latency_ms_min", PT::Double, "0.05"},
        {"latency_ms_max", PT::Double, "5"},
        {"latency_points", PT::Int, "40"},
        {"epsilon_min", PT::Double, "1e-9"},
        {"epsilon_max", PT::Double, "1e-3"},
        {"epsilon_points", PT::Int, "7"},
    };
    static const std::vector<ParamSpec> v2i = {
        {"seed", PT::Int, "1"},
        {"kappa_sweep_min", PT::Double, "0.01"},
        {"kappa_sweep_max", PT::Double, "0.15"},
        {"kappa_points", PT::Int, "15"},
        {"max_density", PT::Double, "0.15"},
        {"free_flow_kmh", PT::Double, "80"},
        {"road_length_m", PT::Double, "200"},
        {"bs_offset_m", PT::Double, "20"},
        {"antennas", PT::Int, "300"},
        {"bandwidth_hz", PT::Double, "200e3"},
        {"total_power_dbw", PT::Double, "10"},
        {"pathloss_exponent", PT::Double, "2.5"},
        {"placement", PT::String, "equispaced"},
        {"precoders", PT::String, "mf,zf"},
        {"schemes", PT::String, "epa,minmax"},
        {"rate_kbps", PT::Double, "100"},
        {"error_prob", PT::Double, "1e-6"},
        {"latency_cap_s", PT::Double, "10"},
    };
    static const std::vector<ParamSpec> v2v = {
        {"seed", PT::Int, "1"},
        {"blocks_x", PT::Int, "2"},
        {"blocks_y", PT::Int, "2"},
        {"block_pitch_x_m", PT::Double, "433"},
        {"block_pitch_y_m", PT::Double, "250"},
        {"building_x_m", PT::Double, "413"},
        {"building_y_m", PT::Double, "30"},
        {"sidewalk_width_m", PT::Double, "3"},
        {"lanes_per_direction", PT::Int, "2"},
        {"lane_width_m", PT::Double, "3.5"},
        {"vehicle_speed_kmh", PT::Double, "60"},
        {"num_cues", PT::Int, "10"},
        {"num_vue_pairs", PT::Int, "5"},
        {"pair_distance_cap_m", PT::Double, "60"},
        {"arrival_rate_per_s", PT::Double, "100"},
        {"packet_bits", PT::Int, "2048"},
        {"qos_preset", PT::String, ""},
        {"latency_bound_ms", PT::Double, "100"},
        {"violation_prob", PT::Double, "0.05"},
        {"episode_packets", PT::Int, "200000"},
        {"modes", PT::String, "effective_bandwidth,static"},
    };
    if (experiment == "outage-sweep") return outage;
    if (experiment == "fbl-surface") return fbl;
    if (experiment == "v2i-latency") return v2i;
    if (experiment == "v2v-episode") return v2v;
    throw std::domain_error("unknown experiment: " + experiment);
}

ExperimentConfig parse_config(const std::string& text, const std::string& experiment) {
    const auto& schema = experiment_schema(experiment);
    ExperimentConfig cfg;
    cfg.experiment = experiment;

    std::map<std::string, std::pair<std::string, int>> raw;  // key -> (value, line)
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(line_no, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw config_error(line_no, "empty key");
        }
        if (raw.count(key)) {
            throw config_error(line_no, "duplicate key '" + key + "'");
        }
        raw[key] = {value, line_no};
    }

    if (const auto it = raw.find("experiment"); it != raw.end()) {
        if (it->second.first != experiment) {
            throw config_error(it->second.second, "config is for experiment '" +
                                                      it->second.first + "', expected '" +
                                                      experiment + "'");
        }
        raw.erase(it);
    }
    for (const auto& spec : schema) {
        const auto it = raw.find(spec.key);
        if (it != raw.end()) {
            cfg.params[spec.key] = parse_value(spec, it->second.first, it->second.second);
            raw.erase(it);
        } else if (spec.required) {
            throw config_error(0, "missing required key '" + spec.key + "'");
        } else {
            cfg.params[spec.key] = parse_value(spec, spec.default_value, 0);
        }
    }
    if (!raw.empty()) {
        const auto& [key, vl] = *raw.begin();
        throw config_error(vl.second, "unknown key '" + key + "' for experiment " + experiment);
    }

    try {
        validate_against_modules(cfg);
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(0, e.what());
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out = "experiment = " + cfg.experiment + "\n";
    for (const auto& spec : experiment_schema(cfg.experiment)) {
        out += spec.key + " = " + serialize_value(cfg.params.at(spec.key)) + "\n";
    }
    return out;
}

}  // namespace urllc
