#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "urllc/config.hpp"
#include "urllc/experiments.hpp"
#include "urllc/presets.hpp"

using namespace urllc;

TEST_CASE("minimal config takes every default") {
    const auto cfg = parse_config("", "outage-sweep");
    CHECK(cfg.seed() == 1);
    CHECK(cfg.get_int("packet_bits") == 256);
    CHECK(cfg.get_double("bandwidth_hz") == doctest::Approx(180e3));
    CHECK(cfg.get_list("n_rx_list").size() == 3);
    const auto with_comments = parse_config("# nothing but comments\n\n  # indented\n",
                                            "outage-sweep");
    CHECK(with_comments.get_int("mc_trials") == 1000000);
}

TEST_CASE("value overrides and typed errors") {
    const auto cfg = parse_config("packet_bits = 512\nn_rx_list = 1, 2, 3, 4\nseed = 9\n",
                                  "outage-sweep");
    CHECK(cfg.get_int("packet_bits") == 512);
    CHECK(cfg.get_list("n_rx_list").size() == 4);
    CHECK(cfg.seed() == 9);

    CHECK_THROWS_WITH_AS(parse_config("packet_bits = many\n", "outage-sweep"),
                         "line 1: key 'packet_bits' expects an integer, got 'many'", config_error);
    CHECK_THROWS_WITH_AS(parse_config("\nbogus_key = 1\n", "outage-sweep"),
                         "line 2: unknown key 'bogus_key' for experiment outage-sweep",
                         config_error);
    CHECK_THROWS_AS(parse_config("seed 9\n", "outage-sweep"), config_error);
    CHECK_THROWS_AS(parse_config("seed = 1\nseed = 2\n", "outage-sweep"), config_error);
    CHECK_THROWS_AS(parse_config("experiment = v2i-latency\n", "outage-sweep"), config_error);
}

TEST_CASE("module preconditions surface at parse time") {
    // Density above the Underwood knee names the constraint.
    try {
        parse_config("kappa = 0.2\n", "fbl-surface");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("kappa <= kappa_max") != std::string::npos);
    }
    // Latency shorter than one OFDM symbol is a degenerate grid.
    CHECK_THROWS_AS(parse_config("latency_ms_min = 0.01\n", "outage-sweep"), config_error);
    // VUE pairs cannot exceed resource blocks.
    CHECK_THROWS_AS(parse_config("num_cues = 2\nnum_vue_pairs = 3\n", "v2v-episode"),
                    config_error);
    // Broken Manhattan geometry.
    CHECK_THROWS_AS(parse_config("building_x_m = 430\n", "v2v-episode"), config_error);
}

TEST_CASE("serialize/parse is idempotent") {
    const std::string text = "seed = 4\npacket_bits = 300\ncorrelation = 0.25\n";
    const auto cfg = parse_config(text, "outage-sweep");
    const std::string canon = serialize_config(cfg);
    const auto cfg2 = parse_config(canon, "outage-sweep");
    CHECK(serialize_config(cfg2) == canon);
    CHECK(cfg2.get_double("correlation") == cfg.get_double("correlation"));
}

TEST_CASE("presets carry the six patterns with their bounds") {
    const auto presets = list_presets();
    REQUIRE(presets.size() == 6);
    const auto safety = find_preset("driving-and-road-safety");
    CHECK(safety.latency_bound_s == doctest::Approx(1e-3));
    CHECK(safety.reliability_bound == doctest::Approx(1e-5));
    CHECK(safety.latency_class == "ultra-low");
    const auto traffic = find_preset("traffic-efficiency");
    CHECK(traffic.latency_bound_s == doctest::Approx(5e-3));
    CHECK(traffic.reliability_bound == doctest::Approx(1e-3));
    CHECK(traffic.latency_class == "low");
    CHECK(traffic.reliability_class == "high");
    CHECK_THROWS_AS(find_preset("no-such-preset"), std::domain_error);
    // Presets resolve inside a v2v config.
    const auto cfg = parse_config("qos_preset = mobility-as-a-service\n", "v2v-episode");
    CHECK(cfg.get_string("qos_preset") == "mobility-as-a-service");
    CHECK_THROWS_AS(parse_config("qos_preset = nope\n", "v2v-episode"), config_error);
}

TEST_CASE("outage-sweep experiment writes its CSV schema") {
    const auto dir = std::filesystem::temp_directory_path() / "urllc_cfg_test";
    std::filesystem::remove_all(dir);
    const auto cfg = parse_config(
        "latency_points = 4\nn_rx_list = 1,2\navg_snr_db_list = 10\nmc_trials = 10000\n",
        "outage-sweep");
    const auto files = run_experiment(cfg, dir.string());
    REQUIRE(files.size() == 1);
    std::ifstream in(files[0]);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "latency_ms,n_rx,avg_snr_db,outage");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            ++rows;
            CHECK(std::count(line.begin(), line.end(), ',') == 3);
        }
    }
    CHECK(rows == 4 * 2 * 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("v2i experiment emits both files with the documented columns") {
    const auto dir = std::filesystem::temp_directory_path() / "urllc_cfg_test_v2i";
    std::filesystem::remove_all(dir);
    const auto cfg = parse_config(
        "kappa_sweep_min = 0.01\nkappa_sweep_max = 0.02\nkappa_points = 2\nprecoders = zf\n",
        "v2i-latency");
    const auto files = run_experiment(cfg, dir.string());
    REQUIRE(files.size() == 2);
    std::ifstream lat(files[0]);
    std::string header;
    std::getline(lat, header);
    CHECK(header == "kappa,scheme,precoder,max_latency_ms");
    std::ifstream pow(files[1]);
    std::getline(pow, header);
    CHECK(header == "kappa,k_users,scheme,precoder,user_index,power_w");
    std::filesystem::remove_all(dir);
}
