#pragma once

// Named requirement presets for the six communication patterns: latency and
// reliability class bounds usable as QoS inputs to the experiments.

#include <string>
#include <vector>

namespace urllc {

struct RequirementPreset {
    std::string name;              // kebab-case id
    std::string pattern;           // "V2V/V2P" or "V2I/V2N"
    std::string latency_class;     // ultra-low, low, medium
    double latency_bound_s;        // binding upper bound of the class
    std::string reliability_class; // ultra-high, high, medium
    double reliability_bound;      // error/violation probability bound
    std::string data_rate_class;
};

/// The six presets. Classes with stated numeric bounds carry them verbatim
/// (ultra-low: 1 ms, ultra-high: 1e-5, low: 5 ms, high: 1e-3); the medium
/// classes have no stated numbers and default to the urban case-study QoS
/// (100 ms, 5e-2).
std::vector<RequirementPreset> list_presets();

/// Lookup by name; throws std::domain_error for unknown names.
RequirementPreset find_preset(const std::string& name);

}  // namespace urllc
