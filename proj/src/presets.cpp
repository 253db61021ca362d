#include "urllc/presets.hpp"

#include <stdexcept>

namespace urllc {

std::vector<RequirementPreset> list_presets() {
    return {
        {"driving-and-road-safety", "V2V/V2P", "ultra-low", 1e-3, "ultra-high", 1e-5, "low"},
        {"cooperative-awareness-and-control", "V2V/V2P", "ultra-low", 1e-3, "ultra-high", 1e-5,
         "medium"},
        {"mobility-as-a-service", "V2V/V2P", "medium", 100e-3, "medium", 5e-2, "high"},
        {"traffic-efficiency", "V2I/V2N", "low", 5e-3, "high", 1e-3, "low"},
        {"periodic-report", "V2I/V2N", "low", 5e-3, "high", 1e-3, "medium"},
        {"social-entertainment", "V2I/V2N", "medium", 100e-3, "medium", 5e-2, "ultra-high"},
    };
}

RequirementPreset find_preset(const std::string& name) {
    for (auto& p : list_presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw std::domain_error("unknown requirement preset: " + name);
}

}  // namespace urllc
