#pragma once

// Batch experiment drivers: each runs one named experiment from a parsed
// config and writes its CSV artifacts into the output directory.

#include <string>
#include <vector>

#include "urllc/config.hpp"

namespace urllc {

/// Runs cfg.experiment, writing CSVs under out_dir (created if absent).
/// Returns the list of files written. Deterministic for a fixed config+seed.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace urllc
