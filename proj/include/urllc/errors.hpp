#pragma once

#include <stdexcept>
#include <string>

namespace urllc {

/// Requested operating point cannot be met within the stated budget
/// (power, latency cap, matching, ...). what() carries the binding deficit.
class infeasible_error : public std::runtime_error {
  public:
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scenario geometry or grid parameters are self-contradictory.
class geometry_error : public std::runtime_error {
  public:
    explicit geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace urllc
