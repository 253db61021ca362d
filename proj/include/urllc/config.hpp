#pragma once

// Flat key-value experiment configs: one `key = value` per line, `#`
// comments. Each experiment declares a typed schema with defaults; parsing
// validates types, rejects unknown keys, and cross-checks the referenced
// module preconditions before anything runs.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace urllc {

class config_error : public std::runtime_error {
  public:
    config_error(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

enum class ParamType { Int, Double, String, DoubleList };

struct ParamSpec {
    std::string key;
    ParamType type = ParamType::Double;
    std::string default_value;  // textual; empty string + required=true means mandatory
    bool required = false;
};

struct ParamValue {
    ParamType type = ParamType::Double;
    long long int_v = 0;
    double double_v = 0.0;
    std::string string_v;
    std::vector<double> list_v;
};

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, ParamValue> params;

    std::uint64_t seed() const;
    long long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    const std::string& get_string(const std::string& key) const;
    const std::vector<double>& get_list(const std::string& key) const;
};

/// Known experiment names in CLI order.
const std::vector<std::string>& experiment_names();

/// Typed schema of one experiment; throws for unknown experiments.
const std::vector<ParamSpec>& experiment_schema(const std::string& experiment);

/// Parses and validates `text` against the experiment schema. Reports the
/// first syntax or type error with its line number; module precondition
/// violations surface with the constraint spelled out.
ExperimentConfig parse_config(const std::string& text, const std::string& experiment);

/// Canonical form: schema key order, one `key = value` per line. Feeding the
/// output back through parse_config reproduces it byte for byte.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace urllc
