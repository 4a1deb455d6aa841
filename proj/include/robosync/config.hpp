#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robosync/errors.hpp"
#include "robosync/params.hpp"

namespace robosync::config {

enum class SensorKind { i2c, spi, gpio, analog, virtual_ };
enum class ActuatorKind { pwm, gpio, audio, virtual_ };

std::string_view to_string(SensorKind kind);
std::string_view to_string(ActuatorKind kind);

struct SensorSpec {
    std::string name;
    SensorKind kind = SensorKind::virtual_;
    std::optional<std::uint32_t> address;
    std::optional<std::uint32_t> pin;
    double delta = 0.0;
    std::int64_t period_us = 10'000;
    std::string units;

    bool operator==(const SensorSpec&) const = default;
};

struct ActuatorSpec {
    std::string name;
    ActuatorKind kind = ActuatorKind::virtual_;
    std::optional<std::uint32_t> pin;
    double min_value = 0.0;
    double max_value = 1.0;

    /// Value commanded on a safety halt: zero, clamped into [min_value, max_value].
    double neutral_value() const;

    bool operator==(const ActuatorSpec&) const = default;
};

struct BehaviorSpec {
    std::string name;
    std::optional<double> priority;  // as declared; see default_priorities()
    std::optional<std::string> action;
    bool safety = false;

    bool operator==(const BehaviorSpec&) const = default;
};

struct AlgorithmSpec {
    std::string name;
    std::string plugin;               // registry key, resolved at parse time
    std::optional<std::string> path;  // shared-library ".so" path, kept verbatim
    std::vector<std::string> inputs;
    std::string output;
    robosync::ParamMap params;

    bool operator==(const AlgorithmSpec&) const = default;
};

struct SafetyCheckSpec {
    std::string name;
    std::string sensor;
    double threshold = 0.0;

    bool operator==(const SafetyCheckSpec&) const = default;
};

struct SchedulerParams {
    double alpha = 0.05;              // seconds
    std::int64_t window_us = 1'000'000;
    double p_max = 1.0;
    std::int64_t default_task_cost_us = 100;
    double slowly_speed = 0.25;
    double quickly_speed = 1.0;

    double window_seconds() const { return static_cast<double>(window_us) / 1e6; }

    bool operator==(const SchedulerParams&) const = default;
};

struct SystemConfig {
    std::vector<SensorSpec> sensors;
    std::vector<ActuatorSpec> actuators;
    std::vector<BehaviorSpec> behaviors;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<SafetyCheckSpec> safety_checks;
    SchedulerParams scheduler;

    const SensorSpec* find_sensor(std::string_view name) const;
    const ActuatorSpec* find_actuator(std::string_view name) const;
    const BehaviorSpec* find_behavior(std::string_view name) const;

    bool operator==(const SystemConfig&) const = default;
};

/// One problem found in a configuration, keyed by its field path
/// (e.g. "behaviors[1].priority").
struct Issue {
    std::string path;
    std::string message;

    std::string to_string() const { return path + ": " + message; }
    bool operator==(const Issue&) const = default;
};

using ValidationReport = std::vector<Issue>;

class ConfigError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public ConfigError {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& detail);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public ConfigError {
public:
    explicit SchemaError(std::vector<Issue> issues);
    const std::vector<Issue>& issues() const { return issues_; }

private:
    std::vector<Issue> issues_;
};

class UnknownPluginError : public ConfigError {
public:
    UnknownPluginError(std::string path, std::string plugin);
    const std::string& path() const { return path_; }
    const std::string& plugin() const { return plugin_; }

private:
    std::string path_;
    std::string plugin_;
};

/// Parses and validates a JSON configuration document. Every accepted
/// config has an empty validate_config() report.
SystemConfig parse_config(std::string_view text);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SystemConfig& config);

ValidationReport validate_config(const SystemConfig& config);

struct PriorityRequest {
    std::optional<double> declared;
    bool safety = false;
};

/// Resolves a full priority list in listing order. Missing priorities are
/// drawn from 1 - (i+1)/(N+1), stepped down by 1/(10(N+1)) past collisions;
/// safety entries resolve to 1.0.
std::vector<double> default_priorities(const std::vector<PriorityRequest>& behaviors);

/// Name of the processing-layer topic a DSL signal reads for `sensor`:
/// the output of the algorithm consuming it, otherwise the sensor's own
/// passthrough topic. Returns nullopt when several algorithms consume it.
std::optional<std::string> processed_topic_for_sensor(const SystemConfig& config,
                                                      std::string_view sensor);

} // namespace robosync::config
