#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robosync/errors.hpp"
#include "robosync/params.hpp"

namespace robosync::sensorproc {

struct Reading {
    std::string sensor;
    std::int64_t t_us = 0;
    double value = 0.0;
    std::uint64_t seq = 0;  // bus sequence number of the gated message carrying it
};

struct ProcessedValue {
    std::string topic;
    std::int64_t t_us = 0;
    double value = 0.0;
    std::uint64_t source_seq = 0;

    bool operator==(const ProcessedValue&) const = default;
};

/// Significance gate: the first reading always passes; afterwards a reading
/// passes when it moved by at least `delta` (any change at all when delta is 0).
bool gate_significant(std::optional<double> prev, double curr, double delta);

/// Number of thresholds <= raw. Thresholds must be strictly ascending.
int touch_level(double raw, std::span<const double> thresholds);

/// |second finite difference| of the last three readings, per second.
/// Fewer than three readings give 0.
double jerk_level(std::span<const Reading> history);

class UnknownPlugin : public Error {
public:
    explicit UnknownPlugin(const std::string& name);
};

class PluginParamError : public Error {
public:
    using Error::Error;
};

/// Parses "1, 2.5, 4" into {1, 2.5, 4}; throws PluginParamError unless
/// the list is non-empty and strictly ascending.
std::vector<double> parse_threshold_list(std::string_view text);

// Plugins are deterministic transducers over their own bounded history.
class Plugin {
public:
    virtual ~Plugin() = default;
    virtual std::optional<double> process(const Reading& input) = 0;
    virtual std::unique_ptr<Plugin> clone() const = 0;
};

/// Built-in registry keys, sorted.
const std::vector<std::string>& registered_plugins();
bool is_registered(std::string_view name);

/// Checks plugin parameters; returns an error message for the first bad one.
std::optional<std::string> check_params(std::string_view name, const ParamMap& params);

/// A configured plugin bound to its output topic.
class PluginInstance {
public:
    /// Throws UnknownPlugin or PluginParamError.
    PluginInstance(std::string name, ParamMap params, std::string output_topic);

    PluginInstance(const PluginInstance& other);
    PluginInstance& operator=(const PluginInstance& other);
    PluginInstance(PluginInstance&&) noexcept = default;
    PluginInstance& operator=(PluginInstance&&) noexcept = default;

    const std::string& name() const { return name_; }
    const ParamMap& params() const { return params_; }
    const std::string& output_topic() const { return output_topic_; }

    std::optional<ProcessedValue> run(const Reading& input);

private:
    std::string name_;
    ParamMap params_;
    std::string output_topic_;
    std::unique_ptr<Plugin> impl_;
};

inline std::optional<ProcessedValue> run_algorithm(PluginInstance& instance, const Reading& input)
{
    return instance.run(input);
}

} // namespace robosync::sensorproc
