#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robosync/config.hpp"
#include "robosync/errors.hpp"

namespace robosync::engine {

struct SensorReading {
    std::string sensor;
    double value = 0.0;
    bool operator==(const SensorReading&) const = default;
};

struct Override {
    std::string command;  // "STOP" halts the run
    bool operator==(const Override&) const = default;
};

struct TraceEvent {
    std::int64_t t_us = 0;
    std::variant<SensorReading, Override> event;
    std::size_t line = 0;  // 1-based source line

    bool operator==(const TraceEvent&) const = default;
};

class TraceError : public Error {
public:
    TraceError(std::size_t line, const std::string& reason);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads a JSON-lines trace. Each line is {"t_us": int, "sensor": str, "value": num}
/// or {"t_us": int, "override": str}; blank lines are skipped. Sensors must be
/// declared in `config`. The result is stably sorted by t_us.
std::vector<TraceEvent> load_trace(std::string_view text, const config::SystemConfig& config);

} // namespace robosync::engine
