#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "robosync/engine/log.hpp"

namespace robosync::engine {

struct LatencySummary {
    std::uint64_t count = 0;
    std::int64_t min_us = 0;
    double mean_us = 0.0;
    std::int64_t max_us = 0;

    void add(std::int64_t latency_us);
    bool operator==(const LatencySummary&) const = default;

private:
    double sum_ = 0.0;
};

struct SimStats {
    std::map<std::string, std::uint64_t> messages_per_layer;  // keyed by producer layer name
    std::uint64_t messages = 0;
    std::uint64_t dispatches = 0;
    std::uint64_t completions = 0;
    std::uint64_t aborts = 0;
    // Queueing latency: dispatch time minus enqueue time.
    LatencySummary latency;
    std::map<std::string, LatencySummary> latency_per_task;
    std::uint64_t behaviors_fired = 0;
    std::uint64_t behaviors_suppressed = 0;
    std::uint64_t actuator_commands = 0;
    std::uint64_t play_commands = 0;
    std::uint64_t priority_updates = 0;
    std::uint64_t dropped = 0;
    bool halted = false;
    std::optional<std::int64_t> halt_t_us;
    std::int64_t end_t_us = 0;
};

/// Summarizes a log. Throws MalformedLog when starts, finishes and aborts do
/// not pair up.
SimStats compute_stats(const ExecutionLog& log);

/// Single-line JSON with stable key order; reals use six fixed decimals.
std::string stats_to_json(const SimStats& stats);

} // namespace robosync::engine
