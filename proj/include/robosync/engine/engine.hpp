#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robosync/config.hpp"
#include "robosync/dsl/bind.hpp"
#include "robosync/engine/log.hpp"
#include "robosync/engine/trace.hpp"
#include "robosync/sched.hpp"

namespace robosync::engine {

// Bus topic and task naming. Processed topics are algorithm outputs or, for
// sensors no algorithm consumes, the sensor name itself.
std::string sensor_topic(std::string_view sensor);       // "sensor/<name>"
std::string processed_topic(std::string_view topic);     // "proc/<topic>"
std::string command_topic(std::string_view actuator);    // "cmd/<actuator>"

/// Name of the synthetic safety check raised by a "STOP" override.
inline constexpr std::string_view kOverrideCheck = "override";

struct RunOptions {
    /// Trace events at or after this time are not replayed. Window
    /// boundaries are still processed up to this horizon.
    std::optional<std::int64_t> until_us;
};

/// The schedulable task set a run uses, with base priorities resolved by
/// max-inheritance over the behaviors linked to each task. Ordered by id.
///
///   sensor:<s>        SensorInput   gating of raw readings
///   algorithm:<a>     Algorithmic   configured plugin
///   passthrough:<s>   Algorithmic   identity processing for unconsumed sensors
///   behavior:<b>      Behavioral    expands a behavior into commands
///   control:<a>       Control       drives one actuator
///   safety:<check>    Safety        threshold checks, evaluated on arrival
std::vector<sched::TaskDescriptor> build_tasks(const config::SystemConfig& config,
                                               const dsl::BoundProgram& program);

/// Replays `trace` through the layered pipeline in virtual time and returns
/// the complete execution log. Deterministic: equal inputs give equal logs.
ExecutionLog run(const config::SystemConfig& config,
                 const dsl::BoundProgram& program,
                 const std::vector<TraceEvent>& trace,
                 const RunOptions& options = {});

} // namespace robosync::engine
