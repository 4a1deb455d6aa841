#include "robosync/engine/stats.hpp"

#include <algorithm>

namespace robosync::engine {

void LatencySummary::add(std::int64_t latency_us)
{
    if (count == 0) {
        min_us = max_us = latency_us;
    } else {
        min_us = std::min(min_us, latency_us);
        max_us = std::max(max_us, latency_us);
    }
    ++count;
    sum_ += static_cast<double>(latency_us);
    mean_us = sum_ / static_cast<double>(count);
}

SimStats compute_stats(const ExecutionLog& log)
{
    SimStats s;
    for (auto layer : {"sensor", "processing", "behavior", "control"}) {
        s.messages_per_layer[layer] = 0;
    }
    std::optional<std::uint64_t> running;  // seq of the open task_start
    std::string running_task;
    for (const auto& e : log) {
        s.end_t_us = std::max(s.end_t_us, e.t_us);
        switch (e.kind) {
        case LogKind::message:
            ++s.messages;
            ++s.messages_per_layer[e.text("layer")];
            break;
        case LogKind::task_start: {
            if (running) {
                throw MalformedLog("entry " + std::to_string(e.seq) + ": task_start while entry " +
                                   std::to_string(*running) + " is still running");
            }
            running = e.seq;
            running_task = e.text("task");
            ++s.dispatches;
            auto latency = e.t_us - e.integer("enqueue_t_us");
            s.latency.add(latency);
            s.latency_per_task[running_task].add(latency);
            break;
        }
        case LogKind::task_finish:
        case LogKind::task_abort:
            if (!running || e.text("task") != running_task) {
                throw MalformedLog("entry " + std::to_string(e.seq) + ": " + std::string(to_string(e.kind)) +
                                   " without a matching task_start");
            }
            running.reset();
            ++(e.kind == LogKind::task_finish ? s.completions : s.aborts);
            break;
        case LogKind::behavior_fired: ++s.behaviors_fired; break;
        case LogKind::behavior_suppressed: ++s.behaviors_suppressed; break;
        case LogKind::actuator_cmd: ++s.actuator_commands; break;
        case LogKind::play_cmd: ++s.play_commands; break;
        case LogKind::priority_update: ++s.priority_updates; break;
        case LogKind::trace_dropped: ++s.dropped; break;
        case LogKind::safety_halt:
            s.halted = true;
            s.halt_t_us = e.t_us;
            break;
        case LogKind::sensor_event: break;
        }
    }
    return s;
}

namespace {

void append_latency(std::string& out, const LatencySummary& l)
{
    out += "{\"count\":" + std::to_string(l.count) + ",\"min_us\":" + std::to_string(l.min_us) +
           ",\"mean_us\":" + format_fixed(l.mean_us) + ",\"max_us\":" + std::to_string(l.max_us) + "}";
}

template <class Map, class Fn>
void append_map(std::string& out, const Map& m, Fn&& value)
{
    out += '{';
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) {
            out += ',';
        }
        first = false;
        append_json_string(out, k);
        out += ':';
        value(out, v);
    }
    out += '}';
}

} // namespace

std::string stats_to_json(const SimStats& s)
{
    auto num = [](std::uint64_t v) { return std::to_string(v); };
    std::string out = "{\"messages\":" + num(s.messages) + ",\"messages_per_layer\":";
    append_map(out, s.messages_per_layer, [&](std::string& o, std::uint64_t v) { o += num(v); });
    out += ",\"dispatches\":" + num(s.dispatches) + ",\"completions\":" + num(s.completions) +
           ",\"aborts\":" + num(s.aborts) + ",\"latency\":";
    append_latency(out, s.latency);
    out += ",\"latency_per_task\":";
    append_map(out, s.latency_per_task, [](std::string& o, const LatencySummary& l) { append_latency(o, l); });
    out += ",\"behaviors_fired\":" + num(s.behaviors_fired) + ",\"behaviors_suppressed\":" +
           num(s.behaviors_suppressed) + ",\"actuator_commands\":" + num(s.actuator_commands) +
           ",\"play_commands\":" + num(s.play_commands) + ",\"priority_updates\":" + num(s.priority_updates) +
           ",\"dropped\":" + num(s.dropped) + ",\"halted\":" + (s.halted ? "true" : "false") +
           ",\"halt_t_us\":" + (s.halt_t_us ? std::to_string(*s.halt_t_us) : "null") +
           ",\"end_t_us\":" + std::to_string(s.end_t_us) + "}";
    return out;
}

} // namespace robosync::engine
