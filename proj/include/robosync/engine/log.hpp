#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robosync/errors.hpp"

namespace robosync::engine {

enum class LogKind {
    sensor_event,
    message,
    task_start,
    task_finish,
    task_abort,
    behavior_fired,
    behavior_suppressed,
    actuator_cmd,
    play_cmd,
    priority_update,
    safety_halt,
    trace_dropped,
};

std::string_view to_string(LogKind kind);
std::optional<LogKind> log_kind_from_string(std::string_view name);

using DetailValue = std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>>;

struct Field {
    std::string key;
    DetailValue value;
    bool operator==(const Field&) const = default;
};

struct LogEntry {
    std::uint64_t seq = 0;
    std::int64_t t_us = 0;
    LogKind kind = LogKind::sensor_event;
    std::vector<Field> detail;

    const DetailValue* find(std::string_view key) const;
    bool has(std::string_view key) const { return find(key) != nullptr; }
    // Typed accessors; throw MalformedLog when the key is absent or mistyped.
    std::int64_t integer(std::string_view key) const;
    double real(std::string_view key) const;
    const std::string& text(std::string_view key) const;
    bool flag(std::string_view key) const;

    bool operator==(const LogEntry&) const = default;
};

using ExecutionLog = std::vector<LogEntry>;

class MalformedLog : public Error {
public:
    MalformedLog(std::size_t line, const std::string& reason);
    explicit MalformedLog(const std::string& reason);
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Appends a JSON string literal (with escaping) to `out`.
void append_json_string(std::string& out, std::string_view s);

/// Fixed six-decimal rendering used for every real in logs and stats.
std::string format_fixed(double v);

/// One JSON object per line: {"seq":..,"t_us":..,"kind":..,"detail":{..}}.
std::string serialize_entry(const LogEntry& entry);
std::string serialize_log(const ExecutionLog& log);

/// Inverse of serialize_log; validates the entry shape and seq/time order.
ExecutionLog parse_log(std::string_view text);

} // namespace robosync::engine
