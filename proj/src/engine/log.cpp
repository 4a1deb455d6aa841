#include "robosync/engine/log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace robosync::engine {

namespace {

constexpr std::string_view kKindNames[] = {
    "sensor_event", "message", "task_start", "task_finish", "task_abort", "behavior_fired",
    "behavior_suppressed", "actuator_cmd", "play_cmd", "priority_update", "safety_halt", "trace_dropped",
};

} // namespace

std::string_view to_string(LogKind kind)
{
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<LogKind> log_kind_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
        if (kKindNames[i] == name) {
            return static_cast<LogKind>(i);
        }
    }
    return std::nullopt;
}

MalformedLog::MalformedLog(std::size_t line, const std::string& reason)
    : Error("line " + std::to_string(line) + ": " + reason), line_(line)
{
}

MalformedLog::MalformedLog(const std::string& reason) : Error(reason) {}

const DetailValue* LogEntry::find(std::string_view key) const
{
    for (const auto& f : detail) {
        if (f.key == key) {
            return &f.value;
        }
    }
    return nullptr;
}

namespace {

template <class T>
const T& typed(const LogEntry& e, std::string_view key)
{
    const auto* v = e.find(key);
    if (!v) {
        throw MalformedLog("entry " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) +
                           ") lacks '" + std::string(key) + "'");
    }
    const auto* t = std::get_if<T>(v);
    if (!t) {
        throw MalformedLog("entry " + std::to_string(e.seq) + ": '" + std::string(key) + "' has the wrong type");
    }
    return *t;
}

} // namespace

std::int64_t LogEntry::integer(std::string_view key) const { return typed<std::int64_t>(*this, key); }
double LogEntry::real(std::string_view key) const { return typed<double>(*this, key); }
const std::string& LogEntry::text(std::string_view key) const { return typed<std::string>(*this, key); }
bool LogEntry::flag(std::string_view key) const { return typed<bool>(*this, key); }

void append_json_string(std::string& out, std::string_view s)
{
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

std::string format_fixed(double v)
{
    if (!std::isfinite(v)) {
        // JSON has no spelling for these; they only arise from defects upstream.
        return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
    if (ec != std::errc{}) {
        return "null";
    }
    std::string s(buf, ptr);
    if (s == "-0.000000") {
        s = "0.000000";
    }
    return s;
}

namespace {

void append_value(std::string& out, const DetailValue& value)
{
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
                out += v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                out += std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                out += format_fixed(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                append_json_string(out, v);
            } else {
                out += '[';
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) {
                        out += ',';
                    }
                    append_json_string(out, v[i]);
                }
                out += ']';
            }
        },
        value);
}

} // namespace

std::string serialize_entry(const LogEntry& entry)
{
    std::string out = "{\"seq\":" + std::to_string(entry.seq) + ",\"t_us\":" + std::to_string(entry.t_us) +
                      ",\"kind\":\"" + std::string(to_string(entry.kind)) + "\",\"detail\":{";
    for (std::size_t i = 0; i < entry.detail.size(); ++i) {
        if (i) {
            out += ',';
        }
        append_json_string(out, entry.detail[i].key);
        out += ':';
        append_value(out, entry.detail[i].value);
    }
    out += "}}";
    return out;
}

std::string serialize_log(const ExecutionLog& log)
{
    std::string out;
    for (const auto& e : log) {
        out += serialize_entry(e);
        out += '\n';
    }
    return out;
}

ExecutionLog parse_log(std::string_view text)
{
    using json = nlohmann::ordered_json;
    ExecutionLog log;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        json doc;
        try {
            doc = json::parse(line.begin(), line.end());
        } catch (const json::parse_error&) {
            throw MalformedLog(line_no, "not a JSON object");
        }
        if (!doc.is_object() || doc.size() != 4 || !doc.contains("seq") || !doc.contains("t_us") ||
            !doc.contains("kind") || !doc.contains("detail")) {
            throw MalformedLog(line_no, "expected exactly seq, t_us, kind, detail");
        }
        const auto& seq = doc["seq"];
        const auto& t = doc["t_us"];
        const auto& kind = doc["kind"];
        const auto& detail = doc["detail"];
        if (!seq.is_number_unsigned() || !t.is_number_integer() || !kind.is_string() || !detail.is_object()) {
            throw MalformedLog(line_no, "field of the wrong type");
        }
        LogEntry entry;
        entry.seq = seq.get<std::uint64_t>();
        entry.t_us = t.get<std::int64_t>();
        auto k = log_kind_from_string(kind.get<std::string>());
        if (!k) {
            throw MalformedLog(line_no, "unknown kind '" + kind.get<std::string>() + "'");
        }
        entry.kind = *k;
        if (entry.seq != log.size()) {
            throw MalformedLog(line_no, "seq " + std::to_string(entry.seq) + " breaks the gap-free order");
        }
        if (!log.empty() && entry.t_us < log.back().t_us) {
            throw MalformedLog(line_no, "t_us decreases");
        }
        for (const auto& [key, v] : detail.items()) {
            DetailValue value;
            if (v.is_boolean()) {
                value = v.get<bool>();
            } else if (v.is_number_integer()) {
                value = v.get<std::int64_t>();
            } else if (v.is_number_float()) {
                value = v.get<double>();
            } else if (v.is_string()) {
                value = v.get<std::string>();
            } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_string(); })) {
                value = v.get<std::vector<std::string>>();
            } else {
                throw MalformedLog(line_no, "unsupported value for '" + key + "'");
            }
            entry.detail.push_back(Field{key, std::move(value)});
        }
        log.push_back(std::move(entry));
    }
    return log;
}

} // namespace robosync::engine
