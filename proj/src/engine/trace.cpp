#include "robosync/engine/trace.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace robosync::engine {

TraceError::TraceError(std::size_t line, const std::string& reason)
    : Error("trace line " + std::to_string(line) + ": " + reason), line_(line)
{
}

std::vector<TraceEvent> load_trace(std::string_view text, const config::SystemConfig& config)
{
    using nlohmann::json;
    std::vector<TraceEvent> events;
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
            throw TraceError(line_no, "not valid JSON");
        }
        if (!doc.is_object()) {
            throw TraceError(line_no, "expected an object");
        }
        for (const auto& [key, _] : doc.items()) {
            if (key != "t_us" && key != "sensor" && key != "value" && key != "override") {
                throw TraceError(line_no, "unknown key '" + key + "'");
            }
        }
        auto t = doc.find("t_us");
        if (t == doc.end() || !t->is_number_integer() || t->get<std::int64_t>() < 0) {
            throw TraceError(line_no, "t_us must be a non-negative integer");
        }

        TraceEvent ev;
        ev.t_us = t->get<std::int64_t>();
        ev.line = line_no;
        bool has_sensor = doc.contains("sensor");
        bool has_override = doc.contains("override");
        if (has_sensor == has_override) {
            throw TraceError(line_no, "expected exactly one of 'sensor' or 'override'");
        }
        if (has_override) {
            if (doc.contains("value")) {
                throw TraceError(line_no, "override lines take no value");
            }
            const auto& o = doc["override"];
            if (!o.is_string()) {
                throw TraceError(line_no, "override must be a string");
            }
            ev.event = Override{o.get<std::string>()};
        } else {
            const auto& s = doc["sensor"];
            auto v = doc.find("value");
            if (!s.is_string()) {
                throw TraceError(line_no, "sensor must be a string");
            }
            if (v == doc.end() || !v->is_number() || !std::isfinite(v->get<double>())) {
                throw TraceError(line_no, "value must be a finite number");
            }
            auto name = s.get<std::string>();
            if (!config.find_sensor(name)) {
                throw TraceError(line_no, "unknown sensor '" + name + "'");
            }
            ev.event = SensorReading{std::move(name), v->get<double>()};
        }
        events.push_back(std::move(ev));
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.t_us < b.t_us; });
    return events;
}

} // namespace robosync::engine
