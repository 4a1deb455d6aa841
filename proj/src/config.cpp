#include "robosync/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <json.hpp>

#include "robosync/sensorproc.hpp"

namespace robosync::config {

using nlohmann::json;

std::string_view to_string(SensorKind kind)
{
    switch (kind) {
    case SensorKind::i2c: return "i2c";
    case SensorKind::spi: return "spi";
    case SensorKind::gpio: return "gpio";
    case SensorKind::analog: return "analog";
    case SensorKind::virtual_: return "virtual";
    }
    return "?";
}

std::string_view to_string(ActuatorKind kind)
{
    switch (kind) {
    case ActuatorKind::pwm: return "pwm";
    case ActuatorKind::gpio: return "gpio";
    case ActuatorKind::audio: return "audio";
    case ActuatorKind::virtual_: return "virtual";
    }
    return "?";
}

double ActuatorSpec::neutral_value() const
{
    return std::clamp(0.0, min_value, max_value);
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, std::string_view name)
{
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.name == name; });
    return it == items.end() ? nullptr : &*it;
}

} // namespace

const SensorSpec* SystemConfig::find_sensor(std::string_view name) const
{
    return find_named(sensors, name);
}

const ActuatorSpec* SystemConfig::find_actuator(std::string_view name) const
{
    return find_named(actuators, name);
}

const BehaviorSpec* SystemConfig::find_behavior(std::string_view name) const
{
    return find_named(behaviors, name);
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& detail)
    : ConfigError("syntax error at line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + detail),
      line_(line),
      column_(column)
{
}

namespace {

std::string join_issues(const std::vector<Issue>& issues)
{
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) {
            out += '\n';
        }
        out += issue.to_string();
    }
    return out;
}

} // namespace

SchemaError::SchemaError(std::vector<Issue> issues)
    : ConfigError(join_issues(issues)), issues_(std::move(issues))
{
}

UnknownPluginError::UnknownPluginError(std::string path, std::string plugin)
    : ConfigError(path + ": unknown plugin '" + plugin + "'"),
      path_(std::move(path)),
      plugin_(std::move(plugin))
{
}

namespace {

bool is_identifier(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    auto head = s.front();
    if (!(std::isalpha(static_cast<unsigned char>(head)) || head == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string format_hex(std::uint32_t v)
{
    char buf[16];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, 16);
    return "0x" + std::string(buf, ptr);
}

std::string format_number(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Walks one JSON object, collecting issues instead of throwing so a single
// pass reports every structural problem.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, std::vector<Issue>& issues)
        : obj_(obj), path_(std::move(path)), issues_(issues)
    {
    }

    void reject_unknown(std::initializer_list<std::string_view> allowed)
    {
        for (const auto& [key, _] : obj_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                issue(key, "unknown key");
            }
        }
    }

    std::optional<std::string> string(const char* key, bool required)
    {
        auto* v = get(key, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_string()) {
            issue(key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<std::string> name(const char* key = "name")
    {
        auto s = string(key, true);
        if (s && !is_identifier(*s)) {
            issue(key, "'" + *s + "' is not an identifier");
            return std::nullopt;
        }
        return s;
    }

    std::optional<double> number(const char* key, bool required)
    {
        auto* v = get(key, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            issue(key, "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<std::int64_t> integer(const char* key, bool required)
    {
        auto* v = get(key, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number_integer()) {
            issue(key, "expected an integer");
            return std::nullopt;
        }
        return v->get<std::int64_t>();
    }

    std::optional<bool> boolean(const char* key)
    {
        auto* v = get(key, false);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_boolean()) {
            issue(key, "expected a boolean");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    // Pins may be written as integers or as decimal strings ("5").
    std::optional<std::uint32_t> pin(const char* key)
    {
        auto* v = get(key, false);
        if (!v) {
            return std::nullopt;
        }
        std::uint64_t out = 0;
        if (v->is_number_unsigned()) {
            out = v->get<std::uint64_t>();
        } else if (v->is_string()) {
            const auto& s = v->get_ref<const std::string&>();
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
                issue(key, "expected a non-negative integer");
                return std::nullopt;
            }
        } else {
            issue(key, "expected a non-negative integer");
            return std::nullopt;
        }
        if (out > 0xffffffffu) {
            issue(key, "out of range");
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(out);
    }

    std::optional<std::uint32_t> hex_address(const char* key)
    {
        auto s = string(key, false);
        if (!s) {
            return std::nullopt;
        }
        std::uint64_t out = 0;
        bool ok = s->size() > 2 && (*s)[0] == '0' && ((*s)[1] == 'x' || (*s)[1] == 'X');
        if (ok) {
            auto [ptr, ec] = std::from_chars(s->data() + 2, s->data() + s->size(), out, 16);
            ok = ec == std::errc{} && ptr == s->data() + s->size() && out <= 0xffffffffu;
        }
        if (!ok) {
            issue(key, "expected a 0x-prefixed hex address");
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(out);
    }

    const json* array(const char* key)
    {
        auto* v = get(key, false);
        if (v && !v->is_array()) {
            issue(key, "expected an array");
            return nullptr;
        }
        return v;
    }

    const json* object(const char* key)
    {
        auto* v = get(key, false);
        if (v && !v->is_object()) {
            issue(key, "expected an object");
            return nullptr;
        }
        return v;
    }

    void issue(std::string_view key, std::string message)
    {
        issues_.push_back({path_ + "." + std::string(key), std::move(message)});
    }

    const std::string& path() const { return path_; }

private:
    const json* get(const char* key, bool required)
    {
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            if (required) {
                issue(key, "missing required field");
            }
            return nullptr;
        }
        return &*it;
    }

    const json& obj_;
    std::string path_;
    std::vector<Issue>& issues_;
};

std::string indexed(std::string_view collection, std::size_t i)
{
    return std::string(collection) + "[" + std::to_string(i) + "]";
}

// Calls fn(reader, index) for each object element of a top-level array.
template <class Fn>
void for_each_entry(const json* arr, std::string_view collection, std::vector<Issue>& issues, Fn fn)
{
    if (!arr) {
        return;
    }
    for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& item = (*arr)[i];
        if (!item.is_object()) {
            issues.push_back({indexed(collection, i), "expected an object"});
            continue;
        }
        ObjectReader reader(item, indexed(collection, i), issues);
        fn(reader, item);
    }
}

std::optional<SensorKind> sensor_kind(const std::string& s)
{
    auto k = lower(s);
    if (k == "i2c") return SensorKind::i2c;
    if (k == "spi") return SensorKind::spi;
    if (k == "gpio") return SensorKind::gpio;
    if (k == "analog") return SensorKind::analog;
    if (k == "virtual") return SensorKind::virtual_;
    return std::nullopt;
}

std::optional<ActuatorKind> actuator_kind(const std::string& s)
{
    auto k = lower(s);
    if (k == "pwm") return ActuatorKind::pwm;
    if (k == "gpio") return ActuatorKind::gpio;
    if (k == "audio") return ActuatorKind::audio;
    if (k == "virtual") return ActuatorKind::virtual_;
    return std::nullopt;
}

// "/path/to/libtouch_level.so" -> "touch_level"
std::string plugin_from_path(std::string_view path)
{
    auto slash = path.find_last_of("/\\");
    auto stem = slash == std::string_view::npos ? path : path.substr(slash + 1);
    auto dot = stem.find('.');
    if (dot != std::string_view::npos) {
        stem = stem.substr(0, dot);
    }
    if (stem.starts_with("lib")) {
        stem.remove_prefix(3);
    }
    if (sensorproc::is_registered(stem)) {
        return std::string(stem);
    }
    return "stub";
}

SensorSpec read_sensor(ObjectReader& r)
{
    r.reject_unknown({"name", "type", "address", "pin", "delta", "period_us", "units"});
    SensorSpec s;
    s.name = r.name().value_or("");
    if (auto t = r.string("type", true)) {
        if (auto k = sensor_kind(*t)) {
            s.kind = *k;
        } else {
            r.issue("type", "unknown sensor type '" + *t + "'");
        }
    }
    s.address = r.hex_address("address");
    s.pin = r.pin("pin");
    s.delta = r.number("delta", false).value_or(0.0);
    s.period_us = r.integer("period_us", false).value_or(10'000);
    s.units = r.string("units", false).value_or("");
    return s;
}

ActuatorSpec read_actuator(ObjectReader& r)
{
    r.reject_unknown({"name", "type", "pin", "min_value", "max_value"});
    ActuatorSpec a;
    a.name = r.name().value_or("");
    if (auto t = r.string("type", true)) {
        if (auto k = actuator_kind(*t)) {
            a.kind = *k;
        } else {
            r.issue("type", "unknown actuator type '" + *t + "'");
        }
    }
    a.pin = r.pin("pin");
    a.min_value = r.number("min_value", false).value_or(0.0);
    a.max_value = r.number("max_value", false).value_or(1.0);
    return a;
}

BehaviorSpec read_behavior(ObjectReader& r)
{
    r.reject_unknown({"name", "priority", "action", "safety"});
    BehaviorSpec b;
    b.name = r.name().value_or("");
    b.priority = r.number("priority", false);
    b.action = r.string("action", false);
    b.safety = r.boolean("safety").value_or(false);
    return b;
}

AlgorithmSpec read_algorithm(ObjectReader& r, std::optional<UnknownPluginError>& unknown)
{
    r.reject_unknown({"name", "plugin", "path", "inputs", "output", "params"});
    AlgorithmSpec a;
    a.name = r.name().value_or("");
    a.path = r.string("path", false);
    if (auto plugin = r.string("plugin", false)) {
        a.plugin = *plugin;
        if (!sensorproc::is_registered(*plugin) && !unknown) {
            unknown.emplace(r.path() + ".plugin", *plugin);
        }
    } else if (a.path) {
        a.plugin = plugin_from_path(*a.path);
    } else {
        r.issue("plugin", "missing required field (or 'path')");
    }
    if (const auto* inputs = r.array("inputs")) {
        for (std::size_t j = 0; j < inputs->size(); ++j) {
            const auto& v = (*inputs)[j];
            if (v.is_string()) {
                a.inputs.push_back(v.get<std::string>());
            } else {
                r.issue("inputs[" + std::to_string(j) + "]", "expected a string");
            }
        }
    }
    a.output = r.string("output", false).value_or(a.name);
    if (const auto* params = r.object("params")) {
        for (const auto& [key, v] : params->items()) {
            if (v.is_number()) {
                a.params[key] = v.get<double>();
            } else if (v.is_string()) {
                a.params[key] = v.get<std::string>();
            } else {
                r.issue("params." + key, "expected a number or string");
            }
        }
    }
    return a;
}

SafetyCheckSpec read_safety_check(ObjectReader& r)
{
    r.reject_unknown({"name", "sensor", "threshold"});
    SafetyCheckSpec c;
    c.name = r.name().value_or("");
    c.sensor = r.string("sensor", true).value_or("");
    c.threshold = r.number("threshold", true).value_or(0.0);
    return c;
}

SchedulerParams read_scheduler(ObjectReader& r)
{
    r.reject_unknown({"alpha", "window_us", "p_max", "default_task_cost_us", "slowly_speed",
                      "quickly_speed"});
    SchedulerParams p;
    p.alpha = r.number("alpha", false).value_or(p.alpha);
    p.window_us = r.integer("window_us", false).value_or(p.window_us);
    p.p_max = r.number("p_max", false).value_or(p.p_max);
    p.default_task_cost_us = r.integer("default_task_cost_us", false).value_or(p.default_task_cost_us);
    p.slowly_speed = r.number("slowly_speed", false).value_or(p.slowly_speed);
    p.quickly_speed = r.number("quickly_speed", false).value_or(p.quickly_speed);
    return p;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    // nlohmann reports the 1-based position of the offending byte.
    std::size_t offset = byte == 0 ? 0 : std::min(byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

SystemConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(text, e.byte);
        std::string detail = e.what();
        if (auto pos = detail.find("parse error"); pos != std::string::npos) {
            detail = detail.substr(pos);
        }
        throw SyntaxError(line, column, detail);
    }
    if (!doc.is_object()) {
        throw SchemaError(std::vector<Issue>{{"$", "top level must be an object"}});
    }

    std::vector<Issue> issues;
    std::optional<UnknownPluginError> unknown_plugin;
    ObjectReader top(doc, "$", issues);
    for (const auto& [key, _] : doc.items()) {
        static constexpr std::string_view allowed[] = {"sensors", "actuators", "behaviors",
                                                       "algorithms", "safety_checks", "scheduler"};
        if (std::find(std::begin(allowed), std::end(allowed), key) == std::end(allowed)) {
            issues.push_back({key, "unknown top-level key"});
        }
    }

    SystemConfig config;
    auto array_at = [&](const char* key) -> const json* {
        auto it = doc.find(key);
        if (it == doc.end()) {
            return nullptr;
        }
        if (!it->is_array()) {
            issues.push_back({key, "expected an array"});
            return nullptr;
        }
        return &*it;
    };
    for_each_entry(array_at("sensors"), "sensors", issues,
                   [&](ObjectReader& r, const json&) { config.sensors.push_back(read_sensor(r)); });
    for_each_entry(array_at("actuators"), "actuators", issues,
                   [&](ObjectReader& r, const json&) { config.actuators.push_back(read_actuator(r)); });
    for_each_entry(array_at("behaviors"), "behaviors", issues,
                   [&](ObjectReader& r, const json&) { config.behaviors.push_back(read_behavior(r)); });
    for_each_entry(array_at("algorithms"), "algorithms", issues, [&](ObjectReader& r, const json&) {
        config.algorithms.push_back(read_algorithm(r, unknown_plugin));
    });
    for_each_entry(array_at("safety_checks"), "safety_checks", issues, [&](ObjectReader& r, const json&) {
        config.safety_checks.push_back(read_safety_check(r));
    });
    if (auto it = doc.find("scheduler"); it != doc.end()) {
        if (it->is_object()) {
            ObjectReader r(*it, "scheduler", issues);
            config.scheduler = read_scheduler(r);
        } else {
            issues.push_back({"scheduler", "expected an object"});
        }
    }

    if (!issues.empty()) {
        throw SchemaError(std::move(issues));
    }
    if (unknown_plugin) {
        throw *unknown_plugin;
    }
    auto report = validate_config(config);
    if (!report.empty()) {
        throw SchemaError(std::move(report));
    }
    return config;
}

std::string serialize_config(const SystemConfig& config)
{
    using ojson = nlohmann::ordered_json;
    ojson doc = ojson::object();

    auto& sensors = doc["sensors"] = ojson::array();
    for (const auto& s : config.sensors) {
        ojson o;
        o["name"] = s.name;
        o["type"] = to_string(s.kind);
        if (s.address) {
            o["address"] = format_hex(*s.address);
        }
        if (s.pin) {
            o["pin"] = *s.pin;
        }
        o["delta"] = s.delta;
        o["period_us"] = s.period_us;
        o["units"] = s.units;
        sensors.push_back(std::move(o));
    }
    auto& actuators = doc["actuators"] = ojson::array();
    for (const auto& a : config.actuators) {
        ojson o;
        o["name"] = a.name;
        o["type"] = to_string(a.kind);
        if (a.pin) {
            o["pin"] = *a.pin;
        }
        o["min_value"] = a.min_value;
        o["max_value"] = a.max_value;
        actuators.push_back(std::move(o));
    }
    auto& behaviors = doc["behaviors"] = ojson::array();
    for (const auto& b : config.behaviors) {
        ojson o;
        o["name"] = b.name;
        if (b.priority) {
            o["priority"] = *b.priority;
        }
        if (b.action) {
            o["action"] = *b.action;
        }
        o["safety"] = b.safety;
        behaviors.push_back(std::move(o));
    }
    auto& algorithms = doc["algorithms"] = ojson::array();
    for (const auto& a : config.algorithms) {
        ojson o;
        o["name"] = a.name;
        o["plugin"] = a.plugin;
        if (a.path) {
            o["path"] = *a.path;
        }
        o["inputs"] = a.inputs;
        o["output"] = a.output;
        ojson params = ojson::object();
        for (const auto& [key, value] : a.params) {
            std::visit([&](const auto& v) { params[key] = v; }, value);
        }
        o["params"] = std::move(params);
        algorithms.push_back(std::move(o));
    }
    auto& checks = doc["safety_checks"] = ojson::array();
    for (const auto& c : config.safety_checks) {
        checks.push_back({{"name", c.name}, {"sensor", c.sensor}, {"threshold", c.threshold}});
    }
    const auto& p = config.scheduler;
    doc["scheduler"] = {{"alpha", p.alpha},
                        {"window_us", p.window_us},
                        {"p_max", p.p_max},
                        {"default_task_cost_us", p.default_task_cost_us},
                        {"slowly_speed", p.slowly_speed},
                        {"quickly_speed", p.quickly_speed}};
    return doc.dump(2) + "\n";
}

namespace {

template <class T>
void check_unique_names(const std::vector<T>& items, std::string_view collection, ValidationReport& report)
{
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& name = items[i].name;
        if (!is_identifier(name)) {
            report.push_back({indexed(collection, i) + ".name", "'" + name + "' is not an identifier"});
            continue;
        }
        auto [it, inserted] = seen.emplace(name, i);
        if (!inserted) {
            report.push_back({indexed(collection, i) + ".name",
                              "duplicate name '" + name + "' (also " + indexed(collection, it->second) + ")"});
        }
    }
}

} // namespace

ValidationReport validate_config(const SystemConfig& config)
{
    ValidationReport report;
    check_unique_names(config.sensors, "sensors", report);
    check_unique_names(config.actuators, "actuators", report);
    check_unique_names(config.behaviors, "behaviors", report);
    check_unique_names(config.algorithms, "algorithms", report);
    check_unique_names(config.safety_checks, "safety_checks", report);

    for (std::size_t i = 0; i < config.sensors.size(); ++i) {
        const auto& s = config.sensors[i];
        auto path = indexed("sensors", i);
        bool bus = s.kind == SensorKind::i2c || s.kind == SensorKind::spi;
        bool pinned = s.kind == SensorKind::gpio || s.kind == SensorKind::analog;
        if (bus && !s.address) {
            report.push_back({path + ".address", std::string(to_string(s.kind)) + " sensor needs an address"});
        }
        if (pinned && !s.pin) {
            report.push_back({path + ".pin", std::string(to_string(s.kind)) + " sensor needs a pin"});
        }
        if (!bus && s.address) {
            report.push_back({path + ".address", "address not allowed for " + std::string(to_string(s.kind)) + " sensor"});
        }
        if (!pinned && s.pin) {
            report.push_back({path + ".pin", "pin not allowed for " + std::string(to_string(s.kind)) + " sensor"});
        }
        if (!(s.delta >= 0.0) || !std::isfinite(s.delta)) {
            report.push_back({path + ".delta", "must be a finite non-negative number"});
        }
        if (s.period_us < 1) {
            report.push_back({path + ".period_us", "must be at least 1"});
        }
    }

    for (std::size_t i = 0; i < config.actuators.size(); ++i) {
        const auto& a = config.actuators[i];
        if (!(a.min_value <= a.max_value)) {
            report.push_back({indexed("actuators", i) + ".min_value", "exceeds max_value"});
        }
    }

    std::map<double, std::size_t> declared;
    for (std::size_t i = 0; i < config.behaviors.size(); ++i) {
        const auto& b = config.behaviors[i];
        auto path = indexed("behaviors", i);
        if (b.priority) {
            double p = *b.priority;
            if (!(p > 0.0 && p < 1.0)) {
                report.push_back({path + ".priority", "must lie strictly between 0 and 1"});
            } else if (!b.safety) {
                auto [it, inserted] = declared.emplace(p, i);
                if (!inserted) {
                    report.push_back({path + ".priority", "duplicate priority " + format_number(p) +
                                                              " (also " + indexed("behaviors", it->second) + ")"});
                }
            }
        }
        if (b.action && !config.find_actuator(*b.action)) {
            report.push_back({path + ".action", "unresolved actuator '" + *b.action + "'"});
        }
    }

    std::map<std::string, std::size_t> outputs;
    for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
        const auto& a = config.algorithms[i];
        auto path = indexed("algorithms", i);
        if (!sensorproc::is_registered(a.plugin)) {
            report.push_back({path + ".plugin", "unknown plugin '" + a.plugin + "'"});
        } else if (auto err = sensorproc::check_params(a.plugin, a.params)) {
            report.push_back({path + ".params", *err});
        }
        for (std::size_t j = 0; j < a.inputs.size(); ++j) {
            if (!config.find_sensor(a.inputs[j])) {
                report.push_back({path + ".inputs[" + std::to_string(j) + "]",
                                  "unresolved sensor '" + a.inputs[j] + "'"});
            }
        }
        if (!is_identifier(a.output)) {
            report.push_back({path + ".output", "'" + a.output + "' is not an identifier"});
        } else if (config.find_sensor(a.output)) {
            report.push_back({path + ".output", "topic '" + a.output + "' collides with a sensor name"});
        } else if (auto [it, inserted] = outputs.emplace(a.output, i); !inserted) {
            report.push_back({path + ".output", "duplicate output topic '" + a.output + "' (also " +
                                                    indexed("algorithms", it->second) + ")"});
        }
    }

    for (std::size_t i = 0; i < config.safety_checks.size(); ++i) {
        const auto& c = config.safety_checks[i];
        if (!config.find_sensor(c.sensor)) {
            report.push_back({indexed("safety_checks", i) + ".sensor", "unresolved sensor '" + c.sensor + "'"});
        }
        if (std::isnan(c.threshold)) {
            report.push_back({indexed("safety_checks", i) + ".threshold", "must be a number"});
        }
    }

    if (config.sensors.empty() && (!config.algorithms.empty() || !config.safety_checks.empty())) {
        report.push_back({"sensors", "at least one sensor is required when algorithms or safety checks are declared"});
    }

    const auto& p = config.scheduler;
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) {
        report.push_back({"scheduler.alpha", "must be a finite non-negative number"});
    }
    if (p.window_us < 1) {
        report.push_back({"scheduler.window_us", "must be at least 1"});
    }
    if (p.p_max != 1.0) {
        report.push_back({"scheduler.p_max", "is fixed at 1.0"});
    }
    if (p.default_task_cost_us < 1) {
        report.push_back({"scheduler.default_task_cost_us", "must be at least 1"});
    }
    if (!(p.slowly_speed >= 0.0 && p.slowly_speed <= 1.0)) {
        report.push_back({"scheduler.slowly_speed", "must lie in [0, 1]"});
    }
    if (!(p.quickly_speed >= 0.0 && p.quickly_speed <= 1.0)) {
        report.push_back({"scheduler.quickly_speed", "must lie in [0, 1]"});
    }
    return report;
}

std::vector<double> default_priorities(const std::vector<PriorityRequest>& behaviors)
{
    const auto n = behaviors.size();
    const double slot = 1.0 / static_cast<double>(n + 1);
    const double step = slot / 10.0;

    std::vector<double> taken;
    for (const auto& b : behaviors) {
        if (!b.safety && b.declared) {
            taken.push_back(*b.declared);
        }
    }
    auto collides = [&](double v) {
        return std::any_of(taken.begin(), taken.end(), [v](double t) { return std::fabs(t - v) < 1e-12; });
    };

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = behaviors[i];
        if (b.safety) {
            out[i] = 1.0;
            continue;
        }
        if (b.declared) {
            out[i] = *b.declared;
            continue;
        }
        double v = 1.0 - static_cast<double>(i + 1) * slot;
        while (collides(v) && v > step) {
            v -= step;
        }
        if (collides(v) || v <= 0.0) {
            // Exhausted the downward walk: take the midpoint below the lowest used value.
            double lowest = 1.0;
            for (double t : taken) {
                lowest = std::min(lowest, t);
            }
            v = lowest / 2.0;
        }
        taken.push_back(v);
        out[i] = v;
    }
    return out;
}

std::optional<std::string> processed_topic_for_sensor(const SystemConfig& config, std::string_view sensor)
{
    std::optional<std::string> topic;
    for (const auto& a : config.algorithms) {
        if (std::find(a.inputs.begin(), a.inputs.end(), sensor) != a.inputs.end()) {
            if (topic) {
                return std::nullopt;
            }
            topic = a.output;
        }
    }
    return topic.value_or(std::string(sensor));
}

} // namespace robosync::config
