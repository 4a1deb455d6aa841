#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robosync/bus.hpp"
#include "robosync/config.hpp"
#include "robosync/dsl/bind.hpp"
#include "robosync/dsl/eval.hpp"
#include "robosync/dsl/format.hpp"
#include "robosync/dsl/parser.hpp"
#include "robosync/engine/engine.hpp"
#include "robosync/engine/stats.hpp"
#include "robosync/sensorproc.hpp"
#include "robosync/sched.hpp"

namespace py = pybind11;
using namespace robosync;

namespace {

struct Loaded {
    config::SystemConfig config;
    dsl::BoundProgram program;
};

Loaded load(const std::string& config_text, const std::string& program_text)
{
    Loaded l;
    l.config = config::parse_config(config_text);
    l.program = dsl::bind_program(dsl::parse_program(program_text), l.config);
    return l;
}

std::vector<std::string> validate(const std::string& text)
{
    std::vector<std::string> out;
    try {
        for (const auto& issue : config::validate_config(config::parse_config(text))) {
            out.push_back(issue.to_string());
        }
    } catch (const config::SchemaError& e) {
        for (const auto& issue : e.issues()) {
            out.push_back(issue.to_string());
        }
    }
    return out;
}

std::vector<double> default_priorities(const std::vector<std::pair<std::optional<double>, bool>>& requests)
{
    std::vector<config::PriorityRequest> r;
    for (const auto& [declared, safety] : requests) {
        r.push_back({declared, safety});
    }
    return config::default_priorities(r);
}

double jerk(const std::vector<std::pair<std::int64_t, double>>& samples)
{
    std::vector<sensorproc::Reading> history;
    for (const auto& [t, v] : samples) {
        history.push_back({"", t, v, 0});
    }
    return sensorproc::jerk_level(history);
}

double adapt(double base, double alpha, std::int64_t window_us, std::size_t frequency, bool pinned)
{
    config::SchedulerParams params;
    params.alpha = alpha;
    params.window_us = window_us;
    auto category = pinned ? sched::TaskCategory::safety : sched::TaskCategory::behavioral;
    sched::TaskDescriptor task{"task", category, {"b"}, pinned ? 1.0 : base, pinned ? 1.0 : base, 1, pinned};
    sched::FrequencyCounter counter{"b", {}};
    for (std::size_t i = 0; i < frequency; ++i) {
        counter = sched::record_trigger(std::move(counter), 0);
    }
    std::map<std::string, sched::FrequencyCounter> counters{{"b", counter}};
    return sched::adapt_priorities({task}, counters, params, window_us).tasks.front().current_priority;
}

py::list build_tasks(const std::string& config_text, const std::string& program_text)
{
    auto l = load(config_text, program_text);
    py::list out;
    for (const auto& t : engine::build_tasks(l.config, l.program)) {
        py::dict d;
        d["id"] = t.id;
        d["category"] = std::string(sched::to_string(t.category));
        d["behaviors"] = t.behaviors;
        d["base_priority"] = t.base_priority;
        d["current_priority"] = t.current_priority;
        d["cost_us"] = t.cost_us;
        d["safety_pinned"] = t.safety_pinned;
        out.append(d);
    }
    return out;
}

std::string run(const std::string& config_text, const std::string& program_text, const std::string& trace_text,
                std::optional<std::int64_t> until_us)
{
    auto l = load(config_text, program_text);
    auto trace = engine::load_trace(trace_text, l.config);
    engine::RunOptions options;
    options.until_us = until_us;
    return engine::serialize_log(engine::run(l.config, l.program, trace, options));
}

} // namespace

PYBIND11_MODULE(_robosync, m)
{
    m.doc() = "Layered robot-behavior runtime: config, DSL, scheduler and deterministic simulation.";

    auto base = py::register_exception<Error>(m, "RobosyncError", PyExc_RuntimeError);
    py::register_exception<config::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<dsl::ParseError>(m, "ParseError", base.ptr());
    py::register_exception<dsl::BindErrors>(m, "BindError", base.ptr());
    py::register_exception<engine::TraceError>(m, "TraceError", base.ptr());
    py::register_exception<engine::MalformedLog>(m, "MalformedLog", base.ptr());
    py::register_exception<bus::LayeringError>(m, "LayeringError", base.ptr());

    m.def(
        "parse_config", [](const std::string& text) { return config::serialize_config(config::parse_config(text)); },
        py::arg("text"), "Parses and validates a JSON config; returns its canonical JSON form.");
    m.def("validate", &validate, py::arg("text"), "Returns 'path: message' strings; empty when the config is valid.");
    m.def("default_priorities", &default_priorities, py::arg("requests"),
          "Resolves (declared or None, safety) pairs into priorities in listing order.");

    m.def(
        "format_program", [](const std::string& text) { return dsl::format_program(dsl::parse_program(text)); },
        py::arg("text"));
    m.def(
        "dump_ast", [](const std::string& text) { return dsl::dump_ast(dsl::parse_program(text)); },
        py::arg("text"));
    m.def(
        "eval_condition",
        [](const std::string& cond, const std::map<std::string, double>& signals) {
            dsl::Snapshot snapshot(signals.begin(), signals.end());
            return dsl::eval_condition(dsl::parse_condition(cond), snapshot);
        },
        py::arg("condition"), py::arg("signals"));
    m.def(
        "bind",
        [](const std::string& config_text, const std::string& program_text) {
            auto l = load(config_text, program_text);
            std::map<std::string, double> priorities;
            for (const auto& b : l.program.behaviors) {
                priorities[b.name] = b.priority;
            }
            return priorities;
        },
        py::arg("config"), py::arg("program"), "Binds a program; returns each behavior's resolved priority.");

    m.def("gate_significant", &sensorproc::gate_significant, py::arg("previous"), py::arg("current"),
          py::arg("delta"));
    m.def(
        "touch_level", [](double raw, const std::vector<double>& th) { return sensorproc::touch_level(raw, th); },
        py::arg("raw"), py::arg("thresholds"));
    m.def("jerk_level", &jerk, py::arg("samples"), "Samples are (t_us, value) pairs, oldest first.");

    m.def("assign_base_priorities", &sched::assign_base_priorities, py::arg("behavior_priorities"), py::arg("usage"),
          py::arg("safety_tasks") = std::set<std::string>{});
    m.def("adapt_priority", &adapt, py::arg("base"), py::arg("alpha"), py::arg("window_us"), py::arg("frequency"),
          py::arg("pinned") = false);
    m.def(
        "evaluate_safety",
        [](double reading, double threshold) {
            config::SafetyCheckSpec check{"check", "sensor", threshold};
            return bus::evaluate_safety(reading, check, 0).decision == bus::SafetyDecision::alert_and_halt;
        },
        py::arg("reading"), py::arg("threshold"), "True when the reading calls for a halt.");

    m.def("build_tasks", &build_tasks, py::arg("config"), py::arg("program"));
    m.def("run", &run, py::arg("config"), py::arg("program"), py::arg("trace"), py::arg("until_us") = py::none(),
          "Runs a simulation; returns the JSON-lines execution log.");
    m.def(
        "compute_stats",
        [](const std::string& log_text) {
            return engine::stats_to_json(engine::compute_stats(engine::parse_log(log_text)));
        },
        py::arg("log"), "Summarizes a JSON-lines log; returns single-line JSON.");
}
