#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "robosync/config.hpp"
#include "support/scenario.hpp"

using namespace robosync::config;

namespace {

std::vector<Issue> schema_issues(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const SchemaError& e) {
        return e.issues();
    }
    return {};
}

bool has_issue(const std::vector<Issue>& issues, const std::string& path)
{
    return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.path == path; });
}

} // namespace

TEST_CASE("the example config parses into the expected model")
{
    auto c = parse_config(testsupport::fixture("example_config.json"));
    REQUIRE(c.sensors.size() == 2);
    CHECK(c.sensors[0].name == "temp_sensor");
    CHECK(c.sensors[0].kind == SensorKind::i2c);
    CHECK(c.sensors[0].address == 0x40u);
    CHECK(c.sensors[1].name == "proximity_sensor");
    CHECK(c.sensors[1].kind == SensorKind::gpio);
    CHECK(c.sensors[1].pin == 5u);
    REQUIRE(c.actuators.size() == 1);
    CHECK(c.actuators[0].name == "motor_1");
    CHECK(c.actuators[0].kind == ActuatorKind::pwm);
    CHECK(c.actuators[0].pin == 10u);
    REQUIRE(c.behaviors.size() == 1);
    CHECK(c.behaviors[0].name == "temperature_check");
    CHECK(c.behaviors[0].action == std::optional<std::string>("motor_1"));
    REQUIRE(c.algorithms.size() == 1);
    CHECK(c.algorithms[0].name == "ML_algorithm");
    CHECK(c.algorithms[0].path == std::optional<std::string>("/path/to/algorithm/module.so"));
    CHECK(c.algorithms[0].plugin == "stub");
    CHECK(c.algorithms[0].output == "ML_algorithm");
    CHECK(validate_config(c).empty());
}

TEST_CASE("defaults are applied")
{
    auto c = parse_config(R"({"sensors": [{"name": "s", "type": "virtual"}], "actuators": [], "behaviors": [],
                              "algorithms": []})");
    CHECK(c.sensors[0].delta == 0.0);
    CHECK(c.sensors[0].period_us == 10000);
    CHECK(c.scheduler.alpha == 0.05);
    CHECK(c.scheduler.window_us == 1'000'000);
    CHECK(c.scheduler.default_task_cost_us == 100);
    CHECK(c.scheduler.p_max == 1.0);
}

TEST_CASE("empty arrays give an empty config")
{
    auto c = parse_config(R"({"sensors": [], "actuators": [], "behaviors": [], "algorithms": []})");
    CHECK(c == SystemConfig{});
}

TEST_CASE("duplicate priorities are rejected with a field path")
{
    auto issues = schema_issues(R"({"sensors": [], "actuators": [], "algorithms": [],
        "behaviors": [{"name": "a", "priority": 0.5}, {"name": "b", "priority": 0.5}]})");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].path == "behaviors[1].priority");
    CHECK(issues[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column")
{
    try {
        parse_config("{\n  \"sensors\": [\n    }\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("unknown keys are rejected at every level")
{
    CHECK(has_issue(schema_issues(R"({"sensors": [], "extra": 1})"), "extra"));
    CHECK(has_issue(schema_issues(R"({"sensors": [{"name": "s", "type": "virtual", "colour": "red"}]})"),
                    "sensors[0].colour"));
    CHECK(has_issue(schema_issues(R"({"scheduler": {"beta": 1}})"), "scheduler.beta"));
}

TEST_CASE("explicit unknown plugin raises UnknownPluginError")
{
    try {
        parse_config(R"({"sensors": [{"name": "s", "type": "virtual"}],
                         "algorithms": [{"name": "a", "plugin": "face_recognition", "inputs": ["s"]}]})");
        FAIL("expected UnknownPluginError");
    } catch (const UnknownPluginError& e) {
        CHECK(e.plugin() == "face_recognition");
        CHECK(e.path() == "algorithms[0].plugin");
    }
}

TEST_CASE("path stems map onto registered plugins")
{
    auto c = parse_config(R"({"sensors": [{"name": "s", "type": "virtual"}],
        "algorithms": [{"name": "a", "path": "/opt/libmoving_average.so", "inputs": ["s"], "params": {"k": 4}}]})");
    CHECK(c.algorithms[0].plugin == "moving_average");
}

TEST_CASE("validation: dangling references")
{
    SystemConfig c;
    c.actuators.push_back({"motor_1", ActuatorKind::pwm, 10u});
    c.behaviors.push_back({"b", std::nullopt, std::string("motor_9"), false});
    auto report = validate_config(c);
    REQUIRE(report.size() == 1);
    CHECK(report[0].to_string().rfind("behaviors[0].action: unresolved actuator", 0) == 0);

    SystemConfig d;
    d.sensors.push_back({"touch"});
    d.safety_checks.push_back({"limit", "force", 10.0});
    auto r2 = validate_config(d);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].path == "safety_checks[0].sensor");
}

TEST_CASE("validation: sensor wiring by kind")
{
    auto issues = schema_issues(R"({"sensors": [{"name": "a", "type": "i2c"}, {"name": "b", "type": "gpio"},
        {"name": "c", "type": "virtual", "pin": 3}, {"name": "d", "type": "analog", "pin": 2, "delta": -1}]})");
    CHECK(has_issue(issues, "sensors[0].address"));
    CHECK(has_issue(issues, "sensors[1].pin"));
    CHECK(has_issue(issues, "sensors[2].pin"));
    CHECK(has_issue(issues, "sensors[3].delta"));
}

TEST_CASE("validation: scheduler constraints")
{
    auto issues = schema_issues(R"({"scheduler": {"p_max": 0.9, "alpha": -1, "window_us": 0}})");
    CHECK(has_issue(issues, "scheduler.p_max"));
    CHECK(has_issue(issues, "scheduler.alpha"));
    CHECK(has_issue(issues, "scheduler.window_us"));
}

TEST_CASE("validation: algorithms need a sensor and resolvable inputs")
{
    auto issues = schema_issues(R"({"algorithms": [{"name": "a", "plugin": "passthrough", "inputs": ["x"]}]})");
    CHECK(has_issue(issues, "sensors"));
    CHECK(has_issue(issues, "algorithms[0].inputs[0]"));
}

TEST_CASE("default priorities: spec examples")
{
    CHECK(default_priorities({{}}) == std::vector<double>{0.5});
    auto three = default_priorities({{}, {}, {}});
    CHECK(three == std::vector<double>{0.75, 0.5, 0.25});
    auto two = default_priorities({{0.75, false}, {}});
    CHECK(two[0] == 0.75);
    CHECK(two[1] == doctest::Approx(1.0 - 2.0 / 3.0).epsilon(1e-15));
    auto safety = default_priorities({{std::nullopt, true}, {}});
    CHECK(safety[0] == 1.0);
    CHECK(safety[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("default priorities: collisions step down")
{
    auto p = default_priorities({{}, {0.5, false}});
    // N=2: index 0 -> 2/3, index 1 declared 0.5; no collision.
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    auto q = default_priorities({{}, {2.0 / 3.0, false}, {}});
    // N=3: index 0 -> 0.75 free, index 2 -> 0.25 free.
    CHECK(q == std::vector<double>{0.75, 2.0 / 3.0, 0.25});
    auto r = default_priorities({{0.75, false}, {}, {}});
    // index 1 -> 0.5, index 2 -> 0.25: still free.
    CHECK(r == std::vector<double>{0.75, 0.5, 0.25});
    auto s = default_priorities({{}, {0.75, false}});
    // index 0 -> 2/3 free.
    CHECK(s[0] == doctest::Approx(2.0 / 3.0));
    auto t = default_priorities({{}, {}, {0.5, false}});
    // N=3: index 0 -> 0.75, index 1 -> 0.5 collides -> 0.5 - 1/40.
    CHECK(t[1] == doctest::Approx(0.5 - 1.0 / 40.0));
}

TEST_CASE("property: default priorities are distinct, in range and keep declarations")
{
    std::mt19937_64 rng(7);
    for (int round = 0; round < 2000; ++round) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
        std::vector<PriorityRequest> reqs(n);
        std::set<double> used;
        for (auto& r : reqs) {
            int roll = std::uniform_int_distribution<int>(0, 9)(rng);
            if (roll < 3) {
                // Often pick pool values on purpose to force collisions.
                double v = 1.0 - static_cast<double>(std::uniform_int_distribution<std::size_t>(1, n)(rng)) /
                                     static_cast<double>(n + 1);
                if (v > 0 && v < 1 && used.insert(v).second) {
                    r.declared = v;
                }
            } else if (roll < 5) {
                double v = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
                if (used.insert(v).second) {
                    r.declared = v;
                }
            } else if (roll == 5) {
                r.safety = true;
            }
        }
        auto p = default_priorities(reqs);
        REQUIRE(p.size() == n);
        std::set<double> seen;
        for (std::size_t i = 0; i < n; ++i) {
            if (reqs[i].safety) {
                CHECK(p[i] == 1.0);
                continue;
            }
            if (reqs[i].declared) {
                CHECK(p[i] == *reqs[i].declared);
            }
            CHECK(p[i] > 0.0);
            CHECK(p[i] < 1.0);
            CHECK(seen.insert(p[i]).second);
        }
    }
}

TEST_CASE("round trip: serialize then parse is structurally equal")
{
    for (const auto* text : {testsupport::kRichConfig}) {
        auto c = parse_config(text);
        CHECK(parse_config(serialize_config(c)) == c);
    }
    auto l1 = parse_config(testsupport::fixture("example_config.json"));
    CHECK(parse_config(serialize_config(l1)) == l1);
    auto t = parse_config(testsupport::fixture("touch/config.json"));
    CHECK(parse_config(serialize_config(t)) == t);
    // Canonical form is a fixed point.
    CHECK(serialize_config(parse_config(serialize_config(l1))) == serialize_config(l1));
}

TEST_CASE("processed topic for a sensor")
{
    auto c = parse_config(testsupport::kRichConfig);
    CHECK(processed_topic_for_sensor(c, "touch") == std::optional<std::string>("touch_level_out"));
    CHECK(processed_topic_for_sensor(c, "force") == std::optional<std::string>("force"));
}

TEST_CASE("actuator neutral value clamps zero")
{
    ActuatorSpec a{"x", ActuatorKind::pwm, 1u, 0.2, 0.8};
    CHECK(a.neutral_value() == 0.2);
    ActuatorSpec b{"y", ActuatorKind::pwm, 1u, -1.0, 1.0};
    CHECK(b.neutral_value() == 0.0);
}
