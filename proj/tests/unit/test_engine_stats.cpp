#include <doctest.h>

#include <json.hpp>

#include "robosync/engine/stats.hpp"
#include "support/scenario.hpp"

using namespace robosync::engine;

namespace {

// Recount straight from the serialized text with a generic JSON reader.
struct Recount {
    std::map<std::string, std::uint64_t> per_layer{{"sensor", 0}, {"processing", 0}, {"behavior", 0}, {"control", 0}};
    std::uint64_t starts = 0, aborts = 0, fired = 0, suppressed = 0, commands = 0, plays = 0;
    std::int64_t max_latency = 0;
};

Recount recount(const std::string& text)
{
    Recount r;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        std::string kind = j["kind"];
        const auto& d = j["detail"];
        if (kind == "message") {
            ++r.per_layer[d["layer"].get<std::string>()];
        } else if (kind == "task_start") {
            ++r.starts;
            r.max_latency = std::max(r.max_latency, j["t_us"].get<std::int64_t>() - d["enqueue_t_us"].get<std::int64_t>());
        } else if (kind == "task_abort") {
            ++r.aborts;
        } else if (kind == "behavior_fired") {
            ++r.fired;
        } else if (kind == "behavior_suppressed") {
            ++r.suppressed;
        } else if (kind == "actuator_cmd") {
            ++r.commands;
        } else if (kind == "play_cmd") {
            ++r.plays;
        }
    }
    return r;
}

void check_against_recount(const ExecutionLog& log)
{
    auto s = compute_stats(log);
    auto r = recount(serialize_log(log));
    CHECK(s.messages_per_layer == r.per_layer);
    CHECK(s.dispatches == r.starts);
    CHECK(s.aborts == r.aborts);
    CHECK(s.behaviors_fired == r.fired);
    CHECK(s.behaviors_suppressed == r.suppressed);
    CHECK(s.actuator_commands == r.commands);
    CHECK(s.play_commands == r.plays);
    CHECK(s.latency.max_us == r.max_latency);
    CHECK(s.latency.count == r.starts);
}

} // namespace

TEST_CASE("empty log gives all-zero stats")
{
    auto s = compute_stats({});
    CHECK(s.messages == 0);
    CHECK(s.dispatches == 0);
    CHECK_FALSE(s.halted);
    CHECK(s.latency.count == 0);
    CHECK(stats_to_json(s) ==
          R"({"messages":0,"messages_per_layer":{"behavior":0,"control":0,"processing":0,"sensor":0},"dispatches":0,"completions":0,"aborts":0,"latency":{"count":0,"min_us":0,"mean_us":0.000000,"max_us":0},"latency_per_task":{},"behaviors_fired":0,"behaviors_suppressed":0,"actuator_commands":0,"play_commands":0,"priority_updates":0,"dropped":0,"halted":false,"halt_t_us":null,"end_t_us":0})");
}

TEST_CASE("single dispatch with zero wait")
{
    ExecutionLog log{
        {0, 100, LogKind::task_start,
         {{"task", std::string("a")}, {"enqueue_seq", std::int64_t{0}}, {"enqueue_t_us", std::int64_t{100}}}},
        {1, 200, LogKind::task_finish, {{"task", std::string("a")}, {"enqueue_seq", std::int64_t{0}}}},
    };
    auto s = compute_stats(log);
    CHECK(s.dispatches == 1);
    CHECK(s.completions == 1);
    CHECK(s.latency.min_us == 0);
    CHECK(s.latency.mean_us == 0.0);
    CHECK(s.latency.max_us == 0);
}

TEST_CASE("latency summary arithmetic")
{
    LatencySummary l;
    for (std::int64_t v : {5, 1, 9}) {
        l.add(v);
    }
    CHECK(l.count == 3);
    CHECK(l.min_us == 1);
    CHECK(l.max_us == 9);
    CHECK(l.mean_us == doctest::Approx(5.0));
}

TEST_CASE("unmatched starts and finishes are malformed")
{
    ExecutionLog orphan{{0, 0, LogKind::task_finish, {{"task", std::string("a")}}}};
    CHECK_THROWS_AS(compute_stats(orphan), MalformedLog);
    ExecutionLog overlap{
        {0, 0, LogKind::task_start, {{"task", std::string("a")}, {"enqueue_t_us", std::int64_t{0}}}},
        {1, 1, LogKind::task_start, {{"task", std::string("b")}, {"enqueue_t_us", std::int64_t{0}}}},
    };
    CHECK_THROWS_AS(compute_stats(overlap), MalformedLog);
}

TEST_CASE("touch scenario stats match a recount and the golden file")
{
    auto log = testsupport::touch_fixture().run();
    check_against_recount(log);
    auto s = compute_stats(log);
    CHECK(s.messages_per_layer.at("sensor") == 2);
    CHECK(s.messages_per_layer.at("processing") == 2);
    CHECK(s.messages_per_layer.at("behavior") == 4);
    CHECK(s.behaviors_fired == 2);
    CHECK(stats_to_json(s) + "\n" == testsupport::fixture("touch/expected_stats.json"));
}

TEST_CASE("random runs match a recount; halts are reported")
{
    std::mt19937_64 rng(55);
    for (int i = 0; i < 30; ++i) {
        testsupport::TraceOptions opt;
        opt.inject_hazard = i % 3 == 0;
        auto log = testsupport::rich_scenario(rng, opt).run();
        check_against_recount(log);
        auto s = compute_stats(log);
        CHECK(s.halted == opt.inject_hazard);
        CHECK(s.halt_t_us.has_value() == opt.inject_hazard);
    }
}
