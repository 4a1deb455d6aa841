#include <doctest.h>

#include <algorithm>
#include <set>

#include <cmath>
#include <limits>
#include <random>

#include "robosync/bus.hpp"

using namespace robosync::bus;

namespace {

double value_of(const Delivery& d) { return std::get<double>(std::get<Message>(d).payload); }

} // namespace

TEST_CASE("subscribe: only the next layer may listen")
{
    Bus bus;
    bus.add_topic("sensor/t", Layer::sensor, "s");
    bus.add_topic("proc/t", Layer::processing, "p");
    bus.add_topic("cmd/a", Layer::behavior, "b");
    bus.add_topic("out", Layer::control, "c");
    CHECK_NOTHROW(bus.subscribe("sensor/t", Layer::processing));
    CHECK_NOTHROW(bus.subscribe("proc/t", Layer::behavior));
    CHECK_NOTHROW(bus.subscribe("cmd/a", Layer::control));
    CHECK_THROWS_AS(bus.subscribe("sensor/t", Layer::control), LayeringError);
    CHECK_THROWS_AS(bus.subscribe("sensor/t", Layer::sensor), LayeringError);
    CHECK_THROWS_AS(bus.subscribe("out", Layer::behavior), LayeringError);
    CHECK_THROWS_AS(bus.subscribe("proc/t", Layer::sensor), LayeringError);
    CHECK_THROWS_AS(bus.subscribe("missing", Layer::processing), UnknownTopic);
    try {
        bus.subscribe("sensor/t", Layer::control);
    } catch (const LayeringError& e) {
        CHECK(e.producer() == Layer::sensor);
        CHECK(e.subscriber() == Layer::control);
    }
}

TEST_CASE("exhaustive layer pairs")
{
    const Layer all[] = {Layer::sensor, Layer::processing, Layer::behavior, Layer::control};
    for (auto p : all) {
        for (auto s : all) {
            Bus bus;
            bus.add_topic("t", p, "x");
            bool adjacent = static_cast<int>(s) == static_cast<int>(p) + 1;
            if (adjacent) {
                CHECK_NOTHROW(bus.subscribe("t", s));
            } else {
                CHECK_THROWS_AS(bus.subscribe("t", s), LayeringError);
            }
        }
    }
}

TEST_CASE("publish: producers, fan-out and sequence numbers")
{
    Bus bus;
    bus.add_topic("sensor/t", Layer::sensor, "s");
    CHECK_THROWS_AS(bus.add_topic("sensor/t", Layer::sensor, "s"), std::logic_error);
    auto lonely = bus.publish("sensor/t", "s", 1.0, 0);
    CHECK(lonely.seq == 0);

    auto a = bus.subscribe("sensor/t", Layer::processing);
    auto b = bus.subscribe("sensor/t", Layer::processing);
    auto m = bus.publish("sensor/t", "s", 2.0, 5);
    CHECK(m.seq == 1);
    auto da = bus.poll(a), db = bus.poll(b);
    REQUIRE(da);
    REQUIRE(db);
    CHECK(std::get<Message>(*da) == std::get<Message>(*db));
    CHECK(value_of(*da) == 2.0);
    CHECK_FALSE(bus.poll(a));

    CHECK_THROWS_AS(bus.publish("sensor/t", "intruder", 1.0, 6), ForeignPublisher);
    CHECK_THROWS_AS(bus.publish("nowhere", "s", 1.0, 6), UnknownTopic);
    CHECK_THROWS_AS(bus.publish("sensor/t", "s", 1.0, 4), std::logic_error);
    CHECK(bus.published() == 2);
}

TEST_CASE("labeled payloads travel intact")
{
    Bus bus;
    bus.add_topic("proc/face", Layer::processing, "p");
    auto sub = bus.subscribe("proc/face", Layer::behavior);
    bus.publish("proc/face", "p", LabeledValues{{"smile", 0.8}, {"frown", 0.1}}, 0);
    auto d = bus.poll(sub);
    CHECK(std::get<LabeledValues>(std::get<Message>(*d).payload).at("smile") == 0.8);
}

TEST_CASE("oracle: interleaved publishes match a single global queue")
{
    std::mt19937_64 rng(17);
    for (int round = 0; round < 100; ++round) {
        Bus bus;
        const int topics = 4;
        for (int i = 0; i < topics; ++i) {
            bus.add_topic("t" + std::to_string(i), Layer::sensor, "s");
        }
        // Each subscriber listens to a random subset of topics.
        std::vector<std::vector<Subscription>> subscribers(3);
        std::vector<std::set<std::string>> interest(3);
        for (std::size_t s = 0; s < subscribers.size(); ++s) {
            for (int i = 0; i < topics; ++i) {
                if (std::bernoulli_distribution(0.5)(rng)) {
                    auto name = "t" + std::to_string(i);
                    subscribers[s].push_back(bus.subscribe(name, Layer::processing));
                    interest[s].insert(name);
                }
            }
        }
        // Reference: one global ordered list of (topic, seq, value).
        std::vector<Message> global;
        std::int64_t t = 0;
        for (int k = 0; k < 60; ++k) {
            auto name = "t" + std::to_string(std::uniform_int_distribution<int>(0, topics - 1)(rng));
            t += std::uniform_int_distribution<int>(0, 3)(rng);
            global.push_back(bus.publish(name, "s", static_cast<double>(k), t));
        }
        for (std::uint64_t i = 0; i < global.size(); ++i) {
            CHECK(global[i].seq == i);
        }
        for (std::size_t s = 0; s < subscribers.size(); ++s) {
            std::vector<Message> want;
            for (const auto& m : global) {
                if (interest[s].count(m.topic)) {
                    want.push_back(m);
                }
            }
            // Drain each handle, then merge by seq: must equal the restriction of the global order.
            std::vector<Message> got;
            for (const auto& sub : subscribers[s]) {
                std::uint64_t last = 0;
                bool first = true;
                while (auto d = bus.poll(sub)) {
                    auto m = std::get<Message>(*d);
                    CHECK((first || m.seq > last));
                    first = false;
                    last = m.seq;
                    got.push_back(m);
                }
            }
            std::sort(got.begin(), got.end(), [](const Message& a, const Message& b) { return a.seq < b.seq; });
            CHECK(got == want);
        }
    }
}

TEST_CASE("safety alerts jump every queue")
{
    Bus bus;
    bus.add_topic("sensor/t", Layer::sensor, "s");
    bus.add_topic("proc/t", Layer::processing, "p");
    auto a = bus.subscribe("sensor/t", Layer::processing);
    auto b = bus.subscribe("proc/t", Layer::behavior);
    bus.publish("sensor/t", "s", 1.0, 0);
    bus.publish("sensor/t", "s", 2.0, 0);
    bus.publish("proc/t", "p", 3.0, 0);
    SafetyAlert alert{"limit", 1, 12.0, SafetyDecision::alert_and_halt};
    bus.broadcast_alert(alert);
    for (const auto& sub : {a, b}) {
        auto d = bus.poll(sub);
        REQUIRE(d);
        CHECK(std::get<SafetyAlert>(*d) == alert);
    }
    CHECK(bus.pending(a) == 2);
    bus.clear_queues();
    CHECK(bus.pending(a) == 0);
    CHECK(bus.pending(b) == 0);
}

TEST_CASE("evaluate_safety: strict threshold")
{
    robosync::config::SafetyCheckSpec check{"limit", "force", 10.0};
    CHECK(evaluate_safety(12.0, check, 0).decision == SafetyDecision::alert_and_halt);
    CHECK(evaluate_safety(10.0, check, 0).decision == SafetyDecision::proceed);
    CHECK(evaluate_safety(3.0, check, 0).decision == SafetyDecision::proceed);
    auto alert = evaluate_safety(12.0, check, 77);
    CHECK(alert.check == "limit");
    CHECK(alert.t_us == 77);
    CHECK(alert.reading == 12.0);
}

TEST_CASE("property: evaluate_safety equals the direct predicate, extremes included")
{
    std::mt19937_64 rng(8);
    const double big = std::numeric_limits<double>::max();
    std::vector<double> specials{big, -big, std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity(), std::nextafter(10.0, 11.0),
                                 std::nextafter(10.0, 9.0), 0.0, -0.0, std::numeric_limits<double>::denorm_min()};
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        double th = i % 3 == 0 ? 10.0 : u(rng);
        double r = i < static_cast<int>(specials.size()) ? specials[static_cast<std::size_t>(i)] : u(rng);
        robosync::config::SafetyCheckSpec check{"c", "s", th};
        bool want = r > th;
        CHECK((evaluate_safety(r, check, 0).decision == SafetyDecision::alert_and_halt) == want);
    }
}

TEST_CASE("layer names")
{
    for (auto l : {Layer::sensor, Layer::processing, Layer::behavior, Layer::control}) {
        CHECK(layer_from_string(to_string(l)) == l);
    }
    CHECK_FALSE(layer_from_string("actuator"));
}
