#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robosync/config.hpp"
#include "robosync/errors.hpp"

namespace robosync::bus {

// Messages flow one hop at a time: Sensor -> Processing -> Behavior -> Control.
enum class Layer { sensor = 0, processing = 1, behavior = 2, control = 3 };

std::string_view to_string(Layer layer);
std::optional<Layer> layer_from_string(std::string_view name);

struct Topic {
    std::string name;
    Layer producer_layer = Layer::sensor;
    std::string producer;  // registered publisher identity
};

using LabeledValues = std::map<std::string, double>;
using Payload = std::variant<double, LabeledValues>;

struct Message {
    std::string topic;
    Layer producer_layer = Layer::sensor;
    std::int64_t t_us = 0;
    std::uint64_t seq = 0;
    Payload payload;

    bool operator==(const Message&) const = default;
};

enum class SafetyDecision { proceed, alert_and_halt };

struct SafetyAlert {
    std::string check;
    std::int64_t t_us = 0;
    double reading = 0.0;
    SafetyDecision decision = SafetyDecision::proceed;

    bool operator==(const SafetyAlert&) const = default;
};

/// AlertAndHalt iff reading > threshold (strictly).
SafetyAlert evaluate_safety(double reading, const config::SafetyCheckSpec& check, std::int64_t t_us);

using Delivery = std::variant<Message, SafetyAlert>;

class LayeringError : public Error {
public:
    LayeringError(Layer producer, Layer subscriber);
    Layer producer() const { return producer_; }
    Layer subscriber() const { return subscriber_; }

private:
    Layer producer_;
    Layer subscriber_;
};

class UnknownTopic : public Error {
public:
    explicit UnknownTopic(const std::string& topic);
};

class ForeignPublisher : public Error {
public:
    ForeignPublisher(const std::string& topic, const std::string& publisher);
};

struct Subscription {
    std::size_t id = 0;
    std::string topic;
    Layer layer = Layer::processing;
};

/// In-process layered publish/subscribe fabric. Each subscription owns a
/// FIFO queue; safety alerts jump every queue.
class Bus {
public:
    Bus() = default;
    Bus(const Bus&) = delete;
    Bus& operator=(const Bus&) = delete;

    const Topic& add_topic(std::string name, Layer producer_layer, std::string producer);
    const Topic* find_topic(std::string_view name) const;

    /// Only the layer directly after the topic's producer may subscribe.
    Subscription subscribe(std::string_view topic, Layer subscriber_layer);

    /// Appends to every subscriber queue of `topic`, in subscription order.
    Message publish(std::string_view topic, std::string_view publisher, Payload payload, std::int64_t t_us);

    /// Puts the alert at the head of every queue, ahead of ordinary messages.
    void broadcast_alert(const SafetyAlert& alert);

    std::optional<Delivery> poll(const Subscription& sub);
    std::size_t pending(const Subscription& sub) const;
    void clear_queues();

    /// Subscriptions of `topic` in subscription order.
    std::vector<Subscription> subscribers(std::string_view topic) const;
    std::size_t subscription_count() const { return subscriptions_.size(); }
    std::uint64_t published() const { return next_seq_.load(); }

private:
    struct Slot {
        Subscription sub;
        std::deque<Delivery> queue;
    };

    std::map<std::string, Topic, std::less<>> topics_;
    std::vector<Slot> subscriptions_;
    std::atomic<std::uint64_t> next_seq_{0};
    std::int64_t last_t_us_ = 0;
};

} // namespace robosync::bus
