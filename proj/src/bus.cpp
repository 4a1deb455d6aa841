#include "robosync/bus.hpp"

#include <stdexcept>

namespace robosync::bus {

std::string_view to_string(Layer layer)
{
    switch (layer) {
    case Layer::sensor: return "sensor";
    case Layer::processing: return "processing";
    case Layer::behavior: return "behavior";
    case Layer::control: return "control";
    }
    return "?";
}

std::optional<Layer> layer_from_string(std::string_view name)
{
    for (auto layer : {Layer::sensor, Layer::processing, Layer::behavior, Layer::control}) {
        if (to_string(layer) == name) {
            return layer;
        }
    }
    return std::nullopt;
}

SafetyAlert evaluate_safety(double reading, const config::SafetyCheckSpec& check, std::int64_t t_us)
{
    return SafetyAlert{check.name, t_us, reading,
                       reading > check.threshold ? SafetyDecision::alert_and_halt : SafetyDecision::proceed};
}

LayeringError::LayeringError(Layer producer, Layer subscriber)
    : Error("layering violation: " + std::string(to_string(subscriber)) + " layer may not subscribe to a " +
            std::string(to_string(producer)) + " topic"),
      producer_(producer),
      subscriber_(subscriber)
{
}

UnknownTopic::UnknownTopic(const std::string& topic) : Error("unknown topic '" + topic + "'") {}

ForeignPublisher::ForeignPublisher(const std::string& topic, const std::string& publisher)
    : Error("'" + publisher + "' is not the producer of topic '" + topic + "'")
{
}

const Topic& Bus::add_topic(std::string name, Layer producer_layer, std::string producer)
{
    auto [it, inserted] = topics_.emplace(name, Topic{name, producer_layer, std::move(producer)});
    if (!inserted) {
        throw std::logic_error("duplicate topic '" + name + "'");
    }
    return it->second;
}

const Topic* Bus::find_topic(std::string_view name) const
{
    auto it = topics_.find(name);
    return it == topics_.end() ? nullptr : &it->second;
}

Subscription Bus::subscribe(std::string_view topic, Layer subscriber_layer)
{
    const auto* t = find_topic(topic);
    if (!t) {
        throw UnknownTopic(std::string(topic));
    }
    if (static_cast<int>(subscriber_layer) != static_cast<int>(t->producer_layer) + 1) {
        throw LayeringError(t->producer_layer, subscriber_layer);
    }
    Subscription sub{subscriptions_.size(), t->name, subscriber_layer};
    subscriptions_.push_back({sub, {}});
    return sub;
}

Message Bus::publish(std::string_view topic, std::string_view publisher, Payload payload, std::int64_t t_us)
{
    const auto* t = find_topic(topic);
    if (!t) {
        throw UnknownTopic(std::string(topic));
    }
    if (t->producer != publisher) {
        throw ForeignPublisher(t->name, std::string(publisher));
    }
    if (t_us < last_t_us_) {
        throw std::logic_error("publish: time went backwards on the bus");
    }
    last_t_us_ = t_us;
    Message msg{t->name, t->producer_layer, t_us, next_seq_.fetch_add(1), std::move(payload)};
    for (auto& slot : subscriptions_) {
        if (slot.sub.topic == msg.topic) {
            slot.queue.push_back(msg);
        }
    }
    return msg;
}

void Bus::broadcast_alert(const SafetyAlert& alert)
{
    for (auto& slot : subscriptions_) {
        slot.queue.push_front(alert);
    }
}

std::optional<Delivery> Bus::poll(const Subscription& sub)
{
    if (sub.id >= subscriptions_.size()) {
        throw std::out_of_range("poll: unknown subscription");
    }
    auto& q = subscriptions_[sub.id].queue;
    if (q.empty()) {
        return std::nullopt;
    }
    Delivery d = std::move(q.front());
    q.pop_front();
    return d;
}

std::size_t Bus::pending(const Subscription& sub) const
{
    return subscriptions_.at(sub.id).queue.size();
}

void Bus::clear_queues()
{
    for (auto& slot : subscriptions_) {
        slot.queue.clear();
    }
}

std::vector<Subscription> Bus::subscribers(std::string_view topic) const
{
    std::vector<Subscription> out;
    for (const auto& slot : subscriptions_) {
        if (slot.sub.topic == topic) {
            out.push_back(slot.sub);
        }
    }
    return out;
}

} // namespace robosync::bus
