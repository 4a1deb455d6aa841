#include "robosync/sensorproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace robosync::sensorproc {

bool gate_significant(std::optional<double> prev, double curr, double delta)
{
    if (!prev) {
        return true;
    }
    if (delta > 0.0) {
        return std::fabs(curr - *prev) >= delta;
    }
    return curr != *prev;
}

int touch_level(double raw, std::span<const double> thresholds)
{
    // thresholds ascend, so the count of entries <= raw is an upper_bound.
    auto it = std::upper_bound(thresholds.begin(), thresholds.end(), raw);
    return static_cast<int>(it - thresholds.begin());
}

double jerk_level(std::span<const Reading> history)
{
    if (history.size() < 3) {
        return 0.0;
    }
    const auto& r0 = history[history.size() - 3];
    const auto& r1 = history[history.size() - 2];
    const auto& r2 = history[history.size() - 1];
    const double dt1 = static_cast<double>(r1.t_us - r0.t_us) / 1e6;
    const double dt2 = static_cast<double>(r2.t_us - r1.t_us) / 1e6;
    const double slope1 = (r1.value - r0.value) / dt1;
    const double slope2 = (r2.value - r1.value) / dt2;
    return std::fabs(slope2 - slope1);
}

UnknownPlugin::UnknownPlugin(const std::string& name) : Error("unknown plugin '" + name + "'") {}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<double> parse_number_list(std::string_view text)
{
    std::vector<double> out;
    while (true) {
        auto comma = text.find(',');
        auto item = trim(text.substr(0, comma));
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw PluginParamError("bad number '" + std::string(item) + "' in list");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

const double* number_param(const ParamMap& params, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end()) {
        return nullptr;
    }
    const auto* d = std::get_if<double>(&it->second);
    if (!d) {
        throw PluginParamError("parameter '" + key + "' must be a number");
    }
    return d;
}

const std::string* string_param(const ParamMap& params, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end()) {
        return nullptr;
    }
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s) {
        throw PluginParamError("parameter '" + key + "' must be a string");
    }
    return s;
}

void allow_only(const ParamMap& params, std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, _] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw PluginParamError("unknown parameter '" + key + "'");
        }
    }
}

class Passthrough final : public Plugin {
public:
    explicit Passthrough(const ParamMap& params) { allow_only(params, {}); }
    std::optional<double> process(const Reading& input) override { return input.value; }
    std::unique_ptr<Plugin> clone() const override { return std::make_unique<Passthrough>(*this); }
};

class TouchLevel final : public Plugin {
public:
    explicit TouchLevel(const ParamMap& params)
    {
        allow_only(params, {"thresholds"});
        const auto* list = string_param(params, "thresholds");
        if (!list) {
            throw PluginParamError("missing parameter 'thresholds'");
        }
        thresholds_ = parse_threshold_list(*list);
    }
    std::optional<double> process(const Reading& input) override
    {
        return static_cast<double>(touch_level(input.value, thresholds_));
    }
    std::unique_ptr<Plugin> clone() const override { return std::make_unique<TouchLevel>(*this); }

private:
    std::vector<double> thresholds_;
};

class JerkLevel final : public Plugin {
public:
    explicit JerkLevel(const ParamMap& params) { allow_only(params, {}); }
    std::optional<double> process(const Reading& input) override
    {
        auto& history = history_[input.sensor];
        if (!history.empty() && input.t_us <= history.back().t_us) {
            return std::nullopt;
        }
        history.push_back(input);
        if (history.size() > 3) {
            history.erase(history.begin());
        }
        if (history.size() < 3) {
            return std::nullopt;
        }
        return jerk_level(history);
    }
    std::unique_ptr<Plugin> clone() const override { return std::make_unique<JerkLevel>(*this); }

private:
    std::map<std::string, std::vector<Reading>> history_;
};

class MovingAverage final : public Plugin {
public:
    explicit MovingAverage(const ParamMap& params)
    {
        allow_only(params, {"k"});
        if (const auto* k = number_param(params, "k")) {
            if (*k < 1.0 || *k != std::floor(*k) || *k > 1e6) {
                throw PluginParamError("parameter 'k' must be a positive integer");
            }
            k_ = static_cast<std::size_t>(*k);
        }
    }
    std::optional<double> process(const Reading& input) override
    {
        window_.push_back(input.value);
        if (window_.size() > k_) {
            window_.pop_front();
        }
        if (window_.size() < k_) {
            return std::nullopt;
        }
        double sum = 0.0;
        for (double v : window_) {
            sum += v;
        }
        return sum / static_cast<double>(k_);
    }
    std::unique_ptr<Plugin> clone() const override { return std::make_unique<MovingAverage>(*this); }

private:
    std::size_t k_ = 3;
    std::deque<double> window_;
};

class ThresholdClassifier final : public Plugin {
public:
    explicit ThresholdClassifier(const ParamMap& params)
    {
        allow_only(params, {"threshold", "above", "below"});
        const auto* threshold = number_param(params, "threshold");
        if (!threshold) {
            throw PluginParamError("missing parameter 'threshold'");
        }
        threshold_ = *threshold;
        if (const auto* above = number_param(params, "above")) {
            above_ = *above;
        }
        if (const auto* below = number_param(params, "below")) {
            below_ = *below;
        }
    }
    std::optional<double> process(const Reading& input) override
    {
        return input.value > threshold_ ? above_ : below_;
    }
    std::unique_ptr<Plugin> clone() const override
    {
        return std::make_unique<ThresholdClassifier>(*this);
    }

private:
    double threshold_ = 0.0;
    double above_ = 1.0;
    double below_ = 0.0;
};

// Stand-in for recognition models: replays a scripted output list, one entry
// per input, cycling. Without a script it never reports anything.
class Stub final : public Plugin {
public:
    explicit Stub(const ParamMap& params)
    {
        allow_only(params, {"script"});
        if (const auto* script = string_param(params, "script")) {
            script_ = parse_number_list(*script);
        }
    }
    std::optional<double> process(const Reading&) override
    {
        if (script_.empty()) {
            return std::nullopt;
        }
        double v = script_[next_ % script_.size()];
        ++next_;
        return v;
    }
    std::unique_ptr<Plugin> clone() const override { return std::make_unique<Stub>(*this); }

private:
    std::vector<double> script_;
    std::size_t next_ = 0;
};

std::unique_ptr<Plugin> make_plugin(std::string_view name, const ParamMap& params)
{
    if (name == "passthrough") {
        return std::make_unique<Passthrough>(params);
    }
    if (name == "touch_level") {
        return std::make_unique<TouchLevel>(params);
    }
    if (name == "jerk_level") {
        return std::make_unique<JerkLevel>(params);
    }
    if (name == "moving_average") {
        return std::make_unique<MovingAverage>(params);
    }
    if (name == "threshold_classifier") {
        return std::make_unique<ThresholdClassifier>(params);
    }
    if (name == "stub") {
        return std::make_unique<Stub>(params);
    }
    throw UnknownPlugin(std::string(name));
}

} // namespace

std::vector<double> parse_threshold_list(std::string_view text)
{
    auto values = parse_number_list(text);
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i - 1] < values[i])) {
            throw PluginParamError("thresholds must be strictly ascending");
        }
    }
    return values;
}

const std::vector<std::string>& registered_plugins()
{
    static const std::vector<std::string> names = {
        "jerk_level", "moving_average", "passthrough", "stub", "threshold_classifier", "touch_level",
    };
    return names;
}

bool is_registered(std::string_view name)
{
    const auto& names = registered_plugins();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<std::string> check_params(std::string_view name, const ParamMap& params)
{
    try {
        make_plugin(name, params);
    } catch (const PluginParamError& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

PluginInstance::PluginInstance(std::string name, ParamMap params, std::string output_topic)
    : name_(std::move(name)),
      params_(std::move(params)),
      output_topic_(std::move(output_topic)),
      impl_(make_plugin(name_, params_))
{
}

PluginInstance::PluginInstance(const PluginInstance& other)
    : name_(other.name_),
      params_(other.params_),
      output_topic_(other.output_topic_),
      impl_(other.impl_->clone())
{
}

PluginInstance& PluginInstance::operator=(const PluginInstance& other)
{
    if (this != &other) {
        PluginInstance copy(other);
        *this = std::move(copy);
    }
    return *this;
}

std::optional<ProcessedValue> PluginInstance::run(const Reading& input)
{
    auto out = impl_->process(input);
    if (!out) {
        return std::nullopt;
    }
    return ProcessedValue{output_topic_, input.t_us, *out, input.seq};
}

} // namespace robosync::sensorproc
