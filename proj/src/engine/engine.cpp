#include "robosync/engine/engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "robosync/bus.hpp"
#include "robosync/dsl/eval.hpp"
#include "robosync/sensorproc.hpp"

namespace robosync::engine {

std::string sensor_topic(std::string_view sensor) { return "sensor/" + std::string(sensor); }
std::string processed_topic(std::string_view topic) { return "proc/" + std::string(topic); }
std::string command_topic(std::string_view actuator) { return "cmd/" + std::string(actuator); }

namespace {

using bus::Layer;
using sched::TaskCategory;

constexpr std::string_view kCommandPublisher = "behavior-layer";

Field field(std::string key, std::string value) { return {std::move(key), std::move(value)}; }
Field field(std::string key, const char* value) { return {std::move(key), std::string(value)}; }
Field field(std::string key, std::string_view value) { return {std::move(key), std::string(value)}; }
Field field(std::string key, double value) { return {std::move(key), value}; }
Field field(std::string key, std::vector<std::string> value) { return {std::move(key), std::move(value)}; }
template <class Int>
    requires std::is_integral_v<Int> && (!std::is_same_v<Int, bool>)
Field field(std::string key, Int value)
{
    return {std::move(key), static_cast<std::int64_t>(value)};
}

std::string op_name(dsl::BoundStatement::Op op)
{
    switch (op) {
    case dsl::BoundStatement::Op::move: return "MOVE";
    case dsl::BoundStatement::Op::set: return "SET";
    case dsl::BoundStatement::Op::play: return "PLAY";
    case dsl::BoundStatement::Op::wait: return "WAIT";
    }
    return "?";
}

// Which processing task feeds each processed topic, and which sensors feed it.
struct ProcessingUnit {
    std::string task;
    std::string plugin;
    ParamMap params;
    std::string output;  // processed topic name (without the "proc/" prefix)
    std::vector<std::string> inputs;
};

std::vector<ProcessingUnit> processing_units(const config::SystemConfig& config)
{
    std::vector<ProcessingUnit> units;
    std::set<std::string> consumed;
    for (const auto& a : config.algorithms) {
        units.push_back({"algorithm:" + a.name, a.plugin, a.params, a.output, a.inputs});
        consumed.insert(a.inputs.begin(), a.inputs.end());
    }
    for (const auto& s : config.sensors) {
        if (!consumed.contains(s.name)) {
            units.push_back({"passthrough:" + s.name, "passthrough", {}, s.name, {s.name}});
        }
    }
    return units;
}

} // namespace

std::vector<sched::TaskDescriptor> build_tasks(const config::SystemConfig& config, const dsl::BoundProgram& program)
{
    std::map<std::string, sched::TaskDescriptor> tasks;
    auto add = [&](std::string id, TaskCategory category) -> sched::TaskDescriptor& {
        auto& t = tasks[id];
        t.id = std::move(id);
        t.category = category;
        t.cost_us = config.scheduler.default_task_cost_us;
        return t;
    };

    std::map<std::string, double> behavior_priority;
    std::set<std::string> safety_behaviors;
    for (const auto& b : program.behaviors) {
        behavior_priority[b.name] = b.priority;
        if (b.safety) {
            safety_behaviors.insert(b.name);
        }
        add("behavior:" + b.name, TaskCategory::behavioral).behaviors.insert(b.name);
        for (const auto& st : b.body) {
            if (st.op != dsl::BoundStatement::Op::wait) {
                add("control:" + st.actuator, TaskCategory::control).behaviors.insert(b.name);
            }
        }
    }
    for (const auto& a : config.actuators) {
        add("control:" + a.name, TaskCategory::control);
    }

    // Behaviors reachable from each processed topic through the rules reading it.
    std::map<std::string, std::set<std::string>> topic_users;
    for (const auto& rule : program.program.rules) {
        for (const auto& signal : dsl::referenced_signals(rule.condition)) {
            auto it = program.signal_topics.find(signal);
            if (it == program.signal_topics.end()) {
                continue;
            }
            auto& users = topic_users[it->second];
            users.insert(rule.then_behavior);
            if (rule.else_behavior) {
                users.insert(*rule.else_behavior);
            }
        }
    }

    std::map<std::string, std::set<std::string>> sensor_users;
    for (const auto& unit : processing_units(config)) {
        auto& t = add(unit.task, TaskCategory::algorithmic);
        if (auto it = topic_users.find(unit.output); it != topic_users.end()) {
            t.behaviors.insert(it->second.begin(), it->second.end());
        }
        for (const auto& s : unit.inputs) {
            sensor_users[s].insert(t.behaviors.begin(), t.behaviors.end());
        }
    }
    for (const auto& s : config.sensors) {
        add("sensor:" + s.name, TaskCategory::sensor_input).behaviors = sensor_users[s.name];
    }

    std::set<std::string> safety_tasks;
    for (const auto& c : config.safety_checks) {
        add("safety:" + c.name, TaskCategory::safety);
        safety_tasks.insert("safety:" + c.name);
        safety_tasks.insert("sensor:" + c.sensor);
    }
    add("safety:" + std::string(kOverrideCheck), TaskCategory::safety);
    safety_tasks.insert("safety:" + std::string(kOverrideCheck));

    std::map<std::string, std::set<std::string>> usage;
    for (const auto& [id, t] : tasks) {
        if (!t.behaviors.empty()) {
            usage[id] = t.behaviors;
        }
        for (const auto& b : t.behaviors) {
            if (safety_behaviors.contains(b)) {
                safety_tasks.insert(id);
            }
        }
    }
    auto base = sched::assign_base_priorities(behavior_priority, usage, safety_tasks);

    // Tasks no behavior uses sit below every behavior priority.
    double floor = 0.5;
    if (!behavior_priority.empty()) {
        double lowest = 1.0;
        for (const auto& [_, p] : behavior_priority) {
            lowest = std::min(lowest, p);
        }
        floor = lowest / 2.0;
    }

    std::vector<sched::TaskDescriptor> out;
    for (auto& [id, t] : tasks) {
        auto it = base.find(id);
        t.base_priority = it == base.end() ? floor : it->second;
        t.current_priority = t.base_priority;
        t.safety_pinned = safety_tasks.contains(id);
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

struct ReadingJob {
    std::string sensor;
    double value = 0.0;
    std::int64_t event_seq = 0;  // log seq of the sensor_event
};

struct ProcessJob {
    std::size_t unit = 0;
    sensorproc::Reading reading;
};

struct BehaviorJob {
    std::string behavior;
    std::int64_t fired_seq = 0;
};

struct CommandJob {
    dsl::BoundStatement statement;
    std::string behavior;
    std::int64_t fired_seq = 0;
};

using Job = std::variant<ReadingJob, ProcessJob, BehaviorJob, CommandJob>;

struct Running {
    sched::ReadyEntry entry;
    std::int64_t start = 0;
    std::int64_t end = 0;
};

struct Candidate {
    std::size_t rule = 0;
    std::string behavior;
    bool then_branch = true;
    double priority = 0.0;
    std::string topic;
    std::uint64_t message_seq = 0;
};

enum class Consumer { processing, rules, control };

struct Handler {
    bus::Subscription sub;
    Consumer kind = Consumer::processing;
    std::size_t unit = 0;  // processing unit index (processing only)
    std::string task;      // task enqueued on delivery (processing/control)
};

class Simulation {
public:
    Simulation(const config::SystemConfig& config, const dsl::BoundProgram& program, const RunOptions& options)
        : config_(config), program_(program), options_(options)
    {
        for (auto& t : build_tasks(config, program)) {
            auto id = t.id;
            tasks_.emplace(std::move(id), std::move(t));
        }
        for (const auto& b : program.behaviors) {
            counters_[b.name].behavior = b.name;
        }
        wire_bus();
    }

    ExecutionLog run(const std::vector<TraceEvent>& trace)
    {
        std::vector<const TraceEvent*> events;
        for (const auto& ev : trace) {
            if (!options_.until_us || ev.t_us < *options_.until_us) {
                events.push_back(&ev);
            }
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const TraceEvent* a, const TraceEvent* b) { return a->t_us < b->t_us; });

        const std::int64_t window = config_.scheduler.window_us;
        std::int64_t next_boundary = window;
        std::size_t next_event = 0;
        std::int64_t now = 0;

        while (true) {
            std::optional<std::int64_t> t_next;
            auto consider = [&](std::int64_t t) { t_next = t_next ? std::min(*t_next, t) : t; };
            if (running_) {
                consider(running_->end);
            }
            if (!releases_.empty()) {
                consider(releases_.begin()->first.first);
            }
            if (next_event < events.size()) {
                consider(events[next_event]->t_us);
            }
            if (!t_next) {
                break;
            }
            if (!halted_) {
                while (next_boundary <= *t_next) {
                    adapt(next_boundary);
                    next_boundary += window;
                }
            }
            now = *t_next;

            if (running_ && running_->end == now) {
                finish(now);
            }
            while (!releases_.empty() && releases_.begin()->first.first == now) {
                auto job = std::move(releases_.begin()->second);
                releases_.erase(releases_.begin());
                release_command(std::move(job), now);
            }
            while (next_event < events.size() && events[next_event]->t_us == now) {
                arrive(*events[next_event], now);
                ++next_event;
            }
            arbitrate(now);
            dispatch(now);
        }

        if (!halted_) {
            std::int64_t horizon = std::max(now, options_.until_us.value_or(0));
            while (next_boundary <= horizon) {
                adapt(next_boundary);
                next_boundary += window;
            }
        }
        return std::move(log_);
    }

private:
    std::int64_t append(std::int64_t t_us, LogKind kind, std::vector<Field> detail)
    {
        auto seq = log_.size();
        log_.push_back(LogEntry{seq, t_us, kind, std::move(detail)});
        return static_cast<std::int64_t>(seq);
    }

    void wire_bus()
    {
        for (const auto& s : config_.sensors) {
            bus_.add_topic(sensor_topic(s.name), Layer::sensor, "sensor:" + s.name);
        }
        units_ = processing_units(config_);
        for (std::size_t i = 0; i < units_.size(); ++i) {
            const auto& unit = units_[i];
            plugins_.emplace_back(unit.plugin, unit.params, unit.output);
            bus_.add_topic(processed_topic(unit.output), Layer::processing, unit.task);
            for (const auto& s : unit.inputs) {
                handlers_.push_back({bus_.subscribe(sensor_topic(s), Layer::processing), Consumer::processing, i,
                                     unit.task});
            }
        }
        std::set<std::string> read_topics;
        for (const auto& [signal, topic] : program_.signal_topics) {
            read_topics.insert(topic);
            signals_by_topic_[topic].push_back(signal);
        }
        for (const auto& topic : read_topics) {
            handlers_.push_back({bus_.subscribe(processed_topic(topic), Layer::behavior), Consumer::rules, 0, {}});
        }
        for (const auto& a : config_.actuators) {
            bus_.add_topic(command_topic(a.name), Layer::behavior, std::string(kCommandPublisher));
            handlers_.push_back({bus_.subscribe(command_topic(a.name), Layer::control), Consumer::control, 0,
                                 "control:" + a.name});
        }
        for (std::size_t r = 0; r < program_.program.rules.size(); ++r) {
            rule_signals_.push_back(dsl::referenced_signals(program_.program.rules[r].condition));
        }
    }

    void enqueue(const std::string& task, Job job, std::int64_t t_us)
    {
        auto ref = next_job_++;
        jobs_.emplace(ref, std::move(job));
        queue_.push(task, ref, t_us);
    }

    // Publishes and immediately hands the message to every subscriber.
    bus::Message publish(const std::string& topic, std::string_view publisher, double value, std::int64_t t_us,
                         std::vector<Field> provenance)
    {
        auto msg = bus_.publish(topic, publisher, value, t_us);
        auto subs = bus_.subscribers(topic);
        std::vector<Field> detail{field("topic", topic), field("layer", bus::to_string(msg.producer_layer)),
                                  field("seq", msg.seq), field("value", value),
                                  field("subscribers", subs.size())};
        if (!subs.empty()) {
            detail.push_back(field("to", bus::to_string(subs.front().layer)));
        }
        for (auto& f : provenance) {
            detail.push_back(std::move(f));
        }
        append(t_us, LogKind::message, std::move(detail));

        for (auto& h : handlers_) {
            while (auto delivery = bus_.poll(h.sub)) {
                if (const auto* m = std::get_if<bus::Message>(&*delivery)) {
                    deliver(h, *m);
                }
            }
        }
        return msg;
    }

    void deliver(const Handler& h, const bus::Message& msg)
    {
        double value = std::get<double>(msg.payload);
        switch (h.kind) {
        case Consumer::processing: {
            auto sensor = msg.topic.substr(std::string_view("sensor/").size());
            enqueue(h.task, ProcessJob{h.unit, sensorproc::Reading{sensor, msg.t_us, value, msg.seq}}, msg.t_us);
            break;
        }
        case Consumer::rules:
            evaluate_rules(msg, value);
            break;
        case Consumer::control: {
            auto it = pending_commands_.find(msg.seq);
            if (it == pending_commands_.end()) {
                throw std::logic_error("command message without a pending command");
            }
            enqueue(h.task, std::move(it->second), msg.t_us);
            pending_commands_.erase(it);
            break;
        }
        }
    }

    void evaluate_rules(const bus::Message& msg, double value)
    {
        auto topic = msg.topic.substr(std::string_view("proc/").size());
        const auto& signals = signals_by_topic_[topic];
        for (const auto& s : signals) {
            snapshot_[s] = value;
        }
        for (std::size_t r = 0; r < program_.program.rules.size(); ++r) {
            const auto& rs = rule_signals_[r];
            bool reads = std::any_of(rs.begin(), rs.end(), [&](const std::string& s) {
                return std::find(signals.begin(), signals.end(), s) != signals.end();
            });
            if (!reads) {
                continue;
            }
            const auto& rule = program_.program.rules[r];
            bool holds = false;
            try {
                holds = dsl::eval_condition(rule.condition, snapshot_);
            } catch (const dsl::MissingSignal&) {
                continue;  // some signal this rule reads has not reported yet
            }
            const std::string* target = holds ? &rule.then_behavior
                                              : (rule.else_behavior ? &*rule.else_behavior : nullptr);
            if (!target) {
                continue;
            }
            const auto* b = program_.find_behavior(*target);
            candidates_.push_back({r, *target, holds, b->priority, topic, msg.seq});
        }
    }

    // Only one response per instant: the highest-priority behavior fires.
    void arbitrate(std::int64_t now)
    {
        if (candidates_.empty()) {
            return;
        }
        auto winner = std::max_element(candidates_.begin(), candidates_.end(),
                                       [](const Candidate& a, const Candidate& b) {
                                           if (a.priority != b.priority) {
                                               return a.priority < b.priority;
                                           }
                                           return a.rule > b.rule;
                                       });
        auto fired = append(now, LogKind::behavior_fired,
                            {field("behavior", winner->behavior), field("rule", winner->rule),
                             field("branch", winner->then_branch ? "then" : "else"),
                             field("priority", winner->priority), field("topic", winner->topic),
                             field("message_seq", winner->message_seq)});
        for (const auto& c : candidates_) {
            if (&c == &*winner) {
                continue;
            }
            append(now, LogKind::behavior_suppressed,
                   {field("behavior", c.behavior), field("rule", c.rule),
                    field("branch", c.then_branch ? "then" : "else"), field("priority", c.priority),
                    field("winner", winner->behavior)});
        }
        auto& counter = counters_[winner->behavior];
        counter = sched::record_trigger(std::move(counter), now);
        enqueue("behavior:" + winner->behavior, BehaviorJob{winner->behavior, fired}, now);
        candidates_.clear();
    }

    void dispatch(std::int64_t now)
    {
        if (running_ || halted_) {
            return;
        }
        auto pick = sched::select_next(queue_, tasks_);
        if (!pick) {
            return;
        }
        auto entry = *queue_.take(pick->enqueue_seq);
        const auto& task = tasks_.at(entry.task);
        running_ = Running{entry, now, now + task.cost_us};
        append(now, LogKind::task_start,
               {field("task", task.id), field("category", sched::to_string(task.category)),
                field("enqueue_seq", entry.enqueue_seq), field("enqueue_t_us", entry.enqueue_t_us),
                field("priority", task.current_priority), field("end_t_us", running_->end)});
    }

    void finish(std::int64_t now)
    {
        auto done = std::move(*running_);
        running_.reset();
        append(now, LogKind::task_finish,
               {field("task", done.entry.task), field("enqueue_seq", done.entry.enqueue_seq)});
        auto node = jobs_.extract(done.entry.payload);
        std::visit([&](auto& job) { complete(job, now); }, node.mapped());
    }

    void complete(ReadingJob& job, std::int64_t now)
    {
        const auto* spec = config_.find_sensor(job.sensor);
        auto& prev = last_sent_[job.sensor];
        if (!sensorproc::gate_significant(prev, job.value, spec->delta)) {
            return;
        }
        prev = job.value;
        publish(sensor_topic(job.sensor), "sensor:" + job.sensor, job.value, now,
                {field("sensor", job.sensor), field("event_seq", job.event_seq)});
    }

    void complete(ProcessJob& job, std::int64_t now)
    {
        const auto& unit = units_[job.unit];
        auto out = sensorproc::run_algorithm(plugins_[job.unit], job.reading);
        if (!out) {
            return;
        }
        publish(processed_topic(unit.output), unit.task, out->value, now,
                {field("plugin", unit.plugin), field("source_seq", out->source_seq)});
    }

    void complete(BehaviorJob& job, std::int64_t now)
    {
        const auto* b = program_.find_behavior(job.behavior);
        std::int64_t offset = 0;
        for (const auto& st : b->body) {
            if (st.op == dsl::BoundStatement::Op::wait) {
                offset += st.wait_us;
                continue;
            }
            CommandJob cmd{st, job.behavior, job.fired_seq};
            if (offset == 0) {
                release_command(std::move(cmd), now);
            } else {
                releases_.emplace(std::make_pair(now + offset, release_order_++), std::move(cmd));
            }
        }
    }

    void complete(CommandJob& job, std::int64_t now)
    {
        const auto& st = job.statement;
        const auto* act = config_.find_actuator(st.actuator);
        if (st.op == dsl::BoundStatement::Op::play) {
            append(now, LogKind::play_cmd,
                   {field("actuator", st.actuator), field("resource", st.resource),
                    field("behavior", job.behavior), field("fired_seq", job.fired_seq)});
            return;
        }
        double value = std::clamp(st.value, act->min_value, act->max_value);
        append(now, LogKind::actuator_cmd,
               {field("actuator", st.actuator), field("op", op_name(st.op)), field("value", value),
                field("behavior", job.behavior), field("fired_seq", job.fired_seq)});
    }

    void release_command(CommandJob job, std::int64_t now)
    {
        auto topic = command_topic(job.statement.actuator);
        auto seq = bus_.published();  // the seq publish() is about to assign
        std::vector<Field> provenance{field("behavior", job.behavior), field("op", op_name(job.statement.op)),
                                      field("fired_seq", job.fired_seq)};
        if (job.statement.op == dsl::BoundStatement::Op::play) {
            provenance.push_back(field("resource", job.statement.resource));
        }
        double value = job.statement.value;
        pending_commands_.emplace(seq, std::move(job));
        publish(topic, kCommandPublisher, value, now, std::move(provenance));
    }

    void arrive(const TraceEvent& ev, std::int64_t now)
    {
        if (halted_) {
            if (const auto* r = std::get_if<SensorReading>(&ev.event)) {
                append(now, LogKind::trace_dropped,
                       {field("reason", "halted"), field("sensor", r->sensor), field("value", r->value),
                        field("line", ev.line)});
            } else {
                append(now, LogKind::trace_dropped,
                       {field("reason", "halted"), field("override", std::get<Override>(ev.event).command),
                        field("line", ev.line)});
            }
            return;
        }

        if (const auto* o = std::get_if<Override>(&ev.event)) {
            if (o->command != "STOP") {
                append(now, LogKind::trace_dropped,
                       {field("reason", "unknown override"), field("override", o->command), field("line", ev.line)});
                return;
            }
            append(now, LogKind::sensor_event, {field("override", o->command), field("line", ev.line)});
            halt(bus::SafetyAlert{std::string(kOverrideCheck), now, 0.0, bus::SafetyDecision::alert_and_halt},
                 {field("check", kOverrideCheck), field("command", o->command)}, now);
            return;
        }

        const auto& r = std::get<SensorReading>(ev.event);
        auto event_seq = append(now, LogKind::sensor_event,
                                {field("sensor", r.sensor), field("value", r.value), field("line", ev.line)});
        // Safety checks read raw values before gating.
        for (const auto& check : config_.safety_checks) {
            if (check.sensor != r.sensor) {
                continue;
            }
            auto alert = bus::evaluate_safety(r.value, check, now);
            if (alert.decision == bus::SafetyDecision::alert_and_halt) {
                halt(alert,
                     {field("check", check.name), field("sensor", r.sensor), field("reading", r.value),
                      field("threshold", check.threshold)},
                     now);
                return;
            }
        }
        enqueue("sensor:" + r.sensor, ReadingJob{r.sensor, r.value, event_seq}, now);
    }

    void halt(const bus::SafetyAlert& alert, std::vector<Field> detail, std::int64_t now)
    {
        if (running_) {
            append(now, LogKind::task_abort,
                   {field("task", running_->entry.task), field("enqueue_seq", running_->entry.enqueue_seq),
                    field("reason", "safety_halt")});
            jobs_.erase(running_->entry.payload);
            running_.reset();
        }
        bus_.broadcast_alert(alert);
        for (auto& h : handlers_) {
            while (bus_.poll(h.sub)) {
            }
        }
        bus_.clear_queues();

        auto purged = queue_.size() + releases_.size();
        queue_.clear();
        releases_.clear();
        jobs_.clear();
        pending_commands_.clear();
        candidates_.clear();

        std::vector<std::string> neutralized;
        for (const auto& a : config_.actuators) {
            neutralized.push_back(a.name);
        }
        detail.push_back(field("purged", purged));
        detail.push_back(field("neutralized", std::move(neutralized)));
        append(now, LogKind::safety_halt, std::move(detail));
        halted_ = true;
    }

    void adapt(std::int64_t t_us)
    {
        std::vector<sched::TaskDescriptor> tasks;
        for (const auto& [_, t] : tasks_) {
            tasks.push_back(t);
        }
        auto result = sched::adapt_priorities(std::move(tasks), counters_, config_.scheduler, t_us);
        for (const auto& u : result.updates) {
            append(t_us, LogKind::priority_update,
                   {field("task", u.task), field("base", u.base), field("previous", u.previous),
                    field("current", u.current), field("frequency", u.frequency), field("behavior", u.behavior)});
        }
        for (auto& t : result.tasks) {
            tasks_[t.id] = std::move(t);
        }
    }

    const config::SystemConfig& config_;
    const dsl::BoundProgram& program_;
    RunOptions options_;

    std::map<std::string, sched::TaskDescriptor> tasks_;
    std::map<std::string, sched::FrequencyCounter> counters_;
    sched::ReadyQueue queue_;
    std::optional<Running> running_;

    bus::Bus bus_;
    std::vector<ProcessingUnit> units_;
    std::vector<sensorproc::PluginInstance> plugins_;
    std::vector<Handler> handlers_;
    std::map<std::string, std::vector<std::string>> signals_by_topic_;
    std::vector<std::vector<std::string>> rule_signals_;

    std::map<std::uint64_t, Job> jobs_;
    std::uint64_t next_job_ = 0;
    std::map<std::uint64_t, CommandJob> pending_commands_;  // keyed by bus seq
    std::map<std::pair<std::int64_t, std::uint64_t>, CommandJob> releases_;
    std::uint64_t release_order_ = 0;

    std::map<std::string, std::optional<double>> last_sent_;
    dsl::Snapshot snapshot_;
    std::vector<Candidate> candidates_;
    bool halted_ = false;

    ExecutionLog log_;
};

} // namespace

ExecutionLog run(const config::SystemConfig& config,
                 const dsl::BoundProgram& program,
                 const std::vector<TraceEvent>& trace,
                 const RunOptions& options)
{
    return Simulation(config, program, options).run(trace);
}

} // namespace robosync::engine
