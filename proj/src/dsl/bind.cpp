#include "robosync/dsl/bind.hpp"

#include <algorithm>

namespace robosync::dsl {

std::string BindIssue::to_string() const
{
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + name + ": " + message;
}

namespace {

std::string join_issues(const std::vector<BindIssue>& issues)
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

void comparisons(const Condition& cond, std::vector<const Comparison*>& out)
{
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                out.push_back(&node);
            } else if constexpr (std::is_same_v<T, Not>) {
                comparisons(*node.inner, out);
            } else {
                comparisons(*node.left, out);
                comparisons(*node.right, out);
            }
        },
        cond.node);
}

class Binder {
public:
    Binder(const BehaviorProgram& program, const config::SystemConfig& config)
        : program_(program), config_(config)
    {
        for (const auto& a : config.actuators) {
            if (a.kind == config::ActuatorKind::audio) {
                audio_.push_back(a.name);
            }
        }
    }

    BoundProgram run()
    {
        BoundProgram out;
        out.program = program_;

        for (const auto& rule : program_.rules) {
            std::vector<const Comparison*> leaves;
            comparisons(rule.condition, leaves);
            for (const auto* c : leaves) {
                if (auto topic = resolve_signal(*c)) {
                    out.signal_topics.emplace(c->signal, *topic);
                }
            }
            check_target(rule.then_behavior, rule.then_span);
            if (rule.else_behavior) {
                check_target(*rule.else_behavior, rule.else_span);
            }
        }

        std::vector<config::PriorityRequest> requests;
        for (const auto& b : config_.behaviors) {
            BoundBehavior bound;
            bound.name = b.name;
            bound.safety = b.safety;
            if (const auto* def = program_.find_definition(b.name)) {
                bound.defined_in_program = true;
                bound.body = bind_body(*def);
            } else if (b.action) {
                if (const auto* act = config_.find_actuator(*b.action)) {
                    bound.body.push_back({BoundStatement::Op::set, act->name, act->max_value, {}, 0});
                }
            }
            out.behaviors.push_back(std::move(bound));
            requests.push_back({b.priority, b.safety});
        }
        for (const auto& def : program_.definitions) {
            if (config_.find_behavior(def.name)) {
                continue;
            }
            BoundBehavior bound;
            bound.name = def.name;
            bound.defined_in_program = true;
            bound.body = bind_body(def);
            out.behaviors.push_back(std::move(bound));
            requests.push_back({std::nullopt, false});
        }
        auto priorities = config::default_priorities(requests);
        for (std::size_t i = 0; i < out.behaviors.size(); ++i) {
            out.behaviors[i].priority = priorities[i];
        }

        if (!issues_.empty()) {
            throw BindErrors(std::move(issues_));
        }
        return out;
    }

private:
    std::optional<std::string> resolve_signal(const Comparison& c)
    {
        for (const auto& a : config_.algorithms) {
            if (a.output == c.signal) {
                return a.output;
            }
        }
        if (config_.find_sensor(c.signal)) {
            if (auto topic = config::processed_topic_for_sensor(config_, c.signal)) {
                return topic;
            }
            fail(c.signal, c.span, "sensor feeds several algorithms; name one of their outputs instead");
            return std::nullopt;
        }
        fail(c.signal, c.span, "no sensor or algorithm output");
        return std::nullopt;
    }

    void check_target(const std::string& name, const SourceSpan& span)
    {
        if (!program_.find_definition(name) && !config_.find_behavior(name)) {
            fail(name, span, "no DEFINE or behavior");
        }
    }

    const config::ActuatorSpec* drivable(const std::string& name, const SourceSpan& span, std::string_view verb)
    {
        const auto* act = config_.find_actuator(name);
        if (!act) {
            fail(name, span, "undeclared actuator");
            return nullptr;
        }
        if (act->kind == config::ActuatorKind::audio) {
            fail(name, span, "cannot " + std::string(verb) + " an audio actuator");
            return nullptr;
        }
        return act;
    }

    std::vector<BoundStatement> bind_body(const Definition& def)
    {
        using Op = BoundStatement::Op;
        std::vector<BoundStatement> body;
        for (const auto& st : def.body) {
            if (const auto* m = std::get_if<Move>(&st)) {
                double speed = 0.0;
                if (const auto* word = std::get_if<SpeedWord>(&m->speed)) {
                    speed = *word == SpeedWord::slowly ? config_.scheduler.slowly_speed
                                                       : config_.scheduler.quickly_speed;
                } else {
                    speed = std::get<double>(m->speed);
                }
                if (drivable(m->actuator, m->span, "MOVE")) {
                    body.push_back({Op::move, m->actuator, speed, {}, 0});
                }
            } else if (const auto* s = std::get_if<Set>(&st)) {
                if (drivable(s->actuator, s->span, "SET")) {
                    body.push_back({Op::set, s->actuator, s->value, {}, 0});
                }
            } else if (const auto* p = std::get_if<Play>(&st)) {
                if (audio_.size() == 1) {
                    body.push_back({Op::play, audio_.front(), 0.0, p->resource, 0});
                } else if (audio_.empty()) {
                    fail("sound", p->span, "no audio actuator declared");
                } else {
                    std::string names;
                    for (const auto& n : audio_) {
                        names += (names.empty() ? "" : ", ") + n;
                    }
                    fail("sound", p->span, "ambiguous audio actuator (" + names + ")");
                }
            } else {
                const auto& w = std::get<Wait>(st);
                body.push_back({Op::wait, {}, 0.0, {}, w.duration_us});
            }
        }
        return body;
    }

    void fail(std::string name, SourceSpan span, std::string message)
    {
        issues_.push_back({std::move(name), span, std::move(message)});
    }

    const BehaviorProgram& program_;
    const config::SystemConfig& config_;
    std::vector<std::string> audio_;
    std::vector<BindIssue> issues_;
};

} // namespace

BindErrors::BindErrors(std::vector<BindIssue> issues) : Error(join_issues(issues)), issues_(std::move(issues)) {}

const BoundBehavior* BoundProgram::find_behavior(std::string_view name) const
{
    auto it = std::find_if(behaviors.begin(), behaviors.end(), [&](const BoundBehavior& b) { return b.name == name; });
    return it == behaviors.end() ? nullptr : &*it;
}

BoundProgram bind_program(const BehaviorProgram& program, const config::SystemConfig& config)
{
    return Binder(program, config).run();
}

} // namespace robosync::dsl
