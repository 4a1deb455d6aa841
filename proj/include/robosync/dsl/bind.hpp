#pragma once

#include <map>
#include <string>
#include <vector>

#include "robosync/config.hpp"
#include "robosync/dsl/ast.hpp"
#include "robosync/errors.hpp"

namespace robosync::dsl {

struct BoundStatement {
    enum class Op { move, set, play, wait };

    Op op = Op::move;
    std::string actuator;  // target actuator; the audio actuator for PLAY
    double value = 0.0;    // resolved MOVE speed or SET value
    std::string resource;  // PLAY only
    std::int64_t wait_us = 0;

    bool operator==(const BoundStatement&) const = default;
};

struct BoundBehavior {
    std::string name;
    double priority = 0.0;
    bool safety = false;
    bool defined_in_program = false;  // false: came from the config alone
    std::vector<BoundStatement> body;
};

/// A program with every name resolved against a SystemConfig.
struct BoundProgram {
    BehaviorProgram program;
    /// DSL signal -> processing-layer topic it reads.
    std::map<std::string, std::string> signal_topics;
    /// Config behaviors in file order, then program-only definitions in source order.
    std::vector<BoundBehavior> behaviors;

    const BoundBehavior* find_behavior(std::string_view name) const;
};

struct BindIssue {
    std::string name;
    SourceSpan span;
    std::string message;

    std::string to_string() const;
};

class BindErrors : public Error {
public:
    explicit BindErrors(std::vector<BindIssue> issues);
    const std::vector<BindIssue>& issues() const { return issues_; }

private:
    std::vector<BindIssue> issues_;
};

/// Resolves signals, behaviors, and actuators. All unresolved names are
/// reported together in one BindErrors.
BoundProgram bind_program(const BehaviorProgram& program, const config::SystemConfig& config);

} // namespace robosync::dsl
