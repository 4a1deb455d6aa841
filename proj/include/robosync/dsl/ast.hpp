#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace robosync::dsl {

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
};

// Deep-copying owner for recursive AST nodes.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other)
    {
        if (this != &other) {
            ptr_ = std::make_unique<T>(*other.ptr_);
        }
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

enum class CompareOp { lt, le, gt, ge, eq, ne };

std::string_view to_string(CompareOp op);

struct Condition;

struct Comparison {
    std::string signal;
    CompareOp op = CompareOp::lt;
    double value = 0.0;
    bool level = false;  // written as "signal LEVEL op value"; same meaning
    SourceSpan span;

    bool operator==(const Comparison& o) const
    {
        return signal == o.signal && op == o.op && value == o.value && level == o.level;
    }
};

struct And {
    Box<Condition> left;
    Box<Condition> right;
    bool operator==(const And&) const = default;
};

struct Or {
    Box<Condition> left;
    Box<Condition> right;
    bool operator==(const Or&) const = default;
};

struct Not {
    Box<Condition> inner;
    bool operator==(const Not&) const = default;
};

struct Condition {
    std::variant<Comparison, And, Or, Not> node;
    bool operator==(const Condition&) const = default;
};

enum class SpeedWord { slowly, quickly };

struct Move {
    std::string actuator;
    std::variant<SpeedWord, double> speed;
    SourceSpan span;
    bool operator==(const Move& o) const { return actuator == o.actuator && speed == o.speed; }
};

struct Play {
    std::string resource;
    SourceSpan span;
    bool operator==(const Play& o) const { return resource == o.resource; }
};

struct Set {
    std::string actuator;
    double value = 0.0;
    SourceSpan span;
    bool operator==(const Set& o) const { return actuator == o.actuator && value == o.value; }
};

struct Wait {
    std::int64_t duration_us = 1;
    SourceSpan span;
    bool operator==(const Wait& o) const { return duration_us == o.duration_us; }
};

using Statement = std::variant<Move, Play, Set, Wait>;

struct Definition {
    std::string name;
    std::vector<Statement> body;
    SourceSpan span;
    bool operator==(const Definition& o) const { return name == o.name && body == o.body; }
};

struct Rule {
    Condition condition;
    std::string then_behavior;
    std::optional<std::string> else_behavior;
    SourceSpan span;
    SourceSpan then_span;
    SourceSpan else_span;

    bool operator==(const Rule& o) const
    {
        return condition == o.condition && then_behavior == o.then_behavior &&
               else_behavior == o.else_behavior;
    }
};

/// Parsed behavior program. Definitions keep source order; names are unique.
struct BehaviorProgram {
    std::vector<Rule> rules;
    std::vector<Definition> definitions;

    const Definition* find_definition(std::string_view name) const;

    bool operator==(const BehaviorProgram&) const = default;
};

/// Signals a condition reads, in first-appearance order, without duplicates.
std::vector<std::string> referenced_signals(const Condition& cond);

} // namespace robosync::dsl
