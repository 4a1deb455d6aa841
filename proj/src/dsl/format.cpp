#include "robosync/dsl/format.hpp"

#include <charconv>

#include <json.hpp>

namespace robosync::dsl {

std::string format_number(double value)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

// Binding strength: OR < AND < NOT/comparison.
int precedence(const Condition& c)
{
    if (std::holds_alternative<Or>(c.node)) {
        return 1;
    }
    if (std::holds_alternative<And>(c.node)) {
        return 2;
    }
    return 3;
}

std::string format_at(const Condition& c, int min_prec)
{
    std::string text = std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                return node.signal + (node.level ? " LEVEL " : " ") + std::string(to_string(node.op)) + " " +
                       format_number(node.value);
            } else if constexpr (std::is_same_v<T, Not>) {
                return "NOT " + format_at(*node.inner, 3);
            } else if constexpr (std::is_same_v<T, And>) {
                return format_at(*node.left, 2) + " AND " + format_at(*node.right, 3);
            } else {
                return format_at(*node.left, 1) + " OR " + format_at(*node.right, 2);
            }
        },
        c.node);
    return precedence(c) < min_prec ? "(" + text + ")" : text;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string format_statement(const Statement& s)
{
    return std::visit(
        [](const auto& st) -> std::string {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, Move>) {
                std::string speed;
                if (const auto* word = std::get_if<SpeedWord>(&st.speed)) {
                    speed = *word == SpeedWord::slowly ? "SLOWLY" : "QUICKLY";
                } else {
                    speed = format_number(std::get<double>(st.speed));
                }
                return "MOVE " + st.actuator + " " + speed;
            } else if constexpr (std::is_same_v<T, Play>) {
                return "PLAY sound " + quote(st.resource);
            } else if constexpr (std::is_same_v<T, Set>) {
                return "SET " + st.actuator + " " + format_number(st.value);
            } else {
                if (st.duration_us % 1000 == 0) {
                    return "WAIT " + std::to_string(st.duration_us / 1000) + " ms";
                }
                return "WAIT " + std::to_string(st.duration_us) + " us";
            }
        },
        s);
}

} // namespace

std::string format_condition(const Condition& cond)
{
    return format_at(cond, 0);
}

std::string format_program(const BehaviorProgram& program)
{
    std::vector<std::string> blocks;
    for (const auto& rule : program.rules) {
        std::string b = "WHEN " + format_condition(rule.condition) + "\n";
        b += "DO " + rule.then_behavior + "\n";
        if (rule.else_behavior) {
            b += "ELSE\nDO " + *rule.else_behavior + "\n";
        }
        b += "END\n";
        blocks.push_back(std::move(b));
    }
    for (const auto& def : program.definitions) {
        std::string b = "DEFINE " + def.name + "\n";
        for (const auto& st : def.body) {
            b += "    " + format_statement(st) + "\n";
        }
        b += "END\n";
        blocks.push_back(std::move(b));
    }
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) {
            out += "\n";
        }
        out += blocks[i];
    }
    return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson span_json(const SourceSpan& s)
{
    return ojson{{"line", s.line}, {"column", s.column}, {"length", s.length}};
}

ojson condition_json(const Condition& c)
{
    return std::visit(
        [](const auto& node) -> ojson {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                return ojson{{"type", "comparison"}, {"signal", node.signal}, {"level", node.level},
                             {"op", to_string(node.op)}, {"value", node.value}, {"span", span_json(node.span)}};
            } else if constexpr (std::is_same_v<T, Not>) {
                return ojson{{"type", "not"}, {"inner", condition_json(*node.inner)}};
            } else {
                return ojson{{"type", std::is_same_v<T, And> ? "and" : "or"},
                             {"left", condition_json(*node.left)},
                             {"right", condition_json(*node.right)}};
            }
        },
        c.node);
}

ojson statement_json(const Statement& s)
{
    return std::visit(
        [](const auto& st) -> ojson {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, Move>) {
                ojson o{{"type", "move"}, {"actuator", st.actuator}};
                if (const auto* word = std::get_if<SpeedWord>(&st.speed)) {
                    o["speed"] = *word == SpeedWord::slowly ? "SLOWLY" : "QUICKLY";
                } else {
                    o["speed"] = std::get<double>(st.speed);
                }
                o["span"] = span_json(st.span);
                return o;
            } else if constexpr (std::is_same_v<T, Play>) {
                return ojson{{"type", "play"}, {"resource", st.resource}, {"span", span_json(st.span)}};
            } else if constexpr (std::is_same_v<T, Set>) {
                return ojson{{"type", "set"}, {"actuator", st.actuator}, {"value", st.value},
                             {"span", span_json(st.span)}};
            } else {
                return ojson{{"type", "wait"}, {"duration_us", st.duration_us}, {"span", span_json(st.span)}};
            }
        },
        s);
}

} // namespace

std::string dump_ast(const BehaviorProgram& program)
{
    ojson rules = ojson::array();
    for (const auto& r : program.rules) {
        ojson o{{"condition", condition_json(r.condition)}, {"then", r.then_behavior}};
        o["else"] = r.else_behavior ? ojson(*r.else_behavior) : ojson(nullptr);
        o["span"] = span_json(r.span);
        rules.push_back(std::move(o));
    }
    ojson defs = ojson::array();
    for (const auto& d : program.definitions) {
        ojson body = ojson::array();
        for (const auto& st : d.body) {
            body.push_back(statement_json(st));
        }
        defs.push_back(ojson{{"name", d.name}, {"body", std::move(body)}, {"span", span_json(d.span)}});
    }
    ojson doc{{"rules", std::move(rules)}, {"definitions", std::move(defs)}};
    return doc.dump(2) + "\n";
}

} // namespace robosync::dsl
