#include <doctest.h>

#include <algorithm>

#include "robosync/dsl/parser.hpp"
#include "support/scenario.hpp"

using namespace robosync::dsl;

namespace {

ParseError parse_failure(std::string_view text)
{
    try {
        parse_program(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    throw std::logic_error("unreachable");
}

bool expects(const ParseError& e, const std::string& token)
{
    return std::find(e.expected().begin(), e.expected().end(), token) != e.expected().end();
}

} // namespace

TEST_CASE("the touch program")
{
    auto p = parse_program(testsupport::fixture("touch/program.rsb"));
    REQUIRE(p.rules.size() == 1);
    const auto& rule = p.rules[0];
    const auto& cmp = std::get<Comparison>(rule.condition.node);
    CHECK(cmp.signal == "touch");
    CHECK(cmp.op == CompareOp::lt);
    CHECK(cmp.value == 3.0);
    CHECK(cmp.level);
    CHECK(rule.then_behavior == "gentle_response");
    CHECK(rule.else_behavior == std::optional<std::string>("aggressive_response"));
    CHECK(rule.span.line == 1);

    REQUIRE(p.definitions.size() == 2);
    CHECK(p.definitions[0].name == "gentle_response");
    CHECK(p.definitions[1].name == "aggressive_response");
    REQUIRE(p.definitions[0].body.size() == 2);
    const auto& move = std::get<Move>(p.definitions[0].body[0]);
    CHECK(move.actuator == "arms");
    CHECK(std::get<SpeedWord>(move.speed) == SpeedWord::slowly);
    CHECK(std::get<Play>(p.definitions[0].body[1]).resource == "greeting.wav");
    CHECK(std::get<SpeedWord>(std::get<Move>(p.definitions[1].body[0]).speed) == SpeedWord::quickly);
    CHECK(std::get<Play>(p.definitions[1].body[1]).resource == "warning.wav");
    CHECK(p.find_definition("gentle_response") == &p.definitions[0]);
    CHECK(p.find_definition("dance") == nullptr);
}

TEST_CASE("empty and comment-only documents")
{
    CHECK(parse_program("") == BehaviorProgram{});
    CHECK(parse_program("\n\n# nothing here\n   \n") == BehaviorProgram{});
}

TEST_CASE("unterminated DEFINE fails at end of input expecting END")
{
    auto e = parse_failure("DEFINE x\n");
    CHECK(expects(e, "END"));
    CHECK(e.span().line == 2);
    auto f = parse_failure("DEFINE x");
    CHECK(expects(f, "END"));
    CHECK(std::string(f.what()).find("end of input") != std::string::npos);
}

TEST_CASE("LEVEL is sugar: same condition either way")
{
    CHECK(parse_condition("touch LEVEL < 3") == parse_condition("touch LEVEL < 3"));
    auto a = std::get<Comparison>(parse_condition("touch LEVEL < 3").node);
    auto b = std::get<Comparison>(parse_condition("touch < 3").node);
    CHECK(a.signal == b.signal);
    CHECK(a.op == b.op);
    CHECK(a.value == b.value);
    CHECK(a.level != b.level);
}

TEST_CASE("precedence: AND binds tighter than OR, NOT prefixes")
{
    auto c = parse_condition("a < 1 OR b < 2 AND NOT c < 3");
    const auto& top = std::get<Or>(c.node);
    CHECK(std::get<Comparison>(top.left->node).signal == "a");
    const auto& conj = std::get<And>(top.right->node);
    CHECK(std::get<Comparison>(conj.left->node).signal == "b");
    CHECK(std::get<Comparison>(std::get<Not>(conj.right->node).inner->node).signal == "c");

    auto grouped = parse_condition("(a < 1 OR b < 2) AND c < 3");
    CHECK(std::holds_alternative<And>(grouped.node));

    auto chain = parse_condition("a < 1 OR b < 2 OR c < 3");
    // Left-associative.
    CHECK(std::holds_alternative<Or>(std::get<Or>(chain.node).left->node));
}

TEST_CASE("all comparison operators and number forms")
{
    const std::pair<const char*, CompareOp> ops[] = {{"<", CompareOp::lt}, {"<=", CompareOp::le},
                                                     {">", CompareOp::gt}, {">=", CompareOp::ge},
                                                     {"==", CompareOp::eq}, {"!=", CompareOp::ne}};
    for (const auto& [text, op] : ops) {
        CHECK(std::get<Comparison>(parse_condition(std::string("x ") + text + " 1").node).op == op);
    }
    CHECK(std::get<Comparison>(parse_condition("x > -2.5").node).value == -2.5);
    CHECK(std::get<Comparison>(parse_condition("x > 1e-3").node).value == 0.001);
    CHECK(std::get<Comparison>(parse_condition("x > 2.5E2").node).value == 250.0);
}

TEST_CASE("statements")
{
    auto p = parse_program("DEFINE d\n  MOVE arm 0.5\n  SET led -3\n  WAIT 20 ms\n  WAIT 7 us\n  PLAY sound \"a \\\"b\\\".wav\"\nEND\n");
    const auto& body = p.definitions[0].body;
    REQUIRE(body.size() == 5);
    CHECK(std::get<double>(std::get<Move>(body[0]).speed) == 0.5);
    CHECK(std::get<Set>(body[1]).value == -3.0);
    CHECK(std::get<Wait>(body[2]).duration_us == 20000);
    CHECK(std::get<Wait>(body[3]).duration_us == 7);
    CHECK(std::get<Play>(body[4]).resource == "a \"b\".wav");
}

TEST_CASE("empty DEFINE body is allowed")
{
    auto p = parse_program("DEFINE idle\nEND\n");
    CHECK(p.definitions[0].body.empty());
}

TEST_CASE("rejections")
{
    CHECK_THROWS_AS(parse_program("DEFINE d\nMOVE arm 1.5\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nWAIT 0 ms\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nWAIT 2 s\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nWAIT 1.5 ms\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nPLAY speaker \"x\"\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE Bad\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("when x < 1\nDO y\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("WHEN x < 1 DO y END\n"), ParseError);
    CHECK_THROWS_AS(parse_program("WHEN x < 1\nDO y z\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("WHEN (x < 1\nDO y\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("WHEN x = 1\nDO y\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nPLAY sound \"open\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_program("DEFINE d\nEND\nDEFINE d\nEND\n"), ParseError);
    CHECK_THROWS_AS(parse_condition("x < 1 AND"), ParseError);
    CHECK_THROWS_AS(parse_condition("x < 1 )"), ParseError);
}

TEST_CASE("diagnostics point at the offending token")
{
    auto e = parse_failure("WHEN touch < 3\nDO gentle\nELSE\nMOVE arms SLOWLY\nEND\n");
    CHECK(e.span().line == 4);
    CHECK(e.span().column == 1);
    CHECK(expects(e, "DO"));
    CHECK(std::string(e.what()).rfind("4:1:", 0) == 0);

    auto dup = parse_failure("DEFINE a\nEND\n\nDEFINE a\nEND\n");
    CHECK(dup.span().line == 4);
    CHECK(std::string(dup.what()).find("duplicate DEFINE") != std::string::npos);
}

TEST_CASE("spans of comparisons and rule targets")
{
    auto p = parse_program("# header\nWHEN  touch < 3\nDO gentle\nELSE\nDO rough\nEND\n");
    const auto& r = p.rules[0];
    CHECK(std::get<Comparison>(r.condition.node).span.line == 2);
    CHECK(std::get<Comparison>(r.condition.node).span.column == 7);
    CHECK(r.then_span.line == 3);
    CHECK(r.then_span.column == 4);
    CHECK(r.else_span.line == 5);
}

TEST_CASE("parse determinism")
{
    auto text = testsupport::fixture("touch/program.rsb");
    CHECK(parse_program(text) == parse_program(text));
}

TEST_CASE("referenced signals are unique and ordered")
{
    auto c = parse_condition("b < 1 AND (a > 2 OR NOT b == 3)");
    CHECK(referenced_signals(c) == std::vector<std::string>{"b", "a"});
}
