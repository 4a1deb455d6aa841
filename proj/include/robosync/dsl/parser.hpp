#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robosync/dsl/ast.hpp"
#include "robosync/errors.hpp"

namespace robosync::dsl {

class ParseError : public Error {
public:
    ParseError(SourceSpan span, std::vector<std::string> expected, std::string found);
    ParseError(SourceSpan span, std::string message);

    const SourceSpan& span() const { return span_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourceSpan span_;
    std::vector<std::string> expected_;
};

/// Parses a behavior program (.rsb source).
///
///   Program    := (Rule | Definition)*
///   Rule       := WHEN Cond NL DO id NL (ELSE NL DO id NL)? END
///   Definition := DEFINE id NL Statement* END
///   Statement  := MOVE id (SLOWLY | QUICKLY | number)
///               | PLAY sound string
///               | SET id number
///               | WAIT integer (ms | us)
///   Cond       := And (OR And)*
///   And        := Unary (AND Unary)*
///   Unary      := NOT Unary | '(' Cond ')' | id [LEVEL] op number
///
/// Keywords are uppercase, identifiers match [a-z][a-z0-9_]*, '#' starts a
/// comment and blank lines are ignored.
BehaviorProgram parse_program(std::string_view text);

/// Parses a lone condition expression, e.g. "touch LEVEL < 3 AND NOT x > 1".
Condition parse_condition(std::string_view text);

} // namespace robosync::dsl
