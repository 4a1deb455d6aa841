#pragma once

#include <string>

#include "robosync/dsl/ast.hpp"

namespace robosync::dsl {

/// Canonical source text: rules first, then definitions, blocks separated by
/// a blank line, statements indented four spaces. Re-parses to an equal program.
std::string format_program(const BehaviorProgram& program);

/// Condition text with the minimum parentheses that preserve the tree shape.
std::string format_condition(const Condition& cond);

/// Shortest decimal text that reads back as exactly `value`.
std::string format_number(double value);

/// JSON rendering of the syntax tree, including source spans.
std::string dump_ast(const BehaviorProgram& program);

} // namespace robosync::dsl
