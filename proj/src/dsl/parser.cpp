#include "robosync/dsl/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

namespace robosync::dsl {

namespace {

std::string describe(const SourceSpan& span)
{
    return std::to_string(span.line) + ":" + std::to_string(span.column);
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += items[i];
    }
    return out;
}

} // namespace

ParseError::ParseError(SourceSpan span, std::vector<std::string> expected, std::string found)
    : Error(describe(span) + ": expected " + (expected.size() > 1 ? "one of " : "") + join(expected) +
            ", found " + found),
      span_(span),
      expected_(std::move(expected))
{
}

ParseError::ParseError(SourceSpan span, std::string message)
    : Error(describe(span) + ": " + message), span_(span)
{
}

namespace {

enum class Tok { keyword, ident, number, string, op, lparen, rparen, newline, eof };

struct Token {
    Tok kind = Tok::eof;
    std::string text;  // keyword/ident spelling, decoded string, operator
    double number = 0.0;
    bool integral = false;
    SourceSpan span;
};

constexpr std::string_view kKeywords[] = {
    "WHEN", "DO", "ELSE", "END", "DEFINE", "MOVE", "PLAY", "SET", "WAIT",
    "AND", "OR", "NOT", "LEVEL", "SLOWLY", "QUICKLY",
};

bool is_keyword(std::string_view word)
{
    return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (c == '\n') {
                out.push_back(make(Tok::newline, "\\n", 1));
                advance();
            } else if (c == '(') {
                out.push_back(make(Tok::lparen, "(", 1));
                advance();
            } else if (c == ')') {
                out.push_back(make(Tok::rparen, ")", 1));
                advance();
            } else if (c == '"') {
                out.push_back(string_literal());
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < text_.size() &&
                        (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '.')) ||
                       (c == '.' && pos_ + 1 < text_.size() &&
                        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                out.push_back(number());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(word());
            } else if (c == '<' || c == '>' || c == '=' || c == '!') {
                out.push_back(op());
            } else {
                throw ParseError(here(1), "unexpected character '" + std::string(1, c) + "'");
            }
        }
        out.push_back(make(Tok::eof, "end of input", 0));
        return out;
    }

private:
    SourceSpan here(std::size_t length) const { return {line_, column_, length}; }

    Token make(Tok kind, std::string text, std::size_t length) const
    {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.span = here(length);
        return t;
    }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    Token string_literal()
    {
        Token t = make(Tok::string, "", 0);
        std::size_t start = pos_;
        advance();
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n') {
                throw ParseError(t.span, "unterminated string literal");
            }
            char c = text_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\\')) {
                    throw ParseError(here(1), "unsupported escape in string literal");
                }
                c = text_[pos_];
            }
            t.text += c;
            advance();
        }
        t.span.length = pos_ - start;
        return t;
    }

    Token number()
    {
        Token t = make(Tok::number, "", 0);
        std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
        };
        if (text_[pos_] == '-') {
            advance();
        }
        digits();
        bool integral = true;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            integral = false;
            advance();
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            integral = false;
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                advance();
            }
            std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) {
                throw ParseError(t.span, "malformed number");
            }
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.span.length = pos_ - start;
        t.integral = integral && t.text.front() != '-';
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || !std::isfinite(t.number)) {
            throw ParseError(t.span, "malformed number '" + t.text + "'");
        }
        return t;
    }

    Token word()
    {
        Token t = make(Tok::ident, "", 0);
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            advance();
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.span.length = pos_ - start;
        if (is_keyword(t.text)) {
            t.kind = Tok::keyword;
            return t;
        }
        bool ident = std::islower(static_cast<unsigned char>(t.text.front())) &&
                     std::all_of(t.text.begin(), t.text.end(), [](char c) {
                         return std::islower(static_cast<unsigned char>(c)) ||
                                std::isdigit(static_cast<unsigned char>(c)) || c == '_';
                     });
        if (!ident) {
            throw ParseError(t.span, "'" + t.text + "' is neither a keyword nor a lowercase identifier");
        }
        return t;
    }

    Token op()
    {
        Token t = make(Tok::op, "", 0);
        char c = text_[pos_];
        advance();
        bool eq = pos_ < text_.size() && text_[pos_] == '=';
        if (eq) {
            advance();
        }
        if ((c == '=' || c == '!') && !eq) {
            throw ParseError(t.span, "expected '" + std::string(1, c) + "='");
        }
        t.text = std::string(1, c) + (eq ? "=" : "");
        t.span.length = t.text.size();
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

std::optional<CompareOp> compare_op(std::string_view s)
{
    if (s == "<") return CompareOp::lt;
    if (s == "<=") return CompareOp::le;
    if (s == ">") return CompareOp::gt;
    if (s == ">=") return CompareOp::ge;
    if (s == "==") return CompareOp::eq;
    if (s == "!=") return CompareOp::ne;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    BehaviorProgram program()
    {
        BehaviorProgram out;
        skip_newlines();
        while (!at(Tok::eof)) {
            if (at_keyword("WHEN")) {
                out.rules.push_back(rule());
            } else if (at_keyword("DEFINE")) {
                auto def = definition();
                if (const auto* prior = out.find_definition(def.name)) {
                    throw ParseError(def.span, "duplicate DEFINE '" + def.name + "' (first defined at line " +
                                                   std::to_string(prior->span.line) + ")");
                }
                out.definitions.push_back(std::move(def));
            } else {
                fail({"WHEN", "DEFINE", "end of input"});
            }
            skip_newlines();
        }
        return out;
    }

    Condition lone_condition()
    {
        auto cond = disjunction();
        if (!at(Tok::eof)) {
            fail({"AND", "OR", "end of input"});
        }
        return cond;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_keyword(std::string_view kw) const { return at(Tok::keyword) && peek().text == kw; }

    Token take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const auto& t = peek();
        std::string found;
        switch (t.kind) {
        case Tok::eof: found = "end of input"; break;
        case Tok::newline: found = "end of line"; break;
        case Tok::string: found = "string \"" + t.text + "\""; break;
        default: found = "'" + t.text + "'"; break;
        }
        throw ParseError(t.span, std::move(expected), found);
    }

    Token expect_keyword(std::string_view kw)
    {
        if (!at_keyword(kw)) {
            fail({std::string(kw)});
        }
        return take();
    }

    Token expect(Tok kind, const char* what)
    {
        if (!at(kind)) {
            fail({what});
        }
        return take();
    }

    void skip_newlines()
    {
        while (at(Tok::newline)) {
            ++pos_;
        }
    }

    // End of a line-oriented construct; blank lines after it are absorbed.
    void end_of_line()
    {
        if (at(Tok::eof)) {
            return;
        }
        expect(Tok::newline, "end of line");
        skip_newlines();
    }

    Rule rule()
    {
        Rule r;
        r.span = take().span;
        r.condition = disjunction();
        end_of_line();
        expect_keyword("DO");
        auto then_tok = expect(Tok::ident, "identifier");
        r.then_behavior = then_tok.text;
        r.then_span = then_tok.span;
        end_of_line();
        if (at_keyword("ELSE")) {
            take();
            end_of_line();
            expect_keyword("DO");
            auto else_tok = expect(Tok::ident, "identifier");
            r.else_behavior = else_tok.text;
            r.else_span = else_tok.span;
            end_of_line();
        }
        if (!at_keyword("END")) {
            fail(r.else_behavior ? std::vector<std::string>{"END"} : std::vector<std::string>{"ELSE", "END"});
        }
        take();
        end_of_line();
        return r;
    }

    Definition definition()
    {
        take();
        auto name = expect(Tok::ident, "identifier");
        Definition def;
        def.name = name.text;
        def.span = name.span;
        end_of_line();
        while (!at_keyword("END")) {
            def.body.push_back(statement());
            end_of_line();
        }
        take();
        end_of_line();
        return def;
    }

    Statement statement()
    {
        if (at_keyword("MOVE")) {
            Move m;
            m.span = take().span;
            m.actuator = expect(Tok::ident, "identifier").text;
            if (at_keyword("SLOWLY")) {
                take();
                m.speed = SpeedWord::slowly;
            } else if (at_keyword("QUICKLY")) {
                take();
                m.speed = SpeedWord::quickly;
            } else if (at(Tok::number)) {
                auto t = take();
                if (t.number < 0.0 || t.number > 1.0) {
                    throw ParseError(t.span, "MOVE speed " + t.text + " outside [0, 1]");
                }
                m.speed = t.number;
            } else {
                fail({"SLOWLY", "QUICKLY", "number"});
            }
            return m;
        }
        if (at_keyword("PLAY")) {
            Play p;
            p.span = take().span;
            if (!at(Tok::ident) || peek().text != "sound") {
                fail({"sound"});
            }
            take();
            p.resource = expect(Tok::string, "string").text;
            return p;
        }
        if (at_keyword("SET")) {
            Set s;
            s.span = take().span;
            s.actuator = expect(Tok::ident, "identifier").text;
            s.value = expect(Tok::number, "number").number;
            return s;
        }
        if (at_keyword("WAIT")) {
            Wait w;
            w.span = take().span;
            auto amount = expect(Tok::number, "integer");
            if (!amount.integral) {
                throw ParseError(amount.span, "WAIT needs a non-negative integer, found " + amount.text);
            }
            std::int64_t n = 0;
            auto [ptr, ec] = std::from_chars(amount.text.data(), amount.text.data() + amount.text.size(), n);
            if (ec != std::errc{}) {
                throw ParseError(amount.span, "WAIT duration out of range");
            }
            if (!at(Tok::ident) || (peek().text != "ms" && peek().text != "us")) {
                fail({"ms", "us"});
            }
            bool millis = take().text == "ms";
            if (millis && n > std::numeric_limits<std::int64_t>::max() / 1000) {
                throw ParseError(amount.span, "WAIT duration out of range");
            }
            w.duration_us = millis ? n * 1000 : n;
            if (w.duration_us < 1) {
                throw ParseError(amount.span, "WAIT duration must be at least 1us");
            }
            return w;
        }
        fail({"END", "MOVE", "PLAY", "SET", "WAIT"});
    }

    Condition disjunction()
    {
        auto left = conjunction();
        while (at_keyword("OR")) {
            take();
            auto right = conjunction();
            left = Condition{Or{std::move(left), std::move(right)}};
        }
        return left;
    }

    Condition conjunction()
    {
        auto left = unary();
        while (at_keyword("AND")) {
            take();
            auto right = unary();
            left = Condition{And{std::move(left), std::move(right)}};
        }
        return left;
    }

    Condition unary()
    {
        if (at_keyword("NOT")) {
            take();
            return Condition{Not{unary()}};
        }
        if (at(Tok::lparen)) {
            take();
            auto inner = disjunction();
            expect(Tok::rparen, "')'");
            return inner;
        }
        if (!at(Tok::ident)) {
            fail({"identifier", "NOT", "'('"});
        }
        auto signal = take();
        Comparison c;
        c.signal = signal.text;
        c.span = signal.span;
        if (at_keyword("LEVEL")) {
            take();
            c.level = true;
        }
        if (!at(Tok::op)) {
            fail(c.level ? std::vector<std::string>{"comparison operator"}
                         : std::vector<std::string>{"LEVEL", "comparison operator"});
        }
        c.op = *compare_op(take().text);
        c.value = expect(Tok::number, "number").number;
        return Condition{std::move(c)};
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

BehaviorProgram parse_program(std::string_view text)
{
    return Parser(Lexer(text).run()).program();
}

Condition parse_condition(std::string_view text)
{
    return Parser(Lexer(text).run()).lone_condition();
}

std::string_view to_string(CompareOp op)
{
    switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
    }
    return "?";
}

const Definition* BehaviorProgram::find_definition(std::string_view name) const
{
    auto it = std::find_if(definitions.begin(), definitions.end(),
                           [&](const Definition& d) { return d.name == name; });
    return it == definitions.end() ? nullptr : &*it;
}

namespace {

void collect_signals(const Condition& cond, std::vector<std::string>& out)
{
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                if (std::find(out.begin(), out.end(), node.signal) == out.end()) {
                    out.push_back(node.signal);
                }
            } else if constexpr (std::is_same_v<T, Not>) {
                collect_signals(*node.inner, out);
            } else {
                collect_signals(*node.left, out);
                collect_signals(*node.right, out);
            }
        },
        cond.node);
}

} // namespace

std::vector<std::string> referenced_signals(const Condition& cond)
{
    std::vector<std::string> out;
    collect_signals(cond, out);
    return out;
}

} // namespace robosync::dsl
