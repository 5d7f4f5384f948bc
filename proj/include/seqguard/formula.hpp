#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqguard/detail/text.hpp"
#include "seqguard/errors.hpp"

namespace seqguard {

// Propositional formula over named predicate atoms.
// Immutable after construction; handles share nodes, so copies are cheap.
class Formula {
public:
    enum class Kind { atom, negation, conjunction, disjunction, implication };

    static Formula atom(std::string name) {
        return Formula(std::make_shared<Node>(Node{Kind::atom, std::move(name), nullptr, nullptr}));
    }
    static Formula negation(Formula operand) {
        return Formula(std::make_shared<Node>(Node{Kind::negation, {}, operand.node_, nullptr}));
    }
    static Formula conjunction(Formula left, Formula right) {
        return Formula(
            std::make_shared<Node>(Node{Kind::conjunction, {}, left.node_, right.node_}));
    }
    static Formula disjunction(Formula left, Formula right) {
        return Formula(
            std::make_shared<Node>(Node{Kind::disjunction, {}, left.node_, right.node_}));
    }
    static Formula implication(Formula left, Formula right) {
        return Formula(
            std::make_shared<Node>(Node{Kind::implication, {}, left.node_, right.node_}));
    }

    Kind kind() const { return node_->kind; }

    const std::string& atom_name() const { return node_->name; }

    // For negation, left() is the single operand.
    Formula left() const { return Formula(node_->lhs); }
    Formula right() const { return Formula(node_->rhs); }

    friend bool operator==(const Formula& a, const Formula& b) {
        return structurally_equal(*a.node_, *b.node_);
    }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static bool structurally_equal(const Node& a, const Node& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
        case Kind::atom: return a.name == b.name;
        case Kind::negation: return structurally_equal(*a.lhs, *b.lhs);
        default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
        }
    }

    std::shared_ptr<const Node> node_;
};

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
    case Formula::Kind::atom: out.insert(f.atom_name()); return;
    case Formula::Kind::negation: collect_atoms(f.left(), out); return;
    default:
        collect_atoms(f.left(), out);
        collect_atoms(f.right(), out);
        return;
    }
}

inline std::set<std::string> atoms(const Formula& f) {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
}

// Fully parenthesized rendering; parse_formula(to_text(f)) is equivalent to f.
inline std::string to_text(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::atom: return f.atom_name();
    case Formula::Kind::negation: return "(NOT " + to_text(f.left()) + ")";
    case Formula::Kind::conjunction:
        return "(" + to_text(f.left()) + " AND " + to_text(f.right()) + ")";
    case Formula::Kind::disjunction:
        return "(" + to_text(f.left()) + " OR " + to_text(f.right()) + ")";
    case Formula::Kind::implication:
        return "(" + to_text(f.left()) + " IMPLIES " + to_text(f.right()) + ")";
    }
    throw Error("unreachable formula kind");
}

namespace detail {

// Grammar, loosest binding first (IMPLIES is right-associative):
//   implication := disjunction (("IMPLIES" | "->") implication)?
//   disjunction := conjunction (("OR" | "|") conjunction)*
//   conjunction := negation (("AND" | "&") negation)*
//   negation    := ("NOT" | "!") negation | primary
//   primary     := IDENT | "(" implication ")"
class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = parse_implication();
        skip_spaces();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_ + 1);
        return f;
    }

private:
    struct Token {
        enum class Kind { ident, op_not, op_and, op_or, op_implies, lparen, rparen, end };
        Kind kind;
        std::string text;
        std::size_t column; // 1-based
    };

    void skip_spaces() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    Token next_token() {
        skip_spaces();
        std::size_t column = pos_ + 1;
        if (pos_ >= text_.size()) return {Token::Kind::end, "", column};
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            return {Token::Kind::lparen, "(", column};
        }
        if (c == ')') {
            ++pos_;
            return {Token::Kind::rparen, ")", column};
        }
        if (c == '!') {
            ++pos_;
            return {Token::Kind::op_not, "!", column};
        }
        if (c == '&') {
            ++pos_;
            return {Token::Kind::op_and, "&", column};
        }
        if (c == '|') {
            ++pos_;
            return {Token::Kind::op_or, "|", column};
        }
        if (c == '-') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                pos_ += 2;
                return {Token::Kind::op_implies, "->", column};
            }
            throw ParseError("stray '-' (expected \"->\")", column);
        }
        if (is_word_char(c) && !(c >= '0' && c <= '9')) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            std::string lower = to_lower_copy(word);
            if (lower == "not") return {Token::Kind::op_not, word, column};
            if (lower == "and") return {Token::Kind::op_and, word, column};
            if (lower == "or") return {Token::Kind::op_or, word, column};
            if (lower == "implies") return {Token::Kind::op_implies, word, column};
            return {Token::Kind::ident, word, column};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", column);
    }

    Token peek() {
        std::size_t saved = pos_;
        Token t = next_token();
        pos_ = saved;
        return t;
    }

    Formula parse_implication() {
        Formula lhs = parse_disjunction();
        Token t = peek();
        if (t.kind == Token::Kind::op_implies) {
            next_token();
            return Formula::implication(std::move(lhs), parse_implication());
        }
        return lhs;
    }

    Formula parse_disjunction() {
        Formula f = parse_conjunction();
        for (Token t = peek(); t.kind == Token::Kind::op_or; t = peek()) {
            next_token();
            f = Formula::disjunction(std::move(f), parse_conjunction());
        }
        return f;
    }

    Formula parse_conjunction() {
        Formula f = parse_negation();
        for (Token t = peek(); t.kind == Token::Kind::op_and; t = peek()) {
            next_token();
            f = Formula::conjunction(std::move(f), parse_negation());
        }
        return f;
    }

    Formula parse_negation() {
        Token t = peek();
        if (t.kind == Token::Kind::op_not) {
            next_token();
            NestingGuard guard(*this, t.column);
            return Formula::negation(parse_negation());
        }
        return parse_primary();
    }

    Formula parse_primary() {
        Token t = next_token();
        if (t.kind == Token::Kind::ident) return Formula::atom(t.text);
        if (t.kind == Token::Kind::lparen) {
            NestingGuard guard(*this, t.column);
            Formula f = parse_implication();
            Token close = next_token();
            if (close.kind != Token::Kind::rparen)
                throw ParseError("expected ')'", close.column);
            return f;
        }
        if (t.kind == Token::Kind::end) throw ParseError("unexpected end of input", t.column);
        throw ParseError("expected an atom, NOT, or '('", t.column);
    }

    // Keeps hostile inputs from exhausting the stack before a structured
    // error can be produced.
    struct NestingGuard {
        NestingGuard(FormulaParser& parser, std::size_t column) : parser_(parser) {
            if (++parser_.depth_ > kMaxNesting)
                throw ParseError("formula nesting exceeds " + std::to_string(kMaxNesting) +
                                     " levels",
                                 column);
        }
        ~NestingGuard() { --parser_.depth_; }
        FormulaParser& parser_;
    };

    static constexpr std::size_t kMaxNesting = 512;
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

} // namespace detail

inline Formula parse_formula(std::string_view text) {
    return detail::FormulaParser(text).parse();
}

} // namespace seqguard
