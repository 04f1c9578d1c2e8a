#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "elemrank/errors.hpp"
#include "elemrank/group_expr.hpp"
#include "elemrank/ordinal.hpp"

namespace elemrank {

namespace detail {

inline constexpr int kMaxParseNesting = 128;

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::size_t offset() {
        skip_ws();
        return pos_;
    }

    bool try_consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what) {
        if (!try_consume(c)) fail(what);
    }

    [[noreturn]] void fail(const std::string& expected) {
        skip_ws();
        std::string found = pos_ >= text_.size()
                                ? "end of input"
                                : "'" + std::string(1, text_[pos_]) + "'";
        throw ParseError(pos_, expected, found);
    }

    bool peek_digit() {
        skip_ws();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    bool peek_alpha() {
        skip_ws();
        return pos_ < text_.size()
               && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    BigInt number() {
        skip_ws();
        if (!peek_digit()) fail("a number");
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            digits += text_[pos_++];
        // strip leading zeros so the bignum parser cannot read an octal prefix
        std::size_t first = digits.find_first_not_of('0');
        return BigInt(first == std::string::npos ? "0" : digits.substr(first));
    }

    std::string ident() {
        skip_ws();
        if (!peek_alpha()) fail("an identifier");
        std::string s;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            s += text_[pos_++];
        return s;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

// Ordinal expression grammar (canonical printed forms are a sublanguage):
//   expr    := product ('+' product)*
//   product := power ('*' power)*
//   power   := atom ('^' power)?
//   atom    := nat | 'w' | '(' expr ')'
// '+' and '*' are evaluated as ordinal addition and multiplication, so
// non-canonical input like "1+w" normalizes on parse.
class OrdinalParser {
public:
    explicit OrdinalParser(std::string_view text) : cur_(text) {}

    Ordinal parse() {
        Ordinal v = expr(0);
        if (!cur_.at_end()) cur_.fail("'+', '*', '^' or end of input");
        return v;
    }

private:
    Ordinal expr(int depth) {
        Ordinal v = product(depth);
        while (cur_.try_consume('+')) v = add(v, product(depth));
        return v;
    }

    Ordinal product(int depth) {
        Ordinal v = power(depth);
        while (cur_.try_consume('*')) v = mul(v, power(depth));
        return v;
    }

    Ordinal power(int depth) {
        Ordinal base = atom(depth);
        if (cur_.try_consume('^')) return pow(base, power(depth));
        return base;
    }

    Ordinal atom(int depth) {
        if (depth > kMaxParseNesting) cur_.fail("shallower nesting");
        if (cur_.peek_digit()) return Ordinal::from_int(cur_.number());
        if (cur_.try_consume('(')) {
            Ordinal v = expr(depth + 1);
            cur_.expect(')', "')'");
            return v;
        }
        std::size_t off = cur_.offset();
        if (cur_.peek_alpha()) {
            std::string id = cur_.ident();
            if (id == "w") return Ordinal::omega();
            throw ParseError(off, "'w', a number or '('", "'" + id + "'");
        }
        cur_.fail("'w', a number or '('");
    }

    Cursor cur_;
};

class GroupExprParser {
public:
    explicit GroupExprParser(std::string_view text) : cur_(text) {}

    GroupExpr parse() {
        GroupExpr e = expr(0);
        if (!cur_.at_end()) cur_.fail("end of input");
        return e;
    }

private:
    GroupExpr expr(int depth) {
        if (depth > kMaxParseNesting) cur_.fail("shallower nesting");
        std::size_t off = cur_.offset();
        std::string head = cur_.ident();
        if (head == "Trivial") return GroupExpr::trivial();
        if (head == "Seed") return GroupExpr::seed(one_ident(head));
        if (head == "Profinite") return GroupExpr::profinite(one_ident(head));
        if (head == "LDPfam") return GroupExpr::ldp_family(one_ident(head));
        if (head == "Discrete") return discrete();
        if (head == "Prod") return prod(depth);
        if (head == "LDP") return ldp(depth);
        if (head == "Ext") {
            auto [a, b] = two(head, depth);
            return GroupExpr::ext(a, b);
        }
        if (head == "CoExt") return GroupExpr::cocompact_ext(one_expr(head, depth));
        if (head == "Wr") {
            auto [a, b] = two(head, depth);
            return GroupExpr::wreath(a, b);
        }
        if (head == "Pow") {
            cur_.expect('(', "'('");
            GroupExpr c = expr(depth + 1);
            cur_.expect(',', "',' (Pow expects 2 arguments)");
            std::uint64_t n = small_nat();
            cur_.expect(')', "')' (Pow expects 2 arguments)");
            return GroupExpr::power(c, n);
        }
        if (head == "EX") return GroupExpr::ex(one_expr(head, depth));
        if (head == "F") {
            cur_.expect('(', "'('");
            std::uint64_t n = small_nat();
            cur_.expect(',', "',' (F expects 2 arguments)");
            std::string name = cur_.ident();
            cur_.expect(')', "')' (F expects 2 arguments)");
            return GroupExpr::fn(n, name);
        }
        if (head == "Res") return GroupExpr::residual(one_expr(head, depth));
        throw ParseError(off, "a group constructor", "'" + head + "'");
    }

    std::string one_ident(const std::string& ctor) {
        cur_.expect('(', "'('");
        std::string name = cur_.ident();
        cur_.expect(')', "')' (" + ctor + " expects 1 argument)");
        return name;
    }

    GroupExpr one_expr(const std::string& ctor, int depth) {
        cur_.expect('(', "'('");
        GroupExpr c = expr(depth + 1);
        cur_.expect(')', "')' (" + ctor + " expects 1 argument)");
        return c;
    }

    std::pair<GroupExpr, GroupExpr> two(const std::string& ctor, int depth) {
        cur_.expect('(', "'('");
        GroupExpr a = expr(depth + 1);
        cur_.expect(',', "',' (" + ctor + " expects 2 arguments)");
        GroupExpr b = expr(depth + 1);
        cur_.expect(')', "')' (" + ctor + " expects 2 arguments)");
        return {a, b};
    }

    GroupExpr discrete() {
        cur_.expect('(', "'('");
        std::string name = cur_.ident();
        bool fg = false, perfect = false;
        while (cur_.try_consume(',')) {
            std::size_t off = cur_.offset();
            std::string flag = cur_.ident();
            if (flag == "fg")
                fg = true;
            else if (flag == "perfect")
                perfect = true;
            else
                throw ParseError(off, "'fg' or 'perfect'", "'" + flag + "'");
        }
        cur_.expect(')', "')'");
        return GroupExpr::discrete(name, fg, perfect);
    }

    GroupExpr prod(int depth) {
        cur_.expect('(', "'('");
        std::vector<GroupExpr> children;
        children.push_back(expr(depth + 1));
        while (cur_.try_consume(',')) children.push_back(expr(depth + 1));
        cur_.expect(')', "')'");
        return GroupExpr::prod(std::move(children));
    }

    GroupExpr ldp(int depth) {
        cur_.expect('(', "'('");
        GroupExpr c = expr(depth + 1);
        cur_.expect(',', "',' (LDP expects 2 arguments)");
        if (cur_.peek_alpha()) {
            std::size_t off = cur_.offset();
            std::string word = cur_.ident();
            if (word != "inf") throw ParseError(off, "'inf' or a number", "'" + word + "'");
            cur_.expect(')', "')' (LDP expects 2 arguments)");
            return GroupExpr::ldp_infinite(c);
        }
        std::uint64_t n = small_nat();
        cur_.expect(')', "')' (LDP expects 2 arguments)");
        return GroupExpr::ldp(c, n);
    }

    std::uint64_t small_nat() {
        std::size_t off = cur_.offset();
        BigInt n = cur_.number();
        if (n > std::uint64_t(1) << 32) throw ParseError(off, "a small natural number", n.str());
        return static_cast<std::uint64_t>(n);
    }

    Cursor cur_;
};

} // namespace detail

/// Parse an ordinal arithmetic expression over +, *, ^, parentheses, naturals
/// and w. Accepts non-canonical input and normalizes.
inline Ordinal parse_ordinal(std::string_view text) {
    return detail::OrdinalParser(text).parse();
}

inline std::string print_ordinal(const Ordinal& o) { return to_string(o); }

inline GroupExpr parse_group_expr(std::string_view text) {
    return detail::GroupExprParser(text).parse();
}

} // namespace elemrank
