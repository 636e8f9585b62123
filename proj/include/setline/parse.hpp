#pragma once

// Recursive-descent parser for the set-expression language. Syntax errors
// carry line/column and the expected tokens; semantic violations found while
// building nodes are re-thrown with the position of the offending construct.
// The parsed tree is returned normalized.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "setline/errors.hpp"
#include "setline/set_expr.hpp"

namespace setline {

namespace parse_detail {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;

    void bump(char c) {
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            bump(src_[pos_]);
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            tok_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            tok_.kind = Token::Ident;
            tok_.text.clear();
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
                tok_.text += src_[pos_];
                bump(src_[pos_]);
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok_.kind = Token::Number;
            tok_.text.clear();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                tok_.text += src_[pos_];
                bump(src_[pos_]);
            }
            return;
        }
        tok_.kind = Token::Punct;
        tok_.text = std::string(1, c);
        bump(c);
    }
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    SetExpr parse_expr_all() {
        SetExpr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::End)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
        return e;
    }

private:
    Lexer lex_;

    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = lex_.peek();
        throw ParseError("expected " + expected + ", found '" + t.text + "'", t.line, t.col);
    }

    void expect_punct(const char* p) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Punct || t.text != p) fail(std::string("'") + p + "'");
        lex_.take();
    }

    Rat parse_rat() {
        bool neg = false;
        const Token& t0 = lex_.peek();
        if (t0.kind == Token::Punct && t0.text == "-") {
            neg = true;
            lex_.take();
        }
        const Token& t = lex_.peek();
        if (t.kind != Token::Number) fail("an integer");
        BigInt num = BigInt::parse(lex_.take().text);
        BigInt den(1);
        const Token& slash = lex_.peek();
        if (slash.kind == Token::Punct && slash.text == "/") {
            lex_.take();
            const Token& d = lex_.peek();
            if (d.kind != Token::Number) fail("a denominator");
            Token dt = lex_.take();
            den = BigInt::parse(dt.text);
            if (den.is_zero()) throw ParseError("denominator must be nonzero", dt.line, dt.col);
        }
        Rat r(num, den);
        return neg ? -r : r;
    }

    std::string parse_keyword(std::vector<std::string> allowed) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Ident)
            for (const auto& k : allowed)
                if (t.text == k) return lex_.take().text;
        std::string exp;
        for (std::size_t i = 0; i < allowed.size(); ++i) {
            if (i) exp += " or ";
            exp += "'" + allowed[i] + "'";
        }
        fail(exp);
    }

    SetExpr parse_expr() {
        const Token& t = lex_.peek();
        if (t.kind != Token::Ident)
            fail("'fin', 'geom', 'tail', 'affine', 'union' or 'msum'");
        Token head = lex_.take();
        try {
            if (head.text == "fin") return parse_fin();
            if (head.text == "geom") return parse_geom();
            if (head.text == "tail") return parse_tail();
            if (head.text == "affine") return parse_affine();
            if (head.text == "union") return parse_nary(false);
            if (head.text == "msum") return parse_nary(true);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), head.line, head.col);
        }
        throw ParseError("unknown set constructor '" + head.text + "'", head.line, head.col);
    }

    SetExpr parse_fin() {
        expect_punct("{");
        std::vector<Rat> pts{parse_rat()};
        while (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
            lex_.take();
            pts.push_back(parse_rat());
        }
        expect_punct("}");
        return fin(std::move(pts));
    }

    SetExpr parse_geom() {
        expect_punct("(");
        Rat limit = parse_rat();
        expect_punct(",");
        Rat scale = parse_rat();
        expect_punct(",");
        Rat ratio = parse_rat();
        bool with_limit = true;
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
            lex_.take();
            with_limit = parse_keyword({"open", "closed"}) == "closed";
        }
        expect_punct(")");
        return geom(std::move(limit), std::move(scale), std::move(ratio), with_limit);
    }

    SetExpr parse_tail() {
        expect_punct("(");
        Rat start = parse_rat();
        expect_punct(",");
        Rat step = parse_rat();
        expect_punct(",");
        bool up = parse_keyword({"up", "down"}) == "up";
        expect_punct(")");
        return tail(std::move(start), std::move(step), up);
    }

    SetExpr parse_affine() {
        expect_punct("(");
        SetExpr child = parse_expr();
        expect_punct(",");
        Rat scale = parse_rat();
        expect_punct(",");
        Rat offset = parse_rat();
        expect_punct(")");
        return affine(std::move(child), std::move(scale), std::move(offset));
    }

    SetExpr parse_nary(bool msum) {
        expect_punct("(");
        std::vector<SetExpr> kids{parse_expr()};
        while (lex_.peek().kind == Token::Punct && lex_.peek().text == ",") {
            lex_.take();
            kids.push_back(parse_expr());
        }
        expect_punct(")");
        if (kids.size() < 2) fail("at least two children");
        return msum ? msum_of(std::move(kids)) : union_of(std::move(kids));
    }
};

} // namespace parse_detail

// Parse and normalize; throws ParseError with position on syntax errors, and
// on semantic violations detected while building or normalizing.
inline SetExpr parse(std::string_view text) {
    parse_detail::Parser p(text);
    SetExpr raw = p.parse_expr_all();
    try {
        return normalize(raw);
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

} // namespace setline
