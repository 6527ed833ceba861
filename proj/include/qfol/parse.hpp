#pragma once

#include "qfol/foliation.hpp"

namespace qfol {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l), col(c)
    {
    }
};

namespace parse_detail {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next()
    {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void error(const std::string& msg) const
    {
        throw ParseError(tok_.line, tok_.col, msg);
    }

private:
    void advance()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t s = pos_;
            while (pos_ < src_.size() &&
                   (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(s, pos_ - s);
        } else if (isdigit(static_cast<unsigned char>(c))) {
            size_t s = pos_;
            while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            tok_.kind = Token::Number;
            tok_.text = src_.substr(s, pos_ - s);
        } else {
            tok_.kind = Token::Punct;
            tok_.text = std::string(1, c);
            ++pos_;
        }
        col_ += static_cast<int>(tok_.text.size());
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

} // namespace parse_detail

/// Expression evaluator over the ring variables plus a set of module symbols
/// (derivation names for vector fields, generator names for elements). The
/// value is a polynomial in n + m formal variables; callers split off the
/// symbol-linear part.
class ExprParser {
public:
    ExprParser(parse_detail::Lexer& lex, std::vector<std::string> vars,
               std::vector<std::string> symbols)
        : lex_(lex), vars_(std::move(vars)), symbols_(std::move(symbols)),
          total_(vars_.size() + symbols_.size())
    {
    }

    Poly parse_expression()
    {
        Poly r = parse_term();
        while (is_punct("+") || is_punct("-")) {
            std::string op = lex_.next().text;
            Poly t = parse_term();
            r = (op == "+") ? r + t : r - t;
        }
        return r;
    }

    /// Split into coefficients per symbol; terms must be symbol-linear.
    /// With allow_constant the symbol-free part is returned in `constant`.
    std::vector<Poly> split_linear(const Poly& value, bool allow_constant, Poly* constant)
    {
        std::vector<Poly> out(symbols_.size(), Poly(vars_.size()));
        if (constant)
            *constant = Poly(vars_.size());
        for (const auto& term : value.terms()) {
            int symdeg = 0;
            size_t which = 0;
            for (size_t s = 0; s < symbols_.size(); ++s) {
                symdeg += static_cast<int>(term.mono.exps[vars_.size() + s]);
                if (term.mono.exps[vars_.size() + s] > 0)
                    which = s;
            }
            Monomial base(vars_.size());
            for (size_t v = 0; v < vars_.size(); ++v)
                base.exps[v] = term.mono.exps[v];
            if (symdeg == 0) {
                if (!allow_constant)
                    lex_.error("term without a basis symbol in a linear expression");
                *constant += Poly::monomial(vars_.size(), base, term.coef);
            } else if (symdeg == 1) {
                out[which] += Poly::monomial(vars_.size(), base, term.coef);
            } else {
                lex_.error("expression is not linear in the basis symbols");
            }
        }
        return out;
    }

    Poly require_scalar(const Poly& value)
    {
        Poly constant(vars_.size());
        for (const auto& term : value.terms()) {
            for (size_t s = 0; s < symbols_.size(); ++s)
                if (term.mono.exps[vars_.size() + s] > 0)
                    lex_.error("basis symbol used in a scalar expression");
            Monomial base(vars_.size());
            for (size_t v = 0; v < vars_.size(); ++v)
                base.exps[v] = term.mono.exps[v];
            constant += Poly::monomial(vars_.size(), base, term.coef);
        }
        return constant;
    }

private:
    bool is_punct(const std::string& p) const
    {
        return lex_.peek().kind == parse_detail::Token::Punct && lex_.peek().text == p;
    }

    Poly parse_term()
    {
        bool neg = false;
        while (is_punct("+") || is_punct("-")) {
            if (lex_.next().text == "-")
                neg = !neg;
        }
        Poly r = parse_factor();
        while (is_punct("*")) {
            lex_.next();
            r *= parse_factor();
        }
        return neg ? -r : r;
    }

    Poly parse_factor()
    {
        Poly base = parse_base();
        if (is_punct("^")) {
            lex_.next();
            if (lex_.peek().kind != parse_detail::Token::Number)
                lex_.error("expected exponent");
            unsigned e = static_cast<unsigned>(std::stoul(lex_.next().text));
            Poly r = Poly::constant(total_, 1);
            for (unsigned i = 0; i < e; ++i)
                r *= base;
            return r;
        }
        return base;
    }

    Poly parse_base()
    {
        using parse_detail::Token;
        const Token& t = lex_.peek();
        if (t.kind == Token::Number) {
            std::string num = lex_.next().text;
            if (is_punct("/")) {
                lex_.next();
                if (lex_.peek().kind != Token::Number)
                    lex_.error("expected denominator");
                std::string den = lex_.next().text;
                return Poly::constant(total_, Rational(Integer(num), Integer(den)));
            }
            return Poly::constant(total_, Rational(Integer(num)));
        }
        if (t.kind == Token::Ident) {
            std::string name = lex_.next().text;
            for (size_t v = 0; v < vars_.size(); ++v)
                if (vars_[v] == name)
                    return Poly::variable(total_, v);
            for (size_t s = 0; s < symbols_.size(); ++s)
                if (symbols_[s] == name)
                    return Poly::variable(total_, vars_.size() + s);
            lex_.error("unknown symbol '" + name + "'");
        }
        if (is_punct("(")) {
            lex_.next();
            Poly r = parse_expression();
            if (!is_punct(")"))
                lex_.error("expected ')'");
            lex_.next();
            return r;
        }
        lex_.error("expected a number, symbol or parenthesized expression");
    }

    parse_detail::Lexer& lex_;
    std::vector<std::string> vars_;
    std::vector<std::string> symbols_;
    size_t total_;
};

/// Names of the basis derivations: dx1..dxn, plus dx, dy, dz for n <= 3.
inline std::vector<std::string> derivation_symbols(const std::vector<std::string>& vars)
{
    std::vector<std::string> ders;
    for (size_t i = 1; i <= vars.size(); ++i)
        ders.push_back("dx" + std::to_string(i));
    return ders;
}

inline std::vector<std::string> derivation_aliases(const std::vector<std::string>& vars)
{
    if (vars.size() <= 3) {
        std::vector<std::string> a = {"dx", "dy", "dz"};
        a.resize(vars.size());
        return a;
    }
    return {};
}

struct SessionInput {
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, Foliation>> foliations;
    std::vector<std::pair<std::string, AnchoredComplex>> complexes;
};

namespace parse_detail {

inline void expect_punct(Lexer& lex, const std::string& p)
{
    if (lex.peek().kind != Token::Punct || lex.peek().text != p)
        lex.error("expected '" + p + "'");
    lex.next();
}

inline std::string expect_ident(Lexer& lex, const std::string& what)
{
    if (lex.peek().kind != Token::Ident)
        lex.error("expected " + what);
    return lex.next().text;
}

inline bool at_keyword(Lexer& lex, const std::string& kw)
{
    return lex.peek().kind == Token::Ident && lex.peek().text == kw;
}

/// Vector-field expression: linear in the derivation symbols (aliases
/// dx, dy, dz accepted for n <= 3 and normalized to dx1..dxn).
inline VectorField parse_vf(Lexer& lex, const std::vector<std::string>& vars)
{
    std::vector<std::string> symbols = derivation_symbols(vars);
    std::vector<std::string> alias = derivation_aliases(vars);
    std::vector<std::string> all = symbols;
    for (const auto& a : alias)
        all.push_back(a);
    ExprParser ep(lex, vars, all);
    Poly value = ep.parse_expression();
    std::vector<Poly> comps = ep.split_linear(value, false, nullptr);
    PolyVector v(vars.size(), vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
        v[i] = comps[i];
        if (!alias.empty())
            v[i] += comps[vars.size() + i];
    }
    return VectorField(std::move(v));
}

inline std::vector<std::vector<Poly>> parse_matrix(Lexer& lex,
                                                   const std::vector<std::string>& vars)
{
    std::vector<std::vector<Poly>> rows;
    expect_punct(lex, "[");
    if (lex.peek().kind == Token::Punct && lex.peek().text == "]") {
        lex.next();
        return rows;
    }
    while (true) {
        expect_punct(lex, "[");
        std::vector<Poly> row;
        if (!(lex.peek().kind == Token::Punct && lex.peek().text == "]")) {
            while (true) {
                ExprParser ep(lex, vars, {});
                row.push_back(ep.require_scalar(ep.parse_expression()));
                if (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
                    lex.next();
                    continue;
                }
                break;
            }
        }
        expect_punct(lex, "]");
        rows.push_back(std::move(row));
        if (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
            lex.next();
            continue;
        }
        break;
    }
    expect_punct(lex, "]");
    return rows;
}

} // namespace parse_detail

/// Parse a session file: ring declaration, foliation and complex blocks.
/// Foliation invariants (involutivity) are checked eagerly; a failure is a
/// parse-level error with the witness pair in the message.
inline SessionInput parse_input(const std::string& text)
{
    using namespace parse_detail;
    SessionInput in;
    Lexer lex(text);
    if (!at_keyword(lex, "ring"))
        lex.error("session must start with a ring declaration");
    lex.next();
    while (true) {
        std::string v = expect_ident(lex, "variable name");
        for (const auto& existing : in.vars)
            if (existing == v)
                lex.error("duplicate variable '" + v + "'");
        in.vars.push_back(v);
        if (lex.peek().kind == Token::Punct && lex.peek().text == ",") {
            lex.next();
            continue;
        }
        break;
    }
    expect_punct(lex, ";");
    size_t n = in.vars.size();

    while (lex.peek().kind != Token::End) {
        if (at_keyword(lex, "foliation")) {
            lex.next();
            std::string name = expect_ident(lex, "foliation name");
            expect_punct(lex, "{");
            std::vector<VectorField> gens;
            std::vector<std::string> gnames;
            while (at_keyword(lex, "gen")) {
                lex.next();
                std::string gname = expect_ident(lex, "generator name");
                expect_punct(lex, "=");
                gens.push_back(parse_vf(lex, in.vars));
                gnames.push_back(gname);
                expect_punct(lex, ";");
            }
            expect_punct(lex, "}");
            Foliation F(gens, n, gnames);
            InvolutivityCertificate inv = check_involutive(F);
            if (!inv.cert.ok) {
                std::string detail = inv.cert.lines.empty() ? "" : inv.cert.lines.front();
                throw ParseError(lex.peek().line, lex.peek().col,
                                 "foliation '" + name + "' is not involutive; " + detail);
            }
            in.foliations.push_back({name, std::move(F)});
        } else if (at_keyword(lex, "complex")) {
            lex.next();
            std::string name = expect_ident(lex, "complex name");
            expect_punct(lex, "{");
            if (!at_keyword(lex, "ranks"))
                lex.error("complex block must start with ranks");
            lex.next();
            expect_punct(lex, "=");
            std::vector<size_t> ranks;
            expect_punct(lex, "[");
            while (lex.peek().kind == Token::Number) {
                ranks.push_back(std::stoul(lex.next().text));
                if (lex.peek().kind == Token::Punct && lex.peek().text == ",")
                    lex.next();
            }
            expect_punct(lex, "]");
            expect_punct(lex, ";");
            std::vector<PolyMatrix> diffs;
            for (size_t i = 1; i < ranks.size(); ++i)
                diffs.emplace_back(ranks[i - 1], ranks[i], n);
            PolyMatrix anchor(n, ranks.empty() ? 0 : ranks[0], n);
            while (lex.peek().kind == Token::Ident) {
                std::string key = lex.next().text;
                expect_punct(lex, "=");
                auto rows = parse_matrix(lex, in.vars);
                expect_punct(lex, ";");
                auto fill = [&](PolyMatrix& m) {
                    if (rows.size() != m.rows())
                        lex.error("matrix '" + key + "' has " + std::to_string(rows.size()) +
                                  " rows, expected " + std::to_string(m.rows()));
                    for (size_t r = 0; r < rows.size(); ++r) {
                        if (rows[r].size() != m.cols())
                            lex.error("matrix '" + key + "' row " + std::to_string(r) +
                                      " has wrong length");
                        for (size_t c = 0; c < rows[r].size(); ++c)
                            m.at(r, c) = rows[r][c];
                    }
                };
                if (key == "anchor") {
                    fill(anchor);
                } else if (key.size() > 1 && key[0] == 'd') {
                    size_t i = std::stoul(key.substr(1));
                    if (i < 1 || i >= ranks.size())
                        lex.error("differential index out of range in '" + key + "'");
                    fill(diffs[i - 1]);
                } else {
                    lex.error("unknown matrix '" + key + "' in complex block");
                }
            }
            expect_punct(lex, "}");
            AnchoredComplex ac(GradedComplex::build(n, ranks, diffs), anchor);
            Certificate v = ac.validate();
            if (!v.ok)
                throw ParseError(lex.peek().line, lex.peek().col,
                                 "complex '" + name + "' is invalid; " +
                                     (v.lines.empty() ? "" : v.lines.front()));
            in.complexes.push_back({name, std::move(ac)});
        } else {
            lex.error("expected 'foliation' or 'complex'");
        }
    }
    return in;
}

} // namespace qfol
