#include "rcrs/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace rcrs {

Component Program::get(const std::string& name) const {
    auto it = defs.find(name);
    if (it == defs.end())
        throw Error(ErrorCode::UnboundVariable, "no component named " + name);
    return it->second;
}

Component Program::target() const {
    if (order.empty())
        throw Error(ErrorCode::SyntaxError, "file defines no component");
    return get(order.back());
}

namespace {

struct Tok {
    enum class K { Ident, Num, Sym, End };
    K kind = K::End;
    std::string text;
    int line = 1;
    int col = 1;
};

const std::vector<std::pair<std::string, std::string>> kUnicode = {
    {"∥", "||"}, {"∧", "&&"}, {"∨", "||"}, {"¬", "!"},      {"⇒", "->"},
    {"→", "->"}, {"⇔", "<->"}, {"≤", "<="}, {"≥", ">="},     {"≠", "!="},
    {"⊙", "@"},  {"∀", "forall"}, {"∃", "exists"}, {"′", "'"},
};

const std::vector<std::string> kSymbols = {"<->", "->", "&&", "||", "<=", ">=", "!=", "..", "(", ")", ",", ":", ".", ";",
                                           "=",   "{",  "}",  "[",  "]",  "'",  "@",  "+",  "-", "*", "/", "<", ">", "!"};

std::vector<Tok> lex(const std::string& src) {
    std::vector<Tok> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Tok::K::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
            out.push_back(t);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                    ++j;
            }
            t.kind = Tok::K::Num;
            t.text = src.substr(i, j - i);
            advance(j - i);
            out.push_back(t);
            continue;
        }
        bool matched = false;
        for (auto& [u, ascii] : kUnicode) {
            if (src.compare(i, u.size(), u) == 0) {
                t.kind = (ascii == "forall" || ascii == "exists") ? Tok::K::Ident : Tok::K::Sym;
                t.text = ascii;
                advance(u.size());
                out.push_back(t);
                matched = true;
                break;
            }
        }
        if (matched)
            continue;
        for (auto& s : kSymbols) {
            if (src.compare(i, s.size(), s) == 0) {
                t.kind = Tok::K::Sym;
                t.text = s;
                advance(s.size());
                out.push_back(t);
                matched = true;
                break;
            }
        }
        if (!matched)
            throw Error(ErrorCode::SyntaxError,
                        "line " + std::to_string(line) + ", column " + std::to_string(col) + ": unexpected character '" +
                            std::string(1, c) + "'");
    }
    Tok end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    Parser(const std::string& text, Program* prog) : toks_(lex(text)), prog_(prog) {}

    void program() {
        while (!at_end()) {
            if (accept_word("enum")) {
                enum_decl();
                continue;
            }
            expect_word("component");
            Tok name = expect_ident();
            expect("=");
            Component c = comp();
            if (prog_->defs.count(name.text))
                error(name, "component " + name.text + " defined twice");
            prog_->defs[name.text] = c;
            prog_->order.push_back(name.text);
        }
    }

    Component single_component() {
        Component c = comp();
        if (!at_end())
            error(peek(), "unexpected '" + peek().text + "' after component");
        return c;
    }

    Expr single_formula(const VarList& scope) {
        for (auto& v : scope)
            scope_.emplace_back(v.name, v.type);
        Expr e = top_formula();
        if (!at_end())
            error(peek(), "unexpected '" + peek().text + "' after formula");
        return e;
    }

    SemType single_type() {
        SemType t = type();
        if (!at_end())
            error(peek(), "unexpected '" + peek().text + "' after type");
        return t;
    }

private:
    std::vector<Tok> toks_;
    size_t pos_ = 0;
    Program* prog_;
    std::vector<std::pair<std::string, SemType>> scope_;

    const Tok& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::K::End; }

    [[noreturn]] void error(const Tok& t, const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) const {
        throw Error(code, "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + msg);
    }

    bool is_sym(const std::string& s, size_t k = 0) const {
        return peek(k).kind == Tok::K::Sym && peek(k).text == s;
    }
    bool is_word(const std::string& s, size_t k = 0) const {
        return peek(k).kind == Tok::K::Ident && peek(k).text == s;
    }
    bool accept(const std::string& s) {
        if (is_sym(s)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_word(const std::string& s) {
        if (is_word(s)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const std::string& s) {
        if (!accept(s))
            error(peek(), "expected '" + s + "' but found '" + describe(peek()) + "'");
    }
    void expect_word(const std::string& s) {
        if (!accept_word(s))
            error(peek(), "expected '" + s + "' but found '" + describe(peek()) + "'");
    }
    Tok expect_ident() {
        if (peek().kind != Tok::K::Ident)
            error(peek(), "expected identifier but found '" + describe(peek()) + "'");
        return toks_[pos_++];
    }
    static std::string describe(const Tok& t) { return t.kind == Tok::K::End ? "end of input" : t.text; }

    // ------------------------------------------------------------ declarations

    void enum_decl() {
        Tok name = expect_ident();
        expect("=");
        expect("{");
        std::vector<std::string> vals;
        do {
            Tok v = expect_ident();
            if (enum_value_type(v.text))
                error(v, "enum value " + v.text + " already declared");
            vals.push_back(v.text);
        } while (accept(","));
        expect("}");
        if (prog_->enums.count(name.text) || name.text == "bool" || name.text == "int" || name.text == "real" ||
            name.text == "unit")
            error(name, "type " + name.text + " already declared");
        try {
            prog_->enums[name.text] = SemType::enumeration(name.text, vals);
        } catch (const Error& e) {
            error(name, e.what(), ErrorCode::UnknownType);
        }
    }

    const SemType* enum_value_type(const std::string& v) const {
        if (!prog_)
            return nullptr;
        for (auto& [n, t] : prog_->enums)
            for (auto& x : t.values)
                if (x == v)
                    return &t;
        return nullptr;
    }

    long long int_literal() {
        bool neg = accept("-");
        if (peek().kind != Tok::K::Num || peek().text.find('.') != std::string::npos)
            error(peek(), "expected integer literal");
        long long v = std::stoll(toks_[pos_++].text);
        return neg ? -v : v;
    }

    SemType type() {
        Tok t = expect_ident();
        if (t.text == "bool")
            return SemType::boolean();
        if (t.text == "real")
            return SemType::real();
        if (t.text == "unit")
            return SemType::unit();
        if (t.text == "int") {
            if (accept("[")) {
                long long lo = int_literal();
                expect("..");
                long long hi = int_literal();
                expect("]");
                if (lo > hi)
                    error(t, "empty integer range", ErrorCode::UnknownType);
                return SemType::range(lo, hi);
            }
            return SemType::integer();
        }
        if (prog_) {
            auto it = prog_->enums.find(t.text);
            if (it != prog_->enums.end())
                return it->second;
        }
        error(t, "unknown type " + t.text, ErrorCode::UnknownType);
    }

    Signature signature() {
        Signature sig;
        auto decl = [&] {
            Tok n = expect_ident();
            expect(":");
            sig.push_back(Port{n.text, type()});
        };
        if (accept("(")) {
            if (accept(")"))
                return sig;
            do
                decl();
            while (accept(","));
            expect(")");
        } else {
            decl();
        }
        return sig;
    }

    // ------------------------------------------------------------ components

    Component comp() {
        Component c = par();
        while (accept(";"))
            c = serial_of(c, par());
        return c;
    }

    Component par() {
        Component c = unary_comp();
        while (accept("||"))
            c = parallel_of(c, unary_comp());
        return c;
    }

    Component unary_comp() {
        if (accept("(")) {
            Component c = comp();
            expect(")");
            return c;
        }
        Tok t = expect_ident();
        if (t.text == "fdbk") {
            expect("(");
            Component c = comp();
            expect(")");
            return fdbk_of(c);
        }
        if (t.text == "sts" || t.text == "stateless" || t.text == "det" || t.text == "stateless_det" || t.text == "qltl")
            return atom(atomic(t));
        if (!prog_ || !prog_->defs.count(t.text))
            error(t, "unknown component " + t.text, ErrorCode::UnboundVariable);
        return prog_->defs.at(t.text);
    }

    struct ScopeGuard {
        std::vector<std::pair<std::string, SemType>>& s;
        size_t n;
        ~ScopeGuard() { s.resize(n); }
    };

    void push_scope(const Signature& sig) {
        for (auto& p : sig)
            scope_.emplace_back(p.name, p.type);
    }

    Atomic atomic(const Tok& kw) {
        ScopeGuard g{scope_, scope_.size()};
        expect("(");
        Atomic a;
        if (kw.text == "sts") {
            Signature in = signature();
            expect(",");
            Signature out = signature();
            expect(",");
            Signature st = signature();
            expect(",");
            push_scope(in);
            push_scope(out);
            push_scope(st);
            Expr init = top_formula();
            expect(",");
            Expr trs = top_formula();
            a = make_sts(in, out, st, init, trs);
        } else if (kw.text == "stateless" || kw.text == "qltl") {
            Signature in = signature();
            expect(",");
            Signature out = signature();
            expect(",");
            push_scope(in);
            push_scope(out);
            Expr f = top_formula();
            a = kw.text == "qltl" ? make_qltl(in, out, f) : make_stateless(in, out, f);
        } else if (kw.text == "det") {
            Signature in = signature();
            expect(",");
            Signature st = signature();
            expect(",");
            std::vector<Value> inits = values(st);
            expect(",");
            push_scope(in);
            push_scope(st);
            Expr inpt = top_formula();
            expect(",");
            std::vector<Expr> nx = terms();
            expect(",");
            std::vector<Expr> outs = terms();
            a = make_det(in, st, inits, inpt, nx, outs);
        } else {
            Signature in = signature();
            expect(",");
            push_scope(in);
            Expr inpt = top_formula();
            expect(",");
            std::vector<Expr> outs = terms();
            a = make_stateless_det(in, inpt, outs);
        }
        expect(")");
        WfResult w = wf_atomic(*a);
        if (!w.ok)
            error(kw, "ill-formed " + kw.text + ": " + w.diagnostic, ErrorCode::WfError);
        return a;
    }

    Value value_for(const SemType& ty) {
        Tok t = peek();
        if (accept_word("true"))
            return Value::boolean(true);
        if (accept_word("false"))
            return Value::boolean(false);
        if (t.kind == Tok::K::Ident) {
            ++pos_;
            const SemType* et = enum_value_type(t.text);
            if (!et)
                error(t, "unknown constant " + t.text, ErrorCode::UnboundVariable);
            for (size_t i = 0; i < et->values.size(); ++i)
                if (et->values[i] == t.text)
                    return Value::symbol(t.text, (int)i);
        }
        if (accept("(")) {
            expect(")");
            return Value::unit();
        }
        bool neg = accept("-");
        if (peek().kind != Tok::K::Num)
            error(peek(), "expected a literal value");
        Rational q = parse_rational(toks_[pos_++].text);
        (void)ty;
        return Value::number(neg ? -q : q);
    }

    std::vector<Value> values(const Signature& st) {
        std::vector<Value> vs;
        if (st.size() == 1 && !is_sym("(")) {
            vs.push_back(value_for(st[0].type));
            return vs;
        }
        expect("(");
        if (accept(")"))
            return vs;
        do {
            const SemType ty = vs.size() < st.size() ? st[vs.size()].type : SemType::integer();
            vs.push_back(value_for(ty));
        } while (accept(","));
        expect(")");
        return vs;
    }

    std::vector<Expr> terms() {
        std::vector<Expr> ts;
        if (!is_sym("(")) {
            ts.push_back(formula());
            return ts;
        }
        expect("(");
        if (accept(")"))
            return ts;
        do
            ts.push_back(formula());
        while (accept(","));
        expect(")");
        return ts;
    }

    // ------------------------------------------------------------ formulas

    template <class F>
    Expr checked(const Tok& at, F f) {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::TypeMismatch)
                error(at, e.what(), ErrorCode::TypeMismatch);
            throw;
        }
    }

    Expr formula() { return iff_(); }

    Expr top_formula() {
        Tok t = peek();
        Expr e = formula();
        if (has_primed(e) && has_temporal(e))
            error(t, "formula mixes primed variables and temporal operators", ErrorCode::PrimedInTemporal);
        return e;
    }

    Expr iff_() {
        Expr l = imp_();
        while (is_sym("<->")) {
            Tok t = toks_[pos_++];
            Expr r = imp_();
            l = checked(t, [&] { return ex::iff(l, r); });
        }
        return l;
    }

    Expr imp_() {
        Expr l = or_();
        if (is_sym("->")) {
            Tok t = toks_[pos_++];
            Expr r = imp_();
            return checked(t, [&] { return ex::implies(l, r); });
        }
        return l;
    }

    Expr or_() {
        Tok t = peek();
        std::vector<Expr> xs{and_()};
        while (accept("||"))
            xs.push_back(and_());
        return checked(t, [&] { return ex::lor(xs); });
    }

    Expr and_() {
        Tok t = peek();
        std::vector<Expr> xs{until_()};
        while (accept("&&"))
            xs.push_back(until_());
        return checked(t, [&] { return ex::land(xs); });
    }

    Expr until_() {
        Expr l = unary_();
        if (is_word("U") || is_word("L")) {
            Tok t = toks_[pos_++];
            Expr r = until_();
            return checked(t, [&] { return t.text == "U" ? ex::until(l, r) : ex::leads(l, r); });
        }
        return l;
    }

    Expr unary_() {
        Tok t = peek();
        if (accept("!")) {
            Expr a = unary_();
            return checked(t, [&] { return ex::lnot(a); });
        }
        if (is_word("G") || is_word("F")) {
            ++pos_;
            Expr a = unary_();
            return checked(t, [&] { return t.text == "G" ? ex::globally(a) : ex::finally(a); });
        }
        if (is_word("forall") || is_word("exists")) {
            ++pos_;
            ScopeGuard g{scope_, scope_.size()};
            VarList vs;
            do {
                Tok n = expect_ident();
                expect(":");
                SemType ty = type();
                vs.push_back(Var{n.text, ty});
                scope_.emplace_back(n.text, ty);
            } while (accept(","));
            expect(".");
            Expr body = formula();
            return checked(t, [&] { return t.text == "forall" ? ex::forall(vs, body) : ex::exists(vs, body); });
        }
        return cmp_();
    }

    static bool rel_op(const std::string& s, Op& op) {
        static const std::map<std::string, Op> m = {{"=", Op::Eq}, {"!=", Op::Ne}, {"<", Op::Lt},
                                                     {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}};
        auto it = m.find(s);
        if (it == m.end())
            return false;
        op = it->second;
        return true;
    }

    Expr cmp_() {
        Expr first = add_();
        std::vector<Expr> chain;
        Expr left = first;
        Op op;
        while (peek().kind == Tok::K::Sym && rel_op(peek().text, op)) {
            Tok t = toks_[pos_++];
            Expr right = add_();
            chain.push_back(checked(t, [&] { return ex::cmp(op, left, right); }));
            left = right;
        }
        if (chain.empty())
            return first;
        return ex::land(chain);
    }

    Expr add_() {
        Expr l = mul_();
        while (is_sym("+") || is_sym("-")) {
            Tok t = toks_[pos_++];
            Expr r = mul_();
            l = checked(t, [&] { return t.text == "+" ? ex::add(l, r) : ex::sub(l, r); });
        }
        return l;
    }

    Expr mul_() {
        Expr l = neg_();
        while (is_sym("*") || is_sym("/")) {
            Tok t = toks_[pos_++];
            Expr r = neg_();
            l = checked(t, [&] { return t.text == "*" ? ex::mul(l, r) : ex::div(l, r); });
        }
        return l;
    }

    Expr neg_() {
        Tok t = peek();
        if (accept("-")) {
            if (peek().kind == Tok::K::Num) {
                Expr lit = primary();
                return ex::num(-lit->value.q, lit->type);
            }
            Expr a = neg_();
            return checked(t, [&] { return ex::neg(a); });
        }
        if (accept("@")) {
            Expr a = neg_();
            return ex::next(a);
        }
        return primary();
    }

    Expr primary() {
        Tok t = peek();
        if (t.kind == Tok::K::Num) {
            ++pos_;
            Rational q = parse_rational(t.text);
            return t.text.find('.') != std::string::npos ? ex::real(q) : ex::num(q, SemType::integer());
        }
        if (accept("(")) {
            Expr e = formula();
            expect(")");
            return e;
        }
        if (t.kind != Tok::K::Ident)
            error(t, "expected expression but found '" + describe(t) + "'");
        ++pos_;
        if (t.text == "true")
            return ex::tt();
        if (t.text == "false")
            return ex::ff();
        if (t.text == "if") {
            Expr c = formula();
            expect_word("then");
            Expr a = formula();
            expect_word("else");
            Expr b = formula();
            return checked(t, [&] { return ex::ite(c, a, b); });
        }
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == t.text) {
                if (accept("'"))
                    return ex::primed(t.text, it->second);
                return ex::var(t.text, it->second);
            }
        }
        if (const SemType* et = enum_value_type(t.text))
            return ex::symbol(t.text, *et);
        error(t, "unbound variable " + t.text, ErrorCode::UnboundVariable);
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    Program p;
    Parser ps(text, &p);
    ps.program();
    return p;
}

Program parse_program_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::SyntaxError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

Component parse_component(const std::string& text, const Program* env) {
    Program p = env ? *env : Program{};
    Parser ps(text, &p);
    return ps.single_component();
}

Expr parse_formula(const std::string& text, const VarList& scope, const Program* env) {
    Program p = env ? *env : Program{};
    Parser ps(text, &p);
    return ps.single_formula(scope);
}

SemType parse_type(const std::string& text, const Program* env) {
    Program p = env ? *env : Program{};
    Parser ps(text, &p);
    return ps.single_type();
}

}  // namespace rcrs
