#include "rcrs/smt.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace rcrs {

Vc make_vc(Expr goal, std::string origin) {
    Vc v;
    v.fragment = has_temporal(goal) ? Fragment::Temporal : Fragment::FirstOrder;
    v.goal = std::move(goal);
    v.origin = std::move(origin);
    return v;
}

namespace {

const std::set<std::string>& reserved() {
    static const std::set<std::string> r{"and",    "or",   "not",    "xor",  "ite",   "let",  "forall", "exists",
                                         "true",   "false", "div",   "mod",  "abs",   "distinct", "assert",
                                         "Int",    "Real", "Bool",   "to_real", "to_int", "is_int", "par",
                                         "_",      "!",    "as",     "match", "declare-const", "push", "pop"};
    return r;
}

}  // namespace

std::string smt_symbol(const std::string& name) {
    bool plain = !name.empty() && (std::isalpha((unsigned char)name[0]) || name[0] == '_');
    for (char c : name)
        plain = plain && (std::isalnum((unsigned char)c) || c == '_');
    if (plain && !reserved().count(name))
        return name;
    return "|" + name + "|";
}

namespace {

std::string sort_name(const SemType& t) {
    switch (t.tag) {
    case SemType::Tag::Bool: return "Bool";
    case SemType::Tag::Int:
    case SemType::Tag::IntRange: return "Int";
    case SemType::Tag::Real: return "Real";
    case SemType::Tag::Enum: return smt_symbol(t.name);
    case SemType::Tag::Unit: return "Unit";
    }
    return "?";
}

std::string num_literal(const Rational& q, bool real) {
    auto mag = [&](long long v) { return std::to_string(v < 0 ? -v : v) + (real ? ".0" : ""); };
    long long n = q.numerator(), d = q.denominator();
    std::string body = d == 1 ? mag(n) : "(/ " + mag(n) + " " + mag(d) + ")";
    return n < 0 ? "(- " + body + ")" : body;
}

std::string range_guard(const std::string& sym, const SemType& t) {
    return "(and (<= " + num_literal(Rational(t.lo), false) + " " + sym + ") (<= " + sym + " " +
           num_literal(Rational(t.hi), false) + "))";
}

class Emitter {
public:
    std::set<std::string> enums_seen;
    std::vector<SemType> enum_types;
    bool unit_seen = false;

    void note_type(const SemType& t) {
        if (t.tag == SemType::Tag::Enum && enums_seen.insert(t.name).second)
            enum_types.push_back(t);
        if (t.tag == SemType::Tag::Unit)
            unit_seen = true;
    }

    std::string term(const Expr& e, bool want_real = false) {
        std::string s = raw(e);
        if (want_real && e->type.is_integral())
            return "(to_real " + s + ")";
        return s;
    }

private:
    std::string raw(const Expr& e) {
        note_type(e->type);
        bool real = e->type.tag == SemType::Tag::Real;
        switch (e->op) {
        case Op::Var: return smt_symbol(e->name);
        case Op::Primed: return smt_symbol(e->name + "'");
        case Op::Const:
            switch (e->value.tag) {
            case Value::Tag::Bool: return e->value.b ? "true" : "false";
            case Value::Tag::Num: return num_literal(e->value.q, real);
            case Value::Tag::Sym: return smt_symbol(e->value.sym);
            case Value::Tag::Unit: return "unit_value";
            }
            break;
        case Op::Add: return "(+ " + term(e->args[0], real) + " " + term(e->args[1], real) + ")";
        case Op::Sub: return "(- " + term(e->args[0], real) + " " + term(e->args[1], real) + ")";
        case Op::Mul: return "(* " + term(e->args[0], real) + " " + term(e->args[1], real) + ")";
        case Op::Div:
            if (real)
                return "(/ " + term(e->args[0], true) + " " + term(e->args[1], true) + ")";
            return "(div " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Neg: return "(- " + term(e->args[0], real) + ")";
        case Op::Ite: {
            return "(ite " + term(e->args[0]) + " " + term(e->args[1], real) + " " + term(e->args[2], real) + ")";
        }
        case Op::Eq:
        case Op::Ne:
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge: {
            static const std::map<Op, std::string> names{{Op::Eq, "="}, {Op::Ne, "distinct"}, {Op::Lt, "<"},
                                                         {Op::Le, "<="}, {Op::Gt, ">"}, {Op::Ge, ">="}};
            bool mix = e->args[0]->type.tag == SemType::Tag::Real || e->args[1]->type.tag == SemType::Tag::Real;
            return "(" + names.at(e->op) + " " + term(e->args[0], mix) + " " + term(e->args[1], mix) + ")";
        }
        case Op::Not: return "(not " + term(e->args[0]) + ")";
        case Op::And:
        case Op::Or: {
            std::string s = e->op == Op::And ? "(and" : "(or";
            for (auto& a : e->args)
                s += " " + term(a);
            return s + ")";
        }
        case Op::Implies: return "(=> " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Iff: return "(= " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Forall:
        case Op::Exists: {
            note_type(e->var_type);
            std::string sym = smt_symbol(e->name);
            std::string body = term(e->args[0]);
            if (e->var_type.tag == SemType::Tag::IntRange) {
                std::string g = range_guard(sym, e->var_type);
                body = e->op == Op::Forall ? "(=> " + g + " " + body + ")" : "(and " + g + " " + body + ")";
            }
            return std::string(e->op == Op::Forall ? "(forall" : "(exists") + " ((" + sym + " " +
                   sort_name(e->var_type) + ")) " + body + ")";
        }
        default: break;
        }
        throw Error(ErrorCode::TemporalFragment, "temporal operator cannot be emitted: " + to_string(e));
    }
};

}  // namespace

std::string emit_smtlib(const Vc& vc) {
    if (vc.fragment == Fragment::Temporal || has_temporal(vc.goal))
        throw Error(ErrorCode::TemporalFragment, "temporal verification conditions have no SMT-LIB encoding");
    Emitter em;
    FreeVars fv = free_vars(vc.goal);
    std::map<std::string, SemType> types;
    for (auto& v : fv.vars) {
        types[v.name] = v.type;
        em.note_type(v.type);
    }
    std::string goal = em.term(vc.goal);

    std::ostringstream out;
    out << "(set-option :produce-models true)\n(set-logic ALL)\n";
    if (em.unit_seen)
        out << "(declare-datatypes ((Unit 0)) (((unit_value))))\n";
    for (auto& t : em.enum_types) {
        out << "(declare-datatypes ((" << smt_symbol(t.name) << " 0)) ((";
        for (size_t i = 0; i < t.values.size(); ++i)
            out << (i ? " " : "") << "(" << smt_symbol(t.values[i]) << ")";
        out << ")))\n";
    }
    std::set<std::string> now = free_names(vc.goal);
    std::set<std::string> primed = free_primed(vc.goal);
    std::vector<std::pair<std::string, SemType>> decls;
    for (auto& n : now)
        decls.emplace_back(n, types.at(n));
    for (auto& n : primed)
        decls.emplace_back(n + "'", types.at(n));
    std::sort(decls.begin(), decls.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto& [n, t] : decls)
        out << "(declare-const " << smt_symbol(n) << " " << sort_name(t) << ")\n";
    for (auto& [n, t] : decls)
        if (t.tag == SemType::Tag::IntRange)
            out << "(assert " << range_guard(smt_symbol(n), t) << ")\n";
    out << "(assert (not " << goal << "))\n(check-sat)\n";
    return out.str();
}

std::optional<SolverConfig> SolverConfig::from_env() {
    const char* s = std::getenv("RCRS_SMT_SOLVER");
    if (!s || !*s)
        return std::nullopt;
    SolverConfig c;
    std::istringstream in(s);
    std::string w;
    while (in >> w)
        c.argv.push_back(w);
    if (c.argv.empty())
        return std::nullopt;
    return c;
}

namespace {

// Minimal s-expression reader for get-value replies.
struct SExp {
    std::string atom;
    std::vector<SExp> list;
    bool is_list = false;
};

class SReader {
public:
    explicit SReader(const std::string& s) : s_(s) {}

    bool read(SExp& out) {
        skip();
        if (i_ >= s_.size())
            return false;
        if (s_[i_] == '(') {
            ++i_;
            out.is_list = true;
            while (true) {
                skip();
                if (i_ >= s_.size())
                    return false;
                if (s_[i_] == ')') {
                    ++i_;
                    return true;
                }
                SExp c;
                if (!read(c))
                    return false;
                out.list.push_back(std::move(c));
            }
        }
        if (s_[i_] == ')')
            return false;
        if (s_[i_] == '|') {
            size_t j = s_.find('|', i_ + 1);
            if (j == std::string::npos)
                return false;
            out.atom = s_.substr(i_ + 1, j - i_ - 1);
            i_ = j + 1;
            return true;
        }
        if (s_[i_] == '"') {
            size_t j = s_.find('"', i_ + 1);
            out.atom = s_.substr(i_, j == std::string::npos ? std::string::npos : j - i_ + 1);
            i_ = j == std::string::npos ? s_.size() : j + 1;
            return true;
        }
        size_t j = i_;
        while (j < s_.size() && !std::isspace((unsigned char)s_[j]) && s_[j] != '(' && s_[j] != ')')
            ++j;
        out.atom = s_.substr(i_, j - i_);
        i_ = j;
        return true;
    }

private:
    const std::string& s_;
    size_t i_ = 0;

    void skip() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_]))
            ++i_;
    }
};

std::optional<Rational> sexp_number(const SExp& e) {
    if (!e.is_list) {
        try {
            return parse_rational(e.atom);
        } catch (...) {
            return std::nullopt;
        }
    }
    if (e.list.size() == 2 && e.list[0].atom == "-") {
        auto v = sexp_number(e.list[1]);
        if (v)
            return -*v;
    }
    if (e.list.size() == 3 && e.list[0].atom == "/") {
        auto a = sexp_number(e.list[1]), b = sexp_number(e.list[2]);
        if (a && b && b->numerator() != 0)
            return *a / *b;
    }
    return std::nullopt;
}

std::optional<Value> sexp_value(const SExp& e, const SemType& t) {
    switch (t.tag) {
    case SemType::Tag::Bool:
        if (e.atom == "true" || e.atom == "false")
            return Value::boolean(e.atom == "true");
        return std::nullopt;
    case SemType::Tag::Enum:
        for (size_t i = 0; i < t.values.size(); ++i)
            if (t.values[i] == e.atom)
                return Value::symbol(e.atom, (int)i);
        return std::nullopt;
    case SemType::Tag::Unit: return Value::unit();
    default: {
        auto q = sexp_number(e);
        if (q)
            return Value::number(*q);
        return std::nullopt;
    }
    }
}

}  // namespace

SolverOutcome run_solver(const SolverConfig& cfg, const std::string& script0, const VarList& model_vars) {
    SolverOutcome res;
    std::string script = script0;
    if (!model_vars.empty()) {
        script += "(get-value (";
        for (size_t i = 0; i < model_vars.size(); ++i)
            script += (i ? " " : "") + smt_symbol(model_vars[i].name);
        script += "))\n";
    }
    script += "(exit)\n";

    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw Error(ErrorCode::SolverFailure, "pipe failed");
    pid_t pid = fork();
    if (pid < 0)
        throw Error(ErrorCode::SolverFailure, "fork failed");
    if (pid == 0) {
        dup2(to_child[0], 0);
        dup2(from_child[1], 1);
        int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0)
            dup2(devnull, 2);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        std::vector<char*> args;
        for (auto& a : cfg.argv)
            args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    signal(SIGPIPE, SIG_IGN);
    const char* p = script.data();
    size_t left = script.size();
    while (left > 0) {
        ssize_t n = write(to_child[1], p, left);
        if (n <= 0)
            break;
        p += n;
        left -= (size_t)n;
    }
    close(to_child[1]);

    auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(cfg.timeout_s);
    bool timed_out = false;
    char buf[4096];
    while (true) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        int ms = (int)std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
        pollfd pfd{from_child[0], POLLIN, 0};
        int rc = poll(&pfd, 1, ms);
        if (rc < 0 && errno == EINTR)
            continue;
        if (rc <= 0) {
            timed_out = rc == 0;
            if (rc == 0)
                continue;
            break;
        }
        ssize_t n = read(from_child[0], buf, sizeof buf);
        if (n <= 0)
            break;
        res.output.append(buf, (size_t)n);
    }
    close(from_child[0]);
    if (timed_out)
        kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    if (timed_out) {
        res.answer = SatAnswer::Timeout;
        return res;
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
        res.answer = SatAnswer::Failure;
        return res;
    }

    std::istringstream lines(res.output);
    std::string first;
    while (std::getline(lines, first)) {
        first.erase(first.find_last_not_of(" \r\t") + 1);
        if (!first.empty())
            break;
    }
    if (first == "sat")
        res.answer = SatAnswer::Sat;
    else if (first == "unsat")
        res.answer = SatAnswer::Unsat;
    else if (first == "unknown")
        res.answer = SatAnswer::Unknown;
    else
        res.answer = SatAnswer::Failure;

    if (res.answer == SatAnswer::Sat && !model_vars.empty()) {
        std::string rest((std::istreambuf_iterator<char>(lines)), std::istreambuf_iterator<char>());
        SReader rd(rest);
        SExp top;
        if (rd.read(top) && top.is_list) {
            for (auto& pair : top.list) {
                if (!pair.is_list || pair.list.size() != 2 || pair.list[0].is_list)
                    continue;
                for (auto& v : model_vars)
                    if (v.name == pair.list[0].atom) {
                        if (auto val = sexp_value(pair.list[1], v.type))
                            res.model[v.name] = *val;
                    }
            }
        }
    }
    return res;
}

}  // namespace rcrs
