#include "rcrs/value.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>

namespace rcrs {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::PrimedInTemporal: return "PrimedInTemporal";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::EmptyFeedbackSignature: return "EmptyFeedbackSignature";
    case ErrorCode::NotAbove: return "NotAbove";
    case ErrorCode::WfError: return "WfError";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::NotDecomposable: return "NotDecomposable";
    case ErrorCode::KindError: return "KindError";
    case ErrorCode::NotDeterministic: return "NotDeterministic";
    case ErrorCode::NotLoopFree: return "NotLoopFree";
    case ErrorCode::FeedbackOnNonDecomposable: return "FeedbackOnNonDecomposable";
    case ErrorCode::TemporalFragment: return "TemporalFragment";
    case ErrorCode::DomainNotFinite: return "DomainNotFinite";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::NonTemporalMisuse: return "NonTemporalMisuse";
    case ErrorCode::UnknownBlock: return "UnknownBlock";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::AlgebraicLoop: return "AlgebraicLoop";
    case ErrorCode::PortMismatch: return "PortMismatch";
    case ErrorCode::SolverFailure: return "SolverFailure";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& msg)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

SemType SemType::integer() {
    SemType t;
    t.tag = Tag::Int;
    return t;
}

SemType SemType::range(long long lo, long long hi) {
    if (lo > hi)
        throw Error(ErrorCode::UnknownType, "empty integer range [" + std::to_string(lo) + ".." + std::to_string(hi) + "]");
    SemType t;
    t.tag = Tag::IntRange;
    t.lo = lo;
    t.hi = hi;
    return t;
}

SemType SemType::real() {
    SemType t;
    t.tag = Tag::Real;
    return t;
}

SemType SemType::enumeration(std::string name, std::vector<std::string> values) {
    if (values.empty())
        throw Error(ErrorCode::UnknownType, "enum " + name + " has no values");
    std::set<std::string> seen;
    for (auto& v : values)
        if (!seen.insert(v).second)
            throw Error(ErrorCode::UnknownType, "enum " + name + " repeats value " + v);
    SemType t;
    t.tag = Tag::Enum;
    t.name = std::move(name);
    t.values = std::move(values);
    return t;
}

SemType SemType::unit() {
    SemType t;
    t.tag = Tag::Unit;
    return t;
}

std::string SemType::str() const {
    switch (tag) {
    case Tag::Bool: return "bool";
    case Tag::Int: return "int";
    case Tag::IntRange: return "int[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
    case Tag::Real: return "real";
    case Tag::Enum: return name;
    case Tag::Unit: return "unit";
    }
    return "?";
}

bool SemType::operator==(const SemType& o) const {
    if (tag != o.tag)
        return false;
    switch (tag) {
    case Tag::IntRange: return lo == o.lo && hi == o.hi;
    case Tag::Enum: return name == o.name;
    default: return true;
    }
}

bool same_sort(const SemType& a, const SemType& b) {
    if (a.is_integral() && b.is_integral())
        return true;
    return a == b;
}

Value Value::boolean(bool v) {
    Value r;
    r.tag = Tag::Bool;
    r.b = v;
    return r;
}

Value Value::number(Rational v) {
    Value r;
    r.tag = Tag::Num;
    r.q = v;
    return r;
}

Value Value::symbol(std::string name, int index) {
    Value r;
    r.tag = Tag::Sym;
    r.sym = std::move(name);
    r.idx = index;
    return r;
}

std::string rational_str(const Rational& q) {
    if (q.denominator() == 1)
        return std::to_string(q.numerator());
    // finite decimal when the denominator only has factors 2 and 5
    long long d = q.denominator();
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d == 1) {
        int digits = std::max(twos, fives);
        long long scale = 1;
        for (int i = 0; i < digits; ++i)
            scale *= 10;
        long long scaled = q.numerator() * (scale / q.denominator());
        bool neg = scaled < 0;
        unsigned long long mag = neg ? -scaled : scaled;
        std::string whole = std::to_string(mag / scale);
        std::string frac = std::to_string(mag % scale);
        while ((int)frac.size() < digits)
            frac = "0" + frac;
        return (neg ? "-" : "") + whole + "." + frac;
    }
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string Value::str() const {
    switch (tag) {
    case Tag::Bool: return b ? "true" : "false";
    case Tag::Num: return rational_str(q);
    case Tag::Sym: return sym;
    case Tag::Unit: return "()";
    }
    return "?";
}

bool Value::operator==(const Value& o) const {
    if (tag != o.tag)
        return false;
    switch (tag) {
    case Tag::Bool: return b == o.b;
    case Tag::Num: return q == o.q;
    case Tag::Sym: return sym == o.sym;
    case Tag::Unit: return true;
    }
    return false;
}

bool Value::operator<(const Value& o) const {
    if (tag != o.tag)
        return tag < o.tag;
    switch (tag) {
    case Tag::Bool: return b < o.b;
    case Tag::Num: return q < o.q;
    case Tag::Sym: return idx != o.idx ? idx < o.idx : sym < o.sym;
    case Tag::Unit: return false;
    }
    return false;
}

Rational parse_rational(const std::string& text) {
    static const std::regex re(R"(^-?(\d+(/\d+|\.\d*)?|\.\d+)$)");
    if (!std::regex_match(text, re))
        throw Error(ErrorCode::SyntaxError, "not a number: '" + text + "'");
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            long long d = std::stoll(text.substr(slash + 1));
            if (d == 0)
                throw Error(ErrorCode::SyntaxError, "zero denominator in '" + text + "'");
            return Rational(std::stoll(text.substr(0, slash)), d);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos)
            return Rational(std::stoll(text));
        bool neg = text[0] == '-';
        std::string whole = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
        std::string frac = text.substr(dot + 1);
        if (frac.size() > 17)
            throw std::out_of_range("fraction");
        long long scale = 1;
        for (size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        long long num = (whole.empty() ? 0 : std::stoll(whole)) * scale + (frac.empty() ? 0 : std::stoll(frac));
        return Rational(neg ? -num : num, scale);
    } catch (const std::out_of_range&) {
        throw Error(ErrorCode::SyntaxError, "number out of range: '" + text + "'");
    }
}

long long euclid_div(long long a, long long b) {
    long long q = a / b;
    long long r = a % b;
    if (r < 0)
        q += (b > 0) ? -1 : 1;
    return q;
}

}  // namespace rcrs
