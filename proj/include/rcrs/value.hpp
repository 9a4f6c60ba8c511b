#pragma once

#include <boost/rational.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rcrs {

enum class ErrorCode {
    TypeMismatch,
    PrimedInTemporal,
    SyntaxError,
    UnknownType,
    UnboundVariable,
    EmptyFeedbackSignature,
    NotAbove,
    WfError,
    SignatureMismatch,
    NotDecomposable,
    KindError,
    NotDeterministic,
    NotLoopFree,
    FeedbackOnNonDecomposable,
    TemporalFragment,
    DomainNotFinite,
    ExplosionGuard,
    NonTemporalMisuse,
    UnknownBlock,
    BadParams,
    AlgebraicLoop,
    PortMismatch,
    SolverFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

using Rational = boost::rational<long long>;

struct SemType {
    enum class Tag { Bool, Int, IntRange, Real, Enum, Unit };

    Tag tag = Tag::Bool;
    long long lo = 0;
    long long hi = 0;
    std::string name;                 // enum type name
    std::vector<std::string> values;  // enum constants, in declaration order

    static SemType boolean() { return SemType{}; }
    static SemType integer();
    static SemType range(long long lo, long long hi);
    static SemType real();
    static SemType enumeration(std::string name, std::vector<std::string> values);
    static SemType unit();

    bool is_numeric() const { return tag == Tag::Int || tag == Tag::IntRange || tag == Tag::Real; }
    bool is_integral() const { return tag == Tag::Int || tag == Tag::IntRange; }
    // Finite by declaration (no domain override needed).
    bool is_finite() const { return tag == Tag::Bool || tag == Tag::IntRange || tag == Tag::Enum || tag == Tag::Unit; }

    // Concrete syntax: bool, int, int[lo..hi], real, unit, or the enum name.
    std::string str() const;

    bool operator==(const SemType& o) const;
    bool operator!=(const SemType& o) const { return !(*this == o); }
    bool operator<(const SemType& o) const { return str() < o.str(); }
};

// Sort-level compatibility: IntRange and Int share the integer sort.
bool same_sort(const SemType& a, const SemType& b);

struct Value {
    enum class Tag { Bool, Num, Sym, Unit };

    Tag tag = Tag::Unit;
    bool b = false;
    Rational q;
    std::string sym;
    int idx = 0;

    static Value boolean(bool v);
    static Value number(Rational v);
    static Value integer(long long v) { return number(Rational(v)); }
    static Value symbol(std::string name, int index);
    static Value unit() { return Value{}; }

    bool is_integer() const { return tag == Tag::Num && q.denominator() == 1; }

    std::string str() const;

    bool operator==(const Value& o) const;
    bool operator!=(const Value& o) const { return !(*this == o); }
    bool operator<(const Value& o) const;
};

// Parse a rational literal such as "12", "-3", "0.25" or "1/3".
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& q);

// Euclidean integer division and remainder (matches SMT-LIB div/mod).
long long euclid_div(long long a, long long b);

}  // namespace rcrs
