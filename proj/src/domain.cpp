#include "rcrs/domain.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <regex>
#include <sstream>

namespace rcrs {

std::vector<Value> shrink_order(long long lo, long long hi) {
    std::vector<long long> xs;
    for (long long v = lo; v <= hi; ++v)
        xs.push_back(v);
    std::stable_sort(xs.begin(), xs.end(), [](long long a, long long b) {
        long long aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
        if (aa != bb)
            return aa < bb;
        return a < b;
    });
    std::vector<Value> r;
    for (long long v : xs)
        r.push_back(Value::integer(v));
    return r;
}

bool FiniteDomain::resolves(const SemType& t) const {
    return t.is_finite() || overrides.count(t.str()) ||
           (t.tag == SemType::Tag::IntRange && overrides.count("int"));
}

bool FiniteDomain::exact(const SemType& t) const { return t.is_finite() && !overrides.count(t.str()); }

void FiniteDomain::set(const SemType& t, std::vector<Value> vals) {
    overrides[t.str()] = std::move(vals);
    cache_.clear();
}

const std::vector<Value>& FiniteDomain::values(const SemType& t) const {
    std::string key = t.str();
    if (auto it = overrides.find(key); it != overrides.end())
        return it->second;
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    std::vector<Value> vals;
    switch (t.tag) {
    case SemType::Tag::Bool: vals = {Value::boolean(false), Value::boolean(true)}; break;
    case SemType::Tag::IntRange:
        if (t.hi - t.lo > 100000)
            throw Error(ErrorCode::ExplosionGuard, "range " + key + " too large to enumerate");
        vals = shrink_order(t.lo, t.hi);
        break;
    case SemType::Tag::Enum:
        for (size_t i = 0; i < t.values.size(); ++i)
            vals.push_back(Value::symbol(t.values[i], (int)i));
        break;
    case SemType::Tag::Unit: vals = {Value::unit()}; break;
    case SemType::Tag::Int:
    case SemType::Tag::Real: throw Error(ErrorCode::DomainNotFinite, "no finite domain for type " + key);
    }
    return cache_[key] = std::move(vals);
}

FiniteDomain FiniteDomain::parse(const std::string& text) {
    FiniteDomain d;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    static const std::regex re(R"(^\s*domain\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*\{(.*)\}\s*$)");
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::smatch m;
        if (!std::regex_match(line, m, re))
            throw Error(ErrorCode::SyntaxError, "domain file line " + std::to_string(lineno) + ": expected `domain T = {...}`");
        std::string ty = m[1];
        if (ty != "int" && ty != "real")
            throw Error(ErrorCode::UnknownType, "domain file line " + std::to_string(lineno) + ": only int and real take overrides");
        std::vector<Value> vals;
        std::string body = m[2];
        std::stringstream items(body);
        std::string item;
        while (std::getline(items, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t\r") + 1);
            if (item.empty())
                continue;
            try {
                if (auto dd = item.find(".."); dd != std::string::npos) {
                    long long lo = std::stoll(item.substr(0, dd));
                    long long hi = std::stoll(item.substr(dd + 2));
                    if (hi - lo > 100000)
                        throw Error(ErrorCode::ExplosionGuard, "domain range " + item + " too large");
                    for (auto& v : shrink_order(lo, hi))
                        vals.push_back(v);
                } else {
                    Rational q = parse_rational(item);
                    if (ty == "int" && q.denominator() != 1)
                        throw Error(ErrorCode::TypeMismatch, "non-integer value " + item + " for int");
                    vals.push_back(Value::number(q));
                }
            } catch (const std::invalid_argument&) {
                throw Error(ErrorCode::SyntaxError, "domain file line " + std::to_string(lineno) + ": bad value " + item);
            }
        }
        if (vals.empty())
            throw Error(ErrorCode::SyntaxError, "domain file line " + std::to_string(lineno) + ": empty value list");
        d.overrides[ty] = vals;
    }
    return d;
}

FiniteDomain FiniteDomain::load(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::SyntaxError, "cannot read domain file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

namespace {

void harvest(const Expr& e, bool integral, std::set<Rational>& out) {
    if (e->op == Op::Const && e->value.tag == Value::Tag::Num) {
        if (!integral || e->value.q.denominator() == 1) {
            out.insert(e->value.q);
            out.insert(e->value.q - 1);
            out.insert(e->value.q + 1);
        }
    }
    for (auto& a : e->args)
        harvest(a, integral, out);
}

}  // namespace

std::vector<Value> candidate_values(const SemType& t, const FiniteDomain& dom, const Expr& hint) {
    if (dom.resolves(t))
        return dom.values(t);
    std::set<Rational> qs{Rational(0)};
    if (hint)
        harvest(hint, t.is_integral(), qs);
    std::vector<Rational> v(qs.begin(), qs.end());
    std::stable_sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) {
        Rational aa = abs(a), bb = abs(b);
        if (aa != bb)
            return aa < bb;
        return a < b;
    });
    std::vector<Value> r;
    for (auto& q : v)
        r.push_back(Value::number(q));
    return r;
}

size_t product_size(const std::vector<size_t>& sizes) {
    size_t p = 1;
    for (size_t s : sizes) {
        if (s == 0)
            return 0;
        if (p > SIZE_MAX / s)
            return SIZE_MAX;
        p *= s;
    }
    return p;
}

}  // namespace rcrs
