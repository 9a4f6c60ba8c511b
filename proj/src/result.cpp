#include "rcrs/result.hpp"

namespace rcrs {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Proven: return "Proven";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

std::string slots_str(const std::vector<Slot>& slots) {
    std::string s;
    for (auto& sl : slots) {
        if (!s.empty())
            s += "; ";
        s += sl.name + ":";
        for (size_t i = 0; i < sl.values.size(); ++i)
            s += (i ? "," : "") + sl.values[i].str();
    }
    return s;
}

}  // namespace

std::string Witness::str() const {
    std::string s;
    if (!kind.empty())
        s += kind;
    if (!inputs.empty())
        s += (s.empty() ? "" : " | ") + std::string("inputs ") + slots_str(inputs);
    if (!outputs.empty())
        s += (s.empty() ? "" : " | ") + std::string("outputs ") + slots_str(outputs);
    for (auto& [n, w] : lasso)
        s += (s.empty() ? "" : " | ") + n + " = " + w.str();
    if (illegal_at >= 0)
        s += (s.empty() ? "" : " | ") + std::string("illegal at step ") + std::to_string(illegal_at);
    return s;
}

CheckResult CheckResult::proven(std::string method, std::string reason) {
    CheckResult r;
    r.verdict = Verdict::Proven;
    r.method = std::move(method);
    r.reason = std::move(reason);
    return r;
}

CheckResult CheckResult::refuted(std::string method, std::optional<Witness> w, std::string reason) {
    CheckResult r;
    r.verdict = Verdict::Refuted;
    r.method = std::move(method);
    r.witness = std::move(w);
    r.reason = std::move(reason);
    return r;
}

CheckResult CheckResult::unknown(std::string reason) {
    CheckResult r;
    r.verdict = Verdict::Unknown;
    r.reason = std::move(reason);
    return r;
}

}  // namespace rcrs
