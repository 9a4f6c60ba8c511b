#include "rcrs/cli.hpp"

#include "rcrs/analysis.hpp"
#include "rcrs/compose.hpp"
#include "rcrs/diagram.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"
#include "rcrs/parser.hpp"
#include "rcrs/properties.hpp"
#include "rcrs/simplify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rcrs {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_for(Verdict v) {
    switch (v) {
    case Verdict::Proven: return ExitProven;
    case Verdict::Refuted: return ExitRefuted;
    case Verdict::Unknown: return ExitUnknown;
    }
    return ExitInternal;
}

int exit_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownType:
    case ErrorCode::UnboundVariable:
    case ErrorCode::TypeMismatch:
    case ErrorCode::PrimedInTemporal:
    case ErrorCode::WfError:
    case ErrorCode::SignatureMismatch:
    case ErrorCode::EmptyFeedbackSignature:
    case ErrorCode::UnknownBlock:
    case ErrorCode::BadParams:
    case ErrorCode::PortMismatch:
    case ErrorCode::AlgebraicLoop:
    case ErrorCode::DomainNotFinite:
        return ExitUsage;
    default: return ExitInternal;
    }
}

std::string slots_line(const std::vector<Slot>& slots) {
    std::string s;
    for (size_t i = 0; i < slots.size(); ++i) {
        s += (i ? "; " : "") + slots[i].name + ":";
        for (size_t k = 0; k < slots[i].values.size(); ++k)
            s += (k ? "," : "") + slots[i].values[k].str();
    }
    return s;
}

void print_result(std::ostream& out, const CheckResult& r) {
    out << "verdict: " << verdict_name(r.verdict) << "\n";
    if (!r.method.empty())
        out << "method: " << r.method << "\n";
    if (!r.reason.empty())
        out << "reason: " << r.reason << "\n";
    if (r.witness) {
        const Witness& w = *r.witness;
        if (!w.kind.empty())
            out << "witness.kind: " << w.kind << "\n";
        if (!w.inputs.empty())
            out << "witness.input: " << slots_line(w.inputs) << "\n";
        if (!w.outputs.empty())
            out << "witness.output: " << slots_line(w.outputs) << "\n";
        for (auto& [name, word] : w.lasso)
            out << "witness.lasso: " << name << " = " << word.str() << "\n";
        if (w.horizon > 0)
            out << "witness.horizon: " << w.horizon << "\n";
        if (w.illegal_at >= 0)
            out << "witness.illegal_at: " << w.illegal_at << "\n";
    }
    for (auto& n : r.notes)
        out << "note: " << n << "\n";
}

Value parse_value(const std::string& text, const SemType& t) {
    switch (t.tag) {
    case SemType::Tag::Bool:
        if (text == "true" || text == "1")
            return Value::boolean(true);
        if (text == "false" || text == "0")
            return Value::boolean(false);
        break;
    case SemType::Tag::Unit:
        if (text == "()")
            return Value::unit();
        break;
    case SemType::Tag::Enum:
        for (size_t i = 0; i < t.values.size(); ++i)
            if (t.values[i] == text)
                return Value::symbol(text, (int)i);
        break;
    default:
        try {
            Rational q = parse_rational(text);
            if (t.tag != SemType::Tag::Real && q.denominator() != 1)
                break;
            if (t.tag == SemType::Tag::IntRange && (q < t.lo || q > t.hi))
                break;
            return Value::number(q);
        } catch (const Error&) {
        }
    }
    throw UsageError("value '" + text + "' does not fit type " + t.str());
}

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r\n"));
    s.erase(s.find_last_not_of(" \t\r\n") + 1);
    return s;
}

// `name:v0,v1,...` entries separated by ';' or newlines; a path to an
// existing file is read first.  Entries bind by name when every name is an
// input, otherwise by position.
Trace parse_trace(std::string text, const Signature& in, bool* positional = nullptr) {
    if (std::filesystem::is_regular_file(text)) {
        std::ifstream f(text);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    std::replace(text.begin(), text.end(), '\n', ';');
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    std::stringstream ss(text);
    std::string entry;
    while (std::getline(ss, entry, ';')) {
        entry = trim(entry);
        if (entry.empty() || entry[0] == '#')
            continue;
        auto colon = entry.find(':');
        if (colon == std::string::npos)
            throw UsageError("trace entry '" + entry + "' is not name:v0,v1,...");
        std::vector<std::string> vals;
        std::stringstream vs(entry.substr(colon + 1));
        std::string v;
        while (std::getline(vs, v, ','))
            vals.push_back(trim(v));
        entries.emplace_back(trim(entry.substr(0, colon)), vals);
    }
    if (entries.size() != in.size())
        throw UsageError("component has " + std::to_string(in.size()) + " inputs, trace gives " +
                         std::to_string(entries.size()));
    bool by_name = std::all_of(entries.begin(), entries.end(), [&](auto& e) {
        return std::any_of(in.begin(), in.end(), [&](const Port& p) { return p.name == e.first; });
    });
    if (positional)
        *positional = !by_name;
    Trace t(in.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        size_t slot = i;
        if (by_name)
            slot = std::find_if(in.begin(), in.end(), [&](const Port& p) { return p.name == entries[i].first; }) - in.begin();
        for (auto& v : entries[i].second)
            t[slot].push_back(parse_value(v, in[slot].type));
    }
    return t;
}

std::string trace_line(const Port& p, const std::vector<Value>& vals) {
    std::string s = p.name + ": ";
    for (size_t k = 0; k < vals.size(); ++k)
        s += (k ? "," : "") + vals[k].str();
    return s;
}

struct Common {
    std::string file;
    std::string target;
    std::string domains;
    int horizon = 4;
    bool no_solver = false;
    double timeout = 10;
};

AnalysisOptions options_for(const Common& c) {
    AnalysisOptions o = AnalysisOptions::defaults();
    if (!c.domains.empty())
        o.dom = FiniteDomain::load(c.domains);
    o.horizon = c.horizon;
    if (c.no_solver)
        o.use_solver = false;
    if (o.solver)
        o.solver->timeout_s = c.timeout;
    return o;
}

Component pick(const Program& p, const std::string& name) { return name.empty() ? p.target() : p.get(name); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Refinement calculus toolkit for reactive system components", "rcrs"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub, bool with_target) {
        sub->add_option("FILE", c.file, "component file")->required();
        if (with_target)
            sub->add_option("--target", c.target, "component name (default: last defined)");
        sub->add_option("--domains", c.domains, "domain override file");
        sub->add_option("--horizon", c.horizon, "bounded-trace horizon")->check(CLI::Range(0, 64));
        sub->add_flag("--no-solver", c.no_solver, "ignore RCRS_SMT_SOLVER");
        sub->add_option("--timeout", c.timeout, "solver timeout in seconds");
    };

    auto* simplify_cmd = app.add_subcommand("simplify", "print the atomic form of a component");
    add_common(simplify_cmd, true);

    auto* check = app.add_subcommand("check", "decide a property of components");
    check->require_subcommand(1);
    auto* valid = check->add_subcommand("valid", "some input is accepted");
    add_common(valid, true);
    auto* receptive = check->add_subcommand("receptive", "every input is accepted");
    add_common(receptive, true);
    std::string left, right, abstract_name, concrete_name, data_refine;
    auto* compat = check->add_subcommand("compat", "serial composition is valid");
    add_common(compat, false);
    compat->add_option("--left", left)->required();
    compat->add_option("--right", right)->required();
    auto* refine = check->add_subcommand("refine", "concrete refines abstract");
    add_common(refine, false);
    refine->add_option("--abstract", abstract_name)->required();
    refine->add_option("--concrete", concrete_name)->required();
    refine->add_option("--data-refine", data_refine, "relation over abstract and concrete states");

    auto* legal = app.add_subcommand("legal", "print the legal-input formula");
    add_common(legal, true);

    std::string query;
    auto* smt = app.add_subcommand("smt", "write the SMT-LIB script of a verification condition");
    add_common(smt, true);
    smt->add_option("--query", query)->required()->check(CLI::IsMember({"refine", "valid"}));
    smt->add_option("--abstract", abstract_name);
    smt->add_option("--concrete", concrete_name);
    smt->add_option("--data-refine", data_refine);

    std::string input;
    auto* simulate = app.add_subcommand("simulate", "run a component on an input trace");
    add_common(simulate, true);
    simulate->add_option("--input", input, "trace text or file: name:v0,v1,... per input")->required();

    std::string diagram_file, output_file;
    auto* translate_cmd = app.add_subcommand("translate", "translate a block diagram");
    translate_cmd->add_option("DIAGRAM", diagram_file)->required();
    translate_cmd->add_option("-o,--output", output_file);

    uint64_t seed = 1;
    int scale = 1;
    auto* selftest = app.add_subcommand("selftest", "run the randomized property suites");
    selftest->add_option("--seed", seed);
    selftest->add_option("--scale", scale, "multiply case counts")->check(CLI::Range(1, 100));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ExitProven;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return ExitUsage;
    }

    try {
        if (*simplify_cmd) {
            Program p = parse_program_file(c.file);
            out << print_atomic(*atomic(pick(p, c.target))) << "\n";
            return ExitProven;
        }
        if (*check) {
            AnalysisOptions o = options_for(c);
            Program p = parse_program_file(c.file);
            CheckResult r;
            if (*valid) {
                out << "command: check valid\n";
                r = is_valid(pick(p, c.target), o);
            } else if (*receptive) {
                out << "command: check receptive\n";
                r = is_input_receptive(pick(p, c.target), o);
            } else if (*compat) {
                out << "command: check compat\n";
                r = check_compat(p.get(left), p.get(right), o);
            } else {
                out << "command: check refine\n";
                if (data_refine.empty()) {
                    r = check_refines(p.get(abstract_name), p.get(concrete_name), o);
                } else {
                    Atomic a = lift_to(*atomic(p.get(abstract_name)), Kind::Sts);
                    Atomic k = lift_to(*atomic(p.get(concrete_name)), Kind::Sts);
                    VarList scope = as_vars(a->state);
                    for (auto& v : as_vars(k->state)) {
                        if (std::any_of(scope.begin(), scope.end(), [&](const Var& w) { return w.name == v.name; }))
                            throw UsageError("state " + v.name + " appears on both sides; rename it in one component");
                        scope.push_back(v);
                    }
                    r = check_data_refines(*a, *k, parse_formula(data_refine, scope, &p), o);
                }
            }
            print_result(out, r);
            return exit_for(r.verdict);
        }
        if (*legal) {
            Program p = parse_program_file(c.file);
            out << "legal: " << to_string(legal_formula(*atomic(pick(p, c.target)))) << "\n";
            return ExitProven;
        }
        if (*smt) {
            Program p = parse_program_file(c.file);
            std::vector<Vc> vcs;
            if (query == "valid") {
                vcs.push_back(validity_vc(*atomic(pick(p, c.target))));
            } else {
                if (abstract_name.empty() || concrete_name.empty())
                    throw UsageError("--query refine needs --abstract and --concrete");
                if (data_refine.empty()) {
                    vcs = refine_vc(p.get(abstract_name), p.get(concrete_name)).vcs;
                } else {
                    Atomic a = lift_to(*atomic(p.get(abstract_name)), Kind::Sts);
                    Atomic k = lift_to(*atomic(p.get(concrete_name)), Kind::Sts);
                    VarList scope = as_vars(a->state);
                    for (auto& v : as_vars(k->state))
                        scope.push_back(v);
                    vcs = data_refine_vc(*a, *k, parse_formula(data_refine, scope, &p));
                }
            }
            for (size_t i = 0; i < vcs.size(); ++i) {
                if (vcs[i].fragment == Fragment::Temporal) {
                    err << "temporal verification condition has no SMT-LIB form: " << to_string(simplify(vcs[i].goal))
                        << "\n";
                    return ExitUnknown;
                }
                if (i)
                    out << "(reset)\n";
                out << "; " << vcs[i].origin << "\n" << emit_smtlib(vcs[i]);
            }
            return ExitProven;
        }
        if (*simulate) {
            Program p = parse_program_file(c.file);
            Component comp = pick(p, c.target);
            Signature in = sigma_in(comp), outs = sigma_out(comp);
            bool positional = false;
            Trace t = parse_trace(input, in, &positional);
            if (positional)
                for (size_t i = 0; i < outs.size(); ++i)
                    outs[i].name = outs.size() == 1 ? "y" : "y" + std::to_string(i);
            int H = c.horizon;
            for (auto& slot : t)
                if ((int)slot.size() < H)
                    throw UsageError("input trace shorter than horizon " + std::to_string(H));
            FiniteDomain dom = c.domains.empty() ? FiniteDomain{} : FiniteDomain::load(c.domains);
            RelResult r = behaviour(comp, t, H, dom);
            out << "horizon: " << H << "\n";
            if (r.illegal_at >= 0) {
                out << "illegal_at: " << r.illegal_at << "\n";
                return ExitRefuted;
            }
            if (r.outputs.size() == 1) {
                const Trace& o = *r.outputs.begin();
                for (size_t i = 0; i < outs.size(); ++i)
                    out << trace_line(outs[i], o[i]) << "\n";
            } else {
                out << "runs: " << r.outputs.size() << "\n";
                int n = 0;
                for (auto& o : r.outputs) {
                    ++n;
                    for (size_t i = 0; i < outs.size(); ++i)
                        out << "run " << n << " " << trace_line(outs[i], o[i]) << "\n";
                }
            }
            return ExitProven;
        }
        if (*translate_cmd) {
            Translation tr = translate_file(diagram_file);
            if (output_file.empty()) {
                out << tr.source();
            } else {
                std::ofstream f(output_file);
                if (!f)
                    throw UsageError("cannot write " + output_file);
                f << tr.source();
                out << "written: " << output_file << "\n";
            }
            out << "term: " << tr.expression << "\n";
            return ExitProven;
        }
        if (*selftest) {
            std::vector<SuiteReport> reports{
                oracle_equivalence_suite(seed, 200 * scale), associativity_suite(seed, 100 * scale),
                precongruence_suite(seed, 100 * scale), legality_coherence_suite(seed, 100 * scale),
                stateless_refinement_agreement_suite(seed, 60 * scale)};
            bool ok = true;
            for (auto& r : reports) {
                out << "suite: " << r.summary(false) << "\n";
                err << "time: " << r.name << " " << r.seconds << "s\n";
                for (auto& d : r.details)
                    out << "failure: " << d << "\n";
                ok = ok && r.ok();
            }
            out << "verdict: " << (ok ? "Proven" : "Refuted") << "\n";
            return ok ? ExitProven : ExitRefuted;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return ExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return ExitInternal;
    }
    return ExitUsage;
}

}  // namespace rcrs
