#include "rcrs/diagram.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rcrs {

using nlohmann::json;

namespace {

Rational param_number(const json& params, const std::string& key, std::optional<Rational> fallback) {
    if (!params.is_object() || !params.contains(key)) {
        if (fallback)
            return *fallback;
        throw Error(ErrorCode::BadParams, "missing parameter " + key);
    }
    const json& v = params.at(key);
    try {
        if (v.is_number_integer())
            return Rational(v.get<long long>());
        if (v.is_number_float())
            return parse_rational(v.dump());
        if (v.is_string())
            return parse_rational(v.get<std::string>());
    } catch (const Error&) {
    }
    throw Error(ErrorCode::BadParams, "parameter " + key + " is not a number: " + v.dump());
}

SemType param_type(const json& params, bool real_default) {
    if (!params.is_object() || !params.contains("type"))
        return real_default ? SemType::real() : SemType::integer();
    std::string t = params.at("type").is_string() ? params.at("type").get<std::string>() : "";
    if (t == "int")
        return SemType::integer();
    if (t == "real")
        return SemType::real();
    throw Error(ErrorCode::BadParams, "block type must be \"int\" or \"real\", got " + params.at("type").dump());
}

}  // namespace

Atomic library_block(const std::string& name, const json& params) {
    if (name == "Component") {
        if (!params.is_object() || !params.contains("rcrs") || !params.at("rcrs").is_string())
            throw Error(ErrorCode::BadParams, "Component needs an \"rcrs\" string");
        return atomic(parse_component(params.at("rcrs").get<std::string>()));
    }
    if (name == "Integrator" || name == "TransferFcn") {
        Rational dt = param_number(params, "dt", std::nullopt);
        if (dt <= 0)
            throw Error(ErrorCode::BadParams, name + ": dt must be positive");
        const SemType R = SemType::real();
        Expr x = ex::var("x", R);
        if (name == "Integrator") {
            Rational init = param_number(params, "init", Rational(0));
            Expr s = ex::var("s", R);
            return make_det({{"x", R}}, {{"s", R}}, {Value::number(init)}, ex::tt(),
                            {ex::add(s, ex::mul(x, ex::real(dt)))}, {s});
        }
        Expr s1 = ex::var("s1", R), s2 = ex::var("s2", R);
        auto k = [](long long v) { return ex::real(Rational(v)); };
        Expr d1 = ex::add(ex::sub(ex::mul(k(-4), s1), ex::mul(k(2), s2)), x);
        return make_det({{"x", R}}, {{"s1", R}, {"s2", R}}, {Value::integer(0), Value::integer(0)}, ex::tt(),
                        {ex::add(s1, ex::mul(d1, ex::real(dt))), ex::add(s2, ex::mul(s1, ex::real(dt)))},
                        {ex::add(ex::mul(k(-8), s1), ex::mul(k(2), x))});
    }

    bool real_default = false;
    std::optional<Rational> constant;
    if (name == "Const")
        constant = param_number(params, "c", std::nullopt);
    if (name == "Gain")
        constant = param_number(params, "k", std::nullopt);
    if (constant && constant->denominator() != 1)
        real_default = true;
    const SemType T = param_type(params, real_default);
    if (constant && T == SemType::integer() && constant->denominator() != 1)
        throw Error(ErrorCode::BadParams, name + ": non-integer constant for an int block");
    Expr x = ex::var("x", T), y = ex::var("y", T);

    if (name == "Add")
        return make_stateless_det({{"x", T}, {"y", T}}, ex::tt(), {ex::add(x, y)});
    if (name == "Sub")
        return make_stateless_det({{"x", T}, {"y", T}}, ex::tt(), {ex::sub(x, y)});
    if (name == "Div")
        return make_stateless_det({{"x", T}, {"y", T}}, ex::ne(y, ex::num(Rational(0), T)), {ex::div(x, y)});
    if (name == "Split")
        return make_stateless_det({{"x", T}}, ex::tt(), {x, x});
    if (name == "Id")
        return make_stateless_det({{"x", T}}, ex::tt(), {x});
    if (name == "Const")
        return make_stateless_det({}, ex::tt(), {ex::num(*constant, T)});
    if (name == "Gain")
        return make_stateless_det({{"x", T}}, ex::tt(), {ex::mul(ex::num(*constant, T), x)});
    if (name == "UnitDelay") {
        Rational init = param_number(params, "init", Rational(0));
        if (T == SemType::integer() && init.denominator() != 1)
            throw Error(ErrorCode::BadParams, "UnitDelay: non-integer init for an int block");
        Expr s = ex::var("s", T);
        return make_det({{"x", T}}, {{"s", T}}, {Value::number(init)}, ex::tt(), {x}, {s});
    }
    throw Error(ErrorCode::UnknownBlock, "unknown block kind " + name);
}

namespace {

struct Sig {
    std::string id;  // block id, "in" for external inputs, "fb" for fed-back signals
    int port = 0;
    bool operator<(const Sig& o) const { return id != o.id ? id < o.id : port < o.port; }
    bool operator==(const Sig& o) const { return id == o.id && port == o.port; }
};

std::string sig_str(const Sig& s) { return s.id + "[" + std::to_string(s.port) + "]"; }

struct Flat {
    std::map<std::string, Atomic> blocks;
    std::map<Sig, Sig> src_of;  // block input -> source
    std::vector<Sig> outs;
    int n_in = 0;
};

Flat flatten(const json& d, const std::string& prefix, int depth) {
    if (depth > 64)
        throw Error(ErrorCode::PortMismatch, "subsystems nested too deeply");
    if (!d.is_object())
        throw Error(ErrorCode::PortMismatch, "diagram must be a JSON object");
    auto list = [&](const char* key) { return d.contains(key) ? d.at(key) : json::array(); };
    Flat f;
    f.n_in = (int)list("inputs").size();
    int n_out = (int)list("outputs").size();

    std::map<std::string, Flat> subs;
    std::map<std::string, std::pair<int, int>> arity;
    for (const json& b : list("blocks")) {
        std::string id = b.value("id", "");
        if (id.empty() || id == "in" || id == "out" || id == "fb" || arity.count(id))
            throw Error(ErrorCode::PortMismatch, "bad or duplicate block id '" + prefix + id + "'");
        if (b.contains("subsystem")) {
            Flat s = flatten(b.at("subsystem"), prefix + id + "/", depth + 1);
            arity[id] = {s.n_in, (int)s.outs.size()};
            subs[id] = std::move(s);
        } else {
            Atomic a = library_block(b.value("kind", ""), b.contains("params") ? b.at("params") : json::object());
            arity[id] = {(int)sigma_in(*a).size(), (int)sigma_out(*a).size()};
            f.blocks[prefix + id] = a;
        }
    }

    std::map<Sig, Sig> raw;  // local destination -> local source
    for (const json& w : list("wires")) {
        if (!w.contains("src") || !w.contains("dst") || w.at("src").size() != 2 || w.at("dst").size() != 2)
            throw Error(ErrorCode::PortMismatch, "wire needs src and dst as [id, port]: " + w.dump());
        Sig src{w.at("src")[0].get<std::string>(), w.at("src")[1].get<int>()};
        Sig dst{w.at("dst")[0].get<std::string>(), w.at("dst")[1].get<int>()};
        auto out_arity = [&](const std::string& id) {
            if (id == "in")
                return f.n_in;
            if (!arity.count(id))
                throw Error(ErrorCode::PortMismatch, "wire from unknown block '" + prefix + id + "'");
            return arity[id].second;
        };
        auto in_arity = [&](const std::string& id) {
            if (id == "out")
                return n_out;
            if (!arity.count(id))
                throw Error(ErrorCode::PortMismatch, "wire to unknown block '" + prefix + id + "'");
            return arity[id].first;
        };
        if (src.port < 0 || src.port >= out_arity(src.id))
            throw Error(ErrorCode::PortMismatch, "source port out of range: " + prefix + sig_str(src));
        if (dst.port < 0 || dst.port >= in_arity(dst.id))
            throw Error(ErrorCode::PortMismatch, "destination port out of range: " + prefix + sig_str(dst));
        if (!raw.emplace(dst, src).second)
            throw Error(ErrorCode::PortMismatch, "two wires into " + prefix + sig_str(dst));
    }
    // without declared port lists, open block ports become the diagram's ports
    if (!d.contains("inputs"))
        for (auto& [id, ar] : arity)
            for (int j = 0; j < ar.first; ++j)
                if (!raw.count(Sig{id, j}))
                    raw[Sig{id, j}] = Sig{"in", f.n_in++};
    if (!d.contains("outputs")) {
        std::set<Sig> used;
        for (auto& [dst, src] : raw)
            used.insert(src);
        for (auto& [id, ar] : arity)
            for (int k = 0; k < ar.second; ++k)
                if (!used.count(Sig{id, k}))
                    raw[Sig{"out", n_out++}] = Sig{id, k};
    }
    for (auto& [id, ar] : arity)
        for (int j = 0; j < ar.first; ++j)
            if (!raw.count(Sig{id, j}))
                throw Error(ErrorCode::PortMismatch, "unconnected input " + prefix + sig_str(Sig{id, j}));
    for (int k = 0; k < n_out; ++k)
        if (!raw.count(Sig{"out", k}))
            throw Error(ErrorCode::PortMismatch, "unconnected external output " + std::to_string(k));

    // Sources as seen from outside this level: "in" stays relative to it.
    std::function<Sig(const Sig&, int)> resolve = [&](const Sig& s, int hops) -> Sig {
        if (hops > 10000)
            throw Error(ErrorCode::AlgebraicLoop, "pass-through cycle across subsystem ports at " + prefix + s.id);
        if (s.id == "in")
            return s;
        auto it = subs.find(s.id);
        if (it == subs.end())
            return Sig{prefix + s.id, s.port};
        const Sig& inner = it->second.outs[s.port];
        if (inner.id == "in")
            return resolve(raw.at(Sig{s.id, inner.port}), hops + 1);
        return inner;
    };

    for (auto& [dst, src] : raw) {
        if (dst.id == "out" || subs.count(dst.id))
            continue;
        f.src_of[Sig{prefix + dst.id, dst.port}] = resolve(src, 0);
    }
    for (auto& [id, s] : subs) {
        for (auto& [k, v] : s.blocks)
            f.blocks[k] = v;
        for (auto& [dst, src] : s.src_of)
            f.src_of[dst] = src.id == "in" ? resolve(raw.at(Sig{id, src.port}), 0) : src;
    }
    for (int k = 0; k < n_out; ++k)
        f.outs.push_back(resolve(raw.at(Sig{"out", k}), 0));
    return f;
}

std::string piece_name(std::string id, std::set<std::string>& used) {
    for (char& c : id)
        if (!std::isalnum((unsigned char)c) && c != '_')
            c = '_';
    if (id.empty() || std::isdigit((unsigned char)id[0]))
        id = "B" + id;
    std::string n = used.count(id) ? fresh_name(id, used) : id;
    used.insert(n);
    return n;
}

struct Piece {
    Component term;
    std::string text;
    bool serial = false;  // text is a serial chain
};

}  // namespace

Translation translate(const json& diagram) {
    Flat f = flatten(diagram, "", 0);
    Translation tr;
    std::set<std::string> used{"Diagram"};
    std::map<std::string, std::string> block_name;
    for (auto& [id, a] : f.blocks)
        block_name[id] = piece_name(id, used);

    // signal types
    std::map<Sig, SemType> type_of;
    for (auto& [id, a] : f.blocks) {
        Signature out = sigma_out(*a);
        for (size_t p = 0; p < out.size(); ++p)
            type_of[Sig{id, (int)p}] = out[p].type;
    }
    for (auto& [dst, src] : f.src_of) {
        const SemType& want = sigma_in(*f.blocks.at(dst.id))[dst.port].type;
        auto it = type_of.find(src);
        if (it == type_of.end())
            type_of[src] = want;
        else if (it->second != want)
            throw Error(ErrorCode::PortMismatch, "wire " + sig_str(src) + " -> " + sig_str(dst) + " carries " +
                                                     it->second.str() + " into a " + want.str() + " port");
    }
    for (int i = 0; i < f.n_in; ++i)
        type_of.emplace(Sig{"in", i}, SemType::integer());

    // same-step dependency graph between blocks
    std::map<std::string, std::set<std::string>> succ;
    std::map<std::string, int> indeg;
    for (auto& [id, a] : f.blocks)
        indeg[id];
    for (auto& [dst, src] : f.src_of) {
        if (src.id == "in")
            continue;
        OIRelation rel;
        try {
            rel = oi(*f.blocks.at(dst.id));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotDeterministic)
                throw;
            int n_out = (int)sigma_out(*f.blocks.at(dst.id)).size();
            for (int o = 1; o <= n_out; ++o)
                rel.insert({o, dst.port + 1});
        }
        bool same_step = std::any_of(rel.begin(), rel.end(), [&](auto& p) { return p.second == dst.port + 1; });
        if (same_step && succ[src.id].insert(dst.id).second)
            ++indeg[dst.id];
    }
    std::vector<std::string> order;
    std::set<std::string> ready;
    for (auto& [id, d] : indeg)
        if (d == 0)
            ready.insert(id);
    auto deg = indeg;
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (auto& n : succ[id])
            if (--deg[n] == 0)
                ready.insert(n);
    }
    if (order.size() != f.blocks.size()) {
        // walk same-step edges inside the remainder until a block repeats
        std::string cur;
        for (auto& [id, d] : deg)
            if (d > 0) {
                cur = id;
                break;
            }
        std::vector<std::string> path;
        std::map<std::string, size_t> seen;
        while (!seen.count(cur)) {
            seen[cur] = path.size();
            path.push_back(cur);
            for (auto& [src_id, ns] : succ)
                if (deg[src_id] > 0 && ns.count(cur)) {
                    cur = src_id;
                    break;
                }
        }
        std::string cycle;
        for (size_t i = path.size(); i-- > seen[cur];)
            cycle += path[i] + " -> ";
        throw Error(ErrorCode::AlgebraicLoop, "algebraic loop: " + cycle + path.back());
    }
    std::map<std::string, int> pos;
    for (size_t i = 0; i < order.size(); ++i)
        pos[order[i]] = (int)i;

    // feedback signals: sources of wires that run backwards in the order
    std::vector<Sig> fb;
    auto backward = [&](const Sig& dst, const Sig& src) { return src.id != "in" && pos[src.id] >= pos[dst.id]; };
    for (auto& [dst, src] : f.src_of)
        if (backward(dst, src) && std::find(fb.begin(), fb.end(), src) == fb.end())
            fb.push_back(src);
    std::sort(fb.begin(), fb.end(), [&](const Sig& a, const Sig& b) {
        return pos[a.id] != pos[b.id] ? pos[a.id] < pos[b.id] : a.port < b.port;
    });
    auto input_sig = [&](const Sig& dst) {
        const Sig& src = f.src_of.at(dst);
        if (backward(dst, src))
            return Sig{"fb", (int)(std::find(fb.begin(), fb.end(), src) - fb.begin())};
        return src;
    };
    for (size_t i = 0; i < fb.size(); ++i)
        type_of[Sig{"fb", (int)i}] = type_of.at(fb[i]);

    std::map<std::string, int> level;
    int max_level = -1;
    for (auto& id : order) {
        int lv = 0;
        for (size_t j = 0; j < sigma_in(*f.blocks.at(id)).size(); ++j) {
            Sig s = input_sig(Sig{id, (int)j});
            if (s.id != "in" && s.id != "fb")
                lv = std::max(lv, level.at(s.id) + 1);
        }
        level[id] = lv;
        max_level = std::max(max_level, lv);
    }
    std::vector<std::vector<std::string>> layers(max_level + 1);
    for (auto& [id, lv] : level)
        layers[lv].push_back(id);  // map order: ascending id

    std::vector<Sig> body_out = fb;
    body_out.insert(body_out.end(), f.outs.begin(), f.outs.end());

    std::vector<Sig> cur;
    for (size_t i = 0; i < fb.size(); ++i)
        cur.push_back(Sig{"fb", (int)i});
    for (int i = 0; i < f.n_in; ++i)
        cur.push_back(Sig{"in", i});

    std::set<std::string> named;
    auto add_piece = [&](const std::string& name, const Atomic& a) {
        if (named.insert(name).second)
            tr.pieces.emplace_back(name, a);
        return Piece{atom(a), name};
    };
    int switches = 0;
    std::map<size_t, std::string> id_names;
    auto signature_of = [&](const std::vector<Sig>& sigs, const char* base) {
        Signature sig;
        for (size_t i = 0; i < sigs.size(); ++i)
            sig.push_back(Port{sigs.size() == 1 ? std::string(base) : base + std::to_string(i), type_of.at(sigs[i])});
        return sig;
    };
    auto identity = [&](const std::vector<Sig>& sigs) {
        Signature sig = signature_of(sigs, "x");
        if (!id_names.count(sigs.size()))
            id_names[sigs.size()] = piece_name(sigs.size() == 1 ? "Id" : "Id" + std::to_string(sigs.size()), used);
        return add_piece(id_names[sigs.size()], make_stateless_det(sig, ex::tt(), as_terms(sig)));
    };
    auto routing = [&](const std::vector<Sig>& from, const std::vector<Sig>& to) {
        Signature sig = signature_of(from, "x");
        std::vector<Expr> outs;
        for (auto& s : to) {
            auto it = std::find(from.begin(), from.end(), s);
            if (it == from.end())
                throw Error(ErrorCode::PortMismatch, "signal " + sig_str(s) + " is not available where it is used");
            outs.push_back(ex::var(sig[it - from.begin()].name, sig[it - from.begin()].type));
        }
        return add_piece(piece_name("Switch" + std::to_string(++switches), used), make_stateless_det(sig, ex::tt(), outs));
    };

    std::optional<Piece> body;
    auto then = [&](Piece p) {
        if (!body) {
            body = p;
            return;
        }
        body->term = serial_of(body->term, p.term);
        body->text = body->text + " ; " + (p.serial ? "(" + p.text + ")" : p.text);
        body->serial = true;
    };

    for (size_t L = 0; L < layers.size(); ++L) {
        std::vector<Sig> required;
        for (auto& id : layers[L])
            for (size_t j = 0; j < sigma_in(*f.blocks.at(id)).size(); ++j)
                required.push_back(input_sig(Sig{id, (int)j}));
        std::set<Sig> later(body_out.begin(), body_out.end());
        for (size_t M = L + 1; M < layers.size(); ++M)
            for (auto& id : layers[M])
                for (size_t j = 0; j < sigma_in(*f.blocks.at(id)).size(); ++j)
                    later.insert(input_sig(Sig{id, (int)j}));
        std::vector<Sig> carried;
        for (auto& s : cur)
            if (later.count(s) && std::find(carried.begin(), carried.end(), s) == carried.end())
                carried.push_back(s);
        std::vector<Sig> target = required;
        target.insert(target.end(), carried.begin(), carried.end());
        if (target != cur)
            then(routing(cur, target));

        std::optional<Piece> layer;
        auto beside = [&](Piece p) {
            if (!layer) {
                layer = p;
                return;
            }
            layer->term = parallel_of(layer->term, p.term);
            layer->text = layer->text + " || " + p.text;
        };
        std::vector<Sig> next;
        for (auto& id : layers[L]) {
            beside(add_piece(block_name[id], f.blocks.at(id)));
            for (size_t p = 0; p < sigma_out(*f.blocks.at(id)).size(); ++p)
                next.push_back(Sig{id, (int)p});
        }
        if (!carried.empty())
            beside(identity(carried));
        if (layers[L].size() + (carried.empty() ? 0 : 1) > 1)
            layer->text = "(" + layer->text + ")";
        then(*layer);
        next.insert(next.end(), carried.begin(), carried.end());
        cur = next;
    }
    if (cur != body_out)
        then(routing(cur, body_out));
    else if (!body)
        then(cur.empty() ? add_piece(piece_name("Unit", used), make_stateless_det({}, ex::tt(), {})) : identity(cur));

    Piece p = *body;
    for (size_t i = 0; i < fb.size(); ++i) {
        p.term = fdbk_of(p.term);
        p.text = "fdbk(" + p.text + ")";
    }
    tr.term = p.term;
    tr.expression = p.text;
    return tr;
}

Translation translate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::SyntaxError, "cannot read " + path);
    json d;
    try {
        d = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SyntaxError, path + ": " + e.what());
    }
    return translate(d);
}

std::string Translation::source() const {
    std::ostringstream os;
    for (auto& [name, a] : pieces)
        os << "component " << name << " = " << print_atomic(*a) << "\n";
    os << "component Diagram = " << expression << "\n";
    return os.str();
}

}  // namespace rcrs
