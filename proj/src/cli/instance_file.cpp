#include "instance_file.hpp"

#include "toml_lite.hpp"
#include "wdk/error.hpp"

#include <algorithm>
#include <sstream>

namespace wdk::cli {

namespace {

using Entries = std::vector<std::pair<std::string, TomlValue>>;

[[noreturn]] void fail_at(int line, const std::string& why) { throw ParseError(why, line); }

void reject_unknown(const TomlTable& t, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : t.entries)
        if (std::none_of(known.begin(), known.end(), [&](const char* x) { return k == x; }))
            fail_at(v.line, "unknown key '" + k + "' in " + (t.name.empty() ? "header" : "[" + t.name + "]"));
}

const TomlValue* find(const TomlTable& t, const std::string& key) {
    for (const auto& [k, v] : t.entries)
        if (k == key) return &v;
    return nullptr;
}

std::uint64_t nonneg(const TomlValue& v, const std::string& what) {
    const auto x = v.as_int(what);
    if (x < 0) fail_at(v.line, what + " must be >= 0");
    return static_cast<std::uint64_t>(x);
}

SigmaSet subset_at(const std::string& text, int n, int line, const std::string& what) {
    try {
        return SigmaSet::parse(text, n);
    } catch (const ParseError& e) {
        fail_at(line, what + ": " + e.what());
    }
}

DvrElem coordinate(const Dvr& ring, const TomlValue& v, const std::string& what) {
    try {
        if (v.is_int()) {
            const auto k = v.as_int(what);
            if (k < 1) fail_at(v.line, what + ": order " + std::to_string(k) + " must be >= 1 (use \"zero\")");
            return ring.uniformizer_power(static_cast<std::uint64_t>(k));
        }
        if (v.is_string()) {
            const auto& s = v.as_string(what);
            if (s == "zero" || s == "0") return ring.zero();
            if (s.rfind("raw:", 0) == 0) return ring.parse_element(s.substr(4));
            fail_at(v.line, what + ": expected an order, \"zero\", [k, \"unit\"] or \"raw:<element>\", got \"" + s + "\"");
        }
        const auto& arr = v.as_array(what);
        if (arr.empty() || arr.size() > 2) fail_at(v.line, what + ": expected [k] or [k, \"unit\"]");
        const auto k = arr[0].as_int(what + " order");
        if (k < 1) fail_at(v.line, what + ": order must be >= 1");
        const auto unit = arr.size() == 2 ? ring.parse_element(arr[1].as_string(what + " unit")) : ring.one();
        return ring.element(static_cast<std::uint64_t>(k), unit);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail_at(v.line, what + ": " + e.what());
    }
}

std::vector<DvrElem> coordinates(const Dvr& ring, const TomlTable& t, const char* key, std::size_t want,
                                 const std::string& point) {
    const auto* v = find(t, key);
    if (!v) {
        if (want == 0) return {};
        fail_at(t.line, "point " + point + " has no '" + key + "'");
    }
    const auto& arr = v->as_array(point + "." + key);
    if (arr.size() != want)
        fail_at(v->line, point + "." + key + " has " + std::to_string(arr.size()) + " entries, expected " +
                             std::to_string(want));
    std::vector<DvrElem> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(coordinate(ring, arr[i], point + "." + key + "[" + std::to_string(i + 1) + "]"));
    return out;
}

} // namespace

const OPoint& InstanceFile::point(const std::string& name) const {
    for (const auto& [k, v] : points)
        if (k == name) return v;
    throw ParseError("no point named '" + name + "'");
}

FamilySpec InstanceFile::family() const {
    if (!mu) throw ParseError("the instance declares no [mu] table");
    return FamilySpec{inst, *mu, base, depth, gorenstein};
}

DescentOptions InstanceFile::descent_options() const {
    DescentOptions o;
    o.removal_order = removal_order;
    o.override_rank_gate = override_gate;
    o.witness_ord_a = witness_ord_a;
    return o;
}

InstanceFile parse_instance(std::string_view text, std::optional<Dvr> backend, std::optional<Dvr> fallback) {
    const auto doc = parse_toml(text);
    const auto& root = doc.tables.front();
    reject_unknown(root, {"backend", "n", "g"});

    InstanceFile f;
    if (!backend) {
        const auto* b = find(root, "backend");
        if (b) {
            try {
                backend = Dvr::parse(b->as_string("backend"));
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                fail_at(b->line, std::string("backend: ") + e.what());
            }
        } else if (fallback) {
            backend = fallback;
        } else {
            fail_at(1, "missing 'backend' (or pass --backend)");
        }
    }
    const auto* nv = find(root, "n");
    if (!nv) fail_at(1, "missing 'n'");
    const auto* gv = find(root, "g");
    const auto n = nv->as_int("n");
    const auto g = gv ? gv->as_int("g") : 0;
    try {
        f.inst = Instance(static_cast<int>(n), static_cast<int>(g), *backend);
    } catch (const DimensionError& e) {
        fail_at(n < 1 || n > SigmaSet::kMaxN || !gv ? nv->line : gv->line, e.what());
    }
    const int N = f.inst.n;

    for (std::size_t ti = 1; ti < doc.tables.size(); ++ti) {
        const auto& t = doc.tables[ti];
        if (t.name.rfind("points.", 0) == 0) {
            const auto name = t.name.substr(7);
            if (name.empty() || name.find('.') != std::string::npos) fail_at(t.line, "bad point name '" + name + "'");
            reject_unknown(t, {"a", "b", "c"});
            OPoint v{coordinates(f.inst.ring, t, "a", N, name), coordinates(f.inst.ring, t, "b", N, name),
                     coordinates(f.inst.ring, t, "c", static_cast<std::size_t>(f.inst.g), name)};
            try {
                v.validate(f.inst);
            } catch (const Error& e) {
                fail_at(t.line, "point " + name + ": " + e.what());
            }
            f.points.emplace_back(name, std::move(v));
        } else if (t.name == "mu") {
            std::vector<std::optional<std::uint64_t>> vals(std::size_t{1} << N);
            for (const auto& [k, v] : t.entries) {
                if (k == "all") {
                    const auto m = nonneg(v, "mu.all");
                    for (auto& x : vals)
                        if (!x) x = m;
                    continue;
                }
                const auto s = subset_at(k, N, v.line, "mu key");
                vals[s.bits()] = nonneg(v, "mu " + k);
            }
            std::vector<std::uint64_t> out;
            for (std::size_t b = 0; b < vals.size(); ++b) {
                if (!vals[b]) fail_at(t.line, "mu has no value for " + SigmaSet(static_cast<std::uint32_t>(b)).to_string());
                out.push_back(*vals[b]);
            }
            f.mu = RankFunction(N, std::move(out));
        } else if (t.name == "base_psi") {
            std::string provider = "canonical";
            int provider_line = t.line;
            std::map<std::uint32_t, std::uint64_t> rows;
            for (const auto& [k, v] : t.entries) {
                if (k == "provider") {
                    provider = v.as_string("provider");
                    provider_line = v.line;
                    continue;
                }
                const auto s = subset_at(k, N, v.line, "base_psi key");
                rows[s.bits()] = nonneg(v, "base_psi " + k);
            }
            if (provider == "canonical") f.base = BasePsi::canonical();
            else if (provider == "minimal-zero") f.base = BasePsi::minimal_zero();
            else if (provider == "table") f.base = BasePsi::table(rows);
            else fail_at(provider_line, "unknown base_psi provider '" + provider + "'");
            if (provider != "table" && !rows.empty())
                fail_at(provider_line, "base_psi rows need provider = \"table\"");
        } else if (t.name == "flags") {
            reject_unknown(t, {"depth", "gorenstein"});
            if (const auto* v = find(t, "depth")) f.depth = v->as_bool("flags.depth");
            if (const auto* v = find(t, "gorenstein")) f.gorenstein = v->as_bool("flags.gorenstein");
        } else if (t.name == "descent") {
            reject_unknown(t, {"override", "witness_ord_a", "order"});
            if (const auto* v = find(t, "override")) f.override_gate = v->as_bool("descent.override");
            if (const auto* v = find(t, "witness_ord_a")) {
                const auto k = nonneg(*v, "descent.witness_ord_a");
                if (k < 1) fail_at(v->line, "descent.witness_ord_a must be >= 1");
                f.witness_ord_a = k;
            }
            if (const auto* v = find(t, "order")) {
                std::vector<int> order;
                for (const auto& x : v->as_array("descent.order")) order.push_back(static_cast<int>(x.as_int("descent.order entry")));
                auto sorted = order;
                std::sort(sorted.begin(), sorted.end());
                if (sorted != f.inst.full().indices())
                    fail_at(v->line, "descent.order must be a permutation of " + f.inst.full().to_string());
                f.removal_order = std::move(order);
            }
        } else if (t.name == "demo") {
            reject_unknown(t, {"command", "sigma", "point", "s", "seed"});
            auto& d = f.demo;
            if (const auto* v = find(t, "command")) d.command = v->as_string("demo.command");
            if (const auto* v = find(t, "sigma")) d.sigma = subset_at(v->as_string("demo.sigma"), N, v->line, "demo.sigma");
            if (const auto* v = find(t, "point")) d.point = v->as_string("demo.point");
            if (const auto* v = find(t, "s")) {
                const auto s = v->as_int("demo.s");
                if (s < 1 || s > N) fail_at(v->line, "demo.s = " + std::to_string(s) + " outside 1.." + std::to_string(N));
                d.s = static_cast<int>(s);
            }
            if (const auto* v = find(t, "seed")) d.seed = nonneg(*v, "demo.seed");
        } else {
            fail_at(t.line, "unknown table [" + t.name + "]");
        }
    }
    if (f.demo.point) f.point(*f.demo.point);
    return f;
}

std::string coordinate_text(const DvrElem& x) {
    if (x.is_zero()) return "\"zero\"";
    const auto k = ord(x).value();
    const auto u = unit_part(x);
    if (u == x.ring().one()) return std::to_string(k);
    return "[" + std::to_string(k) + ", " + toml_string(u.to_string()) + "]";
}

std::string to_toml(const InstanceFile& f) {
    std::ostringstream out;
    out << "backend = " << toml_string(f.inst.ring.to_string()) << "\n";
    out << "n = " << f.inst.n << "\n";
    out << "g = " << f.inst.g << "\n";
    auto vec = [](const std::vector<DvrElem>& xs) {
        std::string s = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + coordinate_text(xs[i]);
        return s + "]";
    };
    for (const auto& [name, v] : f.points) {
        out << "\n[points." << name << "]\n";
        out << "a = " << vec(v.a) << "\nb = " << vec(v.b) << "\nc = " << vec(v.c) << "\n";
    }
    if (f.mu) {
        out << "\n[mu]\n";
        for (const auto s : f.inst.subsets()) out << toml_string(s.to_string()) << " = " << (*f.mu)(s) << "\n";
    }
    out << "\n[base_psi]\nprovider = ";
    switch (f.base.kind()) {
    case BasePsi::Kind::minimal_zero: out << "\"minimal-zero\"\n"; break;
    case BasePsi::Kind::table:
        out << "\"table\"\n";
        for (const auto& [bits, len] : f.base.entries())
            out << toml_string(SigmaSet(bits).to_string()) << " = " << len << "\n";
        break;
    default: out << "\"canonical\"\n"; break;
    }
    out << "\n[flags]\ndepth = " << (f.depth ? "true" : "false") << "\ngorenstein = " << (f.gorenstein ? "true" : "false")
        << "\n";
    if (f.override_gate || f.witness_ord_a || !f.removal_order.empty()) {
        out << "\n[descent]\noverride = " << (f.override_gate ? "true" : "false") << "\n";
        if (f.witness_ord_a) out << "witness_ord_a = " << *f.witness_ord_a << "\n";
        if (!f.removal_order.empty()) {
            out << "order = [";
            for (std::size_t i = 0; i < f.removal_order.size(); ++i) out << (i ? ", " : "") << f.removal_order[i];
            out << "]\n";
        }
    }
    const auto& d = f.demo;
    if (!d.command.empty() || d.sigma || d.point || d.s || d.seed) {
        out << "\n[demo]\n";
        if (!d.command.empty()) out << "command = " << toml_string(d.command) << "\n";
        if (d.sigma) out << "sigma = " << toml_string(d.sigma->to_string()) << "\n";
        if (d.point) out << "point = " << toml_string(*d.point) << "\n";
        if (d.s) out << "s = " << *d.s << "\n";
        if (d.seed) out << "seed = " << *d.seed << "\n";
    }
    return out.str();
}

} // namespace wdk::cli
