#include "doctest.h"

#include "commands.hpp"
#include "demos.hpp"
#include "fuzz.hpp"
#include "instance_file.hpp"
#include "report.hpp"
#include "toml_lite.hpp"
#include "wdk/error.hpp"
#include "wdk/random.hpp"

#include <sstream>

using namespace wdk;
using namespace wdk::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <class F>
Run run(F&& f) {
    std::ostringstream out, err;
    const int code = guarded([&] { return f(out, err); }, err);
    return {code, out.str(), err.str()};
}

InstanceFile demo(const std::string& name) { return load_instance("demo:" + name, {}); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') field += text[++i];
            else if (c == '"') quoted = false;
            else field += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
        } else if (c == '\n') {
            row.push_back(field);
            field.clear();
            rows.push_back(row);
            row.clear();
        } else {
            field += c;
        }
    }
    return rows;
}

std::string num(const Json& j) { return j.is_null() ? "" : j.dump(); }

const char* kFamily = R"(backend = "poly:5"
n = 2
g = 1

[points.p0]
a = ["zero", "zero"]
b = [1, [4, "2"]]
c = ["zero"]

[points.p2]
a = ["zero", 3]
b = [2, "zero"]
c = [1]

[mu]
all = 3
"[2]" = 4

[base_psi]
provider = "table"
"[2]" = 12

[flags]
depth = true
gorenstein = true
)";

} // namespace

TEST_CASE("toml subset") {
    const auto doc = parse_toml("a = 1 # c\nb = \"x\\\"y\"\n\n[t.u]\n\"[1,2]\" = [1, [2, \"v\"],\n  -3]\nf = false\n");
    REQUIRE(doc.tables.size() == 2);
    CHECK(doc.tables[0].entries[0].second.as_int("a") == 1);
    CHECK(doc.tables[0].entries[1].second.as_string("b") == "x\"y");
    CHECK(doc.tables[1].name == "t.u");
    CHECK(doc.tables[1].line == 4);
    const auto& arr = doc.tables[1].entries[0].second.as_array("k");
    CHECK(arr.size() == 3);
    CHECK(arr[2].as_int("x") == -3);
    CHECK(doc.tables[1].entries[1].second.line == 7);

    auto line_of = [](const char* text) {
        try {
            parse_toml(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("a = 1\na = 2\n") == 2);
    CHECK(line_of("a = 1\n\nb = \"open\n") == 3);
    CHECK(line_of("[x]\n[x]\n") == 2);
    CHECK(line_of("a = 1 2\n") == 1);
    CHECK(line_of("a = 1.5\n") == 1);
    CHECK(line_of("a = [1,\n2\n") == 3);
    CHECK(line_of("= 3\n") == 1);
    CHECK(toml_key("[1,2]") == "\"[1,2]\"");
    CHECK(toml_key("E1") == "E1");
}

TEST_CASE("instance files: line-anchored diagnostics") {
    auto error_of = [](const std::string& text) -> std::string {
        try {
            parse_instance(text);
        } catch (const ParseError& e) {
            return e.what();
        }
        return "";
    };
    const std::string head = "backend = \"rational:5\"\nn = 2\ng = 0\n";
    CHECK(error_of(head + "[demo]\nsigma = \"{3}\"\n") == "line 5: demo.sigma: subset '{3}': index 3 outside 1..2");
    CHECK(error_of(head + "[points.P]\na = [1, \"zero\"]\nb = [1, \"zero\"]\n").find("line 4: point P: a1 * b1") == 0);
    CHECK(error_of(head + "[points.P]\na = [1]\nb = [\"zero\", 2]\n").find("line 5: P.a has 1 entries") == 0);
    CHECK(error_of(head + "[points.P]\na = [0, \"zero\"]\n").find("line 5: P.a[1]: order 0") == 0);
    CHECK(error_of(head + "[points.P]\na = [\"raw:1/5\", \"zero\"]\nb = [\"zero\", 1]\n").find("line 5: P.a[1]") == 0);
    CHECK(error_of(head + "[mu]\n\"[1]\" = 2\n").find("line 4: mu has no value for []") == 0);
    CHECK(error_of(head + "[mu]\nall = -1\n").find("line 5") == 0);
    CHECK(error_of(head + "[bogus]\n").find("line 4: unknown table") == 0);
    CHECK(error_of(head + "colour = 1\n").find("line 4: unknown key 'colour'") == 0);
    CHECK(error_of(head + "[base_psi]\nprovider = \"magic\"\n").find("line 5") == 0);
    CHECK(error_of(head + "[descent]\norder = [1, 1]\n").find("line 5") == 0);
    CHECK(error_of("backend = \"rational:6\"\nn = 1\n").find("line 1: backend") == 0);
    CHECK(error_of("backend = \"rational:5\"\nn = 0\n").find("line 2") == 0);
    CHECK(error_of("n = 1\n").find("missing 'backend'") != std::string::npos);
    CHECK(parse_instance("n = 1\n", std::nullopt, Dvr(Backend::polynomial, 3)).inst.ring.to_string() == "poly:3");
}

TEST_CASE("instance files: coordinates and canonical text") {
    const auto f = parse_instance(kFamily);
    const auto& p0 = f.point("p0");
    CHECK(p0.b_at(2) == f.inst.ring.element(4, f.inst.ring.from_integer(2)));
    CHECK((*f.mu)(SigmaSet{2}) == 4);
    CHECK((*f.mu)(SigmaSet{1, 2}) == 3);
    CHECK(f.base.kind() == BasePsi::Kind::table);
    CHECK_THROWS_AS(f.point("nope"), ParseError);

    const auto raw = parse_instance("backend = \"poly:5\"\nn = 1\n[points.q]\na = [\"zero\"]\nb = [\"raw:(t^2+t^3)/(1+t)\"]\n");
    CHECK(raw.point("q").b_at(1) == raw.inst.ring.uniformizer_power(2));

    for (const auto& d : demos()) {
        const auto once = parse_instance(d.text);
        const auto text = to_toml(once);
        CHECK(to_toml(parse_instance(text)) == text);
    }
    CHECK(to_toml(parse_instance(to_toml(f))) == to_toml(f));
}

TEST_CASE("instance files: random points survive the round trip") {
    for (const auto& ring : {Dvr(), Dvr(Backend::polynomial, 7)}) {
        Rng rng(4, ring.prime());
        for (int trial = 0; trial < 40; ++trial) {
            InstanceFile f;
            f.inst = Instance(static_cast<int>(rng.uniform(1, 4)), static_cast<int>(rng.uniform(0, 2)), ring);
            const SigmaSet comp(static_cast<std::uint32_t>(rng.uniform(0, (1u << f.inst.n) - 1)));
            f.points = {{"v", random_point(f.inst, comp, {1, 6}, rng.next())}};
            const auto back = parse_instance(to_toml(f));
            const auto& v = f.points[0].second;
            const auto& w = back.point("v");
            CHECK(v.a == w.a);
            CHECK(v.b == w.b);
            CHECK(v.c == w.c);
        }
    }
}

TEST_CASE("cotangent command") {
    const auto r = run([](auto& out, auto&) { return cmd_cotangent(demo("lemma33"), {}, Format::json, out); });
    REQUIRE(r.code == kOk);
    const auto j = Json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["reports"][0]["torsion_length"] == 5);
    CHECK(j["reports"][0]["closed_form_length"] == 5);
    CHECK(j["reports"][0]["free_rank"] == 3);
    CHECK(j["reports"][0]["divisors"] == Json::array({2, 3}));

    // points of V_empty
    const auto f = parse_instance(kFamily);
    const auto e = run([&](auto& out, auto&) { return cmd_cotangent(f, {"[]", "p0"}, Format::json, out); });
    REQUIRE(e.code == kOk);
    const auto je = Json::parse(e.out);
    CHECK(je["reports"][0]["torsion_length"] == 0);
    CHECK(je["reports"][0]["closed_form_length"] == 0);
    CHECK(je["reports"][0]["regular"] == true);

    const auto bad = run([](auto& out, auto&) { return cmd_cotangent(demo("lemma33"), {"{3}"}, Format::json, out); });
    CHECK(bad.code == kUsage);
    CHECK(bad.err.find("--sigma") != std::string::npos);
    CHECK(bad.out.empty());

    const auto outside = run([](auto& out, auto&) { return cmd_cotangent(demo("lemma33"), {"[2]"}, Format::json, out); });
    CHECK(outside.code == kUsage);
    CHECK(outside.err.find("stratum precondition") != std::string::npos);

    const auto text = run([](auto& out, auto&) { return cmd_cotangent(demo("lemma33"), {}, Format::text, out); });
    CHECK(text.code == kUsage);
}

TEST_CASE("cotangent-b command") {
    const auto r = run([](auto& out, auto&) { return cmd_cotangent_b(demo("lemma34"), {}, Format::json, out); });
    REQUIRE(r.code == kOk);
    const auto j = Json::parse(r.out);
    REQUIRE(j["reports"].size() == 3);
    CHECK(j["reports"][0]["torsion_length"] == 4);
    CHECK(j["reports"][0]["divisors"] == Json::array({2, 2}));
    CHECK(j["reports"][1]["torsion_length"] == 3);
    CHECK(j["reports"][2]["torsion_length"] == 4);
    CHECK(j["reports"][2]["closed_form_length"] == 4);

    Selection wrong;
    wrong.s = 2;
    CHECK(run([&](auto& out, auto&) { return cmd_cotangent_b(demo("lemma34"), wrong, Format::json, out); }).code ==
          kUsage);
    CHECK(run([](auto& out, auto&) { return cmd_cotangent_b(demo("lemma33"), {}, Format::json, out); }).code == kUsage);
}

TEST_CASE("psi and defect commands") {
    const auto f = parse_instance(kFamily);
    const auto psi = run([&](auto& out, auto&) { return cmd_psi(f, {}, Format::json, out); });
    REQUIRE(psi.code == kOk);
    const auto jp = Json::parse(psi.out);
    // p0: minimal stratum, 3 * (1 + 4); p2: base 12 + 4 * ord(b1)
    CHECK(jp["ledgers"][0]["psi_length"] == 15);
    CHECK(jp["ledgers"][1]["psi_length"] == 12 + 4 * 2);
    CHECK_FALSE(jp["ledgers"][0].contains("defect"));

    const auto def = run([&](auto& out, auto&) { return cmd_defect(f, {}, Format::json, out); });
    REQUIRE(def.code == kOk);
    const auto jd = Json::parse(def.out);
    CHECK(jd["ledgers"][0]["defect"] == 0);
    // p2: rank 4, Phi = 3 + 2, Psi = 20
    CHECK(jd["ledgers"][1]["defect"] == 0);
    CHECK(jd["ledgers"][1]["nonnegative"]["pass"] == true);

    auto inflated = f;
    inflated.base = BasePsi::table({{2, 13}});
    const auto neg = run([&](auto& out, auto&) { return cmd_defect(inflated, {}, Format::json, out); });
    CHECK(neg.code == kPropertyFailure);
    CHECK(Json::parse(neg.out)["ledgers"][1]["defect"] == -1);

    CHECK(run([](auto& out, auto&) { return cmd_psi(demo("lemma33"), {}, Format::json, out); }).code == kUsage);
}

TEST_CASE("descent command") {
    const auto ok = run([](auto& out, auto& err) { return cmd_descent(demo("totally-complex"), {}, Format::json, out, err); });
    REQUIRE(ok.code == kOk);
    const auto j = Json::parse(ok.out);
    CHECK(j["status"] == "all_forced");
    CHECK(j["certificate"]["conclusion"].size() == 8);
    for (const auto& [k, v] : j["certificate"]["conclusion"].items()) CHECK(v == 1);

    const auto jump = run([](auto& out, auto& err) { return cmd_descent(demo("synthetic-jump"), {}, Format::json, out, err); });
    CHECK(jump.code == kPropertyFailure);
    const auto jj = Json::parse(jump.out);
    CHECK(jj["status"] == "hypothesis_refuted");
    CHECK(jj["certificate"]["mode"] == "diagnostic");
    bool found = false;
    for (const auto& st : jj["certificate"]["steps"])
        if (st["sigma_prime"] == "[2]") {
            CHECK(st["lower_bound"] == 5);
            CHECK(st["upper_bound"] == 4);
            CHECK(st["verdict"] == "CONTRADICTION_WITNESSED");
            found = true;
        }
    CHECK(found);
    CHECK(jump.err.find("mu_T <= mu_empty") != std::string::npos);

    auto no_mu = demo("totally-complex");
    no_mu.mu.reset();
    const auto missing = run([&](auto& out, auto& err) { return cmd_descent(no_mu, {}, Format::json, out, err); });
    CHECK(missing.code == kUsage);
    CHECK(missing.err.find("[mu]") != std::string::npos);

    auto undeclared = demo("totally-complex");
    undeclared.depth = false;
    CHECK(run([&](auto& out, auto& err) { return cmd_descent(undeclared, {}, Format::json, out, err); }).code == kUsage);

    auto gated = demo("synthetic-jump");
    gated.override_gate = false;
    const auto g = run([&](auto& out, auto& err) { return cmd_descent(gated, {}, Format::json, out, err); });
    CHECK(g.code == kPropertyFailure);
    CHECK(Json::parse(g.out)["certificate"].is_null());

    const auto text =
        run([](auto& out, auto& err) { return cmd_descent(demo("synthetic-jump"), {}, Format::text, out, err); });
    CHECK(text.out.find("lower 5 > upper 4") != std::string::npos);
}

TEST_CASE("certificates round-trip through JSON") {
    const auto f = demo("synthetic-jump");
    auto fam = f.family();
    fam.mu = RankFunction(2, {1, 3, 2, 1});
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto cert = run_descent(fam, seed);
        const auto j = certificate_json(cert);
        const auto back = certificate_from_json(Json::parse(j.dump()), f.inst.ring);
        CHECK(certificate_json(back) == j);
        CHECK(back.conclusion == cert.conclusion);
        CHECK(verify_certificate(fam, back).pass);
    }
    CHECK_THROWS_AS(certificate_from_json(Json::parse("{\"n\": 2}"), f.inst.ring), ParseError);
}

TEST_CASE("reports replay from their instance echo") {
    const std::vector<std::string> names{"lemma33", "lemma34", "totally-complex", "synthetic-jump"};
    for (const auto& name : names) {
        const auto f = demo(name);
        const auto first = run([&](auto& out, auto& err) { return cmd_demo(f, {}, Format::json, out, err); });
        const auto echo = Json::parse(first.out)["instance"]["toml"].get<std::string>();
        const auto again = run([&](auto& out, auto& err) { return cmd_demo(parse_instance(echo), {}, Format::json, out, err); });
        CHECK(again.out == first.out);
        CHECK(again.code == first.code);
    }
}

TEST_CASE("CSV and JSON agree") {
    {
        const auto js = Json::parse(run([](auto& out, auto&) { return cmd_cotangent_b(demo("lemma34"), {}, Format::json, out); }).out);
        const auto rows = parse_csv(run([](auto& out, auto&) { return cmd_cotangent_b(demo("lemma34"), {}, Format::csv, out); }).out);
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& r = js["reports"][i];
            CHECK(rows[i + 1][0] == r["point"].get<std::string>());
            CHECK(rows[i + 1][1] == r["sigma"].get<std::string>());
            CHECK(rows[i + 1][2] == num(r["s"]));
            CHECK(rows[i + 1][4] == num(r["torsion_length"]));
            CHECK(rows[i + 1][5] == num(r["closed_form_length"]));
            CHECK(rows[i + 1][6] == num(r["free_rank"]));
            CHECK(rows[i + 1][7] == num(r["height"]));
        }
    }
    {
        const auto f = demo("synthetic-jump");
        const auto js = Json::parse(run([&](auto& out, auto& err) { return cmd_descent(f, {}, Format::json, out, err); }).out);
        const auto rows = parse_csv(run([&](auto& out, auto& err) { return cmd_descent(f, {}, Format::csv, out, err); }).out);
        const auto& steps = js["certificate"]["steps"];
        REQUIRE(rows.size() == steps.size() + 1);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            for (std::size_t c = 4; c < 12; ++c) CHECK(rows[i + 1][c] == num(steps[i][rows[0][c]]));
            CHECK(rows[i + 1][12] == steps[i]["verdict"].get<std::string>());
        }
    }
    {
        const auto f = parse_instance(kFamily);
        const auto js = Json::parse(run([&](auto& out, auto&) { return cmd_defect(f, {}, Format::json, out); }).out);
        const auto rows = parse_csv(run([&](auto& out, auto&) { return cmd_defect(f, {}, Format::csv, out); }).out);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t c = 3; c < 7; ++c) CHECK(rows[i + 1][c] == num(js["ledgers"][i][rows[0][c]]));
    }
    {
        FuzzOptions o;
        o.trials = 30;
        const auto r = run_fuzz(o);
        const auto js = fuzz_json(r);
        const auto rows = parse_csv(fuzz_csv(r));
        REQUIRE(rows.size() == 7);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(rows[i + 1][0] == js["checks"][i]["name"].get<std::string>());
            CHECK(rows[i + 1][1] == num(js["checks"][i]["trials"]));
            CHECK(rows[i + 1][2] == num(js["checks"][i]["failures"]));
            CHECK(rows[i + 1][3] == js["checks"][i]["checksum"].get<std::string>());
        }
    }
}

TEST_CASE("fuzz command") {
    FuzzOptions o;
    const auto a = run([&](auto& out, auto&) { return cmd_fuzz(o, Format::json, out); });
    const auto b = run([&](auto& out, auto&) { return cmd_fuzz(o, Format::json, out); });
    CHECK(a.code == kOk);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["failures"] == 0);
    CHECK(Json::parse(a.out)["checks"][0]["trials"] == 200);

    auto poly = o;
    poly.ring = Dvr(Backend::polynomial, 5);
    CHECK(run([&](auto& out, auto&) { return cmd_fuzz(poly, Format::json, out); }).out == a.out);

    auto other_seed = o;
    other_seed.seed = 2;
    CHECK(run([&](auto& out, auto&) { return cmd_fuzz(other_seed, Format::json, out); }).out != a.out);

    auto bad = o;
    bad.ord_max = 0;
    CHECK(run([&](auto& out, auto&) { return cmd_fuzz(bad, Format::json, out); }).code == kUsage);
}

TEST_CASE("a corrupted oracle yields a replayable counterexample") {
    FuzzOptions o;
    o.trials = 20;
    o.corrupt_oracle = true;
    const auto r = run([&](auto& out, auto&) { return cmd_fuzz(o, Format::json, out); });
    CHECK(r.code == kPropertyFailure);
    const auto j = Json::parse(r.out);
    CHECK(j["checks"][0]["failures"] == 20);
    CHECK(j["failures"] == 20);
    const auto& ce = j["counterexample"];
    REQUIRE(ce.is_object());
    CHECK(ce["check"] == "cotangent_A_closed_vs_snf");
    CHECK(ce["trial"] == 0);

    // the uncorrupted pipeline agrees with itself on the serialized instance
    const auto f = parse_instance(ce["instance_toml"].get<std::string>());
    const auto replay = run([&](auto& out, auto& err) { return cmd_demo(f, {}, Format::json, out, err); });
    CHECK(replay.code == kOk);
    const auto rep = Json::parse(replay.out)["reports"][0];
    CHECK(rep["point"] == "counterexample");
    CHECK(rep["torsion_length"] == rep["closed_form_length"]);
    CHECK(ce["detail"].get<std::string>().find("closed form " + num(rep["closed_form_length"])) == 0);
}

TEST_CASE("backend flag overrides the file") {
    Backends b;
    b.flag = Dvr(Backend::polynomial, 5);
    const auto f = load_instance("demo:lemma34", b);
    CHECK(f.inst.ring == Dvr(Backend::polynomial, 5));
    // the [2, "3"] unit parses over either backend
    CHECK(unit_part(f.point("boundary").a_at(2)) == f.inst.ring.from_integer(3));
    const auto r = run([&](auto& out, auto&) { return cmd_cotangent_b(f, {}, Format::csv, out); });
    const auto base = run([](auto& out, auto&) { return cmd_cotangent_b(demo("lemma34"), {}, Format::csv, out); });
    CHECK(r.out == base.out);
    CHECK_THROWS_AS(load_instance("demo:nope", {}), ParseError);
    CHECK_THROWS_AS(load_instance("/nonexistent/file.toml", {}), ParseError);
}
