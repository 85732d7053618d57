#include "commands.hpp"

#include "demos.hpp"
#include "report.hpp"
#include "wdk/error.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace wdk::cli {

namespace {

SigmaSet pick_sigma(const InstanceFile& f, const Selection& sel) {
    if (sel.sigma) {
        try {
            return SigmaSet::parse(*sel.sigma, f.inst.n);
        } catch (const ParseError& e) {
            throw ParseError(std::string("--sigma: ") + e.what());
        }
    }
    return f.demo.sigma.value_or(f.inst.full());
}

std::vector<std::pair<std::string, OPoint>> pick_points(const InstanceFile& f, const Selection& sel) {
    const auto name = sel.point ? sel.point : f.demo.point;
    if (name) return {{*name, f.point(*name)}};
    if (f.points.empty()) throw ParseError("the instance declares no [points.*] tables");
    return f.points;
}

int pick_s(const InstanceFile& f, const Selection& sel) {
    const auto s = sel.s ? sel.s : f.demo.s;
    if (!s) throw ParseError("cotangent-b needs --s (or s in [demo])");
    if (*s < 1 || *s > f.inst.n) throw ParseError("--s = " + std::to_string(*s) + " outside 1.." + std::to_string(f.inst.n));
    return *s;
}

std::string optional_text(const std::optional<std::uint64_t>& x) { return x ? std::to_string(*x) : ""; }

std::string join(const std::vector<std::uint64_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i]);
    return s;
}

void emit(const Json& j, std::ostream& out) { out << j.dump(2) << "\n"; }

void no_text(Format fmt, const char* command) {
    if (fmt == Format::text) throw ParseError(std::string("--out text is only available for descent, not ") + command);
}

int cotangent_common(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, bool quotient) {
    no_text(fmt, quotient ? "cotangent-b" : "cotangent");
    const auto sigma = pick_sigma(f, sel);
    const std::optional<int> s = quotient ? std::optional<int>(pick_s(f, sel)) : std::nullopt;
    auto j = report_header(quotient ? "cotangent-b" : "cotangent", f);
    Json reports = Json::array();
    std::string csv = csv_row({"point", "sigma", "s", "stratum", "torsion_length", "closed_form_length", "free_rank",
                               "height", "regular", "divisors"});
    for (const auto& [name, v] : pick_points(f, sel)) {
        const auto r = quotient ? cotangent_report_B(f.inst, sigma, *s, v) : cotangent_report_A(f.inst, sigma, v);
        reports.push_back(cotangent_json(name, f.inst, sigma, s, v, r));
        csv += csv_row({name, sigma.to_string(), s ? std::to_string(*s) : "", classify(f.inst, v).to_string(),
                        std::to_string(r.torsion_length), optional_text(r.closed_form_length),
                        std::to_string(r.free_rank), std::to_string(f.inst.height()), r.regular ? "true" : "false",
                        join(r.snf.divisor_valuations)});
    }
    j["reports"] = reports;
    if (fmt == Format::csv) out << csv;
    else emit(j, out);
    return kOk;
}

int ledger_common(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, bool full) {
    no_text(fmt, full ? "defect" : "psi");
    const auto fam = f.family();
    const auto sigma = pick_sigma(f, sel);
    auto j = report_header(full ? "defect" : "psi", f);
    j["base_psi"] = fam.base.name();
    Json ledgers = Json::array();
    std::string csv = full ? csv_row({"point", "sigma", "stratum", "rank_at_point", "phi_length", "psi_length", "defect",
                                      "nonnegative"})
                           : csv_row({"point", "sigma", "stratum", "rank_at_point", "psi_length"});
    int code = kOk;
    for (const auto& [name, v] : pick_points(f, sel)) {
        const auto led = wiles_defect(fam, sigma, v);
        auto lj = ledger_json(name, v, f.inst, led);
        std::string nonneg;
        if (!full) {
            lj.erase("phi_length");
            lj.erase("defect");
        } else if (fam.depth_declared) {
            const auto res = defect_nonnegative(fam, led);
            lj["nonnegative"] = {{"pass", res.pass}, {"diagnostic", res.diagnostic}};
            nonneg = res.pass ? "true" : "false";
            if (!res.pass) code = kPropertyFailure;
        } else {
            lj["nonnegative"] = nullptr;
        }
        ledgers.push_back(lj);
        if (full)
            csv += csv_row({name, sigma.to_string(), lj["stratum"], std::to_string(led.rank_at_point),
                            std::to_string(led.phi_length), std::to_string(led.psi_length), std::to_string(led.defect),
                            nonneg});
        else
            csv += csv_row({name, sigma.to_string(), lj["stratum"], std::to_string(led.rank_at_point),
                            std::to_string(led.psi_length)});
    }
    j["ledgers"] = ledgers;
    if (fmt == Format::csv) out << csv;
    else emit(j, out);
    return code;
}

std::string descent_csv(const DescentCertificate& cert) {
    std::string out = csv_row({"step", "sigma", "s", "sigma_prime", "multiplier", "ord_b_s", "phi_B", "lower_bound",
                               "upper_bound", "psi_W_sigma", "defect_M_sigma", "defect_M_sigma_prime", "verdict"});
    int k = 0;
    for (const auto& st : cert.steps)
        out += csv_row({std::to_string(++k), st.sigma.to_string(), std::to_string(st.s), st.sigma_prime.to_string(),
                        std::to_string(st.multiplier), std::to_string(st.ord_b_s), std::to_string(st.phi_B),
                        std::to_string(st.lower_bound), std::to_string(st.upper_bound), std::to_string(st.psi_W_sigma),
                        std::to_string(st.defect_M_sigma), std::to_string(st.defect_M_sigma_prime),
                        to_string(st.verdict)});
    return out;
}

} // namespace

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw ParseError("--out must be json, csv or text, got '" + s + "'");
}

InstanceFile load_instance(const std::string& source, const Backends& backends) {
    std::string text;
    if (source.rfind("demo:", 0) == 0) {
        const auto d = find_demo(source.substr(5));
        if (!d) throw ParseError("no demo named '" + source.substr(5) + "' (see wdk demo --list)");
        text = std::string(*d);
    } else {
        std::ifstream in(source, std::ios::binary);
        if (!in) throw ParseError("cannot read '" + source + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return parse_instance(text, backends.flag, backends.fallback);
    } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

int cmd_cotangent(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out) {
    return cotangent_common(f, sel, fmt, out, false);
}

int cmd_cotangent_b(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out) {
    return cotangent_common(f, sel, fmt, out, true);
}

int cmd_psi(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out) {
    return ledger_common(f, sel, fmt, out, false);
}

int cmd_defect(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out) {
    return ledger_common(f, sel, fmt, out, true);
}

int cmd_descent(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, std::ostream& err) {
    const auto fam = f.family();
    if (!fam.depth_declared || !fam.gorenstein_declared)
        throw ParseError("descent needs [flags] depth = true and gorenstein = true");
    const auto seed = sel.seed ? *sel.seed : f.demo.seed.value_or(1);
    const auto opts = f.descent_options();

    std::string status;
    std::string diagnostic;
    std::optional<DescentCertificate> cert;
    int code = kOk;
    try {
        cert = run_descent(fam, seed, opts);
        status = "all_forced";
    } catch (const DescentError& e) {
        status = "not_forced";
        diagnostic = e.what();
        cert = e.certificate();
        code = kPropertyFailure;
    } catch (const PreconditionError& e) {
        status = "hypothesis_refuted";
        diagnostic = e.what();
        if (opts.override_rank_gate) cert = diagnose_descent(fam, seed, opts);
        code = kPropertyFailure;
    }
    if (!diagnostic.empty()) err << "descent: " << diagnostic << "\n";

    if (fmt == Format::text) {
        out << "status: " << status << "\n";
        if (!diagnostic.empty()) out << "diagnostic: " << diagnostic << "\n";
        if (cert) out << render_certificate(*cert);
    } else if (fmt == Format::csv) {
        if (cert) out << descent_csv(*cert);
        else out << descent_csv(DescentCertificate{});
    } else {
        auto j = report_header("descent", f);
        j["seed"] = seed;
        j["status"] = status;
        j["diagnostic"] = diagnostic.empty() ? Json(nullptr) : Json(diagnostic);
        j["certificate"] = cert ? certificate_json(*cert) : Json(nullptr);
        emit(j, out);
    }
    return code;
}

int cmd_fuzz(const FuzzOptions& opts, Format fmt, std::ostream& out) {
    no_text(fmt, "fuzz");
    const auto r = run_fuzz(opts);
    if (fmt == Format::csv) out << fuzz_csv(r);
    else emit(fuzz_json(r), out);
    return r.failures() == 0 ? kOk : kPropertyFailure;
}

int cmd_demo(const InstanceFile& f, const Selection& sel, Format fmt, std::ostream& out, std::ostream& err) {
    const auto& c = f.demo.command;
    if (c == "cotangent") return cmd_cotangent(f, sel, fmt, out);
    if (c == "cotangent-b") return cmd_cotangent_b(f, sel, fmt, out);
    if (c == "psi") return cmd_psi(f, sel, fmt, out);
    if (c == "defect") return cmd_defect(f, sel, fmt, out);
    if (c == "descent") return cmd_descent(f, sel, fmt, out, err);
    if (c.empty()) throw ParseError("the instance has no [demo] command");
    throw ParseError("unknown demo command '" + c + "'");
}

int guarded(const std::function<int()>& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const OracleMismatch& e) {
        err << "error: oracle mismatch: " << e.what() << "\n";
        return kPropertyFailure;
    } catch (const DescentError& e) {
        err << "error: " << e.what() << "\n";
        return kPropertyFailure;
    } catch (const StratumError& e) {
        err << "error: stratum precondition: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace wdk::cli
