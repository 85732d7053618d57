#include "report.hpp"

#include "wdk/error.hpp"

namespace wdk::cli {

namespace {

Json elems(const std::vector<DvrElem>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(x.to_string());
    return out;
}

std::vector<DvrElem> elems_from(const Json& j, const Dvr& ring) {
    std::vector<DvrElem> out;
    for (const auto& x : j) out.push_back(ring.parse_element(x.get<std::string>()));
    return out;
}

SigmaSet subset_from(const Json& j, int n) { return SigmaSet::parse(j.get<std::string>(), n); }

} // namespace

Json report_header(const std::string& command, const InstanceFile& f) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["instance"] = {{"backend", f.inst.ring.to_string()}, {"n", f.inst.n}, {"g", f.inst.g}, {"toml", to_toml(f)}};
    return j;
}

Json point_json(const OPoint& v) { return {{"a", elems(v.a)}, {"b", elems(v.b)}, {"c", elems(v.c)}}; }

OPoint point_from_json(const Json& j, const Dvr& ring) {
    return OPoint{elems_from(j.at("a"), ring), elems_from(j.at("b"), ring), elems_from(j.at("c"), ring)};
}

Json cotangent_json(const std::string& point, const Instance& inst, SigmaSet sigma, std::optional<int> s,
                    const OPoint& v, const CotangentReport& r) {
    Json j;
    j["point"] = point;
    j["sigma"] = sigma.to_string();
    if (s) j["s"] = *s;
    j["stratum"] = classify(inst, v).to_string();
    j["coordinates"] = point_json(v);
    Json rows = Json::array();
    for (const auto& row : r.presentation.rows()) rows.push_back(elems(row));
    j["presentation"] = {{"generators", r.presentation.labels()}, {"relations", rows}};
    j["divisors"] = r.snf.divisor_valuations;
    j["torsion_length"] = r.torsion_length;
    j["closed_form_length"] = r.closed_form_length ? Json(*r.closed_form_length) : Json(nullptr);
    j["free_rank"] = r.free_rank;
    j["height"] = inst.height();
    j["regular"] = r.regular;
    if (s) j["degenerate_single_index"] = r.degenerate_single_index;
    return j;
}

Json ledger_json(const std::string& point, const OPoint& v, const Instance& inst, const DefectLedger& led) {
    Json j;
    j["point"] = point;
    j["sigma"] = led.sigma.to_string();
    j["stratum"] = classify(inst, v).to_string();
    j["rank_at_point"] = led.rank_at_point;
    j["phi_length"] = led.phi_length;
    j["psi_length"] = led.psi_length;
    j["defect"] = led.defect;
    return j;
}

Json step_json(const DescentStep& st) {
    Json j;
    j["sigma"] = st.sigma.to_string();
    j["s"] = st.s;
    j["sigma_prime"] = st.sigma_prime.to_string();
    j["witness"] = point_json(st.witness);
    j["multiplier"] = st.multiplier;
    j["ord_b_s"] = st.ord_b_s;
    j["phi_B"] = st.phi_B;
    j["lower_bound"] = st.lower_bound;
    j["upper_bound"] = st.upper_bound;
    j["psi_M_sigma"] = st.psi_M_sigma;
    j["psi_M_sigma_prime"] = st.psi_M_sigma_prime;
    j["phi_A_sigma"] = st.phi_A_sigma;
    j["phi_A_sigma_prime"] = st.phi_A_sigma_prime;
    j["psi_W_sigma"] = st.psi_W_sigma;
    j["defect_M_sigma"] = st.defect_M_sigma;
    j["defect_M_sigma_prime"] = st.defect_M_sigma_prime;
    j["parent_established"] = st.parent_established;
    j["unit_jump_separated"] = st.unit_jump_separated;
    j["chain_consistent"] = st.chain_consistent;
    j["verdict"] = to_string(st.verdict);
    j["note"] = st.note;
    j["assumed"] = st.assumed;
    j["verified"] = st.verified;
    return j;
}

Json certificate_json(const DescentCertificate& cert) {
    Json j;
    j["n"] = cert.n;
    j["mu_empty"] = cert.mu_empty;
    j["seed"] = cert.seed;
    j["removal_order"] = cert.removal_order;
    j["mode"] = cert.mode == StepMode::induction ? "induction" : "diagnostic";
    j["hypotheses_hold"] = cert.hypotheses_hold;
    j["all_forced"] = cert.all_forced();
    Json steps = Json::array();
    for (const auto& st : cert.steps) steps.push_back(step_json(st));
    j["steps"] = steps;
    Json concl = Json::object();
    for (const auto& [bits, mu] : cert.conclusion) concl[SigmaSet(bits).to_string()] = mu;
    j["conclusion"] = concl;
    return j;
}

DescentCertificate certificate_from_json(const Json& j, const Dvr& ring) {
    try {
        DescentCertificate c;
        c.n = j.at("n").get<int>();
        c.mu_empty = j.at("mu_empty").get<std::uint64_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.removal_order = j.at("removal_order").get<std::vector<int>>();
        const auto mode = j.at("mode").get<std::string>();
        if (mode != "induction" && mode != "diagnostic") throw ParseError("unknown mode '" + mode + "'");
        c.mode = mode == "induction" ? StepMode::induction : StepMode::diagnostic;
        c.hypotheses_hold = j.at("hypotheses_hold").get<bool>();
        for (const auto& s : j.at("steps")) {
            DescentStep st;
            st.sigma = subset_from(s.at("sigma"), c.n);
            st.s = s.at("s").get<int>();
            st.sigma_prime = subset_from(s.at("sigma_prime"), c.n);
            st.witness = point_from_json(s.at("witness"), ring);
            st.multiplier = s.at("multiplier").get<std::int64_t>();
            st.ord_b_s = s.at("ord_b_s").get<std::uint64_t>();
            st.phi_B = s.at("phi_B").get<std::uint64_t>();
            st.lower_bound = s.at("lower_bound").get<std::int64_t>();
            st.upper_bound = s.at("upper_bound").get<std::int64_t>();
            st.psi_M_sigma = s.at("psi_M_sigma").get<std::uint64_t>();
            st.psi_M_sigma_prime = s.at("psi_M_sigma_prime").get<std::uint64_t>();
            st.phi_A_sigma = s.at("phi_A_sigma").get<std::uint64_t>();
            st.phi_A_sigma_prime = s.at("phi_A_sigma_prime").get<std::uint64_t>();
            st.psi_W_sigma = s.at("psi_W_sigma").get<std::int64_t>();
            st.defect_M_sigma = s.at("defect_M_sigma").get<std::int64_t>();
            st.defect_M_sigma_prime = s.at("defect_M_sigma_prime").get<std::int64_t>();
            st.parent_established = s.at("parent_established").get<bool>();
            st.unit_jump_separated = s.at("unit_jump_separated").get<bool>();
            st.chain_consistent = s.at("chain_consistent").get<bool>();
            st.verdict = verdict_from_string(s.at("verdict").get<std::string>());
            st.note = s.at("note").get<std::string>();
            st.assumed = s.at("assumed").get<std::vector<std::string>>();
            st.verified = s.at("verified").get<std::vector<std::string>>();
            c.steps.push_back(std::move(st));
        }
        for (const auto& [k, v] : j.at("conclusion").items())
            c.conclusion[SigmaSet::parse(k, c.n).bits()] = v.get<std::uint64_t>();
        return c;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    return out + "\n";
}

} // namespace wdk::cli
