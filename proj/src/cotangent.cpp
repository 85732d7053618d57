#include "wdk/cotangent.hpp"

#include "wdk/error.hpp"

namespace wdk {

namespace {

std::vector<std::string> generator_labels(const Instance& inst, SigmaSet sigma) {
    std::vector<std::string> labels;
    for (int i : sigma.indices()) labels.push_back("x" + std::to_string(i));
    for (int i = 1; i <= inst.n; ++i) labels.push_back("y" + std::to_string(i));
    for (int k = 1; k <= inst.g; ++k) labels.push_back("t" + std::to_string(k));
    return labels;
}

// v must be interior on a component contained in sigma; returns that component.
SigmaSet interior_component_in(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    inst.check_sigma(sigma);
    const auto st = classify(inst, v);
    if (!st.is_interior())
        throw StratumError("point is " + st.to_string() +
                           "; the closed cotangent length needs v in Z°_S' for some S' inside " + sigma.to_string());
    if (!st.component().is_subset_of(sigma))
        throw StratumError("point lies on component " + st.component().to_string() + ", which is not inside " +
                           sigma.to_string() + "; v is not an interior point of Spec A_S");
    return st.component();
}

void check_b_setup(const Instance& inst, SigmaSet sigma, int s, const OPoint& v) {
    inst.check_sigma(sigma);
    if (!sigma.contains(s)) throw PreconditionError("s = " + std::to_string(s) + " is not in " + sigma.to_string());
    const auto st = classify(inst, v);
    const auto expected = sigma.without(s);
    if (!st.is_interior() || st.component() != expected)
        throw StratumError("point is " + st.to_string() + "; the quotient B formula needs v in Z°_" +
                           expected.to_string());
}

std::uint64_t sum_ord_a(const OPoint& v, SigmaSet over) {
    std::uint64_t total = 0;
    for (int i : over.indices()) total += v.a_at(i).ord().value();
    return total;
}

} // namespace

Presentation cotangent_presentation_A(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    if (!in_V_Sigma(inst, sigma, v))
        throw StratumError("point has a_i != 0 for some i outside " + sigma.to_string() + "; it is not in V_S");
    Presentation p(inst.ring, generator_labels(inst, sigma));
    for (int i : sigma.indices()) {
        auto& row = p.add_zero_relation();
        row[p.column("x" + std::to_string(i))] = v.b_at(i);
        row[p.column("y" + std::to_string(i))] = v.a_at(i);
    }
    return p;
}

std::uint64_t cotangent_length_closed(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    const auto comp = interior_component_in(inst, sigma, v);
    std::uint64_t total = sum_ord_a(v, comp);
    for (int j : (sigma - comp).indices()) total += v.b_at(j).ord().value();
    return total;
}

Presentation cotangent_presentation_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v) {
    check_b_setup(inst, sigma, s, v);
    auto p = cotangent_presentation_A(inst, sigma, v);
    DvrElem coeff = inst.ring.one();
    for (int i : sigma.without(s).indices()) coeff = coeff * v.a_at(i);
    auto& row = p.add_zero_relation();
    row[p.column("x" + std::to_string(s))] = coeff;
    return p;
}

std::uint64_t cotangent_length_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v) {
    check_b_setup(inst, sigma, s, v);
    const auto sa = sum_ord_a(v, sigma.without(s));
    return sa + std::min(v.b_at(s).ord().value(), sa);
}

bool regularity_check(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    return snf(cotangent_presentation_A(inst, sigma, v)).free_rank == static_cast<std::uint64_t>(inst.height());
}

CotangentReport cotangent_report_A(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    auto pres = cotangent_presentation_A(inst, sigma, v);
    auto s = snf(pres);
    CotangentReport r{std::move(pres), s, torsion_length(s), s.free_rank, std::nullopt,
                      s.free_rank == static_cast<std::uint64_t>(inst.height()), false};
    const auto st = classify(inst, v);
    if (st.is_interior() && st.component().is_subset_of(sigma)) {
        r.closed_form_length = cotangent_length_closed(inst, sigma, v);
        if (*r.closed_form_length != r.torsion_length)
            throw OracleMismatch("A_S cotangent length at S = " + sigma.to_string() + ": closed form " +
                                 std::to_string(*r.closed_form_length) + " vs SNF " + std::to_string(r.torsion_length));
    }
    return r;
}

CotangentReport cotangent_report_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v) {
    auto pres = cotangent_presentation_B(inst, sigma, s, v);
    auto sn = snf(pres);
    CotangentReport r{std::move(pres), sn, torsion_length(sn), sn.free_rank, cotangent_length_B(inst, sigma, s, v),
                      sn.free_rank == static_cast<std::uint64_t>(inst.height()), sigma.size() == 1};
    if (*r.closed_form_length != r.torsion_length)
        throw OracleMismatch("B cotangent length at S = " + sigma.to_string() + ", s = " + std::to_string(s) +
                             ": closed form " + std::to_string(*r.closed_form_length) + " vs SNF " +
                             std::to_string(r.torsion_length));
    return r;
}

} // namespace wdk
