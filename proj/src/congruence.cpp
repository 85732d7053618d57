#include "wdk/congruence.hpp"

#include "wdk/cotangent.hpp"
#include "wdk/error.hpp"

#include <algorithm>

namespace wdk {

RankFunction::RankFunction(int n, std::vector<std::uint64_t> values) : n_(n), values_(std::move(values)) {
    if (n < 1 || n > SigmaSet::kMaxN) throw DimensionError("rank function: n = " + std::to_string(n));
    if (values_.size() != (std::size_t{1} << n))
        throw DimensionError("rank function needs 2^" + std::to_string(n) + " values, got " +
                             std::to_string(values_.size()));
}

RankFunction RankFunction::constant(int n, std::uint64_t mu) {
    if (n < 1 || n > SigmaSet::kMaxN) throw DimensionError("rank function: n = " + std::to_string(n));
    return RankFunction(n, std::vector<std::uint64_t>(std::size_t{1} << n, mu));
}

std::uint64_t RankFunction::operator()(SigmaSet s) const {
    if (s.bits() >= values_.size()) throw DimensionError("rank function has no value at " + s.to_string());
    return values_[s.bits()];
}

void RankFunction::set(SigmaSet s, std::uint64_t mu) {
    if (s.bits() >= values_.size()) throw DimensionError("rank function has no slot for " + s.to_string());
    values_[s.bits()] = mu;
}

std::uint64_t RankFunction::rank_on(SigmaSet component, SigmaSet sigma) const {
    return component.is_subset_of(sigma) ? (*this)(component) : 0;
}

BasePsi BasePsi::canonical() { return BasePsi{}; }

BasePsi BasePsi::minimal_zero() {
    BasePsi b;
    b.kind_ = Kind::minimal_zero;
    b.name_ = "minimal-zero";
    return b;
}

BasePsi BasePsi::table(std::map<std::uint32_t, std::uint64_t> entries) {
    BasePsi b;
    b.kind_ = Kind::table;
    b.name_ = "table";
    b.entries_ = std::move(entries);
    return b;
}

BasePsi BasePsi::custom(std::string name, Fn fn) {
    BasePsi b;
    b.kind_ = Kind::custom;
    b.name_ = std::move(name);
    b.fn_ = std::move(fn);
    return b;
}

std::optional<std::uint64_t> BasePsi::operator()(const FamilySpec& fam, SigmaSet component, const OPoint& v) const {
    switch (kind_) {
    case Kind::canonical:
        return fam.mu(component) * cotangent_length_closed(fam.inst, component, v);
    case Kind::minimal_zero:
        if (component.empty()) return 0;
        return std::nullopt;
    case Kind::table: {
        if (auto it = entries_.find(component.bits()); it != entries_.end()) return it->second;
        if (component.empty()) return 0;
        return std::nullopt;
    }
    case Kind::custom:
        return fn_(fam, component, v);
    }
    return std::nullopt;
}

namespace {

struct Placed {
    SigmaSet component;
    std::uint64_t base;
};

Placed place(const FamilySpec& fam, SigmaSet sigma, const OPoint& v) {
    fam.inst.check_sigma(sigma);
    const auto st = classify(fam.inst, v);
    if (!st.is_interior() || !st.component().is_subset_of(sigma))
        throw StratumError("point is " + st.to_string() + ", outside V°_" + sigma.to_string() +
                           "; congruence lengths need v interior on a component inside sigma");
    const auto base = fam.base(fam, st.component(), v);
    if (!base)
        throw PreconditionError("base_psi provider '" + fam.base.name() + "' is undefined on stratum " +
                                st.component().to_string());
    return {st.component(), *base};
}

} // namespace

std::uint64_t psi_length(const FamilySpec& fam, SigmaSet sigma, const OPoint& v) {
    return psi_length(fam, sigma, v, {});
}

std::uint64_t psi_length(const FamilySpec& fam, SigmaSet sigma, const OPoint& v, const std::vector<int>& order) {
    const auto [comp, base] = place(fam, sigma, v);
    auto steps = order.empty() ? (sigma - comp).indices() : order;
    auto sorted = steps;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != (sigma - comp).indices())
        throw PreconditionError("recursion order must be a permutation of " + (sigma - comp).to_string());

    // single step S -> S + {s}: the rank of M_{S+s} at v is mu_comp
    std::uint64_t psi = base;
    SigmaSet current = comp;
    for (int s : steps) {
        current = current.with(s);
        psi += fam.mu.rank_on(comp, current) * v.b_at(s).ord().value();
    }
    return psi;
}

DefectLedger wiles_defect(const FamilySpec& fam, SigmaSet sigma, const OPoint& v) {
    DefectLedger led;
    led.point = v;
    led.sigma = sigma;
    led.psi_length = psi_length(fam, sigma, v);
    led.phi_length = cotangent_length_closed(fam.inst, sigma, v);
    led.rank_at_point = fam.mu.rank_on(classify(fam.inst, v).component(), sigma);
    led.defect = static_cast<std::int64_t>(led.rank_at_point * led.phi_length) - static_cast<std::int64_t>(led.psi_length);
    return led;
}

bool free_summand_criterion(const FamilySpec& fam, SigmaSet sigma, const OPoint& v) {
    const auto st = classify(fam.inst, v);
    if (!st.is_interior() || !st.component().empty())
        throw StratumError("free-summand criterion is evaluated at points of Z°_[]; point is " + st.to_string());
    const auto led = wiles_defect(fam, sigma, v);
    return led.psi_length == fam.mu(SigmaSet{}) * led.phi_length;
}

AssertionResult defect_nonnegative(const FamilySpec& fam, const DefectLedger& ledger) {
    if (!fam.depth_declared)
        throw PreconditionError("defect nonnegativity needs depth_A M >= c+1, which this family does not declare");
    if (ledger.defect >= 0) return {true, ""};
    return {false, "Wiles defect " + std::to_string(ledger.defect) + " < 0 at sigma = " + ledger.sigma.to_string() +
                       " (rank " + std::to_string(ledger.rank_at_point) + " * Phi " +
                       std::to_string(ledger.phi_length) + " - Psi " + std::to_string(ledger.psi_length) +
                       "); contradicts nonnegativity of the defect for modules of depth >= c+1"};
}

FamilySpec direct_sum(const FamilySpec& x, const FamilySpec& y) {
    if (x.inst.n != y.inst.n || x.inst.g != y.inst.g || !(x.inst.ring == y.inst.ring))
        throw DimensionError("direct sum of families over different instances");
    std::vector<std::uint64_t> mu(x.mu.values().size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = x.mu.values()[i] + y.mu.values()[i];
    FamilySpec out{x.inst, RankFunction(x.inst.n, std::move(mu)), BasePsi::canonical(),
                   x.depth_declared && y.depth_declared, x.gorenstein_declared && y.gorenstein_declared};
    out.base = BasePsi::custom("(" + x.base.name() + ")+(" + y.base.name() + ")",
                               [x, y](const FamilySpec&, SigmaSet comp, const OPoint& v) -> std::optional<std::uint64_t> {
                                   const auto bx = x.base(x, comp, v);
                                   const auto by = y.base(y, comp, v);
                                   if (!bx || !by) return std::nullopt;
                                   return *bx + *by;
                               });
    return out;
}

FamilySpec scaled(const FamilySpec& fam, std::uint64_t k) {
    std::vector<std::uint64_t> mu = fam.mu.values();
    for (auto& m : mu) m *= k;
    FamilySpec out = fam;
    out.mu = RankFunction(fam.inst.n, std::move(mu));
    out.base = BasePsi::custom(std::to_string(k) + "*(" + fam.base.name() + ")",
                               [fam, k](const FamilySpec&, SigmaSet comp, const OPoint& v) -> std::optional<std::uint64_t> {
                                   const auto b = fam.base(fam, comp, v);
                                   if (!b) return std::nullopt;
                                   return k * *b;
                               });
    return out;
}

} // namespace wdk
