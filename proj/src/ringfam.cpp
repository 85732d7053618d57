#include "wdk/ringfam.hpp"

#include "wdk/error.hpp"
#include "wdk/random.hpp"

#include <bit>
#include <cctype>

namespace wdk {

SigmaSet::SigmaSet(std::initializer_list<int> indices) {
    for (int i : indices) *this = with(i);
}

int SigmaSet::size() const noexcept { return std::popcount(bits_); }

std::vector<int> SigmaSet::indices() const {
    std::vector<int> out;
    for (int i = 1; i <= kMaxN; ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

SigmaSet SigmaSet::with(int i) const {
    if (i < 1 || i > kMaxN) throw DimensionError("index " + std::to_string(i) + " outside 1.." + std::to_string(kMaxN));
    return SigmaSet(bits_ | (1u << (i - 1)));
}

SigmaSet SigmaSet::without(int i) const {
    if (i < 1 || i > kMaxN) throw DimensionError("index " + std::to_string(i) + " outside 1.." + std::to_string(kMaxN));
    return SigmaSet(bits_ & ~(1u << (i - 1)));
}

std::string SigmaSet::to_string() const {
    std::string out = "[";
    for (int i : indices()) {
        if (out.size() > 1) out += ',';
        out += std::to_string(i);
    }
    return out + "]";
}

SigmaSet SigmaSet::parse(std::string_view text, int n) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    auto fail = [&](const std::string& why) -> SigmaSet {
        throw ParseError("subset '" + std::string(text) + "': " + why);
    };
    if (s.size() < 2 || !((s.front() == '[' && s.back() == ']') || (s.front() == '{' && s.back() == '}')))
        return fail("expected a sorted index list such as [1,2]");
    s = s.substr(1, s.size() - 2);
    SigmaSet out;
    int last = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto comma = s.find(',', pos);
        const auto tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty() || tok.size() > 3 || tok.find_first_not_of("0123456789") != std::string::npos)
            return fail("bad index '" + tok + "'");
        const int i = std::stoi(tok);
        if (i < 1 || i > n) return fail("index " + tok + " outside 1.." + std::to_string(n));
        if (i <= last) return fail("indices must be strictly increasing");
        out = out.with(i);
        last = i;
        if (comma == std::string::npos) break;
        pos = comma + 1;
        if (pos == s.size()) return fail("trailing comma");
    }
    return out;
}

Instance::Instance(int n_, int g_, Dvr ring_) : n(n_), g(g_), ring(std::move(ring_)) {
    if (n < 1 || n > SigmaSet::kMaxN)
        throw DimensionError("n = " + std::to_string(n) + " outside 1.." + std::to_string(SigmaSet::kMaxN));
    if (g < 0) throw DimensionError("g = " + std::to_string(g) + " is negative");
}

std::vector<SigmaSet> Instance::subsets() const {
    std::vector<SigmaSet> out;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) out.emplace_back(bits);
    return out;
}

void Instance::check_sigma(SigmaSet s, const char* what) const {
    if (!s.is_subset_of(full()))
        throw DimensionError(std::string(what) + " = " + s.to_string() + " is not a subset of T = {1.." +
                             std::to_string(n) + "}");
}

void OPoint::validate(const Instance& inst) const {
    if (a.size() != static_cast<std::size_t>(inst.n) || b.size() != static_cast<std::size_t>(inst.n) ||
        c.size() != static_cast<std::size_t>(inst.g))
        throw DimensionError("point has (|a|,|b|,|c|) = (" + std::to_string(a.size()) + "," +
                             std::to_string(b.size()) + "," + std::to_string(c.size()) + "), instance wants (" +
                             std::to_string(inst.n) + "," + std::to_string(inst.n) + "," + std::to_string(inst.g) +
                             ")");
    auto check = [&](const std::vector<DvrElem>& xs, const char* name) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(xs[i].ring() == inst.ring))
                throw DomainError(std::string(name) + std::to_string(i + 1) + " is over " + xs[i].ring().to_string() +
                                  ", instance uses " + inst.ring.to_string());
            if (!xs[i].is_zero() && xs[i].ord() < Valuation(1))
                throw DomainError(std::string(name) + std::to_string(i + 1) + " = " + xs[i].to_string() +
                                  " is a unit; coordinates must lie in the maximal ideal");
        }
    };
    check(a, "a");
    check(b, "b");
    check(c, "c");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero())
            throw DomainError("a" + std::to_string(i + 1) + " * b" + std::to_string(i + 1) + " != 0");
}

std::string OPoint::to_string() const {
    auto vec = [](const std::vector<DvrElem>& xs) {
        std::string out = "(";
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i].to_string();
        return out + ")";
    };
    return "a=" + vec(a) + " b=" + vec(b) + " c=" + vec(c);
}

SigmaSet Stratum::component() const {
    if (kind_ != Kind::interior) throw StratumError("singular point has no unique component");
    return set_;
}

SigmaSet Stratum::ambiguous() const {
    if (kind_ != Kind::singular) throw StratumError("interior point has no ambiguous indices");
    return set_;
}

std::string Stratum::to_string() const {
    return (kind_ == Kind::interior ? "INTERIOR(" : "SINGULAR(") + set_.to_string() + ")";
}

bool in_V_Sigma(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    v.validate(inst);
    inst.check_sigma(sigma);
    for (int i = 1; i <= inst.n; ++i)
        if (!sigma.contains(i) && !v.a_at(i).is_zero()) return false;
    return true;
}

bool in_Z_Sigma(const Instance& inst, SigmaSet sigma, const OPoint& v) {
    if (!in_V_Sigma(inst, sigma, v)) return false;
    for (int j : sigma.indices())
        if (!v.b_at(j).is_zero()) return false;
    return true;
}

Stratum classify(const Instance& inst, const OPoint& v) {
    v.validate(inst);
    SigmaSet support, ambiguous;
    for (int i = 1; i <= inst.n; ++i) {
        if (!v.a_at(i).is_zero()) support = support.with(i);
        else if (v.b_at(i).is_zero()) ambiguous = ambiguous.with(i);
    }
    return ambiguous.empty() ? Stratum::interior(support) : Stratum::singular(ambiguous);
}

std::vector<std::string> ideal_generators(const Instance& inst, SigmaSet sigma) {
    inst.check_sigma(sigma);
    std::vector<std::string> out;
    for (int i = 1; i <= inst.n; ++i)
        if (!sigma.contains(i)) out.push_back("x" + std::to_string(i));
    for (int j : sigma.indices()) out.push_back("y" + std::to_string(j));
    return out;
}

OPoint random_point(const Instance& inst, SigmaSet component, OrdRange ords, std::uint64_t seed) {
    inst.check_sigma(component, "component");
    if (ords.lo > ords.hi)
        throw PreconditionError("empty order range [" + std::to_string(ords.lo) + "," + std::to_string(ords.hi) + "]");
    if (ords.lo < 1) throw PreconditionError("coordinate orders must be >= 1");
    Rng rng(seed);
    auto draw = [&](std::uint64_t lo, std::uint64_t hi) {
        const auto k = rng.uniform(lo, hi);
        return inst.ring.element(k, inst.ring.unit_from_code(rng.next()));
    };
    OPoint v;
    for (int i = 1; i <= inst.n; ++i) {
        if (component.contains(i)) {
            v.a.push_back(draw(ords.lo, ords.hi));
            v.b.push_back(inst.ring.zero());
        } else {
            v.a.push_back(inst.ring.zero());
            v.b.push_back(draw(ords.lo, ords.hi));
        }
    }
    for (int k = 0; k < inst.g; ++k) {
        if (rng.chance(1, 4)) v.c.push_back(inst.ring.zero());
        else v.c.push_back(draw(1, ords.hi));
    }
    return v;
}

} // namespace wdk
