#pragma once

#include "wdk/dvr.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wdk {

/// Subset of T = {1, ..., n}, stored as a bitmask (bit i-1 <-> index i).
class SigmaSet {
public:
    static constexpr int kMaxN = 16;

    constexpr SigmaSet() = default;
    constexpr explicit SigmaSet(std::uint32_t bits) : bits_(bits) {}
    SigmaSet(std::initializer_list<int> indices);

    static constexpr SigmaSet full(int n) { return SigmaSet((1u << n) - 1u); }

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr bool contains(int i) const noexcept { return i >= 1 && i <= kMaxN && ((bits_ >> (i - 1)) & 1u); }
    constexpr bool is_subset_of(SigmaSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
    int size() const noexcept;
    /// Ascending 1-based indices.
    std::vector<int> indices() const;

    SigmaSet with(int i) const;
    SigmaSet without(int i) const;

    friend constexpr SigmaSet operator|(SigmaSet x, SigmaSet y) { return SigmaSet(x.bits_ | y.bits_); }
    friend constexpr SigmaSet operator&(SigmaSet x, SigmaSet y) { return SigmaSet(x.bits_ & y.bits_); }
    friend constexpr SigmaSet operator-(SigmaSet x, SigmaSet y) { return SigmaSet(x.bits_ & ~y.bits_); }
    friend constexpr auto operator<=>(SigmaSet, SigmaSet) = default;

    /// Sorted index list, e.g. "[1,3]"; "[]" for the empty set.
    std::string to_string() const;
    /// Inverse of to_string. Accepts optional spaces and braces instead of
    /// brackets; rejects indices outside 1..n, duplicates and unsorted lists.
    static SigmaSet parse(std::string_view text, int n);

private:
    std::uint32_t bits_ = 0;
};

/// Shape of the ring family: T = {1..n}, g auxiliary t-variables, and the DVR.
struct Instance {
    int n = 1;
    int g = 0;
    Dvr ring;

    Instance() = default;
    Instance(int n, int g, Dvr ring);

    SigmaSet full() const { return SigmaSet::full(n); }
    /// Height of every p_v, i.e. the expected cotangent rank at regular points.
    int height() const { return n + g; }
    /// All 2^n subsets of T in bitmask order.
    std::vector<SigmaSet> subsets() const;
    void check_sigma(SigmaSet s, const char* what = "sigma") const;
};

/// O-point v = (a, b, c) with every coordinate in the maximal ideal and a_i b_i = 0.
struct OPoint {
    std::vector<DvrElem> a;
    std::vector<DvrElem> b;
    std::vector<DvrElem> c;

    /// 1-based accessors.
    const DvrElem& a_at(int i) const { return a.at(static_cast<std::size_t>(i - 1)); }
    const DvrElem& b_at(int i) const { return b.at(static_cast<std::size_t>(i - 1)); }

    /// Throws DimensionError / DomainError when the point is not in the set V for `inst`.
    void validate(const Instance& inst) const;

    /// "a=(0,25) b=(3125,0) c=(5)"
    std::string to_string() const;
};

/// Which irreducible component(s) of Spec A a point lies on.
class Stratum {
public:
    enum class Kind { interior, singular };

    static Stratum interior(SigmaSet component) { return Stratum(Kind::interior, component); }
    static Stratum singular(SigmaSet ambiguous) { return Stratum(Kind::singular, ambiguous); }

    Kind kind() const noexcept { return kind_; }
    bool is_interior() const noexcept { return kind_ == Kind::interior; }
    /// The component Sigma' for interior points.
    SigmaSet component() const;
    /// Indices with a_i = b_i = 0 for singular points.
    SigmaSet ambiguous() const;

    std::string to_string() const;
    friend bool operator==(const Stratum&, const Stratum&) = default;

private:
    Stratum(Kind k, SigmaSet s) : kind_(k), set_(s) {}
    Kind kind_;
    SigmaSet set_;
};

/// True iff a_i = 0 for every i outside sigma.
bool in_V_Sigma(const Instance& inst, SigmaSet sigma, const OPoint& v);

/// v in Z_sigma: a_i = 0 off sigma and b_j = 0 on sigma.
bool in_Z_Sigma(const Instance& inst, SigmaSet sigma, const OPoint& v);

Stratum classify(const Instance& inst, const OPoint& v);

/// Symbolic generators of I_sigma: x_i for i outside sigma, then y_j for j in sigma.
std::vector<std::string> ideal_generators(const Instance& inst, SigmaSet sigma);

struct OrdRange {
    std::uint64_t lo = 1;
    std::uint64_t hi = 6;
};

/// Point of Z°_{component}: the nonzero a_i (i in component) and b_j (j not in
/// component) get orders drawn from `ords`; c gets orders in [1, ords.hi].
/// Unit parts are random. Deterministic in `seed`.
OPoint random_point(const Instance& inst, SigmaSet component, OrdRange ords, std::uint64_t seed);

} // namespace wdk
