#pragma once

#include "wdk/fq_poly.hpp"

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>

namespace wdk {

/// Order of vanishing of an element of O. Zero has the distinguished value
/// infinity, which compares above every finite value and absorbs addition.
class Valuation {
public:
    constexpr Valuation() = default;
    constexpr explicit Valuation(std::uint64_t v) : v_(v) {}

    static constexpr Valuation infinity() { return Valuation(kInfinite); }

    constexpr bool is_infinite() const noexcept { return v_ == kInfinite; }
    /// Finite value; throws DomainError on infinity.
    std::uint64_t value() const;

    friend constexpr auto operator<=>(Valuation, Valuation) = default;
    friend constexpr Valuation operator+(Valuation x, Valuation y) {
        return (x.is_infinite() || y.is_infinite()) ? infinity() : Valuation(x.v_ + y.v_);
    }

    std::string to_string() const;

private:
    static constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t v_ = 0;
};

enum class Backend {
    rational,   ///< Z localized at (p): rationals whose denominator is prime to p.
    polynomial, ///< F_q[t] localized at (t), uniformizer t.
};

class DvrElem;

/// Descriptor of the active discrete valuation ring: the backend and its prime.
/// Elements carry a copy, so mixing rings is detected at run time.
class Dvr {
public:
    Dvr() : Dvr(Backend::rational, 5) {}
    Dvr(Backend backend, std::uint32_t prime);

    /// Parses "rational:p" or "poly:q".
    static Dvr parse(std::string_view spec);

    Backend backend() const noexcept { return backend_; }
    std::uint32_t prime() const noexcept { return prime_; }
    std::string to_string() const;

    /// The same kind of data over the other backend with the same prime.
    Dvr other() const;

    DvrElem zero() const;
    DvrElem one() const;
    DvrElem from_integer(std::int64_t c) const;
    DvrElem uniformizer_power(std::uint64_t k) const;
    /// unit * uniformizer^k; `unit` must have valuation 0.
    DvrElem element(std::uint64_t k, const DvrElem& unit) const;
    /// Deterministic unit derived from an integer code. The map is backend
    /// specific but consumes no randomness, so the same code stream yields
    /// valuation-matched elements on both backends.
    DvrElem unit_from_code(std::uint64_t code) const;
    /// Rational backend: "a" or "a/b". Polynomial backend: "f" or "(f)/(g)".
    DvrElem parse_element(std::string_view text) const;

    friend bool operator==(const Dvr&, const Dvr&) = default;

private:
    Backend backend_;
    std::uint32_t prime_;
};

/// Exact element of O in canonical form.
class DvrElem {
public:
    DvrElem(const Dvr& ring, mpq_class value);
    DvrElem(const Dvr& ring, RationalFunction value);

    const Dvr& ring() const noexcept { return ring_; }
    bool is_zero() const;
    Valuation ord() const;
    /// Canonical text, inverse of Dvr::parse_element.
    std::string to_string() const;

    DvrElem operator-() const;
    friend DvrElem operator+(const DvrElem& x, const DvrElem& y);
    friend DvrElem operator-(const DvrElem& x, const DvrElem& y);
    friend DvrElem operator*(const DvrElem& x, const DvrElem& y);
    friend bool operator==(const DvrElem& x, const DvrElem& y);

    const mpq_class& as_rational() const { return std::get<mpq_class>(rep_); }
    const RationalFunction& as_function() const { return std::get<RationalFunction>(rep_); }

private:
    Dvr ring_;
    std::variant<mpq_class, RationalFunction> rep_;
};

Valuation ord(const DvrElem& x);

/// z with z * y == x. Throws DomainError when y = 0 or ord(x) < ord(y).
DvrElem divide_exact(const DvrElem& x, const DvrElem& y);

/// Unit part u of x = u * uniformizer^ord(x); x must be nonzero.
DvrElem unit_part(const DvrElem& x);

} // namespace wdk
