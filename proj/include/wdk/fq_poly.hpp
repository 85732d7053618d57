#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wdk {

/// Dense univariate polynomial over the prime field F_q, coefficients stored
/// low degree first with no trailing zeros. The zero polynomial is empty.
class FqPoly {
public:
    FqPoly() = default;
    FqPoly(std::uint32_t q, std::vector<std::uint32_t> coeffs);

    static FqPoly constant(std::uint32_t q, std::int64_t c);
    static FqPoly monomial(std::uint32_t q, std::uint32_t c, std::size_t degree);

    std::uint32_t modulus() const noexcept { return q_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    std::uint32_t coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
    std::uint32_t leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    const std::vector<std::uint32_t>& coeffs() const noexcept { return coeffs_; }

    /// Order of vanishing at t = 0. Undefined (returns 0) for the zero polynomial.
    std::size_t low_order() const noexcept;
    /// Drops the factor t^k; requires k <= low_order().
    FqPoly shift_down(std::size_t k) const;

    FqPoly operator-() const;
    FqPoly scaled(std::uint32_t c) const;
    friend FqPoly operator+(const FqPoly& x, const FqPoly& y);
    friend FqPoly operator-(const FqPoly& x, const FqPoly& y);
    friend FqPoly operator*(const FqPoly& x, const FqPoly& y);
    friend bool operator==(const FqPoly& x, const FqPoly& y) = default;

    /// Euclidean division; `divisor` must be nonzero.
    static void divmod(const FqPoly& dividend, const FqPoly& divisor, FqPoly& quot, FqPoly& rem);
    /// Monic gcd (zero if both inputs are zero).
    static FqPoly gcd(FqPoly x, FqPoly y);

    /// Ascending-degree text such as "1+2t+t^3"; "0" for zero.
    std::string to_string() const;
    /// Accepts sums of terms `c`, `c*t`, `ct`, `t^k`, `c*t^k`, with optional spaces.
    static FqPoly parse(std::uint32_t q, std::string_view text);

private:
    void trim();

    std::uint32_t q_ = 2;
    std::vector<std::uint32_t> coeffs_;
};

/// Multiplicative inverse modulo the prime q of a nonzero residue.
std::uint32_t fq_inverse(std::uint32_t a, std::uint32_t q);

/// Element of the local ring F_q[t]_(t): num/den with den(0) != 0, reduced so
/// that gcd(num, den) = 1 and den(0) = 1. That normal form is unique.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(FqPoly num, FqPoly den);

    const FqPoly& num() const noexcept { return num_; }
    const FqPoly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    friend bool operator==(const RationalFunction& x, const RationalFunction& y) = default;

private:
    FqPoly num_;
    FqPoly den_;
};

} // namespace wdk
