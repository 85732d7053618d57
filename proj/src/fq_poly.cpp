#include "wdk/fq_poly.hpp"

#include "wdk/error.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace wdk {

namespace {

std::uint32_t reduce(std::int64_t c, std::uint32_t q) {
    auto r = c % static_cast<std::int64_t>(q);
    if (r < 0) r += q;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q);
}

void check_same_field(const FqPoly& x, const FqPoly& y) {
    if (x.modulus() != y.modulus())
        throw DomainError("polynomials over different fields F_" + std::to_string(x.modulus()) + " and F_" +
                          std::to_string(y.modulus()));
}

} // namespace

std::uint32_t fq_inverse(std::uint32_t a, std::uint32_t q) {
    std::int64_t r0 = q, r1 = a % q, s0 = 0, s1 = 1;
    if (r1 == 0) throw DomainError("zero has no inverse in F_" + std::to_string(q));
    while (r1 != 0) {
        auto quo = r0 / r1;
        r0 = std::exchange(r1, r0 - quo * r1);
        s0 = std::exchange(s1, s0 - quo * s1);
    }
    return reduce(s0, q);
}

FqPoly::FqPoly(std::uint32_t q, std::vector<std::uint32_t> coeffs) : q_(q), coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c %= q_;
    trim();
}

FqPoly FqPoly::constant(std::uint32_t q, std::int64_t c) { return FqPoly(q, {reduce(c, q)}); }

FqPoly FqPoly::monomial(std::uint32_t q, std::uint32_t c, std::size_t degree) {
    std::vector<std::uint32_t> cs(degree + 1, 0);
    cs[degree] = c % q;
    return FqPoly(q, std::move(cs));
}

void FqPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::size_t FqPoly::low_order() const noexcept {
    std::size_t k = 0;
    while (k < coeffs_.size() && coeffs_[k] == 0) ++k;
    return k == coeffs_.size() ? 0 : k;
}

FqPoly FqPoly::shift_down(std::size_t k) const {
    if (k == 0 || is_zero()) return *this;
    if (k > low_order()) throw DomainError("shift_down: t^" + std::to_string(k) + " does not divide");
    return FqPoly(q_, std::vector<std::uint32_t>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()));
}

FqPoly FqPoly::operator-() const {
    FqPoly r = *this;
    for (auto& c : r.coeffs_) c = c == 0 ? 0 : q_ - c;
    return r;
}

FqPoly FqPoly::scaled(std::uint32_t c) const {
    FqPoly r = *this;
    for (auto& x : r.coeffs_) x = mulmod(x, c % q_, q_);
    r.trim();
    return r;
}

FqPoly operator+(const FqPoly& x, const FqPoly& y) {
    check_same_field(x, y);
    std::vector<std::uint32_t> cs(std::max(x.coeffs_.size(), y.coeffs_.size()), 0);
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = (x.coeff(i) + y.coeff(i)) % x.q_;
    return FqPoly(x.q_, std::move(cs));
}

FqPoly operator-(const FqPoly& x, const FqPoly& y) { return x + (-y); }

FqPoly operator*(const FqPoly& x, const FqPoly& y) {
    check_same_field(x, y);
    if (x.is_zero() || y.is_zero()) return FqPoly(x.q_, {});
    std::vector<std::uint64_t> acc(x.coeffs_.size() + y.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < y.coeffs_.size(); ++j)
            acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(x.coeffs_[i]) * y.coeffs_[j]) % x.q_;
    std::vector<std::uint32_t> cs(acc.begin(), acc.end());
    return FqPoly(x.q_, std::move(cs));
}

void FqPoly::divmod(const FqPoly& dividend, const FqPoly& divisor, FqPoly& quot, FqPoly& rem) {
    check_same_field(dividend, divisor);
    if (divisor.is_zero()) throw DomainError("polynomial division by zero");
    const auto q = dividend.q_;
    const auto inv_lead = fq_inverse(divisor.leading(), q);
    std::vector<std::uint32_t> r = dividend.coeffs_;
    const auto dd = static_cast<std::size_t>(divisor.degree());
    std::vector<std::uint32_t> qc(r.size() >= dd + 1 ? r.size() - dd : 0, 0);
    for (std::size_t k = r.size(); k-- > dd;) {
        if (r[k] == 0) continue;
        const auto f = mulmod(r[k], inv_lead, q);
        qc[k - dd] = f;
        for (std::size_t j = 0; j <= dd; ++j) {
            auto sub = mulmod(f, divisor.coeffs_[j], q);
            r[k - dd + j] = (r[k - dd + j] + q - sub) % q;
        }
    }
    quot = FqPoly(q, std::move(qc));
    rem = FqPoly(q, std::move(r));
}

FqPoly FqPoly::gcd(FqPoly x, FqPoly y) {
    check_same_field(x, y);
    while (!y.is_zero()) {
        FqPoly quo, rem;
        divmod(x, y, quo, rem);
        x = std::move(y);
        y = std::move(rem);
    }
    if (x.is_zero()) return x;
    return x.scaled(fq_inverse(x.leading(), x.q_));
}

std::string FqPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto c = coeffs_[i];
        if (c == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1) out += std::to_string(c);
        out += 't';
        if (i > 1) out += '^' + std::to_string(i);
    }
    return out;
}

FqPoly FqPoly::parse(std::uint32_t q, std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw DomainError("empty polynomial literal");

    FqPoly acc(q, {});
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw DomainError("bad polynomial literal '" + std::string(text) + "': " + why);
    };
    auto read_int = [&](std::int64_t& out) {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return false;
        if (pos - start > 18) fail("integer too long");
        out = std::stoll(s.substr(start, pos - start));
        return true;
    };
    while (pos < s.size()) {
        std::int64_t sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            if (s[pos] == '-') sign = -1;
            ++pos;
        } else if (pos != 0) {
            fail("expected '+' or '-' at offset " + std::to_string(pos));
        }
        std::int64_t coef = 1;
        const bool has_coef = read_int(coef);
        std::size_t degree = 0;
        if (pos < s.size() && s[pos] == '*') {
            if (!has_coef) fail("dangling '*'");
            ++pos;
            if (pos >= s.size() || s[pos] != 't') fail("expected 't' after '*'");
        }
        if (pos < s.size() && s[pos] == 't') {
            ++pos;
            degree = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                std::int64_t k = 0;
                if (!read_int(k)) fail("expected exponent after '^'");
                degree = static_cast<std::size_t>(k);
            }
        } else if (!has_coef) {
            fail("expected a term at offset " + std::to_string(pos));
        }
        acc = acc + monomial(q, reduce(sign * coef, q), degree);
    }
    return acc;
}

RationalFunction::RationalFunction(FqPoly num, FqPoly den) {
    const auto q = num.modulus();
    if (den.is_zero() || den.coeff(0) == 0)
        throw DomainError("denominator " + den.to_string() + " vanishes at t = 0; element not in F_" +
                          std::to_string(q) + "[t]_(t)");
    if (num.is_zero()) {
        num_ = FqPoly(q, {});
        den_ = FqPoly::constant(q, 1);
        return;
    }
    auto g = FqPoly::gcd(num, den);
    FqPoly rest;
    FqPoly::divmod(num, g, num_, rest);
    FqPoly::divmod(den, g, den_, rest);
    const auto inv = fq_inverse(den_.coeff(0), q);
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
}

} // namespace wdk
