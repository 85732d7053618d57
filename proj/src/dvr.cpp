#include "wdk/dvr.hpp"

#include "wdk/error.hpp"

#include <cctype>
#include <charconv>

namespace wdk {

namespace {

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t pvaluation(const mpz_class& z, std::uint32_t p) {
    mpz_class rest;
    mpz_class prime = p;
    return mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t());
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_parens(std::string_view s) {
    s = strip(s);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = strip(s.substr(1, s.size() - 2));
    return s;
}

void require_same_ring(const DvrElem& x, const DvrElem& y) {
    if (!(x.ring() == y.ring()))
        throw DomainError("elements of different rings: " + x.ring().to_string() + " vs " + y.ring().to_string());
}

} // namespace

std::uint64_t Valuation::value() const {
    if (is_infinite()) throw DomainError("valuation of zero is infinite");
    return v_;
}

std::string Valuation::to_string() const { return is_infinite() ? "inf" : std::to_string(v_); }

Dvr::Dvr(Backend backend, std::uint32_t prime) : backend_(backend), prime_(prime) {
    if (!is_prime(prime))
        throw DomainError(std::to_string(prime) + " is not prime; both backends need a prime p (or field size q)");
}

Dvr Dvr::parse(std::string_view spec) {
    spec = strip(spec);
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("backend '" + std::string(spec) + "' must look like rational:p or poly:q");
    const auto kind = spec.substr(0, colon);
    const auto num = spec.substr(colon + 1);
    std::uint32_t p = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (ec != std::errc{} || ptr != num.data() + num.size())
        throw DomainError("backend '" + std::string(spec) + "': bad prime '" + std::string(num) + "'");
    if (kind == "rational") return Dvr(Backend::rational, p);
    if (kind == "poly") return Dvr(Backend::polynomial, p);
    throw DomainError("unknown backend kind '" + std::string(kind) + "' (expected rational or poly)");
}

std::string Dvr::to_string() const {
    return (backend_ == Backend::rational ? "rational:" : "poly:") + std::to_string(prime_);
}

Dvr Dvr::other() const {
    return Dvr(backend_ == Backend::rational ? Backend::polynomial : Backend::rational, prime_);
}

DvrElem Dvr::zero() const { return from_integer(0); }

DvrElem Dvr::one() const { return from_integer(1); }

DvrElem Dvr::from_integer(std::int64_t c) const {
    if (backend_ == Backend::rational) return DvrElem(*this, mpq_class(mpz_class(std::to_string(c))));
    return DvrElem(*this, RationalFunction(FqPoly::constant(prime_, c), FqPoly::constant(prime_, 1)));
}

DvrElem Dvr::uniformizer_power(std::uint64_t k) const {
    if (backend_ == Backend::rational) {
        mpz_class v;
        mpz_ui_pow_ui(v.get_mpz_t(), prime_, k);
        return DvrElem(*this, mpq_class(v));
    }
    return DvrElem(*this, RationalFunction(FqPoly::monomial(prime_, 1, k), FqPoly::constant(prime_, 1)));
}

DvrElem Dvr::element(std::uint64_t k, const DvrElem& unit) const {
    if (!(unit.ring() == *this)) throw DomainError("unit belongs to " + unit.ring().to_string());
    if (unit.ord() != Valuation(0)) throw DomainError("'" + unit.to_string() + "' is not a unit");
    return unit * uniformizer_power(k);
}

DvrElem Dvr::unit_from_code(std::uint64_t code) const {
    const std::uint64_t p = prime_;
    const std::uint64_t lo = code & 0xffffffffu;
    const std::uint64_t hi = code >> 32;
    if (backend_ == Backend::rational) {
        // residues 1..p-1 keep both parts prime to p
        mpz_class num(std::to_string(1 + lo % (p - 1) + p * ((lo / (p - 1)) % 7)));
        mpz_class den(std::to_string(1 + hi % (p - 1) + p * ((hi / (p - 1)) % 5)));
        if ((code >> 63) & 1u) num = -num;
        return DvrElem(*this, mpq_class(num, den));
    }
    FqPoly num(prime_, {static_cast<std::uint32_t>(1 + lo % (p - 1)), static_cast<std::uint32_t>((lo / (p - 1)) % p)});
    FqPoly den(prime_, {static_cast<std::uint32_t>(1 + hi % (p - 1)), static_cast<std::uint32_t>((hi / (p - 1)) % p)});
    return DvrElem(*this, RationalFunction(std::move(num), std::move(den)));
}

DvrElem Dvr::parse_element(std::string_view text) const {
    const auto s = strip(text);
    if (s.empty()) throw DomainError("empty element literal");
    if (backend_ == Backend::rational) {
        mpq_class v;
        if (v.set_str(std::string(s), 10) != 0) throw DomainError("bad rational literal '" + std::string(s) + "'");
        v.canonicalize();
        return DvrElem(*this, v);
    }
    // top-level '/' (outside parentheses) separates numerator and denominator
    int depth = 0;
    std::size_t slash = std::string_view::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == '/' && depth == 0) slash = i;
    }
    const auto num = FqPoly::parse(prime_, strip_parens(s.substr(0, slash)));
    const auto den = slash == std::string_view::npos ? FqPoly::constant(prime_, 1)
                                                     : FqPoly::parse(prime_, strip_parens(s.substr(slash + 1)));
    return DvrElem(*this, RationalFunction(num, den));
}

DvrElem::DvrElem(const Dvr& ring, mpq_class value) : ring_(ring), rep_(std::move(value)) {
    if (ring_.backend() != Backend::rational) throw DomainError("rational value for " + ring_.to_string());
    auto& q = std::get<mpq_class>(rep_);
    q.canonicalize();
    if (mpz_divisible_ui_p(q.get_den_mpz_t(), ring_.prime()))
        throw DomainError(q.get_str() + " has denominator divisible by " + std::to_string(ring_.prime()) +
                          "; not an element of O");
}

DvrElem::DvrElem(const Dvr& ring, RationalFunction value) : ring_(ring), rep_(std::move(value)) {
    if (ring_.backend() != Backend::polynomial) throw DomainError("polynomial value for " + ring_.to_string());
    if (std::get<RationalFunction>(rep_).num().modulus() != ring_.prime())
        throw DomainError("rational function over the wrong field for " + ring_.to_string());
}

bool DvrElem::is_zero() const {
    if (const auto* q = std::get_if<mpq_class>(&rep_)) return sgn(*q) == 0;
    return std::get<RationalFunction>(rep_).is_zero();
}

Valuation DvrElem::ord() const {
    if (is_zero()) return Valuation::infinity();
    if (const auto* q = std::get_if<mpq_class>(&rep_)) return Valuation(pvaluation(q->get_num(), ring_.prime()));
    return Valuation(std::get<RationalFunction>(rep_).num().low_order());
}

std::string DvrElem::to_string() const {
    if (const auto* q = std::get_if<mpq_class>(&rep_)) return q->get_str();
    const auto& f = std::get<RationalFunction>(rep_);
    if (f.den() == FqPoly::constant(ring_.prime(), 1)) return f.num().to_string();
    return "(" + f.num().to_string() + ")/(" + f.den().to_string() + ")";
}

DvrElem DvrElem::operator-() const {
    if (const auto* q = std::get_if<mpq_class>(&rep_)) return DvrElem(ring_, mpq_class(-*q));
    const auto& f = std::get<RationalFunction>(rep_);
    return DvrElem(ring_, RationalFunction(-f.num(), f.den()));
}

DvrElem operator+(const DvrElem& x, const DvrElem& y) {
    require_same_ring(x, y);
    if (x.ring_.backend() == Backend::rational) return DvrElem(x.ring_, mpq_class(x.as_rational() + y.as_rational()));
    const auto& f = x.as_function();
    const auto& g = y.as_function();
    return DvrElem(x.ring_, RationalFunction(f.num() * g.den() + g.num() * f.den(), f.den() * g.den()));
}

DvrElem operator-(const DvrElem& x, const DvrElem& y) { return x + (-y); }

DvrElem operator*(const DvrElem& x, const DvrElem& y) {
    require_same_ring(x, y);
    if (x.ring_.backend() == Backend::rational) return DvrElem(x.ring_, mpq_class(x.as_rational() * y.as_rational()));
    const auto& f = x.as_function();
    const auto& g = y.as_function();
    return DvrElem(x.ring_, RationalFunction(f.num() * g.num(), f.den() * g.den()));
}

bool operator==(const DvrElem& x, const DvrElem& y) { return x.ring_ == y.ring_ && x.rep_ == y.rep_; }

Valuation ord(const DvrElem& x) { return x.ord(); }

DvrElem divide_exact(const DvrElem& x, const DvrElem& y) {
    require_same_ring(x, y);
    if (y.is_zero()) throw DomainError("divide_exact: division by zero");
    if (x.ord() < y.ord())
        throw DomainError("divide_exact: " + x.to_string() + " not divisible by " + y.to_string() + " (ord " +
                          x.ord().to_string() + " < " + y.ord().to_string() + ")");
    const auto& ring = x.ring();
    if (ring.backend() == Backend::rational) return DvrElem(ring, mpq_class(x.as_rational() / y.as_rational()));
    if (x.is_zero()) return ring.zero();
    const auto& f = x.as_function();
    const auto& g = y.as_function();
    // f/g = t^(k) * f' g.den / (f.den g'), where g' = g.num / t^ord(g)
    const auto k = g.num().low_order();
    return DvrElem(ring, RationalFunction(f.num().shift_down(k) * g.den(), f.den() * g.num().shift_down(k)));
}

DvrElem unit_part(const DvrElem& x) {
    if (x.is_zero()) throw DomainError("unit_part of zero");
    return divide_exact(x, x.ring().uniformizer_power(x.ord().value()));
}

} // namespace wdk
