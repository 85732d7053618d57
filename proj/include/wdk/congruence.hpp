#pragma once

#include "wdk/ringfam.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wdk {

/// mu_S = rank of M_T on the component indexed by S, for every S inside T.
class RankFunction {
public:
    RankFunction() = default;
    /// `values[S.bits()]` is mu_S; needs exactly 2^n entries.
    RankFunction(int n, std::vector<std::uint64_t> values);
    static RankFunction constant(int n, std::uint64_t mu);

    int n() const noexcept { return n_; }
    std::uint64_t operator()(SigmaSet s) const;
    void set(SigmaSet s, std::uint64_t mu);
    /// rank of M_sigma on the component `component`: mu_component when
    /// component is inside sigma, 0 otherwise.
    std::uint64_t rank_on(SigmaSet component, SigmaSet sigma) const;
    const std::vector<std::uint64_t>& values() const noexcept { return values_; }

    friend bool operator==(const RankFunction&, const RankFunction&) = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> values_;
};

struct FamilySpec;

/// Supplies length Psi_v(M_S') at a point v interior on the component S'.
/// nullopt means "not determined by this provider".
class BasePsi {
public:
    enum class Kind { canonical, minimal_zero, table, custom };
    using Fn = std::function<std::optional<std::uint64_t>(const FamilySpec&, SigmaSet, const OPoint&)>;

    /// M_S = A_S^mu: mu_S' times the cotangent length of A_S' at v (complete
    /// intersections have zero defect).
    static BasePsi canonical();
    /// Only the minimal stratum is known, where M_empty is free: value 0.
    static BasePsi minimal_zero();
    /// Constant per stratum. The empty stratum defaults to 0 unless listed.
    static BasePsi table(std::map<std::uint32_t, std::uint64_t> entries);
    static BasePsi custom(std::string name, Fn fn);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    const std::map<std::uint32_t, std::uint64_t>& entries() const noexcept { return entries_; }

    std::optional<std::uint64_t> operator()(const FamilySpec& fam, SigmaSet component, const OPoint& v) const;

private:
    Kind kind_ = Kind::canonical;
    std::string name_ = "canonical";
    std::map<std::uint32_t, std::uint64_t> entries_;
    Fn fn_;
};

/// Abstract module family {M_S}: ranks plus base congruence lengths. Depth and
/// Gorenstein hypotheses cannot be certified from this data and are declared.
struct FamilySpec {
    Instance inst;
    RankFunction mu;
    BasePsi base = BasePsi::canonical();
    bool depth_declared = false;
    bool gorenstein_declared = false;
};

struct DefectLedger {
    OPoint point;
    SigmaSet sigma;
    std::uint64_t rank_at_point = 0;
    std::uint64_t phi_length = 0;
    std::uint64_t psi_length = 0;
    std::int64_t defect = 0; ///< rank_at_point * phi_length - psi_length
};

struct AssertionResult {
    bool pass = false;
    std::string diagnostic;
};

/// length Psi_v(M_sigma) = base(S', v) + mu_S' * sum_{i in sigma \ S'} ord(b_i)
/// for v interior on S' inside sigma, accumulated one index at a time.
std::uint64_t psi_length(const FamilySpec& fam, SigmaSet sigma, const OPoint& v);
/// Same recursion with the indices of sigma \ S' added in the given order.
std::uint64_t psi_length(const FamilySpec& fam, SigmaSet sigma, const OPoint& v, const std::vector<int>& order);

DefectLedger wiles_defect(const FamilySpec& fam, SigmaSet sigma, const OPoint& v);

/// For v in Z°_empty: does Psi = mu_empty * Phi hold, i.e. is the numerical
/// hypothesis of the free-summand criterion met with mu = mu_empty?
bool free_summand_criterion(const FamilySpec& fam, SigmaSet sigma, const OPoint& v);

/// Nonnegativity of the defect, valid only under the declared depth hypothesis.
AssertionResult defect_nonnegative(const FamilySpec& fam, const DefectLedger& ledger);

/// M_S (+) N_S: ranks and base lengths add.
FamilySpec direct_sum(const FamilySpec& x, const FamilySpec& y);
/// M_S^k.
FamilySpec scaled(const FamilySpec& fam, std::uint64_t k);

} // namespace wdk
