#pragma once

#include "wdk/congruence.hpp"
#include "wdk/error.hpp"
#include "wdk/ringfam.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wdk {

enum class Verdict {
    forced_equal,            ///< mu_S' = mu_empty is forced at this step
    contradiction_witnessed, ///< the declared data contradicts the inequality chain
    inconclusive,            ///< the witness does not separate the bounds
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// How a step relates to the induction. `induction` assumes mu_S <= mu_empty
/// holds for the parent S; `diagnostic` evaluates the same numbers for data
/// that fails the hypotheses, so separations become contradictions.
enum class StepMode { induction, diagnostic };

/// One removal S -> S' = S \ {s}, evaluated at a witness v in Z°_S'.
struct DescentStep {
    SigmaSet sigma;
    int s = 0;
    SigmaSet sigma_prime;
    OPoint witness;

    std::int64_t multiplier = 0; ///< declared mu_S' - mu_empty
    std::uint64_t ord_b_s = 0;
    std::uint64_t phi_B = 0; ///< length Phi_v(B), B = A_S / (prod_{i in S} x_i)
    std::int64_t lower_bound = 0; ///< multiplier * ord(b_s)
    std::int64_t upper_bound = 0; ///< multiplier * phi_B

    // the displayed chain, evaluated numerically
    std::uint64_t psi_M_sigma = 0;
    std::uint64_t psi_M_sigma_prime = 0;
    std::uint64_t phi_A_sigma = 0;
    std::uint64_t phi_A_sigma_prime = 0;
    std::int64_t psi_W_sigma = 0; ///< Psi(M_S) - mu_empty * Psi(A_S), with Psi(A_S) = Phi(A_S)
    std::int64_t defect_M_sigma = 0;
    std::int64_t defect_M_sigma_prime = 0;

    bool parent_established = true;
    bool unit_jump_separated = false; ///< ord(b_s) > phi_B: any jump mu_S' > mu_empty is refuted here
    bool chain_consistent = true;     ///< psi_W >= lower bound and both declared defects >= 0

    Verdict verdict = Verdict::inconclusive;
    std::string note;
    std::vector<std::string> assumed;  ///< properties the step relies on without checking
    std::vector<std::string> verified; ///< inequalities checked numerically at the witness
};

struct DescentCertificate {
    int n = 0;
    std::uint64_t mu_empty = 0;
    std::uint64_t seed = 0;
    std::vector<int> removal_order;
    StepMode mode = StepMode::induction;
    bool hypotheses_hold = true;
    std::vector<DescentStep> steps;
    /// Forced value of mu_S per subset (bitmask); subsets left open are absent.
    std::map<std::uint32_t, std::uint64_t> conclusion;

    bool all_forced() const;
};

/// Thrown by run_descent when some step is not forced; carries the partial certificate.
class DescentError : public Error {
public:
    DescentError(const std::string& what, DescentCertificate cert) : Error(what), cert_(std::move(cert)) {}
    const DescentCertificate& certificate() const noexcept { return cert_; }

private:
    DescentCertificate cert_;
};

/// Witness in Z°_{sigma \ s} with prescribed ord(a_i) for i in sigma \ s and
/// ord(b_s) = 2 * sum ord(a_i) + 1, the least order breaking
/// 2 * sum ord(a_i) >= ord(b_s). Everything else is drawn from `seed`.
OPoint find_witness(const Instance& inst, SigmaSet sigma, int s, const std::map<int, std::uint64_t>& ord_a,
                    std::uint64_t seed);

DescentStep evaluate_step(const FamilySpec& fam, SigmaSet sigma, int s, const OPoint& v,
                          StepMode mode = StepMode::induction, bool parent_established = true);

struct DescentOptions {
    /// Removal order of the indices of T; empty means 1, 2, ..., n.
    std::vector<int> removal_order;
    /// Skip the mu_S >= mu_empty gate (negative testing only).
    bool override_rank_gate = false;
    /// Fix every prescribed ord(a_i); otherwise drawn from the seed in [1, 3].
    std::optional<std::uint64_t> witness_ord_a;
    /// Replaces find_witness, e.g. to force a non-separating witness.
    std::function<OPoint(const Instance&, SigmaSet sigma, int s, std::uint64_t seed)> witness_factory;
};

/// Mechanized freeness criterion: given mu_T <= mu_empty (and mu_S >= mu_empty),
/// evaluates one step per proper subset and concludes mu_S = mu_empty for all S.
/// Throws PreconditionError on a failed gate and DescentError when a step is not forced.
DescentCertificate run_descent(const FamilySpec& fam, std::uint64_t seed, const DescentOptions& opts = {});

/// Same steps without the hypothesis gate, in diagnostic mode. Never throws on verdicts.
DescentCertificate diagnose_descent(const FamilySpec& fam, std::uint64_t seed, const DescentOptions& opts = {});

/// Recomputes every step from its stored witness and checks structure and conclusion.
AssertionResult verify_certificate(const FamilySpec& fam, const DescentCertificate& cert);

/// Human-readable rendering, one line per link of the inequality chain.
std::string render_certificate(const DescentCertificate& cert);

} // namespace wdk
