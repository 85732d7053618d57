#pragma once

#include "wdk/fpmod.hpp"
#include "wdk/ringfam.hpp"

#include <cstdint>
#include <optional>

namespace wdk {

/// Cotangent module p_v/p_v^2 at an O-point: the oracle (SNF of an explicit
/// presentation) next to the closed-form torsion length.
struct CotangentReport {
    Presentation presentation;
    SnfResult snf;
    std::uint64_t torsion_length = 0;
    std::uint64_t free_rank = 0;
    std::optional<std::uint64_t> closed_form_length;
    bool regular = false;
    /// Quotient ring B with |Sigma| = 1: the linearized product is a unit.
    bool degenerate_single_index = false;
};

/// Presentation of p_v/p_v^2 over A_sigma. Generators, in column order:
/// x_i - a_i (i in sigma), y_i - b_i (all i), t_k - c_k (all k).
/// One relation per i in sigma: b_i on the x_i column, a_i on the y_i column.
/// Requires v in V_sigma.
Presentation cotangent_presentation_A(const Instance& inst, SigmaSet sigma, const OPoint& v);

/// sum_{i in S'} ord(a_i) + sum_{j in S \ S'} ord(b_j) for v interior on the
/// component S' of Spec A_S.
std::uint64_t cotangent_length_closed(const Instance& inst, SigmaSet sigma, const OPoint& v);

/// Presentation over B = A_sigma / (prod_{i in sigma} x_i): the A_sigma
/// relations plus the linear part of the product at v, which is
/// prod_{i in sigma \ s} a_i on the x_s column. Requires v in Z°_{sigma \ s}.
Presentation cotangent_presentation_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v);

/// S + min(ord(b_s), S) with S = sum_{i in sigma \ s} ord(a_i).
std::uint64_t cotangent_length_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v);

/// A_sigma is regular at v iff the cotangent module has rank n + g.
bool regularity_check(const Instance& inst, SigmaSet sigma, const OPoint& v);

/// Builds both routes for A_sigma. Throws OracleMismatch if they disagree.
CotangentReport cotangent_report_A(const Instance& inst, SigmaSet sigma, const OPoint& v);
CotangentReport cotangent_report_B(const Instance& inst, SigmaSet sigma, int s, const OPoint& v);

} // namespace wdk
