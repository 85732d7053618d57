#pragma once

#include "wdk/dvr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wdk {

/// Finitely presented O-module: the cokernel of the relations matrix.
/// Rows are relations, columns are generators.
class Presentation {
public:
    Presentation(Dvr ring, std::size_t generators);
    Presentation(Dvr ring, std::vector<std::string> generator_labels);

    const Dvr& ring() const noexcept { return ring_; }
    std::size_t generators() const noexcept { return labels_.size(); }
    std::size_t relations() const noexcept { return rows_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<std::vector<DvrElem>>& rows() const noexcept { return rows_; }

    /// Appends a relation; `row` must have one entry per generator.
    void add_relation(std::vector<DvrElem> row);
    /// Appends the zero relation.
    std::vector<DvrElem>& add_zero_relation();
    std::vector<DvrElem>& row(std::size_t i) { return rows_.at(i); }

    /// Column index of a labelled generator; throws if absent.
    std::size_t column(const std::string& label) const;

private:
    Dvr ring_;
    std::vector<std::string> labels_;
    std::vector<std::vector<DvrElem>> rows_;
};

/// Elementary-divisor data of a cokernel: coker = (+)_d O/w^d (+) O^free_rank.
/// Unit elementary divisors contribute nothing and are not listed.
struct SnfResult {
    std::vector<std::uint64_t> divisor_valuations; ///< nondecreasing, all >= 1
    std::uint64_t free_rank = 0;
    std::uint64_t rank = 0; ///< rank of the relations matrix over the fraction field

    friend bool operator==(const SnfResult&, const SnfResult&) = default;
};

/// Smith normal form over the local PID O. Pivots on the entry of minimal
/// valuation (lowest row, then lowest column, on ties); over a DVR that entry
/// divides every other, so elimination needs only exact divisions.
SnfResult snf(const Presentation& p);

/// Length of the torsion part of the cokernel.
std::uint64_t torsion_length(const SnfResult& s);

inline std::uint64_t free_rank(const SnfResult& s) { return s.free_rank; }

} // namespace wdk
