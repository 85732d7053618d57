#include "wdk/fpmod.hpp"

#include "wdk/error.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace wdk {

namespace {

std::vector<std::string> numbered_labels(std::size_t m) {
    std::vector<std::string> out;
    out.reserve(m);
    for (std::size_t j = 0; j < m; ++j) out.push_back("e" + std::to_string(j + 1));
    return out;
}

} // namespace

Presentation::Presentation(Dvr ring, std::size_t generators)
    : Presentation(std::move(ring), numbered_labels(generators)) {}

Presentation::Presentation(Dvr ring, std::vector<std::string> generator_labels)
    : ring_(std::move(ring)), labels_(std::move(generator_labels)) {}

void Presentation::add_relation(std::vector<DvrElem> row) {
    if (row.size() != labels_.size())
        throw DimensionError("relation has " + std::to_string(row.size()) + " entries, presentation has " +
                             std::to_string(labels_.size()) + " generators");
    for (const auto& e : row)
        if (!(e.ring() == ring_)) throw DomainError("relation entry over " + e.ring().to_string());
    rows_.push_back(std::move(row));
}

std::vector<DvrElem>& Presentation::add_zero_relation() {
    rows_.emplace_back(labels_.size(), ring_.zero());
    return rows_.back();
}

std::size_t Presentation::column(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DimensionError("no generator named " + label);
    return static_cast<std::size_t>(it - labels_.begin());
}

SnfResult snf(const Presentation& p) {
    auto a = p.rows();
    const std::size_t r = a.size();
    const std::size_t m = p.generators();
    SnfResult out;

    std::size_t k = 0;
    for (; k < std::min(r, m); ++k) {
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        Valuation best = Valuation::infinity();
        for (std::size_t i = k; i < r; ++i)
            for (std::size_t j = k; j < m; ++j) {
                const auto v = a[i][j].ord();
                if (v < best) {
                    best = v;
                    pivot = {i, j};
                }
            }
        if (!pivot) break; // remaining block is zero

        std::swap(a[k], a[pivot->first]);
        if (pivot->second != k)
            for (auto& row : a) std::swap(row[k], row[pivot->second]);

        const DvrElem piv = a[k][k];
        for (std::size_t i = k + 1; i < r; ++i) {
            if (a[i][k].is_zero()) continue;
            const auto f = divide_exact(a[i][k], piv);
            for (std::size_t j = k; j < m; ++j) a[i][j] = a[i][j] - f * a[k][j];
        }
        // column operations only touch row k once column k is cleared below the pivot
        for (std::size_t j = k + 1; j < m; ++j) a[k][j] = p.ring().zero();

        if (best.value() > 0) out.divisor_valuations.push_back(best.value());
    }
    out.rank = k;
    out.free_rank = m - k;
    std::sort(out.divisor_valuations.begin(), out.divisor_valuations.end());
    return out;
}

std::uint64_t torsion_length(const SnfResult& s) {
    return std::accumulate(s.divisor_valuations.begin(), s.divisor_valuations.end(), std::uint64_t{0});
}

} // namespace wdk
