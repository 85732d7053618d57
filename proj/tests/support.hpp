#pragma once

#include "wdk/ringfam.hpp"

#include <vector>

namespace wdk::testing {

/// Point with coordinates w^k (k >= 1); k = 0 encodes the zero coordinate.
inline OPoint point(const Instance& inst, const std::vector<int>& a, const std::vector<int>& b,
                    const std::vector<int>& c = {}) {
    auto conv = [&](const std::vector<int>& ks) {
        std::vector<DvrElem> out;
        for (int k : ks) out.push_back(k == 0 ? inst.ring.zero() : inst.ring.uniformizer_power(k));
        return out;
    };
    OPoint v{conv(a), conv(b), conv(c)};
    v.validate(inst);
    return v;
}

/// Replaces every nonzero coordinate by a unit multiple drawn from `codes`.
template <class Rng>
OPoint with_random_units(const Instance& inst, OPoint v, Rng& rng) {
    for (auto* xs : {&v.a, &v.b, &v.c})
        for (auto& x : *xs)
            if (!x.is_zero()) x = x * inst.ring.unit_from_code(rng.next());
    return v;
}

} // namespace wdk::testing
