#pragma once

#include "wdk/congruence.hpp"
#include "wdk/freeness.hpp"
#include "wdk/ringfam.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wdk::cli {

/// Default command recorded in a file, used by `wdk demo`.
struct DemoSection {
    std::string command;
    std::optional<SigmaSet> sigma;
    std::optional<std::string> point;
    std::optional<int> s;
    std::optional<std::uint64_t> seed;
};

/// Parsed instance file. Every section but the header is optional.
///
///   backend = "rational:5"      # or "poly:q"
///   n = 2
///   g = 1
///   [points.NAME]               # coordinate: k (w^k), "zero", [k, "unit"], "raw:<element>"
///   a = [2, "zero"]
///   [mu]                        # all = m, then per subset "[1,2]" = m
///   [base_psi]                  # provider = canonical | minimal-zero | table, table rows "[1]" = len
///   [flags]                     # depth, gorenstein
///   [descent]                   # override, witness_ord_a, order
///   [demo]                      # command, sigma, point, s, seed
struct InstanceFile {
    Instance inst;
    std::vector<std::pair<std::string, OPoint>> points;
    std::optional<RankFunction> mu;
    BasePsi base = BasePsi::canonical();
    bool depth = false;
    bool gorenstein = false;
    bool override_gate = false;
    std::optional<std::uint64_t> witness_ord_a;
    std::vector<int> removal_order;
    DemoSection demo;

    const OPoint& point(const std::string& name) const;
    /// Throws ParseError when the file has no [mu] table.
    FamilySpec family() const;
    DescentOptions descent_options() const;
};

/// `backend` replaces the file's backend line; `fallback` is used when the file has none.
InstanceFile parse_instance(std::string_view text, std::optional<Dvr> backend = std::nullopt,
                            std::optional<Dvr> fallback = std::nullopt);

/// Canonical text: fixed section order, every mu value spelled out, coordinates
/// as k or [k, "unit"]. parse_instance(to_toml(f)) reproduces f.
std::string to_toml(const InstanceFile& f);

std::string coordinate_text(const DvrElem& x);

} // namespace wdk::cli
