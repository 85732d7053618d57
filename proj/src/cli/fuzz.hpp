#pragma once

#include "instance_file.hpp"
#include "report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wdk::cli {

struct FuzzOptions {
    int n_max = 3;
    int g_max = 2;
    std::uint64_t ord_max = 6;
    std::uint64_t trials = 200;
    std::uint64_t seed = 1;
    Dvr ring;
    /// Test hook: the SNF side of the A check reports one more than it computed.
    bool corrupt_oracle = false;
};

struct FuzzCheck {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t checksum = 0xcbf29ce484222325ull; ///< FNV-1a over the compared valuations
};

struct Counterexample {
    std::string check;
    std::uint64_t trial = 0;
    std::string detail;
    InstanceFile instance;
};

struct FuzzResult {
    FuzzOptions options;
    std::vector<FuzzCheck> checks;
    std::optional<Counterexample> counterexample;

    std::uint64_t failures() const;
};

/// Throws PreconditionError for out-of-range bounds.
FuzzResult run_fuzz(const FuzzOptions& opts);

/// The report body names no backend, so valuation-matched runs over the two
/// backends print the same bytes.
Json fuzz_json(const FuzzResult& r);
std::string fuzz_csv(const FuzzResult& r);

} // namespace wdk::cli
