#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace wdk::cli {

struct Demo {
    std::string_view name;
    std::string_view text;
};

/// Instance files under data/demos, compiled in.
const std::vector<Demo>& demos();

inline std::optional<std::string_view> find_demo(std::string_view name) {
    for (const auto& d : demos())
        if (d.name == name) return d.text;
    return std::nullopt;
}

} // namespace wdk::cli
