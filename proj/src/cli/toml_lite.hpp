#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace wdk::cli {

/// The TOML subset used by instance files: tables, dotted table names, bare or
/// quoted keys, integers, booleans, basic strings and (nested) arrays.
/// No inline tables, floats, dates or literal strings.
struct TomlValue {
    using Array = std::vector<TomlValue>;
    std::variant<std::int64_t, bool, std::string, Array> data;
    int line = 0;

    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }

    // typed accessors throw ParseError naming `what` and the line
    std::int64_t as_int(const std::string& what) const;
    bool as_bool(const std::string& what) const;
    const std::string& as_string(const std::string& what) const;
    const Array& as_array(const std::string& what) const;
};

struct TomlTable {
    std::string name; ///< "" for the root table
    int line = 0;
    std::vector<std::pair<std::string, TomlValue>> entries;
};

struct TomlDocument {
    std::vector<TomlTable> tables; ///< root first, then in file order
};

TomlDocument parse_toml(std::string_view text);

/// Quotes a key unless it is a valid bare key.
std::string toml_key(const std::string& key);
std::string toml_string(const std::string& s);

} // namespace wdk::cli
