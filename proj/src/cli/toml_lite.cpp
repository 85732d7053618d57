#include "toml_lite.hpp"

#include "wdk/error.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace wdk::cli {

namespace {

bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    TomlDocument run() {
        TomlDocument doc;
        doc.tables.push_back({"", 1, {}});
        std::set<std::string> table_names{""};
        while (true) {
            skip_blank_lines();
            if (at_end()) break;
            if (peek() == '[') {
                const int ln = line_;
                ++pos_;
                skip_spaces();
                std::string name = read_key();
                skip_spaces();
                while (peek() == '.') {
                    ++pos_;
                    skip_spaces();
                    name += "." + read_key();
                    skip_spaces();
                }
                expect(']', "table header");
                end_of_line();
                if (!table_names.insert(name).second) fail("table [" + name + "] defined twice", ln);
                doc.tables.push_back({name, ln, {}});
                continue;
            }
            const int ln = line_;
            const auto key = read_key();
            skip_spaces();
            expect('=', "key/value pair");
            skip_spaces();
            auto value = read_value();
            end_of_line();
            auto& table = doc.tables.back();
            for (const auto& [k, v] : table.entries)
                if (k == key) fail("duplicate key '" + key + "'", ln);
            value.line = ln;
            table.entries.emplace_back(key, std::move(value));
        }
        return doc;
    }

private:
    [[noreturn]] void fail(const std::string& why, int ln = 0) const { throw ParseError(why, ln ? ln : line_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (peek() == '#')
            while (!at_end() && peek() != '\n') ++pos_;
    }

    void newline() {
        if (peek() == '\r') ++pos_;
        if (peek() == '\n') {
            ++pos_;
            ++line_;
        }
    }

    // whitespace, comments and newlines, as allowed inside arrays
    void skip_ws_multiline() {
        while (!at_end()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') newline();
            else break;
        }
    }

    void skip_blank_lines() { skip_ws_multiline(); }

    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (at_end()) return;
        if (peek() != '\n' && peek() != '\r') fail(std::string("unexpected '") + peek() + "' after value");
        newline();
    }

    void expect(char c, const char* where) {
        if (peek() != c) fail(std::string("expected '") + c + "' in " + where);
        ++pos_;
    }

    std::string read_key() {
        if (peek() == '"') return read_string();
        std::string key;
        while (!at_end() && bare_char(peek())) key += text_[pos_++];
        if (key.empty()) fail(at_end() ? "expected a key" : std::string("expected a key, found '") + peek() + "'");
        return key;
    }

    std::string read_string() {
        expect('"', "string");
        std::string out;
        while (true) {
            if (at_end() || peek() == '\n') fail("unterminated string");
            char c = text_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("unterminated string");
                char e = text_[pos_++];
                switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
                continue;
            }
            out += c;
        }
        return out;
    }

    TomlValue read_value() {
        TomlValue v;
        v.line = line_;
        const char c = peek();
        if (c == '"') {
            v.data = read_string();
        } else if (c == '[') {
            ++pos_;
            TomlValue::Array items;
            skip_ws_multiline();
            while (peek() != ']') {
                if (at_end()) fail("unterminated array");
                items.push_back(read_value());
                skip_ws_multiline();
                if (peek() == ',') {
                    ++pos_;
                    skip_ws_multiline();
                } else if (peek() != ']') {
                    fail("expected ',' or ']' in array");
                }
            }
            ++pos_;
            v.data = std::move(items);
        } else if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            if (c == '+' || c == '-') digits += text_[pos_++];
            while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_'))
                if (char d = text_[pos_++]; d != '_') digits += d;
            std::int64_t x = 0;
            const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
            auto [p, ec] = std::from_chars(first, digits.data() + digits.size(), x);
            if (ec != std::errc() || p != digits.data() + digits.size()) fail("bad integer '" + digits + "'");
            if (!at_end() && bare_char(peek())) fail("bad integer literal");
            v.data = x;
        } else {
            std::string word;
            while (!at_end() && bare_char(peek())) word += text_[pos_++];
            if (word == "true") v.data = true;
            else if (word == "false") v.data = false;
            else fail(word.empty() ? "expected a value" : "unsupported value '" + word + "'");
        }
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace

std::int64_t TomlValue::as_int(const std::string& what) const {
    if (!is_int()) throw ParseError(what + " must be an integer", line);
    return std::get<std::int64_t>(data);
}

bool TomlValue::as_bool(const std::string& what) const {
    if (!is_bool()) throw ParseError(what + " must be true or false", line);
    return std::get<bool>(data);
}

const std::string& TomlValue::as_string(const std::string& what) const {
    if (!is_string()) throw ParseError(what + " must be a string", line);
    return std::get<std::string>(data);
}

const TomlValue::Array& TomlValue::as_array(const std::string& what) const {
    if (!is_array()) throw ParseError(what + " must be an array", line);
    return std::get<Array>(data);
}

TomlDocument parse_toml(std::string_view text) { return Parser(text).run(); }

std::string toml_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string toml_key(const std::string& key) {
    bool bare = !key.empty();
    for (char c : key) bare = bare && bare_char(c);
    return bare ? key : toml_string(key);
}

} // namespace wdk::cli
