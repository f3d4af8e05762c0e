#pragma once

// File helpers shared by the corpus, fuzzy-config and model-file formats.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ucp/errors.hpp"

namespace ucp::io {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Writes to `path`, replacing any existing file.
inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// Parses JSON, converting the byte offset of a syntax error into line and column.
inline nlohmann::json parse_json(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source, line, column, e.what());
    }
}

inline nlohmann::json read_json(const std::string& path) { return parse_json(read_text(path), path); }

/// Stable rendering: two-space indent, shortest round-trip doubles, trailing newline.
inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace ucp::io
