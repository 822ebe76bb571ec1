#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cuspforge/triangulation.hpp"

namespace cuspforge::text {

struct Token {
    std::string_view text;
    int column;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

inline int parse_int(const Token& tok, int lineNo) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || v < 0)
        throw ParseError(lineNo, tok.column, "expected non-negative integer, got '" + std::string(tok.text) + "'");
    return v;
}

// Non-blank lines with '#' comments stripped, tagged with 1-based line numbers.
inline std::vector<std::pair<int, std::string_view>> significant_lines(std::string_view text) {
    std::vector<std::pair<int, std::string_view>> lines;
    int lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++lineNo;
        std::string_view line = text.substr(pos, nl - pos);
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        if (!tokenize(line).empty()) lines.emplace_back(lineNo, line);
        pos = nl + 1;
    }
    return lines;
}

}  // namespace cuspforge::text
