#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace seqguard::detail {

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '_';
}

// Lowercase [a-z0-9_]+ runs; everything else is a separator.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_word_char(c)) {
            current.push_back(ascii_lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

inline std::string normalize_text(std::string_view text) {
    return join_tokens(tokenize(text));
}

// True when `phrase` occurs as a contiguous run of whole tokens inside `text`.
// Both arguments must already be normalized (see normalize_text).
inline bool contains_token_phrase(const std::string& normalized_text,
                                  const std::string& normalized_phrase) {
    if (normalized_phrase.empty()) return false;
    std::string haystack = " " + normalized_text + " ";
    std::string needle = " " + normalized_phrase + " ";
    return haystack.find(needle) != std::string::npos;
}

inline bool is_ascii_lowercase(std::string_view s) {
    for (char c : s) {
        if (c >= 'A' && c <= 'Z') return false;
    }
    return true;
}

inline std::string to_lower_copy(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(ascii_lower(c));
    return out;
}

} // namespace seqguard::detail
