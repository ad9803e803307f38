#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace swarmnews {

using Sentence = std::vector<std::string>;

// Sentences split on . ! ? — tokens are maximal ASCII alphanumeric runs,
// lowercased. Bytes outside [A-Za-z0-9] (including UTF-8 continuation
// bytes) act as separators. Empty sentences are not emitted.
inline std::vector<Sentence> tokenize(std::string_view body) {
    std::vector<Sentence> sentences;
    Sentence current;
    std::string token;

    auto flush_token = [&] {
        if (!token.empty()) {
            current.push_back(token);
            token.clear();
        }
    };
    auto flush_sentence = [&] {
        flush_token();
        if (!current.empty()) {
            sentences.push_back(std::move(current));
            current.clear();
        }
    };

    for (char c : body) {
        if (c >= 'a' && c <= 'z') {
            token.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            token.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c >= '0' && c <= '9') {
            token.push_back(c);
        } else if (c == '.' || c == '!' || c == '?') {
            flush_sentence();
        } else {
            flush_token();
        }
    }
    flush_sentence();
    return sentences;
}

inline std::vector<std::string> flatten_tokens(const std::vector<Sentence>& sentences) {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
    return out;
}

}  // namespace swarmnews
