// SPDX-License-Identifier: Apache-2.0
#include "assertforge/text.hpp"

#include <algorithm>
#include <cctype>

namespace assertforge::text {

static bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) b++;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) e--;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string canonicalize_ws(std::string_view s) {
    std::string lf;
    lf.reserve(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        if (s[i] == '\r') {
            if (i + 1 < s.size() && s[i + 1] == '\n') continue; // CRLF -> LF
            lf.push_back('\n');                                 // lone CR -> LF
        } else {
            lf.push_back(s[i]);
        }
    }
    std::string out;
    out.reserve(lf.size());
    bool in_run = false;
    for (char c : lf) {
        if (c == ' ' || c == '\t') {
            in_run = true;
            continue;
        }
        if (in_run && !out.empty() && out.back() != '\n' && c != '\n') out.push_back(' ');
        in_run = false;
        out.push_back(c);
    }
    // trim whole string
    return trim(out);
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); i++) {
        if (i == s.size() || s[i] == '\n') {
            std::string_view line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            out.emplace_back(line);
            start = i + 1;
        }
    }
    if (!out.empty() && s.size() > 0 && s.back() == '\n') out.pop_back();
    return out;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    char c0 = s[0];
    if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
    for (char c : s.substr(1))
        if (!is_word_char(c)) return false;
    return true;
}

bool contains_word(std::string_view haystack, std::string_view word) {
    if (word.empty()) return false;
    std::string h = lower(haystack), w = lower(word);
    size_t pos = 0;
    while ((pos = h.find(w, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_word_char(h[pos - 1]);
        bool right_ok = pos + w.size() == h.size() || !is_word_char(h[pos + w.size()]);
        if (left_ok && right_ok) return true;
        pos += 1;
    }
    return false;
}

std::vector<std::string> name_tokens(std::string_view name) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : name) {
        if (c == '_') {
            if (!cur.empty()) toks.push_back(lower(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) toks.push_back(lower(cur));
    return toks;
}

std::string substitute(std::string_view tmpl,
                       const std::vector<std::pair<std::string, std::string>>& slots) {
    std::string out(tmpl);
    for (const auto& [k, v] : slots) {
        std::string needle = "{{" + k + "}}";
        size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), v);
            pos += v.size();
        }
    }
    return out;
}

} // namespace assertforge::text
