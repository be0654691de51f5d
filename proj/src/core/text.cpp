#include "specfid/core/text.hpp"

#include <cctype>

namespace specfid::text {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
}

bool contains_word(std::string_view text, std::string_view word) {
    if (word.empty()) return false;
    const std::string t = lower(text);
    const std::string w = lower(word);
    std::size_t pos = 0;
    while ((pos = t.find(w, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_word_char(t[pos - 1]);
        const std::size_t end = pos + w.size();
        const bool right_ok = end == t.size() || !is_word_char(t[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

bool contains_phrase(std::string_view text, std::string_view phrase) {
    const std::vector<std::string> words = split_ws(lower(phrase));
    if (words.empty()) return false;
    if (words.size() == 1) return contains_word(text, words[0]);

    // Tokenize the text into words with positions, then look for the word
    // sequence as consecutive tokens.
    const std::string t = lower(text);
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : t) {
        if (is_word_char(c)) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);

    if (tokens.size() < words.size()) return false;
    for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (tokens[i + j] != words[j]) { all = false; break; }
        }
        if (all) return true;
    }
    return false;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\n') {
            std::string_view line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            out.emplace_back(line);
            start = i + 1;
        }
    }
    if (start < s.size()) {
        std::string_view line = s.substr(start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.emplace_back(line);
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) { out.push_back(cur); cur.clear(); }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool starts_with_word(std::string_view s, std::string_view word) {
    if (s.size() < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(s[i])) !=
            std::toupper(static_cast<unsigned char>(word[i]))) return false;
    }
    return s.size() == word.size() || !is_word_char(s[word.size()]);
}

}  // namespace specfid::text
