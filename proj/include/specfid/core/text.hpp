#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace specfid::text {

std::string lower(std::string_view s);
std::string upper(std::string_view s);
std::string trim(std::string_view s);

// Word characters for boundary purposes include '-' so hyphenated COBOL
// names ("1000-CALC-BASE-TIER") count as single words.
bool is_word_char(char c);

// Case-insensitive whole-word occurrence of `word` in `text`.
bool contains_word(std::string_view text, std::string_view word);

// Case-insensitive whole-phrase occurrence (internal whitespace in the
// phrase matches any run of whitespace in the text).
bool contains_phrase(std::string_view text, std::string_view phrase);

std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_word(std::string_view s, std::string_view word);

}  // namespace specfid::text
