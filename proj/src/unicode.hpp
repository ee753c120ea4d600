#pragma once

// Internal UTF-8 / case-folding helpers for the tokenizer and n-gram
// extractor. Not installed.

#include <string>
#include <string_view>

namespace cmsa::detail {

// Strict decoder; invalid byte sequences decode to U+FFFD one byte at a
// time (corpus strings arrive JSON-validated, so this path is cold).
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Unicode simple case folding for the scripts that show up in romanized
// code-mixed text: ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic and
// full-width Latin. Code points outside those ranges (including the caseless
// Indic scripts) pass through unchanged.
char32_t fold_case(char32_t cp);

// The Unicode White_Space property.
bool is_whitespace(char32_t cp);

std::u32string fold_case(std::u32string_view text);

}  // namespace cmsa::detail
