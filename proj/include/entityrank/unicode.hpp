#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace entityrank {

/// Decodes UTF-8 into codepoints. Invalid byte sequences decode to U+FFFD
/// (one replacement per offending byte) so text operations stay total.
std::vector<uint32_t> decode_utf8(std::string_view text);

void append_utf8(std::string& out, uint32_t cp);

std::string encode_utf8(const std::vector<uint32_t>& cps);

/// True when cp is in a Unicode general category P* (table generated from
/// UnicodeData 13.0) or in the fullwidth punctuation block U+FF01..U+FF65.
bool is_punctuation(uint32_t cp);

/// ASCII-only lowercasing; non-ASCII codepoints pass through untouched.
uint32_t ascii_lower(uint32_t cp);
std::string ascii_lower(std::string_view text);

}  // namespace entityrank
