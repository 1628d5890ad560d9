#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace spanrank::utf8 {

// All span arithmetic in this library is in code point units, never bytes.
// The helpers below bridge between the two. Malformed byte sequences are
// scanned leniently: an invalid lead or truncated sequence counts as one
// code point (U+FFFD on decode).

struct Decoded {
  char32_t cp;
  std::size_t next;  // byte index just past this code point
};

Decoded next_code_point(std::string_view text, std::size_t byte_pos);

// Byte offset of every code point plus one trailing entry equal to
// text.size(); result.size() == code point count + 1.
std::vector<std::size_t> byte_offsets(std::string_view text);

std::size_t length(std::string_view text);

std::vector<char32_t> decode(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

// Substring [begin_cp, end_cp) in code point units.
std::string_view slice(std::string_view text, const std::vector<std::size_t>& offsets,
                       std::size_t begin_cp, std::size_t end_cp);
std::string slice(std::string_view text, std::size_t begin_cp, std::size_t end_cp);

// Whitespace for word segmentation: ASCII whitespace plus NBSP.
bool is_space(char32_t cp);

}  // namespace spanrank::utf8
