#include "spanrank/utf8.hpp"

namespace spanrank::utf8 {

Decoded next_code_point(std::string_view text, std::size_t byte_pos) {
  const auto b0 = static_cast<unsigned char>(text[byte_pos]);
  std::size_t len;
  char32_t cp;
  if (b0 < 0x80) {
    return {b0, byte_pos + 1};
  } else if ((b0 >> 5) == 0x6) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 >> 4) == 0xE) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 >> 3) == 0x1E) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, byte_pos + 1};
  }
  if (byte_pos + len > text.size()) return {0xFFFD, byte_pos + 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto bk = static_cast<unsigned char>(text[byte_pos + k]);
    if ((bk >> 6) != 0x2) return {0xFFFD, byte_pos + 1};
    cp = (cp << 6) | (bk & 0x3F);
  }
  return {cp, byte_pos + len};
}

std::vector<std::size_t> byte_offsets(std::string_view text) {
  std::vector<std::size_t> offs;
  offs.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    offs.push_back(i);
    i = next_code_point(text, i).next;
  }
  offs.push_back(text.size());
  return offs;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    i = next_code_point(text, i).next;
    ++n;
  }
  return n;
}

std::vector<char32_t> decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    Decoded d = next_code_point(text, i);
    out.push_back(d.cp);
    i = d.next;
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) append(out, cp);
  return out;
}

std::string_view slice(std::string_view text, const std::vector<std::size_t>& offsets,
                       std::size_t begin_cp, std::size_t end_cp) {
  if (begin_cp >= end_cp || begin_cp + 1 >= offsets.size()) return {};
  end_cp = std::min(end_cp, offsets.size() - 1);
  return text.substr(offsets[begin_cp], offsets[end_cp] - offsets[begin_cp]);
}

std::string slice(std::string_view text, std::size_t begin_cp, std::size_t end_cp) {
  if (begin_cp >= end_cp) return {};
  std::size_t i = 0;
  std::size_t cp = 0;
  std::size_t begin_byte = text.size();
  while (i < text.size() && cp < end_cp) {
    if (cp == begin_cp) begin_byte = i;
    i = next_code_point(text, i).next;
    ++cp;
  }
  if (cp <= begin_cp) return {};
  return std::string(text.substr(begin_byte, i - begin_byte));
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case 0x00A0:
      return true;
    default:
      return false;
  }
}

}  // namespace spanrank::utf8
