#include "citemerge/normalize.hpp"

#include <array>
#include <cctype>
#include <cstdint>

namespace citemerge {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0) {
    s.erase(0, prefix.size());
    return true;
  }
  return false;
}

// Decodes one UTF-8 codepoint at s[i]; advances i. Invalid sequences consume
// one byte and yield the replacement value 0xFFFD.
std::uint32_t next_codepoint(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) {
    ++i;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len >= s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k <= len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len + 1;
  return cp;
}

// Folds one codepoint to lowercase ASCII base letters. Returns an empty view
// for codepoints that act as separators.
std::string_view fold_codepoint(std::uint32_t cp, char* scratch) {
  if (cp < 0x80) {
    const auto c = static_cast<unsigned char>(cp);
    if (std::isalnum(c)) {
      scratch[0] = static_cast<char>(std::tolower(c));
      return {scratch, 1};
    }
    return {};
  }
  switch (cp) {
    case 0xC6: case 0xE6: return "ae";           // Æ æ
    case 0x152: case 0x153: return "oe";         // Œ œ
    case 0xDF: return "ss";                      // ß
    case 0xDE: case 0xFE: return "th";           // Þ þ
    case 0xD0: case 0xF0: return "d";            // Ð ð
    case 0x132: case 0x133: return "ij";         // Ĳ ĳ
    default: break;
  }
  auto one = [&](char c) { scratch[0] = c; return std::string_view{scratch, 1}; };
  if (cp >= 0xC0 && cp <= 0xFF) {
    // Latin-1 Supplement letters (multiplication/division signs excluded).
    if (cp == 0xD7 || cp == 0xF7) return {};
    const std::uint32_t base = (cp >= 0xE0) ? cp - 0x20 : cp;  // fold case
    if (base >= 0xC0 && base <= 0xC5) return one('a');
    if (base == 0xC7) return one('c');
    if (base >= 0xC8 && base <= 0xCB) return one('e');
    if (base >= 0xCC && base <= 0xCF) return one('i');
    if (base == 0xD1) return one('n');
    if ((base >= 0xD2 && base <= 0xD6) || base == 0xD8) return one('o');
    if (base >= 0xD9 && base <= 0xDC) return one('u');
    if (base == 0xDD) return one('y');
    if (cp == 0xFF) return one('y');  // ÿ has no Latin-1 uppercase
    return {};
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    // Latin Extended-A, grouped by base letter.
    if (cp <= 0x105) return one('a');
    if (cp <= 0x10D) return one('c');
    if (cp <= 0x111) return one('d');
    if (cp <= 0x11B) return one('e');
    if (cp <= 0x123) return one('g');
    if (cp <= 0x127) return one('h');
    if (cp <= 0x131) return one('i');
    if (cp <= 0x135) return one('j');
    if (cp <= 0x138) return one('k');
    if (cp <= 0x142) return one('l');
    if (cp <= 0x14B) return one('n');
    if (cp <= 0x151) return one('o');
    if (cp <= 0x159) return one('r');
    if (cp <= 0x161) return one('s');
    if (cp <= 0x167) return one('t');
    if (cp <= 0x173) return one('u');
    if (cp <= 0x175) return one('w');
    if (cp <= 0x178) return one('y');
    if (cp <= 0x17E) return one('z');
    return one('s');  // 0x17F, long s
  }
  return {};
}

}  // namespace

std::string normalize_doi(std::string_view raw) {
  std::string s{trim(raw)};
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (!strip_prefix(s, "https://doi.org/")) strip_prefix(s, "doi:");
  return std::string{trim(s)};
}

std::string normalize_title(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  char scratch[1];
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::uint32_t cp = next_codepoint(raw, i);
    const std::string_view folded = fold_codepoint(cp, scratch);
    if (folded.empty()) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(folded);
  }
  return out;
}

std::string normalize_issn(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) out.push_back(static_cast<char>(std::toupper(u)));
  }
  return out;
}

std::string reference_key(const RefEntry& entry) {
  if (std::string d = normalize_doi(entry.doi); !d.empty()) return "d:" + d;
  std::string t = normalize_title(entry.title);
  std::string i = normalize_issn(entry.issn);
  if (!t.empty() && !i.empty()) return "t:" + t + "\x1f" + i;
  return "r:" + normalize_title(entry.raw);
}

std::string unresolved_reference_key(const RefEntry& entry) {
  if (std::string r = normalize_title(entry.raw); !r.empty()) return "r:" + r;
  return reference_key(entry);
}

}  // namespace citemerge
