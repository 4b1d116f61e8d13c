#pragma once

#include <string>
#include <string_view>

#include "citemerge/types.hpp"

namespace citemerge {

/// Canonical DOI form: trimmed, lowercased, with a leading
/// "https://doi.org/" or "doi:" prefix removed. Empty if nothing remains.
std::string normalize_doi(std::string_view raw);

/// Canonical title form: lowercase, diacritics folded to base letters,
/// non-alphanumeric runs collapsed to single spaces, trimmed. Input is UTF-8;
/// codepoints outside the folded Latin ranges act as separators.
std::string normalize_title(std::string_view raw);

/// Canonical ISSN form: alphanumeric characters only, uppercased
/// ("1234-567x" -> "1234567X"). Empty if no alphanumerics.
std::string normalize_issn(std::string_view raw);

/// Identity key of a reference entry, by field strength: DOI, then
/// title+ISSN, then raw text. Keys are prefixed so the classes never collide.
std::string reference_key(const RefEntry& entry);

/// Key unresolved references are unioned by when merging: the normalized raw
/// text, falling back to reference_key when raw is empty.
std::string unresolved_reference_key(const RefEntry& entry);

}  // namespace citemerge
