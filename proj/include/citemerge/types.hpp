#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citemerge {

enum class DatasetTag : std::uint8_t { A, B };

enum class Provenance : std::uint8_t { AOnly, BOnly, Both };

/// The 14 disciplinary clusters plus the fallthrough bucket.
enum class Cluster : std::uint8_t {
  Medicine,
  Science,
  Biology,
  Engineering,
  SocialScience,
  Geography,
  Arts,
  ComputerScience,
  Psychology,
  Management,
  LawAndPolicy,
  Building,
  Education,
  CityDevelopment,
  Unclassified,
};

inline constexpr int kNamedClusterCount = 14;

std::string_view to_string(DatasetTag tag);
std::string_view to_string(Provenance p);
std::string_view to_string(Cluster c);

/// Parses a cluster name as it appears in input files ("Social Science",
/// "Computer Science", ...). Returns nullopt for unknown names; "Unclassified"
/// is not accepted as an input label.
std::optional<Cluster> cluster_from_name(std::string_view name);

using Uid = std::uint32_t;
inline constexpr Uid kNoUid = std::numeric_limits<Uid>::max();
inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// One entry of a paper's reference list. Empty string means the field is
/// absent. At least one of doi, (title and issn), raw is non-empty.
struct RefEntry {
  std::string doi;
  std::string title;
  std::string issn;
  std::string raw;

  bool operator==(const RefEntry&) const = default;
};

/// One bibliographic record from a source dataset.
struct PaperRecord {
  std::string source_id;
  DatasetTag tag = DatasetTag::A;
  std::string doi;            // empty = absent
  std::string title;          // required non-empty
  std::string issn;           // empty = absent
  std::string journal_title;  // empty = absent
  int year = 0;               // in [1000, 3000]
  std::optional<Cluster> cluster_label;
  std::vector<RefEntry> references;

  bool operator==(const PaperRecord&) const = default;
};

inline constexpr int kMinYear = 1000;
inline constexpr int kMaxYear = 3000;

}  // namespace citemerge
