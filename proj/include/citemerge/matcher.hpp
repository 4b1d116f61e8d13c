#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "citemerge/types.hpp"

namespace citemerge {

enum class MatchKind : std::uint8_t { DoiExact, TitleIssn, UnmatchedA, UnmatchedB };

std::string_view to_string(MatchKind k);

/// One article of the unified id space: a matched pair or a single-dataset
/// record. Indices point into the record vectors the matching ran over.
struct MatchResult {
  Uid uid = kNoUid;
  std::size_t a_index = kNoIndex;
  std::size_t b_index = kNoIndex;
  std::string a_id;  // source ids, empty when absent
  std::string b_id;
  MatchKind kind = MatchKind::UnmatchedA;
};

struct MatchStats {
  std::size_t total_a = 0;
  std::size_t total_b = 0;
  std::size_t matched_doi = 0;
  std::size_t matched_title_issn = 0;
  std::size_t unmatched_a = 0;
  std::size_t unmatched_b = 0;
  std::size_t ambiguous_doi_a = 0;         // records excluded from the DOI stage
  std::size_t ambiguous_doi_b = 0;
  std::size_t ambiguous_title_issn_a = 0;  // records excluded from the fallback stage
  std::size_t ambiguous_title_issn_b = 0;
  std::size_t year_mismatched_matches = 0; // matched pairs whose years disagree

  std::size_t matched() const { return matched_doi + matched_title_issn; }
  double overlap_share_a() const { return total_a ? double(matched()) / double(total_a) : 0.0; }
  double overlap_share_b() const { return total_b ? double(matched()) / double(total_b) : 0.0; }
};

struct Matching {
  std::vector<MatchResult> results;  // uid == position; pairs first, then A rest, then B rest
  MatchStats stats;
};

/// Result of one equality-join stage. Pairs are (a index, b index), ordered by
/// a index. Records whose key repeats on either side are excluded from the
/// stage and stay eligible for the next one.
struct StagePairs {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t ambiguous_a = 0;
  std::size_t ambiguous_b = 0;
};

StagePairs match_by_doi(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                        const std::vector<std::size_t>& a_candidates,
                        const std::vector<std::size_t>& b_candidates);

StagePairs match_by_title_issn(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                               const std::vector<std::size_t>& a_candidates,
                               const std::vector<std::size_t>& b_candidates);

/// Assigns dense uids: matched pairs first (by A source order), then
/// unmatched A, then unmatched B. Throws std::logic_error if any record
/// index appears in more than one pair.
std::vector<MatchResult> assign_uids(const std::vector<PaperRecord>& a,
                                     const std::vector<PaperRecord>& b,
                                     const StagePairs& doi_pairs, const StagePairs& title_pairs);

/// Runs both stages and uid assignment.
Matching match_datasets(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b);

}  // namespace citemerge
