#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citemerge/matcher.hpp"
#include "citemerge/merger.hpp"
#include "citemerge/types.hpp"

namespace citemerge {

/// One journal-title keyword mapped to a cluster. Lower priority number wins
/// when several rules match a title.
struct KeywordRule {
  std::string keyword;  // normalized word or phrase
  Cluster cluster = Cluster::Unclassified;
  int priority = 0;
};

/// Parses the tab-separated rule format: keyword<TAB>cluster<TAB>priority,
/// '#' comments and blank lines allowed. Throws std::runtime_error on any
/// malformed line or duplicate normalized keyword.
std::vector<KeywordRule> parse_rules(std::string_view text);

std::vector<KeywordRule> load_rules(const std::string& path);

struct ClusterAssignment {
  std::vector<Cluster> by_node;  // merged node id -> cluster
  std::size_t inherited = 0;
  std::size_t keyword_matched = 0;
  std::size_t unclassified = 0;
};

/// Three-step assignment over the merged article space: inherit a shipped
/// cluster label, else match journal-title keywords on word boundaries, else
/// Unclassified. Rule-file order never affects the result.
ClusterAssignment assign_clusters(const std::vector<PaperRecord>& a,
                                  const std::vector<PaperRecord>& b,
                                  const std::vector<MatchResult>& matches,
                                  const std::vector<KeywordRule>& rules);

/// Keyword lookup for a single normalized journal title; exposed for tests.
std::optional<Cluster> match_journal(const std::vector<KeywordRule>& rules,
                                     std::string_view journal_title);

struct UnclassifiedProfile {
  std::size_t count = 0;
  std::optional<double> mean_citations;  // absent when count is 0
};

/// Citation profile of the unclassified remainder, for judging whether it can
/// be disregarded.
UnclassifiedProfile unclassified_profile(const ClusterAssignment& assignment,
                                         const CitationGraph& merged);

}  // namespace citemerge
