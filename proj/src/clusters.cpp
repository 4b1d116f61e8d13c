#include "citemerge/clusters.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "citemerge/normalize.hpp"

namespace citemerge {

std::vector<KeywordRule> parse_rules(std::string_view text) {
  std::vector<KeywordRule> rules;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos)
      throw std::runtime_error("rule line " + std::to_string(line_no) + ": expected 3 tab-separated fields");

    KeywordRule rule;
    rule.keyword = normalize_title(line.substr(0, t1));
    if (rule.keyword.empty())
      throw std::runtime_error("rule line " + std::to_string(line_no) + ": empty keyword");
    auto cluster = cluster_from_name(line.substr(t1 + 1, t2 - t1 - 1));
    if (!cluster)
      throw std::runtime_error("rule line " + std::to_string(line_no) + ": unknown cluster name");
    rule.cluster = *cluster;
    try {
      std::size_t used = 0;
      rule.priority = std::stoi(std::string(line.substr(t2 + 1)), &used);
      if (used != line.size() - t2 - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::runtime_error("rule line " + std::to_string(line_no) + ": bad priority");
    }
    if (!seen.insert(rule.keyword).second)
      throw std::runtime_error("rule line " + std::to_string(line_no) + ": duplicate keyword '" +
                               rule.keyword + "'");
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<KeywordRule> load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str());
}

namespace {

// Rule wins by (priority, longest keyword, lexicographic keyword).
bool rule_beats(const KeywordRule& x, const KeywordRule& y) {
  if (x.priority != y.priority) return x.priority < y.priority;
  if (x.keyword.size() != y.keyword.size()) return x.keyword.size() > y.keyword.size();
  return x.keyword < y.keyword;
}

bool contains_phrase(const std::string& padded_title, const std::string& keyword) {
  return padded_title.find(" " + keyword + " ") != std::string::npos;
}

}  // namespace

std::optional<Cluster> match_journal(const std::vector<KeywordRule>& rules,
                                     std::string_view journal_title) {
  const std::string norm = normalize_title(journal_title);
  if (norm.empty()) return std::nullopt;
  const std::string padded = " " + norm + " ";
  const KeywordRule* best = nullptr;
  for (const KeywordRule& rule : rules) {
    if (!contains_phrase(padded, rule.keyword)) continue;
    if (!best || rule_beats(rule, *best)) best = &rule;
  }
  if (!best) return std::nullopt;
  return best->cluster;
}

ClusterAssignment assign_clusters(const std::vector<PaperRecord>& a,
                                  const std::vector<PaperRecord>& b,
                                  const std::vector<MatchResult>& matches,
                                  const std::vector<KeywordRule>& rules) {
  ClusterAssignment out;
  out.by_node.assign(matches.size(), Cluster::Unclassified);
  std::size_t inherited = 0, keyword_matched = 0, unclassified = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : inherited, keyword_matched, unclassified)
  for (std::ptrdiff_t ui = 0; ui < static_cast<std::ptrdiff_t>(matches.size()); ++ui) {
    const MatchResult& m = matches[static_cast<std::size_t>(ui)];
    const PaperRecord* rec_a = m.a_index != kNoIndex ? &a[m.a_index] : nullptr;
    const PaperRecord* rec_b = m.b_index != kNoIndex ? &b[m.b_index] : nullptr;

    // Step 1: a shipped label wins; the A record is consulted first.
    if (rec_a && rec_a->cluster_label) {
      out.by_node[m.uid] = *rec_a->cluster_label;
      ++inherited;
      continue;
    }
    if (rec_b && rec_b->cluster_label) {
      out.by_node[m.uid] = *rec_b->cluster_label;
      ++inherited;
      continue;
    }
    // Step 2: journal-title keywords, A's journal first.
    std::optional<Cluster> hit;
    if (rec_a) hit = match_journal(rules, rec_a->journal_title);
    if (!hit && rec_b) hit = match_journal(rules, rec_b->journal_title);
    if (hit) {
      out.by_node[m.uid] = *hit;
      ++keyword_matched;
      continue;
    }
    // Step 3: unclassified remainder.
    ++unclassified;
  }
  out.inherited = inherited;
  out.keyword_matched = keyword_matched;
  out.unclassified = unclassified;
  return out;
}

UnclassifiedProfile unclassified_profile(const ClusterAssignment& assignment,
                                         const CitationGraph& merged) {
  UnclassifiedProfile out;
  const std::vector<std::uint32_t> cites = merged.in_degrees();
  std::size_t total = 0;
  for (std::size_t i = 0; i < assignment.by_node.size(); ++i) {
    if (assignment.by_node[i] != Cluster::Unclassified) continue;
    ++out.count;
    total += cites[i];
  }
  if (out.count > 0)
    out.mean_citations = static_cast<double>(total) / static_cast<double>(out.count);
  return out;
}

}  // namespace citemerge
