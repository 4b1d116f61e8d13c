#include "citemerge/matcher.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "citemerge/normalize.hpp"

namespace citemerge {

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::DoiExact: return "doi";
    case MatchKind::TitleIssn: return "title_issn";
    case MatchKind::UnmatchedA: return "unmatched_a";
    case MatchKind::UnmatchedB: return "unmatched_b";
  }
  return "?";
}

namespace {

// index of the single record holding a key, or kNoIndex once the key repeats
using KeyMap = std::unordered_map<std::string, std::size_t>;

KeyMap build_unique_key_map(const std::vector<PaperRecord>& records,
                            const std::vector<std::size_t>& candidates,
                            std::string (*key_of)(const PaperRecord&), std::size_t& ambiguous) {
  KeyMap map;
  map.reserve(candidates.size() * 2);
  for (std::size_t idx : candidates) {
    std::string key = key_of(records[idx]);
    if (key.empty()) continue;
    auto [it, inserted] = map.emplace(std::move(key), idx);
    if (!inserted) it->second = kNoIndex;
  }
  for (std::size_t idx : candidates) {
    std::string key = key_of(records[idx]);
    if (key.empty()) continue;
    if (map.at(key) == kNoIndex) ++ambiguous;
  }
  return map;
}

StagePairs join_stage(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                      const std::vector<std::size_t>& a_candidates,
                      const std::vector<std::size_t>& b_candidates,
                      std::string (*key_of)(const PaperRecord&)) {
  StagePairs out;
  KeyMap a_map = build_unique_key_map(a, a_candidates, key_of, out.ambiguous_a);
  KeyMap b_map = build_unique_key_map(b, b_candidates, key_of, out.ambiguous_b);
  for (std::size_t a_idx : a_candidates) {
    std::string key = key_of(a[a_idx]);
    if (key.empty()) continue;
    if (a_map.at(key) != a_idx) continue;  // ambiguous on the A side
    auto it = b_map.find(key);
    if (it == b_map.end() || it->second == kNoIndex) continue;
    out.pairs.emplace_back(a_idx, it->second);
  }
  // a_candidates iteration already yields ascending a indices
  return out;
}

std::string doi_key(const PaperRecord& r) { return normalize_doi(r.doi); }

std::string title_issn_key(const PaperRecord& r) {
  std::string t = normalize_title(r.title);
  std::string i = normalize_issn(r.issn);
  if (t.empty() || i.empty()) return {};
  return t + "\x1f" + i;
}

}  // namespace

StagePairs match_by_doi(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                        const std::vector<std::size_t>& a_candidates,
                        const std::vector<std::size_t>& b_candidates) {
  return join_stage(a, b, a_candidates, b_candidates, &doi_key);
}

StagePairs match_by_title_issn(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                               const std::vector<std::size_t>& a_candidates,
                               const std::vector<std::size_t>& b_candidates) {
  return join_stage(a, b, a_candidates, b_candidates, &title_issn_key);
}

std::vector<MatchResult> assign_uids(const std::vector<PaperRecord>& a,
                                     const std::vector<PaperRecord>& b,
                                     const StagePairs& doi_pairs, const StagePairs& title_pairs) {
  struct Pair {
    std::size_t a_idx, b_idx;
    MatchKind kind;
  };
  std::vector<Pair> pairs;
  pairs.reserve(doi_pairs.pairs.size() + title_pairs.pairs.size());
  for (auto [ai, bi] : doi_pairs.pairs) pairs.push_back({ai, bi, MatchKind::DoiExact});
  for (auto [ai, bi] : title_pairs.pairs) pairs.push_back({ai, bi, MatchKind::TitleIssn});
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& x, const Pair& y) { return x.a_idx < y.a_idx; });

  std::vector<bool> a_used(a.size(), false), b_used(b.size(), false);
  for (const Pair& p : pairs) {
    if (p.a_idx >= a.size() || p.b_idx >= b.size() || a_used[p.a_idx] || b_used[p.b_idx]) {
      throw std::logic_error("assign_uids: source record appears in more than one match");
    }
    a_used[p.a_idx] = true;
    b_used[p.b_idx] = true;
  }

  std::vector<MatchResult> results;
  results.reserve(a.size() + b.size() - pairs.size());
  Uid next = 0;
  for (const Pair& p : pairs) {
    MatchResult r;
    r.uid = next++;
    r.a_index = p.a_idx;
    r.b_index = p.b_idx;
    r.a_id = a[p.a_idx].source_id;
    r.b_id = b[p.b_idx].source_id;
    r.kind = p.kind;
    results.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a_used[i]) continue;
    MatchResult r;
    r.uid = next++;
    r.a_index = i;
    r.a_id = a[i].source_id;
    r.kind = MatchKind::UnmatchedA;
    results.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b_used[i]) continue;
    MatchResult r;
    r.uid = next++;
    r.b_index = i;
    r.b_id = b[i].source_id;
    r.kind = MatchKind::UnmatchedB;
    results.push_back(std::move(r));
  }
  return results;
}

Matching match_datasets(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b) {
  std::vector<std::size_t> a_all(a.size()), b_all(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a_all[i] = i;
  for (std::size_t i = 0; i < b.size(); ++i) b_all[i] = i;

  StagePairs doi_stage = match_by_doi(a, b, a_all, b_all);

  std::vector<bool> a_taken(a.size(), false), b_taken(b.size(), false);
  for (auto [ai, bi] : doi_stage.pairs) {
    a_taken[ai] = true;
    b_taken[bi] = true;
  }
  std::vector<std::size_t> a_rest, b_rest;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a_taken[i]) a_rest.push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b_taken[i]) b_rest.push_back(i);

  StagePairs title_stage = match_by_title_issn(a, b, a_rest, b_rest);

  Matching m;
  m.results = assign_uids(a, b, doi_stage, title_stage);
  m.stats.total_a = a.size();
  m.stats.total_b = b.size();
  m.stats.matched_doi = doi_stage.pairs.size();
  m.stats.matched_title_issn = title_stage.pairs.size();
  m.stats.ambiguous_doi_a = doi_stage.ambiguous_a;
  m.stats.ambiguous_doi_b = doi_stage.ambiguous_b;
  m.stats.ambiguous_title_issn_a = title_stage.ambiguous_a;
  m.stats.ambiguous_title_issn_b = title_stage.ambiguous_b;
  for (const MatchResult& r : m.results) {
    switch (r.kind) {
      case MatchKind::UnmatchedA: ++m.stats.unmatched_a; break;
      case MatchKind::UnmatchedB: ++m.stats.unmatched_b; break;
      default:
        if (a[r.a_index].year != b[r.b_index].year) ++m.stats.year_mismatched_matches;
        break;
    }
  }
  return m;
}

}  // namespace citemerge
