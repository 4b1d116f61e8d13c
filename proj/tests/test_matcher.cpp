#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "citemerge/matcher.hpp"

using namespace citemerge;

TEST_SUITE_BEGIN("matcher");

namespace {

PaperRecord rec(std::string id, DatasetTag tag, std::string doi, std::string title,
                std::string issn, int year = 2000) {
  PaperRecord r;
  r.source_id = std::move(id);
  r.tag = tag;
  r.doi = std::move(doi);
  r.title = std::move(title);
  r.issn = std::move(issn);
  r.year = year;
  return r;
}

std::set<std::pair<std::string, std::string>> matched_pairs(const Matching& m) {
  std::set<std::pair<std::string, std::string>> out;
  for (const MatchResult& r : m.results) {
    if (r.a_index != kNoIndex && r.b_index != kNoIndex) out.emplace(r.a_id, r.b_id);
  }
  return out;
}

}  // namespace

TEST_CASE("doi matching is case insensitive") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "10.1/x", "One", "")};
  std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "10.1/X", "Uno", "")};
  const Matching m = match_datasets(a, b);
  REQUIRE(m.results.size() == 1);
  CHECK(m.results[0].kind == MatchKind::DoiExact);
  CHECK(m.stats.matched_doi == 1);
}

TEST_CASE("missing doi never matches by doi") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "", "One", "")};
  std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "10.1/x", "Two", "")};
  const Matching m = match_datasets(a, b);
  CHECK(m.stats.matched() == 0);
  CHECK(m.results.size() == 2);
}

TEST_CASE("title issn fallback requires both components") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "", "Deep Learning", "1234-5678")};
  SUBCASE("normalized equality matches") {
    std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "", "DEEP LEARNING.", "1234-5678")};
    const Matching m = match_datasets(a, b);
    REQUIRE(m.stats.matched_title_issn == 1);
    CHECK(m.results[0].kind == MatchKind::TitleIssn);
  }
  SUBCASE("different issn does not match") {
    std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "", "Deep Learning", "9999-0000")};
    CHECK(match_datasets(a, b).stats.matched() == 0);
  }
  SUBCASE("absent issn does not match") {
    std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "", "Deep Learning", "")};
    CHECK(match_datasets(a, b).stats.matched() == 0);
  }
}

TEST_CASE("ambiguous dois are excluded and fall through") {
  std::vector<PaperRecord> a{
      rec("a1", DatasetTag::A, "10.1/dup", "First Title", "1111-1111"),
      rec("a2", DatasetTag::A, "10.1/dup", "Second Title", "1111-1111"),
  };
  std::vector<PaperRecord> b{
      rec("b1", DatasetTag::B, "10.1/dup", "First Title", "1111-1111"),
  };
  const Matching m = match_datasets(a, b);
  CHECK(m.stats.matched_doi == 0);
  CHECK(m.stats.ambiguous_doi_a == 2);
  // a1 still matches b1 through the fallback stage.
  CHECK(m.stats.matched_title_issn == 1);
  CHECK(matched_pairs(m) == std::set<std::pair<std::string, std::string>>{{"a1", "b1"}});
}

TEST_CASE("doi matched records never reach the fallback stage") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "10.1/x", "Shared Title", "1234-5678")};
  std::vector<PaperRecord> b{
      rec("b1", DatasetTag::B, "10.1/x", "Unrelated", ""),
      rec("b2", DatasetTag::B, "", "Shared Title", "1234-5678"),
  };
  const Matching m = match_datasets(a, b);
  CHECK(m.stats.matched_doi == 1);
  CHECK(m.stats.matched_title_issn == 0);
  CHECK(matched_pairs(m) == std::set<std::pair<std::string, std::string>>{{"a1", "b1"}});
  CHECK(m.stats.unmatched_b == 1);
}

TEST_CASE("uid assignment is dense and ordered") {
  std::vector<PaperRecord> a{
      rec("a1", DatasetTag::A, "10.1/p", "P", ""),
      rec("a2", DatasetTag::A, "", "Lonely A", ""),
      rec("a3", DatasetTag::A, "10.1/q", "Q", ""),
  };
  std::vector<PaperRecord> b{
      rec("b1", DatasetTag::B, "10.1/q", "Q", ""),
      rec("b2", DatasetTag::B, "10.1/p", "P", ""),
      rec("b3", DatasetTag::B, "", "Lonely B", ""),
  };
  const Matching m = match_datasets(a, b);
  REQUIRE(m.results.size() == 4);  // |A| + |B| - matched
  for (std::size_t i = 0; i < m.results.size(); ++i)
    CHECK(m.results[i].uid == static_cast<Uid>(i));
  // Pairs first in A source order, then unmatched A, then unmatched B.
  CHECK(m.results[0].a_id == "a1");
  CHECK(m.results[0].b_id == "b2");
  CHECK(m.results[1].a_id == "a3");
  CHECK(m.results[1].b_id == "b1");
  CHECK(m.results[2].kind == MatchKind::UnmatchedA);
  CHECK(m.results[3].kind == MatchKind::UnmatchedB);
}

TEST_CASE("empty datasets produce an empty result") {
  const Matching m = match_datasets({}, {});
  CHECK(m.results.empty());
  CHECK(m.stats.matched() == 0);
}

TEST_CASE("assign_uids rejects overlapping pairs") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "10.1/x", "X", "1111-1111")};
  std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "10.1/x", "X", "1111-1111")};
  StagePairs doi_stage;
  doi_stage.pairs = {{0, 0}};
  StagePairs title_stage;
  title_stage.pairs = {{0, 0}};
  CHECK_THROWS_AS(assign_uids(a, b, doi_stage, title_stage), std::logic_error);
}

namespace {

// Random corpora with planted overlap; keys unique by construction.
std::pair<std::vector<PaperRecord>, std::vector<PaperRecord>> random_corpus(std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<PaperRecord> a, b;
  const int shared = 20, only = 15;
  for (int i = 0; i < shared; ++i) {
    const bool with_doi = coin(rng) == 1;
    const std::string doi = with_doi ? "10.1/s" + std::to_string(i) : "";
    const std::string title = "Shared Article " + std::to_string(i);
    const std::string issn = "1234-000" + std::to_string(i % 10);
    a.push_back(rec("a_s" + std::to_string(i), DatasetTag::A, doi, title, issn));
    b.push_back(rec("b_s" + std::to_string(i), DatasetTag::B, doi, title, issn));
  }
  for (int i = 0; i < only; ++i) {
    a.push_back(rec("a_o" + std::to_string(i), DatasetTag::A, "10.1/ao" + std::to_string(i),
                    "A Only " + std::to_string(i), "2222-0000"));
    b.push_back(rec("b_o" + std::to_string(i), DatasetTag::B, "10.1/bo" + std::to_string(i),
                    "B Only " + std::to_string(i), "3333-0000"));
  }
  std::shuffle(a.begin(), a.end(), rng);
  std::shuffle(b.begin(), b.end(), rng);
  return {a, b};
}

}  // namespace

TEST_CASE("partition property and pair symmetry on random corpora") {
  for (std::uint32_t seed = 1; seed <= 8; ++seed) {
    auto [a, b] = random_corpus(seed);
    const Matching fwd = match_datasets(a, b);
    CHECK(fwd.results.size() == a.size() + b.size() - fwd.stats.matched());

    // Every source record covered exactly once.
    std::size_t covered_a = 0, covered_b = 0;
    for (const MatchResult& r : fwd.results) {
      if (r.a_index != kNoIndex) ++covered_a;
      if (r.b_index != kNoIndex) ++covered_b;
    }
    CHECK(covered_a == a.size());
    CHECK(covered_b == b.size());
    CHECK(fwd.stats.matched() == 20);

    // Swapping the datasets yields the same matched pair set.
    const Matching rev = match_datasets(b, a);
    std::set<std::pair<std::string, std::string>> swapped;
    for (const auto& [x, y] : matched_pairs(rev)) swapped.emplace(y, x);
    CHECK(matched_pairs(fwd) == swapped);
  }
}

TEST_CASE("byte-identical inputs give identical assignments") {
  auto [a, b] = random_corpus(99);
  const Matching m1 = match_datasets(a, b);
  const Matching m2 = match_datasets(a, b);
  REQUIRE(m1.results.size() == m2.results.size());
  for (std::size_t i = 0; i < m1.results.size(); ++i) {
    CHECK(m1.results[i].uid == m2.results[i].uid);
    CHECK(m1.results[i].a_id == m2.results[i].a_id);
    CHECK(m1.results[i].b_id == m2.results[i].b_id);
  }
}

TEST_CASE("year disagreements between matched records are counted") {
  std::vector<PaperRecord> a{rec("a1", DatasetTag::A, "10.1/x", "X", "", 1999)};
  std::vector<PaperRecord> b{rec("b1", DatasetTag::B, "10.1/x", "X", "", 2001)};
  const Matching m = match_datasets(a, b);
  CHECK(m.stats.year_mismatched_matches == 1);
}

TEST_SUITE_END();
