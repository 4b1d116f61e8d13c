#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citemerge/types.hpp"

namespace citemerge {

enum class GoldCase : std::uint8_t { GloriousUpgrade, OrdinaryGain, LowImpact, DiverseBoost };

std::string_view to_string(GoldCase c);      // "G" / "O" / "L" / "D"
std::string_view long_name(GoldCase c);

/// Prestige rank n and citation rank k of one article, in the original
/// dataset and in the merged dataset. All ranks >= 1.
struct GoldInput {
  std::uint32_t n_ds = 1;
  std::uint32_t k_ds = 1;
  std::uint32_t n_m = 1;
  std::uint32_t k_m = 1;
};

/// (k_m - n_m) - (k_ds - n_ds): how much the prestige/citation rank gap
/// widened after merging.
long long gold_delta(const GoldInput& in);

/// Four-way rank-shift classification. The Glorious Upgrade disjunction is
/// evaluated first; an improved prestige rank (n_m <= n_ds) is Glorious
/// regardless of the other clauses.
GoldCase classify(const GoldInput& in);

struct RankPair {
  std::uint32_t asp_rank = 1;   // n
  std::uint32_t cite_rank = 1;  // k
};

struct GoldRow {
  Uid uid = kNoUid;
  GoldCase gold_case = GoldCase::GloriousUpgrade;
  GoldInput input;
  long long delta = 0;
};

struct GoldClassification {
  std::vector<GoldRow> rows;  // ascending uid
  std::array<std::size_t, 4> counts{};
  std::size_t classified = 0;
  std::size_t excluded = 0;  // uid present in only one rank map
  std::size_t dataset_population = 0;
  std::size_t merged_population = 0;

  double proportion_of_dataset(GoldCase c) const;
  double proportion_of_merged(GoldCase c) const;
};

/// Classifies every article present in both rank maps; articles known to only
/// one map are excluded and counted.
GoldClassification classify_dataset(const std::unordered_map<Uid, RankPair>& ranks_ds,
                                    const std::unordered_map<Uid, RankPair>& ranks_m,
                                    std::size_t merged_population);

}  // namespace citemerge
