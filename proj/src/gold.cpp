#include "citemerge/gold.hpp"

#include <algorithm>

namespace citemerge {

std::string_view to_string(GoldCase c) {
  switch (c) {
    case GoldCase::GloriousUpgrade: return "G";
    case GoldCase::OrdinaryGain: return "O";
    case GoldCase::LowImpact: return "L";
    case GoldCase::DiverseBoost: return "D";
  }
  return "?";
}

std::string_view long_name(GoldCase c) {
  switch (c) {
    case GoldCase::GloriousUpgrade: return "Glorious Upgrade";
    case GoldCase::OrdinaryGain: return "Ordinary Gain";
    case GoldCase::LowImpact: return "Low Impact";
    case GoldCase::DiverseBoost: return "Diverse Boost";
  }
  return "?";
}

long long gold_delta(const GoldInput& in) {
  const auto n_ds = static_cast<long long>(in.n_ds);
  const auto k_ds = static_cast<long long>(in.k_ds);
  const auto n_m = static_cast<long long>(in.n_m);
  const auto k_m = static_cast<long long>(in.k_m);
  return (k_m - n_m) - (k_ds - n_ds);
}

GoldCase classify(const GoldInput& in) {
  const long long delta = gold_delta(in);
  const bool high_baseline = in.n_ds < in.k_ds;
  if ((high_baseline && delta >= 0) || in.n_m <= in.n_ds) return GoldCase::GloriousUpgrade;
  // From here n_m > n_ds.
  if (high_baseline) return GoldCase::OrdinaryGain;  // delta < 0
  if (delta < 0) return GoldCase::LowImpact;
  return GoldCase::DiverseBoost;
}

double GoldClassification::proportion_of_dataset(GoldCase c) const {
  return classified ? static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                          static_cast<double>(classified)
                    : 0.0;
}

double GoldClassification::proportion_of_merged(GoldCase c) const {
  const std::size_t pop = merged_population;
  return pop ? static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(pop)
             : 0.0;
}

GoldClassification classify_dataset(const std::unordered_map<Uid, RankPair>& ranks_ds,
                                    const std::unordered_map<Uid, RankPair>& ranks_m,
                                    std::size_t merged_population) {
  GoldClassification out;
  out.dataset_population = ranks_ds.size();
  out.merged_population = merged_population;
  out.rows.reserve(ranks_ds.size());
  for (const auto& [uid, ds] : ranks_ds) {
    auto it = ranks_m.find(uid);
    if (it == ranks_m.end()) {
      ++out.excluded;
      continue;
    }
    GoldRow row;
    row.uid = uid;
    row.input = {ds.asp_rank, ds.cite_rank, it->second.asp_rank, it->second.cite_rank};
    row.gold_case = classify(row.input);
    row.delta = gold_delta(row.input);
    out.rows.push_back(row);
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const GoldRow& x, const GoldRow& y) { return x.uid < y.uid; });
  for (const GoldRow& row : out.rows) ++out.counts[static_cast<std::size_t>(row.gold_case)];
  out.classified = out.rows.size();
  return out;
}

}  // namespace citemerge
