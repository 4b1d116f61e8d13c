#include "citemerge/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace citemerge {

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  double total = 0.0;
  for (double v : sorted) total += v;
  s.mean = total / static_cast<double>(sorted.size());
  const std::size_t mid = sorted.size() / 2;
  s.median = (sorted.size() % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

DatasetSummary dataset_summary(const CitationGraph& g) {
  DatasetSummary out;
  out.papers = g.node_count();
  const std::vector<std::uint32_t> in_deg = g.in_degrees();
  std::vector<double> cites(in_deg.begin(), in_deg.end());
  std::vector<double> refs;
  refs.reserve(g.node_count());
  for (std::uint32_t r : g.ref_counts) {
    refs.push_back(static_cast<double>(r));
    if (r == 0) ++out.non_ref_papers;
  }
  out.cites = summarize(cites);
  out.references = summarize(refs);
  return out;
}

std::vector<AnnualPoint> annual_series(const CitationGraph& g, std::span<const double> values,
                                       int year_lo, int year_hi) {
  if (year_lo > year_hi) throw std::invalid_argument("annual_series: year_lo > year_hi");
  const std::size_t bins = static_cast<std::size_t>(year_hi - year_lo) + 1;
  std::vector<double> totals(bins, 0.0);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const int y = g.years[i];
    if (y < year_lo || y > year_hi) continue;
    const auto bin = static_cast<std::size_t>(y - year_lo);
    totals[bin] += values[i];
    ++counts[bin];
  }
  std::vector<AnnualPoint> series(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    series[b].year = year_lo + static_cast<int>(b);
    series[b].count = counts[b];
    series[b].mean = counts[b] ? totals[b] / static_cast<double>(counts[b]) : 0.0;
  }
  return series;
}

std::vector<RankBin> rank_distribution(const CitationGraph& merged,
                                       std::span<const std::uint32_t> ranks,
                                       std::uint32_t bin_width) {
  if (bin_width == 0) throw std::invalid_argument("rank_distribution: bin width must be positive");
  const std::size_t n = merged.node_count();
  if (n == 0) return {};
  const std::size_t bins = (n + bin_width - 1) / bin_width;
  std::vector<RankBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = static_cast<std::uint32_t>(b) * bin_width + 1;
    out[b].hi = static_cast<std::uint32_t>(std::min<std::size_t>((b + 1) * bin_width, n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (merged.provenance[i] == Provenance::Both) continue;
    const std::size_t b = (ranks[i] - 1) / bin_width;
    if (merged.provenance[i] == Provenance::AOnly)
      ++out[b].a_only;
    else
      ++out[b].b_only;
  }
  return out;
}

std::vector<ClusterSummaryRow> cluster_summary(const CitationGraph& g,
                                               const std::vector<Cluster>& clusters,
                                               std::span<const double> asp_values) {
  constexpr std::size_t kBuckets = kNamedClusterCount + 1;
  std::vector<std::vector<std::size_t>> members(kBuckets);
  for (std::size_t i = 0; i < clusters.size(); ++i)
    members[static_cast<std::size_t>(clusters[i])].push_back(i);

  const std::vector<std::uint32_t> in_deg = g.in_degrees();
  std::vector<ClusterSummaryRow> rows(kBuckets);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kBuckets); ++c) {
    const auto& idx = members[static_cast<std::size_t>(c)];
    ClusterSummaryRow& row = rows[static_cast<std::size_t>(c)];
    row.cluster = static_cast<Cluster>(c);
    row.papers = idx.size();
    std::vector<double> cites, asp;
    cites.reserve(idx.size());
    asp.reserve(idx.size());
    for (std::size_t i : idx) {
      cites.push_back(static_cast<double>(in_deg[i]));
      asp.push_back(asp_values[i]);
    }
    row.cites = summarize(cites);
    row.asp = summarize(asp);
  }
  return rows;
}

}  // namespace citemerge
