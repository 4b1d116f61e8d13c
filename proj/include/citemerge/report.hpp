#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "citemerge/merger.hpp"
#include "citemerge/types.hpp"

namespace citemerge {

struct SummaryStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;  // mean of the two central values for even counts
};

SummaryStats summarize(std::span<const double> values);

struct DatasetSummary {
  std::size_t papers = 0;
  std::size_t non_ref_papers = 0;  // articles with no references at all
  SummaryStats cites;
  SummaryStats references;
};

/// Table-1-shaped aggregate: citation (in-degree) and reference-count
/// statistics of one graph.
DatasetSummary dataset_summary(const CitationGraph& g);

struct AnnualPoint {
  int year = 0;
  std::size_t count = 0;
  double mean = 0.0;  // 0 for empty years
};

/// Mean per-article metric by publication year, inclusive bounds; empty years
/// are emitted with count 0. Throws std::invalid_argument if year_lo > year_hi.
std::vector<AnnualPoint> annual_series(const CitationGraph& g, std::span<const double> values,
                                       int year_lo, int year_hi);

struct RankBin {
  std::uint32_t lo = 1;  // inclusive rank bounds
  std::uint32_t hi = 1;
  std::size_t a_only = 0;
  std::size_t b_only = 0;
};

/// Histogram of the merged-graph ranks held by single-dataset articles.
std::vector<RankBin> rank_distribution(const CitationGraph& merged,
                                       std::span<const std::uint32_t> ranks,
                                       std::uint32_t bin_width);

struct ClusterSummaryRow {
  Cluster cluster = Cluster::Unclassified;
  std::size_t papers = 0;
  SummaryStats cites;
  SummaryStats asp;
};

/// Per-cluster citation and prestige statistics; rows cover the 14 named
/// clusters plus Unclassified, in enum order.
std::vector<ClusterSummaryRow> cluster_summary(const CitationGraph& g,
                                               const std::vector<Cluster>& clusters,
                                               std::span<const double> asp_values);

}  // namespace citemerge
