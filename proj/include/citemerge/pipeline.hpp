#pragma once

#include <string>
#include <vector>

#include "citemerge/types.hpp"

namespace citemerge {

/// End-to-end run configuration. Year bounds of 0 mean "derive from the data".
struct PipelineConfig {
  std::string a_path;
  std::string b_path;
  std::string out_dir;
  std::string rules_path;  // empty: keyword step disabled
  double damping = 0.5;
  int window_years = 5;
  double tol = 1e-12;
  int max_iter = 200;
  int threads = 0;  // 0: library default
  int year_lo = 0;
  int year_hi = 0;
  std::uint32_t bin_width = 1000;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct PipelineResult {
  std::size_t records_a = 0;
  std::size_t records_b = 0;
  std::size_t rejected_a = 0;
  std::size_t rejected_b = 0;
  std::size_t matched = 0;
  std::size_t merged_nodes = 0;
  std::size_t merged_edges = 0;
  std::vector<StageTiming> timings;
};

/// File names every stage agrees on, relative to out_dir.
namespace artifacts {
inline constexpr const char* kDatasetA = "a.jsonl";
inline constexpr const char* kDatasetB = "b.jsonl";
inline constexpr const char* kGenManifest = "gen_manifest.csv";
inline constexpr const char* kMatches = "matches.csv";
inline constexpr const char* kMatchStats = "match_stats.csv";
inline constexpr const char* kNodesA = "nodes_a.csv";
inline constexpr const char* kEdgesA = "edges_a.csv";
inline constexpr const char* kNodesB = "nodes_b.csv";
inline constexpr const char* kEdgesB = "edges_b.csv";
inline constexpr const char* kNodes = "nodes.csv";
inline constexpr const char* kEdges = "edges.csv";
inline constexpr const char* kMergeStats = "merge_stats.csv";
inline constexpr const char* kMetricsA = "metrics_a.csv";
inline constexpr const char* kMetricsB = "metrics_b.csv";
inline constexpr const char* kMetricsMerged = "metrics_merged.csv";
inline constexpr const char* kAspInfo = "asp_info.csv";
inline constexpr const char* kRcr = "rcr.csv";
inline constexpr const char* kGoldA = "gold_a.csv";
inline constexpr const char* kGoldB = "gold_b.csv";
inline constexpr const char* kGoldSummary = "gold_summary.csv";
inline constexpr const char* kClusters = "clusters.csv";
inline constexpr const char* kUnclassifiedProfile = "unclassified_profile.csv";
inline constexpr const char* kDatasetSummary = "dataset_summary.csv";
inline constexpr const char* kAspSummary = "asp_summary.csv";
inline constexpr const char* kRcrSummary = "rcr_summary.csv";
inline constexpr const char* kRcrByCluster = "rcr_by_cluster.csv";
inline constexpr const char* kAnnualCites = "annual_cites.csv";
inline constexpr const char* kAnnualAsp = "annual_asp.csv";
inline constexpr const char* kRankDistCites = "rank_distribution_cites.csv";
inline constexpr const char* kRankDistAsp = "rank_distribution_asp.csv";
inline constexpr const char* kClusterSummary = "cluster_summary.csv";
inline constexpr const char* kGoldByCluster = "gold_by_cluster.csv";
inline constexpr const char* kRunManifest = "run_manifest.json";
}  // namespace artifacts

std::string artifact_path(const PipelineConfig& config, const char* name);

/// Runs ingest -> match -> merge -> metrics -> gold -> clusters -> report in
/// memory, writing every artifact plus a run manifest. Inputs are validated
/// before anything is written.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Stage entry points; each resumes from the artifacts earlier stages left in
/// out_dir and writes its own.
void stage_match(const PipelineConfig& config);
void stage_merge(const PipelineConfig& config);
void stage_asp(const PipelineConfig& config);
void stage_rcr(const PipelineConfig& config);
void stage_gold(const PipelineConfig& config);
void stage_clusters(const PipelineConfig& config);
void stage_report(const PipelineConfig& config);

}  // namespace citemerge
