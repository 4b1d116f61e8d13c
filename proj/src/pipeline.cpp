#include "citemerge/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "citemerge/clusters.hpp"
#include "citemerge/csv.hpp"
#include "citemerge/gold.hpp"
#include "citemerge/ingest.hpp"
#include "citemerge/matcher.hpp"
#include "citemerge/merger.hpp"
#include "citemerge/metrics.hpp"
#include "citemerge/report.hpp"

namespace citemerge {

namespace fs = std::filesystem;

std::string artifact_path(const PipelineConfig& config, const char* name) {
  return (fs::path(config.out_dir) / name).string();
}

namespace {

void validate_config(const PipelineConfig& c, bool needs_inputs) {
  if (!(c.damping > 0.0 && c.damping < 1.0))
    throw std::invalid_argument("damping must be in (0, 1)");
  if (c.window_years < -1) throw std::invalid_argument("window must be >= -1");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (c.max_iter <= 0) throw std::invalid_argument("max-iter must be positive");
  if (c.bin_width == 0) throw std::invalid_argument("bin-width must be positive");
  if (c.year_lo != 0 && c.year_hi != 0 && c.year_lo > c.year_hi)
    throw std::invalid_argument("year-lo exceeds year-hi");
  if (c.out_dir.empty()) throw std::invalid_argument("out-dir is required");
  if (needs_inputs) {
    for (const std::string* p : {&c.a_path, &c.b_path}) {
      if (p->empty()) throw std::invalid_argument("both input datasets are required");
      std::ifstream probe(*p);
      if (!probe) throw std::runtime_error("cannot open dataset file: " + *p);
    }
  }
}

void apply_threads(const PipelineConfig& c) {
  if (c.threads > 0) omp_set_num_threads(c.threads);
}

AspParams asp_params(const PipelineConfig& c) {
  return AspParams{c.damping, c.window_years, c.tol, c.max_iter};
}

// ---------------------------------------------------------------------------
// matches.csv

void write_matches(const PipelineConfig& config, const Matching& m,
                   const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b) {
  CsvWriter out(artifact_path(config, artifacts::kMatches));
  out.row({"uid", "kind", "a_source_id", "b_source_id", "year_mismatch"});
  for (const MatchResult& r : m.results) {
    const bool pair = r.a_index != kNoIndex && r.b_index != kNoIndex;
    const bool mismatch = pair && a[r.a_index].year != b[r.b_index].year;
    out.row({std::to_string(r.uid), std::string(to_string(r.kind)), r.a_id, r.b_id,
             mismatch ? "1" : "0"});
  }
  out.close();

  CsvWriter stats(artifact_path(config, artifacts::kMatchStats));
  stats.row({"key", "value"});
  const MatchStats& s = m.stats;
  auto kv = [&](const char* k, std::size_t v) { stats.row({k, std::to_string(v)}); };
  kv("total_a", s.total_a);
  kv("total_b", s.total_b);
  kv("matched_doi", s.matched_doi);
  kv("matched_title_issn", s.matched_title_issn);
  kv("matched_total", s.matched());
  kv("unmatched_a", s.unmatched_a);
  kv("unmatched_b", s.unmatched_b);
  kv("ambiguous_doi_a", s.ambiguous_doi_a);
  kv("ambiguous_doi_b", s.ambiguous_doi_b);
  kv("ambiguous_title_issn_a", s.ambiguous_title_issn_a);
  kv("ambiguous_title_issn_b", s.ambiguous_title_issn_b);
  kv("year_mismatched_matches", s.year_mismatched_matches);
  stats.row({"overlap_share_a", fmt_double(s.overlap_share_a())});
  stats.row({"overlap_share_b", fmt_double(s.overlap_share_b())});
  stats.close();
}

std::vector<MatchResult> read_matches(const PipelineConfig& config,
                                      const std::vector<PaperRecord>& a,
                                      const std::vector<PaperRecord>& b) {
  std::unordered_map<std::string, std::size_t> a_index, b_index;
  a_index.reserve(a.size() * 2);
  b_index.reserve(b.size() * 2);
  for (std::size_t i = 0; i < a.size(); ++i) a_index.emplace(a[i].source_id, i);
  for (std::size_t i = 0; i < b.size(); ++i) b_index.emplace(b[i].source_id, i);

  const CsvTable t = read_csv(artifact_path(config, artifacts::kMatches));
  const std::size_t c_uid = t.column("uid");
  const std::size_t c_kind = t.column("kind");
  const std::size_t c_a = t.column("a_source_id");
  const std::size_t c_b = t.column("b_source_id");
  std::vector<MatchResult> results;
  results.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    MatchResult r;
    r.uid = static_cast<Uid>(std::stoul(row[c_uid]));
    r.a_id = row[c_a];
    r.b_id = row[c_b];
    const std::string& kind = row[c_kind];
    r.kind = kind == "doi"          ? MatchKind::DoiExact
             : kind == "title_issn" ? MatchKind::TitleIssn
             : kind == "unmatched_a" ? MatchKind::UnmatchedA
                                     : MatchKind::UnmatchedB;
    if (!r.a_id.empty()) {
      auto it = a_index.find(r.a_id);
      if (it == a_index.end())
        throw std::runtime_error("matches.csv references unknown A record: " + r.a_id);
      r.a_index = it->second;
    }
    if (!r.b_id.empty()) {
      auto it = b_index.find(r.b_id);
      if (it == b_index.end())
        throw std::runtime_error("matches.csv references unknown B record: " + r.b_id);
      r.b_index = it->second;
    }
    results.push_back(std::move(r));
  }
  return results;
}

// ---------------------------------------------------------------------------
// graphs + merge stats

struct GraphSet {
  CitationGraph a, b, merged;
  GraphBuildStats stats_a, stats_b, stats_merged;
  ResolutionStats resolution;
};

GraphSet build_graphs(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                      const std::vector<MatchResult>& matches) {
  GraphSet g;
  const ResolvedReferences refs = resolve_references(a, b, matches);
  g.resolution = refs.stats;
  g.a = build_graph(a, b, DatasetTag::A, matches, refs, &g.stats_a);
  g.b = build_graph(a, b, DatasetTag::B, matches, refs, &g.stats_b);
  g.merged = build_merged_graph(a, b, matches, refs, &g.stats_merged);
  return g;
}

void write_graph_set(const PipelineConfig& config, const GraphSet& g) {
  write_graph(g.a, artifact_path(config, artifacts::kNodesA), artifact_path(config, artifacts::kEdgesA));
  write_graph(g.b, artifact_path(config, artifacts::kNodesB), artifact_path(config, artifacts::kEdgesB));
  write_graph(g.merged, artifact_path(config, artifacts::kNodes), artifact_path(config, artifacts::kEdges));

  CsvWriter stats(artifact_path(config, artifacts::kMergeStats));
  stats.row({"key", "value"});
  auto kv = [&](const char* k, std::size_t v) { stats.row({k, std::to_string(v)}); };
  kv("resolved_doi", g.resolution.resolved_doi);
  kv("resolved_title_issn", g.resolution.resolved_title_issn);
  kv("unresolved", g.resolution.unresolved);
  kv("ambiguous_doi_keys", g.resolution.ambiguous_doi_keys);
  kv("ambiguous_title_issn_keys", g.resolution.ambiguous_title_issn_keys);
  kv("self_edges_dropped_a", g.stats_a.self_edges_dropped);
  kv("duplicate_edges_dropped_a", g.stats_a.duplicate_edges_dropped);
  kv("self_edges_dropped_b", g.stats_b.self_edges_dropped);
  kv("duplicate_edges_dropped_b", g.stats_b.duplicate_edges_dropped);
  kv("self_edges_dropped_merged", g.stats_merged.self_edges_dropped);
  kv("duplicate_edges_dropped_merged", g.stats_merged.duplicate_edges_dropped);
  kv("nodes_a", g.a.node_count());
  kv("edges_a", g.a.edge_count());
  kv("nodes_b", g.b.node_count());
  kv("edges_b", g.b.edge_count());
  kv("nodes_merged", g.merged.node_count());
  kv("edges_merged", g.merged.edge_count());
  stats.close();
}

// ---------------------------------------------------------------------------
// metrics tables

struct GraphMetrics {
  AspScores asp;
  std::vector<std::uint32_t> cites;    // in-degree, by node id
  std::vector<std::uint32_t> n_ranks;  // prestige ranks
  std::vector<std::uint32_t> k_ranks;  // citation ranks
};

GraphMetrics compute_metrics(const CitationGraph& g, const AspParams& params) {
  GraphMetrics m;
  m.asp = asp(g, params);
  m.cites = g.in_degrees();
  std::vector<double> cite_values(m.cites.begin(), m.cites.end());
  m.n_ranks = rank_by(m.asp.values);
  m.k_ranks = rank_by(cite_values);
  return m;
}

void write_metrics_file(const std::string& path, const CitationGraph& g, const GraphMetrics& m) {
  CsvWriter out(path);
  out.row({"uid", "asp", "cites", "n", "k"});
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out.row({std::to_string(g.uids[i]), fmt_double(m.asp.values[i]), std::to_string(m.cites[i]),
             std::to_string(m.n_ranks[i]), std::to_string(m.k_ranks[i])});
  }
  out.close();
}

GraphMetrics read_metrics_file(const std::string& path, const CitationGraph& g) {
  const CsvTable t = read_csv(path);
  if (t.rows.size() != g.node_count())
    throw std::runtime_error("metrics table does not match graph: " + path);
  const std::size_t c_uid = t.column("uid");
  const std::size_t c_asp = t.column("asp");
  const std::size_t c_cites = t.column("cites");
  const std::size_t c_n = t.column("n");
  const std::size_t c_k = t.column("k");
  GraphMetrics m;
  m.asp.values.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (static_cast<Uid>(std::stoul(row[c_uid])) != g.uids[i])
      throw std::runtime_error("metrics table out of sync with node table: " + path);
    m.asp.values.push_back(std::stod(row[c_asp]));
    m.cites.push_back(static_cast<std::uint32_t>(std::stoul(row[c_cites])));
    m.n_ranks.push_back(static_cast<std::uint32_t>(std::stoul(row[c_n])));
    m.k_ranks.push_back(static_cast<std::uint32_t>(std::stoul(row[c_k])));
  }
  return m;
}

void write_asp_info(const PipelineConfig& config, const GraphMetrics& a, const GraphMetrics& b,
                    const GraphMetrics& merged) {
  CsvWriter out(artifact_path(config, artifacts::kAspInfo));
  out.row({"graph", "damping", "window", "iterations", "residual", "converged"});
  auto row = [&](const char* name, const AspScores& s) {
    out.row({name, fmt_double(s.damping), std::to_string(s.window_years),
             std::to_string(s.iterations_used), fmt_double(s.residual),
             s.converged ? "1" : "0"});
  };
  row("a", a.asp);
  row("b", b.asp);
  row("merged", merged.asp);
  out.close();
}

// ---------------------------------------------------------------------------
// rcr.csv: matched articles with merged references

struct RcrRow {
  Uid uid = kNoUid;
  double rcr_a = 0.0;
  double rcr_b = 0.0;
};

std::vector<RcrRow> compute_rcr(const CitationGraph& a, const CitationGraph& b,
                                const CitationGraph& merged) {
  std::vector<std::uint32_t> r_a(merged.node_count(), 0), r_b(merged.node_count(), 0);
  for (std::size_t i = 0; i < a.node_count(); ++i) r_a[a.uids[i]] = a.ref_counts[i];
  for (std::size_t i = 0; i < b.node_count(); ++i) r_b[b.uids[i]] = b.ref_counts[i];
  std::vector<RcrRow> rows;
  for (std::size_t u = 0; u < merged.node_count(); ++u) {
    if (merged.provenance[u] != Provenance::Both) continue;
    const std::uint32_t r_m = merged.ref_counts[u];
    const auto va = rcr(r_a[u], r_m);
    const auto vb = rcr(r_b[u], r_m);
    if (!va || !vb) continue;  // no references in either dataset
    rows.push_back({static_cast<Uid>(u), *va, *vb});
  }
  return rows;
}

void write_rcr(const PipelineConfig& config, const std::vector<RcrRow>& rows) {
  CsvWriter out(artifact_path(config, artifacts::kRcr));
  out.row({"uid", "rcr_a", "rcr_b"});
  for (const RcrRow& r : rows)
    out.row({std::to_string(r.uid), fmt_double(r.rcr_a), fmt_double(r.rcr_b)});
  out.close();
}

std::vector<RcrRow> read_rcr(const PipelineConfig& config) {
  const CsvTable t = read_csv(artifact_path(config, artifacts::kRcr));
  const std::size_t c_uid = t.column("uid");
  const std::size_t c_a = t.column("rcr_a");
  const std::size_t c_b = t.column("rcr_b");
  std::vector<RcrRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& row : t.rows)
    rows.push_back({static_cast<Uid>(std::stoul(row[c_uid])), std::stod(row[c_a]),
                    std::stod(row[c_b])});
  return rows;
}

// ---------------------------------------------------------------------------
// gold tables

std::unordered_map<Uid, RankPair> rank_map(const CitationGraph& g, const GraphMetrics& m) {
  std::unordered_map<Uid, RankPair> out;
  out.reserve(g.node_count() * 2);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    out.emplace(g.uids[i], RankPair{m.n_ranks[i], m.k_ranks[i]});
  return out;
}

void write_gold_rows(const std::string& path, const GoldClassification& c) {
  CsvWriter out(path);
  out.row({"uid", "case", "n_ds", "k_ds", "n_m", "k_m", "delta"});
  for (const GoldRow& r : c.rows) {
    out.row({std::to_string(r.uid), std::string(to_string(r.gold_case)),
             std::to_string(r.input.n_ds), std::to_string(r.input.k_ds),
             std::to_string(r.input.n_m), std::to_string(r.input.k_m),
             std::to_string(r.delta)});
  }
  out.close();
}

GoldClassification read_gold_rows(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_uid = t.column("uid");
  const std::size_t c_case = t.column("case");
  const std::size_t c_nds = t.column("n_ds");
  const std::size_t c_kds = t.column("k_ds");
  const std::size_t c_nm = t.column("n_m");
  const std::size_t c_km = t.column("k_m");
  GoldClassification c;
  for (const auto& row : t.rows) {
    GoldRow r;
    r.uid = static_cast<Uid>(std::stoul(row[c_uid]));
    r.input = {static_cast<std::uint32_t>(std::stoul(row[c_nds])),
               static_cast<std::uint32_t>(std::stoul(row[c_kds])),
               static_cast<std::uint32_t>(std::stoul(row[c_nm])),
               static_cast<std::uint32_t>(std::stoul(row[c_km]))};
    r.delta = gold_delta(r.input);
    const std::string& s = row[c_case];
    r.gold_case = s == "G"   ? GoldCase::GloriousUpgrade
                  : s == "O" ? GoldCase::OrdinaryGain
                  : s == "L" ? GoldCase::LowImpact
                             : GoldCase::DiverseBoost;
    ++c.counts[static_cast<std::size_t>(r.gold_case)];
    c.rows.push_back(r);
  }
  c.classified = c.rows.size();
  c.dataset_population = c.rows.size();
  return c;
}

void write_gold_summary(const PipelineConfig& config, const GoldClassification& a,
                        const GoldClassification& b) {
  CsvWriter out(artifact_path(config, artifacts::kGoldSummary));
  out.row({"dataset", "case", "count", "proportion_of_dataset", "proportion_of_merged"});
  auto rows = [&](const char* name, const GoldClassification& c) {
    for (int i = 0; i < 4; ++i) {
      const auto cs = static_cast<GoldCase>(i);
      out.row({name, std::string(to_string(cs)), std::to_string(c.counts[i]),
               fmt_double(c.proportion_of_dataset(cs)), fmt_double(c.proportion_of_merged(cs))});
    }
  };
  rows("a", a);
  rows("b", b);
  out.close();
}

// ---------------------------------------------------------------------------
// cluster tables

void write_cluster_tables(const PipelineConfig& config, const ClusterAssignment& assignment,
                          const CitationGraph& merged) {
  CsvWriter out(artifact_path(config, artifacts::kClusters));
  out.row({"uid", "cluster"});
  for (std::size_t u = 0; u < assignment.by_node.size(); ++u)
    out.row({std::to_string(u), std::string(to_string(assignment.by_node[u]))});
  out.close();

  const UnclassifiedProfile profile = unclassified_profile(assignment, merged);
  CsvWriter prof(artifact_path(config, artifacts::kUnclassifiedProfile));
  prof.row({"count", "mean_citations"});
  prof.row({std::to_string(profile.count),
            profile.mean_citations ? fmt_double(*profile.mean_citations) : ""});
  prof.close();

  // Node table rewritten with the cluster column filled.
  write_graph(merged, artifact_path(config, artifacts::kNodes),
              artifact_path(config, artifacts::kEdges), &assignment.by_node);
}

// ---------------------------------------------------------------------------
// report tables

struct ReportInputs {
  const PipelineConfig* config = nullptr;
  const CitationGraph* a = nullptr;
  const CitationGraph* b = nullptr;
  const CitationGraph* merged = nullptr;
  const GraphMetrics* ma = nullptr;
  const GraphMetrics* mb = nullptr;
  const GraphMetrics* mm = nullptr;
  const std::vector<RcrRow>* rcr_rows = nullptr;
  const std::vector<Cluster>* clusters = nullptr;  // by merged uid
  const GoldClassification* gold_a = nullptr;
  const GoldClassification* gold_b = nullptr;
};

void write_summary_row(CsvWriter& out, const std::string& head, const SummaryStats& s) {
  out.row({head, std::to_string(s.count), fmt_double(s.min), fmt_double(s.max),
           fmt_double(s.mean), fmt_double(s.median)});
}

void write_report(const ReportInputs& in) {
  const PipelineConfig& config = *in.config;
  const struct {
    const char* name;
    const CitationGraph* g;
    const GraphMetrics* m;
  } graphs[] = {{"a", in.a, in.ma}, {"b", in.b, in.mb}, {"merged", in.merged, in.mm}};

  {
    CsvWriter out(artifact_path(config, artifacts::kDatasetSummary));
    out.row({"graph", "papers", "non_ref_papers", "cites_min", "cites_max", "cites_mean",
             "cites_median", "refs_min", "refs_max", "refs_mean", "refs_median"});
    for (const auto& [name, g, m] : graphs) {
      const DatasetSummary s = dataset_summary(*g);
      out.row({name, std::to_string(s.papers), std::to_string(s.non_ref_papers),
               fmt_double(s.cites.min), fmt_double(s.cites.max), fmt_double(s.cites.mean),
               fmt_double(s.cites.median), fmt_double(s.references.min),
               fmt_double(s.references.max), fmt_double(s.references.mean),
               fmt_double(s.references.median)});
    }
    out.close();
  }

  {
    CsvWriter out(artifact_path(config, artifacts::kAspSummary));
    out.row({"graph", "count", "min", "max", "mean", "median"});
    for (const auto& [name, g, m] : graphs)
      write_summary_row(out, name, summarize(m->asp.values));
    out.close();
  }

  {
    CsvWriter out(artifact_path(config, artifacts::kRcrSummary));
    out.row({"dataset", "count", "min", "max", "mean", "median"});
    std::vector<double> va, vb;
    va.reserve(in.rcr_rows->size());
    vb.reserve(in.rcr_rows->size());
    for (const RcrRow& r : *in.rcr_rows) {
      va.push_back(r.rcr_a);
      vb.push_back(r.rcr_b);
    }
    write_summary_row(out, "a", summarize(va));
    write_summary_row(out, "b", summarize(vb));
    out.close();
  }

  {
    CsvWriter out(artifact_path(config, artifacts::kRcrByCluster));
    out.row({"cluster", "papers", "mean_rcr_a", "mean_rcr_b"});
    constexpr std::size_t kBuckets = kNamedClusterCount + 1;
    std::vector<std::size_t> counts(kBuckets, 0);
    std::vector<double> sum_a(kBuckets, 0.0), sum_b(kBuckets, 0.0);
    for (const RcrRow& r : *in.rcr_rows) {
      const auto c = static_cast<std::size_t>((*in.clusters)[r.uid]);
      ++counts[c];
      sum_a[c] += r.rcr_a;
      sum_b[c] += r.rcr_b;
    }
    for (std::size_t c = 0; c < kBuckets; ++c) {
      out.row({std::string(to_string(static_cast<Cluster>(c))), std::to_string(counts[c]),
               counts[c] ? fmt_double(sum_a[c] / double(counts[c])) : "",
               counts[c] ? fmt_double(sum_b[c] / double(counts[c])) : ""});
    }
    out.close();
  }

  // Year bounds: configured, or spanning the merged graph.
  int lo = config.year_lo, hi = config.year_hi;
  if ((lo == 0 || hi == 0) && in.merged->node_count() > 0) {
    const auto [mn, mx] = std::minmax_element(in.merged->years.begin(), in.merged->years.end());
    if (lo == 0) lo = *mn;
    if (hi == 0) hi = *mx;
  }
  const bool have_years = in.merged->node_count() > 0 && lo <= hi;

  auto write_annual = [&](const char* artifact, bool use_asp) {
    CsvWriter out(artifact_path(config, artifact));
    out.row({"graph", "year", "count", "mean"});
    if (have_years) {
      for (const auto& [name, g, m] : graphs) {
        std::vector<double> values;
        if (use_asp) {
          values = m->asp.values;
        } else {
          values.assign(m->cites.begin(), m->cites.end());
        }
        for (const AnnualPoint& p : annual_series(*g, values, lo, hi)) {
          out.row({name, std::to_string(p.year), std::to_string(p.count), fmt_double(p.mean)});
        }
      }
    }
    out.close();
  };
  write_annual(artifacts::kAnnualCites, false);
  write_annual(artifacts::kAnnualAsp, true);

  auto write_rank_dist = [&](const char* artifact, const std::vector<std::uint32_t>& ranks) {
    CsvWriter out(artifact_path(config, artifact));
    out.row({"bin_lo", "bin_hi", "a_only", "b_only"});
    for (const RankBin& bin : rank_distribution(*in.merged, ranks, config.bin_width)) {
      out.row({std::to_string(bin.lo), std::to_string(bin.hi), std::to_string(bin.a_only),
               std::to_string(bin.b_only)});
    }
    out.close();
  };
  write_rank_dist(artifacts::kRankDistCites, in.mm->k_ranks);
  write_rank_dist(artifacts::kRankDistAsp, in.mm->n_ranks);

  {
    CsvWriter out(artifact_path(config, artifacts::kClusterSummary));
    out.row({"graph", "cluster", "papers", "cites_min", "cites_max", "cites_mean", "cites_median",
             "asp_min", "asp_max", "asp_mean", "asp_median"});
    for (const auto& [name, g, m] : graphs) {
      std::vector<Cluster> local(g->node_count(), Cluster::Unclassified);
      for (std::size_t i = 0; i < g->node_count(); ++i) local[i] = (*in.clusters)[g->uids[i]];
      for (const ClusterSummaryRow& row : cluster_summary(*g, local, m->asp.values)) {
        out.row({name, std::string(to_string(row.cluster)), std::to_string(row.papers),
                 fmt_double(row.cites.min), fmt_double(row.cites.max), fmt_double(row.cites.mean),
                 fmt_double(row.cites.median), fmt_double(row.asp.min), fmt_double(row.asp.max),
                 fmt_double(row.asp.mean), fmt_double(row.asp.median)});
      }
    }
    out.close();
  }

  {
    CsvWriter out(artifact_path(config, artifacts::kGoldByCluster));
    out.row({"dataset", "cluster", "case", "count", "proportion_in_cluster"});
    const struct {
      const char* name;
      const GoldClassification* c;
    } sets[] = {{"a", in.gold_a}, {"b", in.gold_b}};
    constexpr std::size_t kBuckets = kNamedClusterCount + 1;
    for (const auto& [name, classification] : sets) {
      std::vector<std::array<std::size_t, 4>> counts(kBuckets, std::array<std::size_t, 4>{});
      std::vector<std::size_t> totals(kBuckets, 0);
      for (const GoldRow& r : classification->rows) {
        const auto c = static_cast<std::size_t>((*in.clusters)[r.uid]);
        ++counts[c][static_cast<std::size_t>(r.gold_case)];
        ++totals[c];
      }
      for (std::size_t c = 0; c < kBuckets; ++c) {
        for (int k = 0; k < 4; ++k) {
          out.row({name, std::string(to_string(static_cast<Cluster>(c))),
                   std::string(to_string(static_cast<GoldCase>(k))),
                   std::to_string(counts[c][k]),
                   totals[c] ? fmt_double(double(counts[c][k]) / double(totals[c])) : ""});
        }
      }
    }
    out.close();
  }
}

// ---------------------------------------------------------------------------
// shared loading for resume-style stages

struct LoadedInputs {
  LoadResult a, b;
};

LoadedInputs load_inputs(const PipelineConfig& config) {
  LoadedInputs in;
  in.a = load_dataset(config.a_path, DatasetTag::A);
  in.b = load_dataset(config.b_path, DatasetTag::B);
  return in;
}

std::vector<KeywordRule> load_configured_rules(const PipelineConfig& config) {
  if (config.rules_path.empty()) return {};
  return load_rules(config.rules_path);
}

GraphSet read_graph_set(const PipelineConfig& config, std::vector<Cluster>* clusters = nullptr) {
  GraphSet g;
  g.a = read_graph(artifact_path(config, artifacts::kNodesA), artifact_path(config, artifacts::kEdgesA));
  g.b = read_graph(artifact_path(config, artifacts::kNodesB), artifact_path(config, artifacts::kEdgesB));
  g.merged = read_graph(artifact_path(config, artifacts::kNodes), artifact_path(config, artifacts::kEdges),
                        clusters);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// stage entry points

void stage_match(const PipelineConfig& config) {
  validate_config(config, true);
  apply_threads(config);
  const LoadedInputs in = load_inputs(config);
  fs::create_directories(config.out_dir);
  const Matching m = match_datasets(in.a.records, in.b.records);
  write_matches(config, m, in.a.records, in.b.records);
}

void stage_merge(const PipelineConfig& config) {
  validate_config(config, true);
  apply_threads(config);
  const LoadedInputs in = load_inputs(config);
  const std::vector<MatchResult> matches = read_matches(config, in.a.records, in.b.records);
  const GraphSet g = build_graphs(in.a.records, in.b.records, matches);
  write_graph_set(config, g);
}

void stage_asp(const PipelineConfig& config) {
  validate_config(config, false);
  apply_threads(config);
  const GraphSet g = read_graph_set(config);
  const AspParams params = asp_params(config);
  const GraphMetrics ma = compute_metrics(g.a, params);
  const GraphMetrics mb = compute_metrics(g.b, params);
  const GraphMetrics mm = compute_metrics(g.merged, params);
  write_metrics_file(artifact_path(config, artifacts::kMetricsA), g.a, ma);
  write_metrics_file(artifact_path(config, artifacts::kMetricsB), g.b, mb);
  write_metrics_file(artifact_path(config, artifacts::kMetricsMerged), g.merged, mm);
  write_asp_info(config, ma, mb, mm);
}

void stage_rcr(const PipelineConfig& config) {
  validate_config(config, false);
  apply_threads(config);
  const GraphSet g = read_graph_set(config);
  write_rcr(config, compute_rcr(g.a, g.b, g.merged));
}

void stage_gold(const PipelineConfig& config) {
  validate_config(config, false);
  apply_threads(config);
  const GraphSet g = read_graph_set(config);
  const GraphMetrics ma = read_metrics_file(artifact_path(config, artifacts::kMetricsA), g.a);
  const GraphMetrics mb = read_metrics_file(artifact_path(config, artifacts::kMetricsB), g.b);
  const GraphMetrics mm = read_metrics_file(artifact_path(config, artifacts::kMetricsMerged), g.merged);
  const auto merged_map = rank_map(g.merged, mm);
  const GoldClassification gold_a =
      classify_dataset(rank_map(g.a, ma), merged_map, g.merged.node_count());
  const GoldClassification gold_b =
      classify_dataset(rank_map(g.b, mb), merged_map, g.merged.node_count());
  write_gold_rows(artifact_path(config, artifacts::kGoldA), gold_a);
  write_gold_rows(artifact_path(config, artifacts::kGoldB), gold_b);
  write_gold_summary(config, gold_a, gold_b);
}

void stage_clusters(const PipelineConfig& config) {
  validate_config(config, true);
  apply_threads(config);
  const std::vector<KeywordRule> rules = load_configured_rules(config);
  const LoadedInputs in = load_inputs(config);
  const std::vector<MatchResult> matches = read_matches(config, in.a.records, in.b.records);
  const CitationGraph merged =
      read_graph(artifact_path(config, artifacts::kNodes), artifact_path(config, artifacts::kEdges));
  const ClusterAssignment assignment =
      assign_clusters(in.a.records, in.b.records, matches, rules);
  write_cluster_tables(config, assignment, merged);
}

void stage_report(const PipelineConfig& config) {
  validate_config(config, false);
  apply_threads(config);
  std::vector<Cluster> clusters;
  const GraphSet g = read_graph_set(config, &clusters);
  const GraphMetrics ma = read_metrics_file(artifact_path(config, artifacts::kMetricsA), g.a);
  const GraphMetrics mb = read_metrics_file(artifact_path(config, artifacts::kMetricsB), g.b);
  const GraphMetrics mm = read_metrics_file(artifact_path(config, artifacts::kMetricsMerged), g.merged);
  const std::vector<RcrRow> rcr_rows = read_rcr(config);
  const GoldClassification gold_a = read_gold_rows(artifact_path(config, artifacts::kGoldA));
  const GoldClassification gold_b = read_gold_rows(artifact_path(config, artifacts::kGoldB));
  ReportInputs inputs;
  inputs.config = &config;
  inputs.a = &g.a;
  inputs.b = &g.b;
  inputs.merged = &g.merged;
  inputs.ma = &ma;
  inputs.mb = &mb;
  inputs.mm = &mm;
  inputs.rcr_rows = &rcr_rows;
  inputs.clusters = &clusters;
  inputs.gold_a = &gold_a;
  inputs.gold_b = &gold_b;
  write_report(inputs);
}

// ---------------------------------------------------------------------------
// full pipeline

PipelineResult run_pipeline(const PipelineConfig& config) {
  validate_config(config, true);
  const std::vector<KeywordRule> rules = load_configured_rules(config);
  apply_threads(config);

  PipelineResult result;
  nlohmann::json counts;
  using clock = std::chrono::steady_clock;
  auto stamp = clock::now();
  auto lap = [&](const char* name) {
    const auto now = clock::now();
    result.timings.push_back({name, std::chrono::duration<double>(now - stamp).count()});
    stamp = now;
  };

  const LoadedInputs in = load_inputs(config);
  result.records_a = in.a.records.size();
  result.records_b = in.b.records.size();
  result.rejected_a = in.a.stats.rejected;
  result.rejected_b = in.b.stats.rejected;
  counts["ingest"] = {
      {"records_a", in.a.stats.accepted},          {"records_b", in.b.stats.accepted},
      {"rejected_a", in.a.stats.rejected},         {"rejected_b", in.b.stats.rejected},
      {"duplicate_ids_a", in.a.stats.duplicate_source_ids},
      {"duplicate_ids_b", in.b.stats.duplicate_source_ids},
      {"duplicate_refs_a", in.a.stats.duplicate_references},
      {"duplicate_refs_b", in.b.stats.duplicate_references},
  };
  lap("ingest");

  fs::create_directories(config.out_dir);
  const Matching matching = match_datasets(in.a.records, in.b.records);
  result.matched = matching.stats.matched();
  write_matches(config, matching, in.a.records, in.b.records);
  counts["match"] = {
      {"matched_doi", matching.stats.matched_doi},
      {"matched_title_issn", matching.stats.matched_title_issn},
      {"unmatched_a", matching.stats.unmatched_a},
      {"unmatched_b", matching.stats.unmatched_b},
  };
  lap("match");

  const GraphSet g = build_graphs(in.a.records, in.b.records, matching.results);
  write_graph_set(config, g);
  result.merged_nodes = g.merged.node_count();
  result.merged_edges = g.merged.edge_count();
  counts["merge"] = {
      {"nodes_merged", g.merged.node_count()},
      {"edges_merged", g.merged.edge_count()},
      {"resolved_doi", g.resolution.resolved_doi},
      {"resolved_title_issn", g.resolution.resolved_title_issn},
      {"unresolved", g.resolution.unresolved},
  };
  lap("merge");

  const AspParams params = asp_params(config);
  const GraphMetrics ma = compute_metrics(g.a, params);
  const GraphMetrics mb = compute_metrics(g.b, params);
  const GraphMetrics mm = compute_metrics(g.merged, params);
  write_metrics_file(artifact_path(config, artifacts::kMetricsA), g.a, ma);
  write_metrics_file(artifact_path(config, artifacts::kMetricsB), g.b, mb);
  write_metrics_file(artifact_path(config, artifacts::kMetricsMerged), g.merged, mm);
  write_asp_info(config, ma, mb, mm);
  const std::vector<RcrRow> rcr_rows = compute_rcr(g.a, g.b, g.merged);
  write_rcr(config, rcr_rows);
  counts["metrics"] = {
      {"asp_iterations_a", ma.asp.iterations_used},
      {"asp_iterations_b", mb.asp.iterations_used},
      {"asp_iterations_merged", mm.asp.iterations_used},
      {"asp_converged_merged", mm.asp.converged},
      {"rcr_articles", rcr_rows.size()},
  };
  lap("metrics");

  const auto merged_map = rank_map(g.merged, mm);
  const GoldClassification gold_a =
      classify_dataset(rank_map(g.a, ma), merged_map, g.merged.node_count());
  const GoldClassification gold_b =
      classify_dataset(rank_map(g.b, mb), merged_map, g.merged.node_count());
  write_gold_rows(artifact_path(config, artifacts::kGoldA), gold_a);
  write_gold_rows(artifact_path(config, artifacts::kGoldB), gold_b);
  write_gold_summary(config, gold_a, gold_b);
  counts["gold"] = {
      {"classified_a", gold_a.classified},
      {"classified_b", gold_b.classified},
  };
  lap("gold");

  const ClusterAssignment assignment =
      assign_clusters(in.a.records, in.b.records, matching.results, rules);
  write_cluster_tables(config, assignment, g.merged);
  counts["clusters"] = {
      {"inherited", assignment.inherited},
      {"keyword_matched", assignment.keyword_matched},
      {"unclassified", assignment.unclassified},
  };
  lap("clusters");

  ReportInputs inputs;
  inputs.config = &config;
  inputs.a = &g.a;
  inputs.b = &g.b;
  inputs.merged = &g.merged;
  inputs.ma = &ma;
  inputs.mb = &mb;
  inputs.mm = &mm;
  inputs.rcr_rows = &rcr_rows;
  inputs.clusters = &assignment.by_node;
  inputs.gold_a = &gold_a;
  inputs.gold_b = &gold_b;
  write_report(inputs);
  lap("report");

  nlohmann::json manifest;
  manifest["tool"] = "citemerge";
  manifest["version"] = "0.1.0";
  manifest["parameters"] = {
      {"a", config.a_path},       {"b", config.b_path},
      {"rules", config.rules_path}, {"damping", config.damping},
      {"window", config.window_years}, {"tol", config.tol},
      {"max_iter", config.max_iter},   {"threads", config.threads},
      {"year_lo", config.year_lo},     {"year_hi", config.year_hi},
      {"bin_width", config.bin_width},
  };
  manifest["counts"] = counts;
  nlohmann::json timings;
  for (const StageTiming& t : result.timings) timings[t.name] = t.seconds * 1000.0;
  manifest["timings_ms"] = timings;
  std::ofstream mout(artifact_path(config, artifacts::kRunManifest), std::ios::binary);
  if (!mout) throw std::runtime_error("cannot write run manifest");
  mout << manifest.dump(2) << '\n';
  mout.close();
  if (mout.fail()) throw std::runtime_error("error writing run manifest");
  return result;
}

}  // namespace citemerge
