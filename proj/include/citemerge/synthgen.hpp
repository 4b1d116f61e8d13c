#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citemerge/merger.hpp"
#include "citemerge/types.hpp"

namespace citemerge {

/// Parameters of a paired synthetic corpus with known ground truth.
struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_articles_a = 1000;
  std::size_t n_articles_b = 1000;
  double overlap_fraction = 0.5;   // shared articles / min(n_a, n_b)
  double doi_present_prob = 0.9;   // a record carries its DOI
  double coverage_a = 0.9;         // fraction of the true reference list recorded
  double coverage_b = 0.9;
  int year_lo = 1980;
  int year_hi = 2020;
  double pa_exponent = 1.0;        // citation weight = (indegree + 1)^exponent
  double mean_out_degree = 8.0;
  double ref_doi_prob = 0.7;       // a reference entry carries the target DOI
  double ref_title_prob = 0.8;     // a reference entry carries title+ISSN
  double label_prob_a = 0.9;       // an A record ships its cluster label
  double journal_keyword_prob = 0.8;  // journal title contains a cluster keyword
  std::size_t articles_per_journal = 50;
};

/// Ground truth for one article of the synthetic universe. Reference counts
/// mirror the merge semantics, so expected per-article coverage ratios can be
/// derived directly from the manifest.
struct GenManifestRow {
  std::uint64_t true_id = 0;
  std::string a_source_id;  // empty when the article is not in that dataset
  std::string b_source_id;
  int year = 0;
  std::string expected_match;  // "doi", "title_issn", or empty
  std::uint32_t true_ref_count = 0;
  std::uint32_t a_ref_count = 0;
  std::uint32_t b_ref_count = 0;
  std::uint32_t m_ref_count = 0;
};

struct GenResult {
  std::vector<GenManifestRow> manifest;
  std::size_t records_a = 0;
  std::size_t records_b = 0;
  std::size_t reference_entries_a = 0;
  std::size_t reference_entries_b = 0;
};

/// Writes two input-schema datasets plus the ground-truth manifest.
/// Deterministic for a fixed spec. Throws std::invalid_argument on an
/// infeasible spec.
GenResult generate(const GenSpec& spec, const std::string& a_path, const std::string& b_path,
                   const std::string& manifest_path);

std::vector<GenManifestRow> read_manifest(const std::string& path);

/// Exact fixed point of the damped windowed prestige equation via a dense
/// linear solve; test oracle for the iterative implementations. Requires
/// node_count <= 2000.
std::vector<double> oracle_asp(const CitationGraph& g, double damping, int window_years);

}  // namespace citemerge
