#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citemerge/matcher.hpp"
#include "citemerge/types.hpp"

namespace citemerge {

/// Immutable citation network in CSR form (citing node -> cited nodes).
/// Node ids are positions in `uids`; the merged graph has uids 0..N-1.
struct CitationGraph {
  std::vector<Uid> uids;                 // ascending; node id -> uid
  std::vector<std::uint32_t> out_offsets;  // size node_count()+1
  std::vector<std::uint32_t> out_targets;  // node ids, sorted per row
  std::vector<std::int32_t> years;
  std::vector<Provenance> provenance;
  std::vector<std::uint32_t> ref_counts;  // R_i for this graph's dataset scope

  std::size_t node_count() const { return uids.size(); }
  std::size_t edge_count() const { return out_targets.size(); }
  std::uint32_t out_degree(std::size_t node) const {
    return out_offsets[node + 1] - out_offsets[node];
  }
  std::vector<std::uint32_t> in_degrees() const;
};

/// Where one reference entry of `citing_uid` landed: a unified article or an
/// unresolved key. Exactly one of target_uid / unresolved_key is set.
struct RefResolution {
  Uid citing_uid = kNoUid;
  Uid target_uid = kNoUid;
  std::string unresolved_key;

  bool resolved() const { return target_uid != kNoUid; }
};

struct ResolutionStats {
  std::size_t resolved_doi = 0;
  std::size_t resolved_title_issn = 0;
  std::size_t unresolved = 0;
  std::size_t ambiguous_doi_keys = 0;        // lookup keys disabled by ambiguity
  std::size_t ambiguous_title_issn_keys = 0;
};

/// Reference resolutions for every record of both datasets, aligned with the
/// record vectors.
struct ResolvedReferences {
  std::vector<std::vector<RefResolution>> a;
  std::vector<std::vector<RefResolution>> b;
  ResolutionStats stats;

  const std::vector<std::vector<RefResolution>>& of(DatasetTag tag) const {
    return tag == DatasetTag::A ? a : b;
  }
};

/// Resolves every reference entry against the unified article table:
/// normalized DOI first, then title+ISSN, else unresolved. Keys pointing at
/// more than one article are not used for resolution.
ResolvedReferences resolve_references(const std::vector<PaperRecord>& a,
                                      const std::vector<PaperRecord>& b,
                                      const std::vector<MatchResult>& matches);

struct GraphBuildStats {
  std::size_t self_edges_dropped = 0;
  std::size_t duplicate_edges_dropped = 0;
};

/// Citation graph of one dataset: a node per record, an edge per resolved
/// reference whose target is also in the dataset.
CitationGraph build_graph(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                          DatasetTag tag, const std::vector<MatchResult>& matches,
                          const ResolvedReferences& resolutions,
                          GraphBuildStats* stats = nullptr);

/// Merged graph over all uids; edges are the union of both datasets' resolved
/// edges, reference counts the union of the per-dataset reference key sets.
CitationGraph build_merged_graph(const std::vector<PaperRecord>& a,
                                 const std::vector<PaperRecord>& b,
                                 const std::vector<MatchResult>& matches,
                                 const ResolvedReferences& resolutions,
                                 GraphBuildStats* stats = nullptr);

/// Flat-file persistence. The node table carries an optional cluster column
/// (empty until cluster assignment runs).
void write_graph(const CitationGraph& g, const std::string& nodes_path,
                 const std::string& edges_path,
                 const std::vector<Cluster>* clusters = nullptr);

CitationGraph read_graph(const std::string& nodes_path, const std::string& edges_path,
                         std::vector<Cluster>* clusters_out = nullptr);

}  // namespace citemerge
