#include "citemerge/merger.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "citemerge/csv.hpp"
#include "citemerge/normalize.hpp"

namespace citemerge {

std::vector<std::uint32_t> CitationGraph::in_degrees() const {
  std::vector<std::uint32_t> deg(node_count(), 0);
  for (std::uint32_t t : out_targets) ++deg[t];
  return deg;
}

namespace {

struct UidTable {
  std::vector<Uid> of_a;  // record index -> uid
  std::vector<Uid> of_b;
  std::size_t total = 0;
};

UidTable build_uid_table(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                         const std::vector<MatchResult>& matches) {
  UidTable t;
  t.of_a.assign(a.size(), kNoUid);
  t.of_b.assign(b.size(), kNoUid);
  t.total = matches.size();
  for (const MatchResult& m : matches) {
    if (m.a_index != kNoIndex) t.of_a[m.a_index] = m.uid;
    if (m.b_index != kNoIndex) t.of_b[m.b_index] = m.uid;
  }
  return t;
}

// key -> uid, with keys that point at two distinct articles disabled
using LookupMap = std::unordered_map<std::string, Uid>;

void add_lookup(LookupMap& map, std::string key, Uid uid, std::size_t& ambiguous) {
  if (key.empty()) return;
  auto [it, inserted] = map.emplace(std::move(key), uid);
  if (!inserted && it->second != uid && it->second != kNoUid) {
    it->second = kNoUid;
    ++ambiguous;
  }
}

std::string record_title_issn_key(const PaperRecord& r) {
  std::string t = normalize_title(r.title);
  std::string i = normalize_issn(r.issn);
  if (t.empty() || i.empty()) return {};
  return t + "\x1f" + i;
}

}  // namespace

ResolvedReferences resolve_references(const std::vector<PaperRecord>& a,
                                      const std::vector<PaperRecord>& b,
                                      const std::vector<MatchResult>& matches) {
  const UidTable uids = build_uid_table(a, b, matches);

  LookupMap by_doi, by_title_issn;
  by_doi.reserve((a.size() + b.size()) * 2);
  by_title_issn.reserve((a.size() + b.size()) * 2);
  ResolvedReferences out;
  auto index_records = [&](const std::vector<PaperRecord>& records, const std::vector<Uid>& uid_of) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      add_lookup(by_doi, normalize_doi(records[i].doi), uid_of[i], out.stats.ambiguous_doi_keys);
      add_lookup(by_title_issn, record_title_issn_key(records[i]), uid_of[i],
                 out.stats.ambiguous_title_issn_keys);
    }
  };
  index_records(a, uids.of_a);
  index_records(b, uids.of_b);

  auto resolve_all = [&](const std::vector<PaperRecord>& records, const std::vector<Uid>& uid_of,
                         std::vector<std::vector<RefResolution>>& slots) {
    slots.resize(records.size());
    std::size_t n_doi = 0, n_ti = 0, n_un = 0;
#pragma omp parallel for schedule(dynamic, 128) reduction(+ : n_doi, n_ti, n_un)
    for (std::ptrdiff_t ri = 0; ri < static_cast<std::ptrdiff_t>(records.size()); ++ri) {
      const PaperRecord& rec = records[static_cast<std::size_t>(ri)];
      auto& list = slots[static_cast<std::size_t>(ri)];
      list.reserve(rec.references.size());
      for (const RefEntry& e : rec.references) {
        RefResolution res;
        res.citing_uid = uid_of[static_cast<std::size_t>(ri)];
        if (std::string d = normalize_doi(e.doi); !d.empty()) {
          if (auto it = by_doi.find(d); it != by_doi.end() && it->second != kNoUid) {
            res.target_uid = it->second;
            ++n_doi;
            list.push_back(std::move(res));
            continue;
          }
        }
        std::string t = normalize_title(e.title);
        std::string i = normalize_issn(e.issn);
        if (!t.empty() && !i.empty()) {
          if (auto it = by_title_issn.find(t + "\x1f" + i);
              it != by_title_issn.end() && it->second != kNoUid) {
            res.target_uid = it->second;
            ++n_ti;
            list.push_back(std::move(res));
            continue;
          }
        }
        res.unresolved_key = unresolved_reference_key(e);
        ++n_un;
        list.push_back(std::move(res));
      }
    }
    out.stats.resolved_doi += n_doi;
    out.stats.resolved_title_issn += n_ti;
    out.stats.unresolved += n_un;
  };
  resolve_all(a, uids.of_a, out.a);
  resolve_all(b, uids.of_b, out.b);
  return out;
}

namespace {

// Distinct-key count of one record's references: resolved entries count by
// target uid, unresolved by their key string.
std::uint32_t reference_key_count(const std::vector<RefResolution>& refs) {
  std::unordered_set<Uid> resolved;
  std::unordered_set<std::string> unresolved;
  for (const RefResolution& r : refs) {
    if (r.resolved())
      resolved.insert(r.target_uid);
    else
      unresolved.insert(r.unresolved_key);
  }
  return static_cast<std::uint32_t>(resolved.size() + unresolved.size());
}

CitationGraph assemble_graph(std::vector<Uid> node_uids, std::vector<std::int32_t> years,
                             std::vector<Provenance> prov, std::vector<std::uint32_t> ref_counts,
                             std::vector<std::vector<std::uint32_t>>& rows,
                             GraphBuildStats* stats) {
  CitationGraph g;
  g.uids = std::move(node_uids);
  g.years = std::move(years);
  g.provenance = std::move(prov);
  g.ref_counts = std::move(ref_counts);
  const std::size_t n = g.uids.size();
  std::size_t self_dropped = 0, dup_dropped = 0;
#pragma omp parallel for schedule(dynamic, 512) reduction(+ : self_dropped, dup_dropped)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    const std::size_t before = row.size();
    const auto self = static_cast<std::uint32_t>(i);
    row.erase(std::remove(row.begin(), row.end(), self), row.end());
    self_dropped += before - row.size();
    std::sort(row.begin(), row.end());
    const std::size_t pre_unique = row.size();
    row.erase(std::unique(row.begin(), row.end()), row.end());
    dup_dropped += pre_unique - row.size();
  }
  if (stats) {
    stats->self_edges_dropped = self_dropped;
    stats->duplicate_edges_dropped = dup_dropped;
  }
  g.out_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    g.out_offsets[i + 1] = g.out_offsets[i] + static_cast<std::uint32_t>(rows[i].size());
  g.out_targets.reserve(g.out_offsets[n]);
  for (std::size_t i = 0; i < n; ++i)
    g.out_targets.insert(g.out_targets.end(), rows[i].begin(), rows[i].end());
  return g;
}

}  // namespace

CitationGraph build_graph(const std::vector<PaperRecord>& a, const std::vector<PaperRecord>& b,
                          DatasetTag tag, const std::vector<MatchResult>& matches,
                          const ResolvedReferences& resolutions, GraphBuildStats* stats) {
  const std::vector<PaperRecord>& records = (tag == DatasetTag::A) ? a : b;
  const auto& refs = resolutions.of(tag);
  const UidTable uids = build_uid_table(a, b, matches);
  const std::vector<Uid>& uid_of = (tag == DatasetTag::A) ? uids.of_a : uids.of_b;

  // Node set: this dataset's uids, ascending.
  std::vector<Uid> node_uids(uid_of);
  std::sort(node_uids.begin(), node_uids.end());
  std::vector<Uid> node_of_uid(uids.total, kNoUid);
  for (std::size_t i = 0; i < node_uids.size(); ++i) node_of_uid[node_uids[i]] = static_cast<Uid>(i);

  std::vector<std::int32_t> years(node_uids.size(), 0);
  std::vector<Provenance> prov(node_uids.size(), Provenance::Both);
  std::vector<std::uint32_t> ref_counts(node_uids.size(), 0);
  std::vector<std::vector<std::uint32_t>> rows(node_uids.size());

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ri = 0; ri < static_cast<std::ptrdiff_t>(records.size()); ++ri) {
    const auto r = static_cast<std::size_t>(ri);
    const Uid uid = uid_of[r];
    const Uid node = node_of_uid[uid];
    years[node] = records[r].year;
    ref_counts[node] = reference_key_count(refs[r]);
    const MatchResult& m = matches[uid];
    prov[node] = (m.a_index != kNoIndex && m.b_index != kNoIndex)
                     ? Provenance::Both
                     : (tag == DatasetTag::A ? Provenance::AOnly : Provenance::BOnly);
    auto& row = rows[node];
    for (const RefResolution& res : refs[r]) {
      if (!res.resolved()) continue;
      const Uid target_node = node_of_uid[res.target_uid];
      if (target_node == kNoUid) continue;  // target not in this dataset
      row.push_back(target_node);
    }
  }
  return assemble_graph(std::move(node_uids), std::move(years), std::move(prov),
                        std::move(ref_counts), rows, stats);
}

CitationGraph build_merged_graph(const std::vector<PaperRecord>& a,
                                 const std::vector<PaperRecord>& b,
                                 const std::vector<MatchResult>& matches,
                                 const ResolvedReferences& resolutions, GraphBuildStats* stats) {
  const std::size_t n = matches.size();
  std::vector<Uid> node_uids(n);
  std::vector<std::int32_t> years(n, 0);
  std::vector<Provenance> prov(n, Provenance::Both);
  std::vector<std::uint32_t> ref_counts(n, 0);
  std::vector<std::vector<std::uint32_t>> rows(n);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ui = 0; ui < static_cast<std::ptrdiff_t>(n); ++ui) {
    const auto u = static_cast<std::size_t>(ui);
    const MatchResult& m = matches[u];
    node_uids[u] = m.uid;
    const bool has_a = m.a_index != kNoIndex;
    const bool has_b = m.b_index != kNoIndex;
    prov[u] = has_a && has_b ? Provenance::Both : (has_a ? Provenance::AOnly : Provenance::BOnly);
    years[u] = has_a ? a[m.a_index].year : b[m.b_index].year;

    std::unordered_set<Uid> resolved;
    std::unordered_set<std::string> unresolved;
    auto& row = rows[u];
    auto absorb = [&](const std::vector<RefResolution>& list) {
      for (const RefResolution& r : list) {
        if (r.resolved()) {
          resolved.insert(r.target_uid);
          row.push_back(r.target_uid);
        } else {
          unresolved.insert(r.unresolved_key);
        }
      }
    };
    if (has_a) absorb(resolutions.a[m.a_index]);
    if (has_b) absorb(resolutions.b[m.b_index]);
    ref_counts[u] = static_cast<std::uint32_t>(resolved.size() + unresolved.size());
  }

  if (!std::is_sorted(node_uids.begin(), node_uids.end()))
    throw std::logic_error("merged graph: match results are not in uid order");
  return assemble_graph(std::move(node_uids), std::move(years), std::move(prov),
                        std::move(ref_counts), rows, stats);
}

void write_graph(const CitationGraph& g, const std::string& nodes_path,
                 const std::string& edges_path, const std::vector<Cluster>* clusters) {
  CsvWriter nodes(nodes_path);
  nodes.row({"uid", "year", "provenance", "cluster", "ref_count"});
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    std::string cluster;
    if (clusters) cluster = std::string(to_string((*clusters)[i]));
    nodes.row({std::to_string(g.uids[i]), std::to_string(g.years[i]),
               std::string(to_string(g.provenance[i])), cluster,
               std::to_string(g.ref_counts[i])});
  }
  nodes.close();

  CsvWriter edges(edges_path);
  edges.row({"citing_uid", "cited_uid"});
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (std::uint32_t e = g.out_offsets[i]; e < g.out_offsets[i + 1]; ++e) {
      edges.row({std::to_string(g.uids[i]), std::to_string(g.uids[g.out_targets[e]])});
    }
  }
  edges.close();
}

CitationGraph read_graph(const std::string& nodes_path, const std::string& edges_path,
                         std::vector<Cluster>* clusters_out) {
  const CsvTable nodes = read_csv(nodes_path);
  const std::size_t c_uid = nodes.column("uid");
  const std::size_t c_year = nodes.column("year");
  const std::size_t c_prov = nodes.column("provenance");
  const std::size_t c_cluster = nodes.column("cluster");
  const std::size_t c_refs = nodes.column("ref_count");

  CitationGraph g;
  const std::size_t n = nodes.rows.size();
  g.uids.reserve(n);
  g.years.reserve(n);
  g.provenance.reserve(n);
  g.ref_counts.reserve(n);
  if (clusters_out) clusters_out->reserve(n);
  for (const auto& row : nodes.rows) {
    g.uids.push_back(static_cast<Uid>(std::stoul(row[c_uid])));
    g.years.push_back(std::stoi(row[c_year]));
    const std::string& p = row[c_prov];
    g.provenance.push_back(p == "a"  ? Provenance::AOnly
                           : p == "b" ? Provenance::BOnly
                                      : Provenance::Both);
    g.ref_counts.push_back(static_cast<std::uint32_t>(std::stoul(row[c_refs])));
    if (clusters_out) {
      const std::string& c = row[c_cluster];
      if (c.empty() || c == "Unclassified") {
        clusters_out->push_back(Cluster::Unclassified);
      } else {
        auto parsed = cluster_from_name(c);
        if (!parsed) throw std::runtime_error("unknown cluster in node table: " + c);
        clusters_out->push_back(*parsed);
      }
    }
  }
  if (!std::is_sorted(g.uids.begin(), g.uids.end()))
    throw std::runtime_error("node table is not sorted by uid: " + nodes_path);

  std::unordered_map<Uid, std::uint32_t> node_of_uid;
  node_of_uid.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) node_of_uid.emplace(g.uids[i], static_cast<std::uint32_t>(i));

  const CsvTable edges = read_csv(edges_path);
  const std::size_t c_citing = edges.column("citing_uid");
  const std::size_t c_cited = edges.column("cited_uid");
  std::vector<std::vector<std::uint32_t>> rows(n);
  for (const auto& row : edges.rows) {
    auto citing = node_of_uid.find(static_cast<Uid>(std::stoul(row[c_citing])));
    auto cited = node_of_uid.find(static_cast<Uid>(std::stoul(row[c_cited])));
    if (citing == node_of_uid.end() || cited == node_of_uid.end())
      throw std::runtime_error("edge references unknown uid in " + edges_path);
    rows[citing->second].push_back(cited->second);
  }
  g.out_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    g.out_offsets[i + 1] = g.out_offsets[i] + static_cast<std::uint32_t>(rows[i].size());
  }
  g.out_targets.reserve(g.out_offsets[n]);
  for (std::size_t i = 0; i < n; ++i)
    g.out_targets.insert(g.out_targets.end(), rows[i].begin(), rows[i].end());
  return g;
}

}  // namespace citemerge
