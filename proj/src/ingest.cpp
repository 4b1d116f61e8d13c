#include "citemerge/ingest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "citemerge/normalize.hpp"

namespace citemerge {

namespace {

using nlohmann::json;

struct ParsedLine {
  PaperRecord record;
  bool ok = false;
  bool unknown_cluster = false;
  std::size_t duplicate_refs = 0;
};

bool get_optional_string(const json& j, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.clear();
    return true;
  }
  if (!it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

// One JSON object per line. Any schema violation rejects the whole line.
ParsedLine parse_line(std::string_view line, DatasetTag tag) {
  ParsedLine out;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    return out;
  }
  if (!j.is_object()) return out;

  PaperRecord& rec = out.record;
  rec.tag = tag;

  auto sid = j.find("source_id");
  if (sid == j.end() || !sid->is_string()) return out;
  rec.source_id = sid->get<std::string>();
  if (rec.source_id.empty()) return out;

  auto title = j.find("title");
  if (title == j.end() || !title->is_string()) return out;
  rec.title = title->get<std::string>();
  if (rec.title.empty()) return out;

  auto year = j.find("year");
  if (year == j.end() || !year->is_number_integer()) return out;
  rec.year = year->get<int>();
  if (rec.year < kMinYear || rec.year > kMaxYear) return out;

  if (!get_optional_string(j, "doi", rec.doi)) return out;
  if (!get_optional_string(j, "issn", rec.issn)) return out;
  if (!get_optional_string(j, "journal_title", rec.journal_title)) return out;

  std::string cluster;
  if (!get_optional_string(j, "cluster", cluster)) return out;
  if (!cluster.empty()) {
    rec.cluster_label = cluster_from_name(cluster);
    if (!rec.cluster_label) out.unknown_cluster = true;
  }

  if (auto refs = j.find("references"); refs != j.end() && !refs->is_null()) {
    if (!refs->is_array()) return out;
    rec.references.reserve(refs->size());
    std::unordered_set<std::string> seen;
    seen.reserve(refs->size() * 2);
    for (const json& r : *refs) {
      if (!r.is_object()) return out;
      RefEntry entry;
      if (!get_optional_string(r, "doi", entry.doi)) return out;
      if (!get_optional_string(r, "title", entry.title)) return out;
      if (!get_optional_string(r, "issn", entry.issn)) return out;
      if (!get_optional_string(r, "raw", entry.raw)) return out;
      const bool has_doi = !normalize_doi(entry.doi).empty();
      const bool has_title_issn =
          !normalize_title(entry.title).empty() && !normalize_issn(entry.issn).empty();
      const bool has_raw = !normalize_title(entry.raw).empty();
      if (!has_doi && !has_title_issn && !has_raw) return out;
      if (!seen.insert(reference_key(entry)).second) {
        ++out.duplicate_refs;
        continue;
      }
      rec.references.push_back(std::move(entry));
    }
  }

  out.ok = true;
  return out;
}

}  // namespace

LoadResult parse_dataset(std::string_view text, DatasetTag tag) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    pos = nl + 1;
  }

  std::vector<ParsedLine> slots(lines.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(lines.size()); ++i) {
    slots[static_cast<std::size_t>(i)] = parse_line(lines[static_cast<std::size_t>(i)], tag);
  }

  // Order-dependent steps (first occurrence wins) run serially, in input order.
  LoadResult result;
  result.stats.lines = lines.size();
  result.records.reserve(lines.size());
  std::unordered_set<std::string> seen_ids;
  seen_ids.reserve(lines.size() * 2);
  for (ParsedLine& slot : slots) {
    if (!slot.ok) {
      ++result.stats.rejected;
      continue;
    }
    result.stats.duplicate_references += slot.duplicate_refs;
    if (slot.unknown_cluster) ++result.stats.unknown_cluster_labels;
    if (!seen_ids.insert(slot.record.source_id).second) {
      ++result.stats.duplicate_source_ids;
      continue;
    }
    result.records.push_back(std::move(slot.record));
    ++result.stats.accepted;
  }
  return result;
}

LoadResult load_dataset(const std::string& path, DatasetTag tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading dataset file: " + path);
  const std::string text = std::move(buf).str();
  return parse_dataset(text, tag);
}

}  // namespace citemerge
