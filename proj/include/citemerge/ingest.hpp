#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "citemerge/types.hpp"

namespace citemerge {

struct LoadStats {
  std::size_t lines = 0;              // non-empty input lines
  std::size_t accepted = 0;
  std::size_t rejected = 0;           // malformed lines, skipped
  std::size_t duplicate_source_ids = 0;   // later occurrences dropped
  std::size_t duplicate_references = 0;   // per-record duplicate keys dropped
  std::size_t unknown_cluster_labels = 0; // label ignored, record kept
};

struct LoadResult {
  std::vector<PaperRecord> records;
  LoadStats stats;
};

/// Parses one line-delimited dataset held in memory. Records come back in
/// input order; malformed lines are counted, not kept. Line parsing runs in
/// parallel; the result is independent of thread count.
LoadResult parse_dataset(std::string_view text, DatasetTag tag);

/// Reads and parses a dataset file. Throws std::runtime_error if the file
/// cannot be read.
LoadResult load_dataset(const std::string& path, DatasetTag tag);

}  // namespace citemerge
