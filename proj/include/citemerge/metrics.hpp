#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "citemerge/merger.hpp"

namespace citemerge {

/// Reference coverage of one article in one dataset: r_ds / r_m. Empty when
/// r_m is zero (excluded from aggregates). Throws std::logic_error when
/// r_ds > r_m, which would violate the merge invariant.
std::optional<double> rcr(std::uint32_t r_ds, std::uint32_t r_m);

/// Out-adjacency restricted to citations made within `window_years` of the
/// cited article (and never backwards in time). A negative window disables
/// filtering.
struct WindowedCsr {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
};

WindowedCsr windowed_edges(const CitationGraph& g, int window_years);

struct AspParams {
  double damping = 0.5;
  int window_years = 5;
  double tol = 1e-12;
  int max_iter = 200;
};

struct AspScores {
  double damping = 0.5;
  int window_years = 5;
  std::vector<double> values;  // by node id; >= 1-d everywhere
  int iterations_used = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Damped windowed prestige: the fixed point of
///   score_i = (1-d) + d * sum over in-window citers j of score_j / m_j
/// with m_j the citer's in-window reference count. Articles that make no
/// in-window references pass nothing on. Power iteration from all-ones,
/// max-norm stopping. OpenMP-parallel over nodes; the result does not depend
/// on thread count.
AspScores asp(const CitationGraph& g, const AspParams& params = {});

/// Serial reference implementation of the same fixed point, written
/// push-style so the summation path is independent of asp(). Kept for tests
/// and the benchmark.
AspScores asp_serial(const CitationGraph& g, const AspParams& params = {});

/// Competition ranks: rank(i) = 1 + |{j : v_j > v_i}| when descending
/// (higher value = better rank). Ties share the minimal rank.
std::vector<std::uint32_t> rank_by(const std::vector<double>& values, bool descending = true);

}  // namespace citemerge
