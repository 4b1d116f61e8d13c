#include "citemerge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace citemerge {

std::optional<double> rcr(std::uint32_t r_ds, std::uint32_t r_m) {
  if (r_ds > r_m) throw std::logic_error("rcr: r_ds exceeds r_m, merge invariant violated");
  if (r_m == 0) return std::nullopt;
  return static_cast<double>(r_ds) / static_cast<double>(r_m);
}

WindowedCsr windowed_edges(const CitationGraph& g, int window_years) {
  WindowedCsr w;
  const std::size_t n = g.node_count();
  w.offsets.assign(n + 1, 0);
  if (window_years < 0) {
    w.offsets = g.out_offsets;
    w.targets = g.out_targets;
    return w;
  }
  std::vector<std::uint32_t> degrees(n, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto j = static_cast<std::size_t>(i);
    std::uint32_t kept = 0;
    for (std::uint32_t e = g.out_offsets[j]; e < g.out_offsets[j + 1]; ++e) {
      const std::int32_t gap = g.years[j] - g.years[g.out_targets[e]];
      if (gap >= 0 && gap <= window_years) ++kept;
    }
    degrees[j] = kept;
  }
  for (std::size_t i = 0; i < n; ++i) w.offsets[i + 1] = w.offsets[i] + degrees[i];
  w.targets.resize(w.offsets[n]);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto j = static_cast<std::size_t>(i);
    std::uint32_t pos = w.offsets[j];
    for (std::uint32_t e = g.out_offsets[j]; e < g.out_offsets[j + 1]; ++e) {
      const std::int32_t gap = g.years[j] - g.years[g.out_targets[e]];
      if (gap >= 0 && gap <= window_years) w.targets[pos++] = g.out_targets[e];
    }
  }
  return w;
}

namespace {

void validate_asp_params(const AspParams& p) {
  if (!(p.damping > 0.0 && p.damping < 1.0))
    throw std::invalid_argument("asp: damping must be in (0, 1)");
  if (!(p.tol > 0.0)) throw std::invalid_argument("asp: tol must be positive");
  if (p.max_iter <= 0) throw std::invalid_argument("asp: max_iter must be positive");
}

// Transpose of the windowed CSR: for each node, its in-window citers.
// Counting sort by target keeps citers in ascending node order.
WindowedCsr transpose(const WindowedCsr& w, std::size_t n) {
  WindowedCsr t;
  t.offsets.assign(n + 1, 0);
  for (std::uint32_t target : w.targets) ++t.offsets[target + 1];
  for (std::size_t i = 0; i < n; ++i) t.offsets[i + 1] += t.offsets[i];
  t.targets.resize(w.targets.size());
  std::vector<std::uint32_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::uint32_t e = w.offsets[j]; e < w.offsets[j + 1]; ++e) {
      t.targets[cursor[w.targets[e]]++] = static_cast<std::uint32_t>(j);
    }
  }
  return t;
}

}  // namespace

AspScores asp(const CitationGraph& g, const AspParams& params) {
  validate_asp_params(params);
  const std::size_t n = g.node_count();
  AspScores out;
  out.damping = params.damping;
  out.window_years = params.window_years;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  const WindowedCsr w = windowed_edges(g, params.window_years);
  const WindowedCsr in = transpose(w, n);
  std::vector<double> inv_m(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
    const auto d = w.offsets[j + 1] - w.offsets[j];
    if (d > 0) inv_m[j] = 1.0 / static_cast<double>(d);
  }

  const double d = params.damping;
  const double base = 1.0 - d;
  std::vector<double> cur(n, 1.0), next(n, 0.0);
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    double residual = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residual)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      double sum = 0.0;
      for (std::uint32_t e = in.offsets[i]; e < in.offsets[i + 1]; ++e) {
        const std::uint32_t j = in.targets[e];
        sum += cur[j] * inv_m[j];
      }
      const double v = base + d * sum;
      next[i] = v;
      residual = std::max(residual, std::abs(v - cur[static_cast<std::size_t>(i)]));
    }
    cur.swap(next);
    out.iterations_used = iter;
    out.residual = residual;
    if (residual <= params.tol) {
      out.converged = true;
      break;
    }
  }
  out.values = std::move(cur);
  return out;
}

AspScores asp_serial(const CitationGraph& g, const AspParams& params) {
  validate_asp_params(params);
  const std::size_t n = g.node_count();
  AspScores out;
  out.damping = params.damping;
  out.window_years = params.window_years;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  const WindowedCsr w = windowed_edges(g, params.window_years);
  const double d = params.damping;
  std::vector<double> cur(n, 1.0), next(n, 0.0);
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    std::fill(next.begin(), next.end(), 1.0 - d);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t m_j = w.offsets[j + 1] - w.offsets[j];
      if (m_j == 0) continue;
      const double share = d * cur[j] / static_cast<double>(m_j);
      for (std::uint32_t e = w.offsets[j]; e < w.offsets[j + 1]; ++e) next[w.targets[e]] += share;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(next[i] - cur[i]));
    cur.swap(next);
    out.iterations_used = iter;
    out.residual = residual;
    if (residual <= params.tol) {
      out.converged = true;
      break;
    }
  }
  out.values = std::move(cur);
  return out;
}

std::vector<std::uint32_t> rank_by(const std::vector<double>& values, bool descending) {
  const std::size_t n = values.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return descending ? values[x] > values[y] : values[x] < values[y];
  });
  std::vector<std::uint32_t> ranks(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::uint32_t idx = order[pos];
    if (pos > 0 && values[idx] == values[order[pos - 1]]) {
      ranks[idx] = ranks[order[pos - 1]];
    } else {
      ranks[idx] = static_cast<std::uint32_t>(pos + 1);
    }
  }
  return ranks;
}

}  // namespace citemerge
