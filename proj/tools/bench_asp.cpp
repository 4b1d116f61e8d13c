// Compares the OpenMP prestige kernel against the serial reference on a
// synthetic long-tail citation graph.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "citemerge/ingest.hpp"
#include "citemerge/matcher.hpp"
#include "citemerge/merger.hpp"
#include "citemerge/metrics.hpp"
#include "citemerge/synthgen.hpp"

using namespace citemerge;

namespace {

CitationGraph make_graph(std::size_t n_articles, double mean_out_degree) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "citemerge_bench";
  fs::create_directories(dir);
  GenSpec spec;
  spec.seed = 7;
  spec.n_articles_a = n_articles;
  spec.n_articles_b = n_articles / 2;
  spec.overlap_fraction = 0.5;
  spec.mean_out_degree = mean_out_degree;
  generate(spec, (dir / "a.jsonl").string(), (dir / "b.jsonl").string(),
           (dir / "manifest.csv").string());
  const LoadResult a = load_dataset((dir / "a.jsonl").string(), DatasetTag::A);
  const LoadResult b = load_dataset((dir / "b.jsonl").string(), DatasetTag::B);
  const Matching m = match_datasets(a.records, b.records);
  const ResolvedReferences refs = resolve_references(a.records, b.records, m.results);
  CitationGraph g = build_merged_graph(a.records, b.records, m.results, refs);
  fs::remove_all(dir);
  return g;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 100000;
  double mean_out = 12.0;
  if (argc > 1) n = std::stoul(argv[1]);
  if (argc > 2) mean_out = std::stod(argv[2]);

  std::printf("building graph (%zu articles, mean out-degree %.1f)...\n", n, mean_out);
  const CitationGraph g = make_graph(n, mean_out);
  std::printf("graph: %zu nodes, %zu edges\n", g.node_count(), g.edge_count());

  AspParams params;
  AspScores reference;
  const double t_serial = time_best_of(3, [&] { reference = asp_serial(g, params); });
  std::printf("%-28s %8.3f s  (%d iterations)\n", "serial reference", t_serial,
              reference.iterations_used);

  const int max_threads = omp_get_max_threads();
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    AspScores parallel;
    const double t = time_best_of(3, [&] { parallel = asp(g, params); });
    double max_diff = 0.0;
    for (std::size_t i = 0; i < parallel.values.size(); ++i)
      max_diff = std::max(max_diff, std::abs(parallel.values[i] - reference.values[i]));
    std::printf("parallel kernel, %2d thread%s %8.3f s  speedup %5.2fx  max|diff| %.2e\n", threads,
                threads == 1 ? " " : "s", t, t_serial / t, max_diff);
  }
  return 0;
}
