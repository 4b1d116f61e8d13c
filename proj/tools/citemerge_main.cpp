#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "citemerge/pipeline.hpp"
#include "citemerge/synthgen.hpp"

namespace {

using citemerge::GenSpec;
using citemerge::PipelineConfig;

void add_common_options(CLI::App* cmd, PipelineConfig& config, bool with_inputs) {
  if (with_inputs) {
    cmd->add_option("--a", config.a_path, "dataset A input file (line-delimited records)");
    cmd->add_option("--b", config.b_path, "dataset B input file");
  }
  cmd->add_option("--out-dir", config.out_dir, "artifact directory")->required();
  cmd->add_option("--damping", config.damping, "prestige damping factor d");
  cmd->add_option("--window", config.window_years, "citation time window in years, -1 disables");
  cmd->add_option("--tol", config.tol, "power-iteration convergence tolerance");
  cmd->add_option("--max-iter", config.max_iter, "power-iteration cap");
  cmd->add_option("--rules", config.rules_path, "cluster keyword rule file (tsv)");
  cmd->add_option("--threads", config.threads, "worker threads, 0 = all");
  cmd->add_option("--year-lo", config.year_lo, "annual series lower bound, 0 = from data");
  cmd->add_option("--year-hi", config.year_hi, "annual series upper bound, 0 = from data");
  cmd->add_option("--bin-width", config.bin_width, "rank histogram bin width");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citation dataset matching, merging, and quality metrics"};
  app.require_subcommand(1);

  PipelineConfig config;
  GenSpec gen;
  std::string gen_out_dir;

  CLI::App* generate = app.add_subcommand("generate", "emit a paired synthetic corpus");
  generate->add_option("--out-dir", gen_out_dir, "output directory")->required();
  generate->add_option("--seed", gen.seed, "generator seed");
  generate->add_option("--n-a", gen.n_articles_a, "articles in dataset A");
  generate->add_option("--n-b", gen.n_articles_b, "articles in dataset B");
  generate->add_option("--overlap", gen.overlap_fraction, "shared fraction of the smaller dataset");
  generate->add_option("--doi-prob", gen.doi_present_prob, "record DOI presence probability");
  generate->add_option("--coverage-a", gen.coverage_a, "reference coverage of dataset A");
  generate->add_option("--coverage-b", gen.coverage_b, "reference coverage of dataset B");
  generate->add_option("--year-lo", gen.year_lo, "earliest publication year");
  generate->add_option("--year-hi", gen.year_hi, "latest publication year");
  generate->add_option("--mean-out-degree", gen.mean_out_degree, "mean true reference count");
  generate->add_option("--pa-exponent", gen.pa_exponent, "preferential attachment exponent");
  generate->add_option("--ref-doi-prob", gen.ref_doi_prob, "reference entry DOI probability");
  generate->add_option("--ref-title-prob", gen.ref_title_prob,
                       "reference entry title+ISSN probability");

  CLI::App* match = app.add_subcommand("match", "resolve article identity across datasets");
  add_common_options(match, config, true);
  CLI::App* merge = app.add_subcommand("merge", "build per-dataset and merged citation graphs");
  add_common_options(merge, config, true);
  CLI::App* asp = app.add_subcommand("asp", "compute prestige scores and rankings");
  add_common_options(asp, config, false);
  CLI::App* rcr = app.add_subcommand("rcr", "compute reference coverage rates");
  add_common_options(rcr, config, false);
  CLI::App* gold = app.add_subcommand("gold", "classify rank shifts after merging");
  add_common_options(gold, config, false);
  CLI::App* clusters = app.add_subcommand("clusters", "assign disciplinary clusters");
  add_common_options(clusters, config, true);
  CLI::App* report = app.add_subcommand("report", "write aggregate tables");
  add_common_options(report, config, false);
  CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage end to end");
  add_common_options(pipeline, config, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      std::filesystem::create_directories(gen_out_dir);
      const auto dir = std::filesystem::path(gen_out_dir);
      const citemerge::GenResult result =
          citemerge::generate(gen, (dir / citemerge::artifacts::kDatasetA).string(),
                              (dir / citemerge::artifacts::kDatasetB).string(),
                              (dir / citemerge::artifacts::kGenManifest).string());
      std::cout << "wrote " << result.records_a << " A records, " << result.records_b
                << " B records, " << result.manifest.size() << " manifest rows\n";
    } else if (match->parsed()) {
      citemerge::stage_match(config);
    } else if (merge->parsed()) {
      citemerge::stage_merge(config);
    } else if (asp->parsed()) {
      citemerge::stage_asp(config);
    } else if (rcr->parsed()) {
      citemerge::stage_rcr(config);
    } else if (gold->parsed()) {
      citemerge::stage_gold(config);
    } else if (clusters->parsed()) {
      citemerge::stage_clusters(config);
    } else if (report->parsed()) {
      citemerge::stage_report(config);
    } else if (pipeline->parsed()) {
      const citemerge::PipelineResult result = citemerge::run_pipeline(config);
      std::cout << "pipeline done: " << result.records_a << " + " << result.records_b
                << " records, " << result.matched << " matched, " << result.merged_nodes
                << " merged nodes, " << result.merged_edges << " merged edges\n";
      for (const citemerge::StageTiming& t : result.timings)
        std::cout << "  " << t.name << ": " << t.seconds << " s\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
