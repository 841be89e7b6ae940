// attndisco: discourse tree induction from attention matrices.
//
//   attndisco parse --input docs/ --algo cky --constraint sentence --layer 0 --avg-heads
//   attndisco eval --pred pred.txt --gold gold.txt --metric parseval
//   attndisco sweep --input docs/ --gold gold.txt --algo eisner --out grid.csv
//   attndisco baseline --gold gold.txt --algo cky --runs 10 --seed 1
//   attndisco convert --binarize --to-dep --input gold.txt --out gold.dep
//   attndisco stats --trees pred.dep --gold gold.dep
//   attndisco --oracle

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "attndisco/commands.hpp"

namespace {

using namespace attndisco;

struct ParserFlags {
  std::string algo = "cky";
  std::string constraint = "none";
  std::string variant = "halve-all";

  cli::ParserConfig config() const {
    return {cli::parse_algo(algo), cli::parse_constraint(constraint),
            cli::parse_variant(variant)};
  }
};

void add_parser_flags(CLI::App* cmd, ParserFlags& f) {
  cmd->add_option("--algo", f.algo, "cky, eisner or cle")->capture_default_str();
  cmd->add_option("--constraint", f.constraint, "none, sentence or paragraph")
      ->capture_default_str();
  cmd->add_option("--cky-score-variant", f.variant,
                  "halve-all divides the whole split score by 2, "
                  "halve-links only the two block averages")
      ->capture_default_str();
}

// --seed, then $ATTNDISCO_SEED, then 0.
std::uint64_t resolve_seed(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("ATTNDISCO_SEED");
    if (env == nullptr || *env == '\0') return 0;
    text = env;
  }
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw DataError("invalid seed '" + text + "'");
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induce and evaluate discourse trees from attention matrices"};
  app.require_subcommand(0, 1);

  bool oracle = false;
  cli::OracleOptions oracle_opts;
  std::string oracle_seed;
  app.add_flag("--oracle", oracle, "certify the parsers against brute-force oracles");
  app.add_option("--oracle-min-n", oracle_opts.min_n)->capture_default_str();
  app.add_option("--oracle-max-n", oracle_opts.max_n)->capture_default_str();
  app.add_option("--oracle-trials", oracle_opts.trials)->capture_default_str();
  app.add_option("--oracle-seed", oracle_seed, "defaults to $ATTNDISCO_SEED or 0");

  // parse
  cli::ParseOptions parse_opts;
  ParserFlags parse_flags;
  bool avg_heads = false;
  int head = -1;
  auto* parse = app.add_subcommand("parse", "induce one tree per document");
  parse->add_option("--input", parse_opts.input, "document JSON or directory")->required();
  parse->add_option("--out", parse_opts.out, "tree file (default stdout)");
  add_parser_flags(parse, parse_flags);
  parse->add_option("--layer", parse_opts.layer)->capture_default_str();
  auto* head_opt = parse->add_option("--head", head, "single head index");
  auto* avg_opt = parse->add_flag("--avg-heads", avg_heads, "average all heads (default)");
  head_opt->excludes(avg_opt);
  parse->add_option("--workers", parse_opts.workers, "0 = available parallelism");

  // eval
  cli::EvalOptions eval_opts;
  std::string eval_metric = "parseval", eval_report = "both";
  auto* eval = app.add_subcommand("eval", "score predicted trees against gold");
  eval->add_option("--pred", eval_opts.pred)->required();
  eval->add_option("--gold", eval_opts.gold)->required();
  eval->add_option("--metric", eval_metric, "parseval or uas")->capture_default_str();
  eval->add_option("--report", eval_report, "micro, macro or both")->capture_default_str();
  eval->add_option("--csv", eval_opts.csv, "per-document CSV");

  // sweep
  cli::SweepOptions sweep_opts;
  ParserFlags sweep_flags;
  std::string sweep_metric;
  auto* sweep = app.add_subcommand("sweep", "score every layer and head");
  sweep->add_option("--input", sweep_opts.input)->required();
  sweep->add_option("--gold", sweep_opts.gold)->required();
  sweep->add_option("--out", sweep_opts.out, "CSV (default stdout)");
  sweep->add_option("--metric", sweep_metric, "parseval or uas");
  add_parser_flags(sweep, sweep_flags);
  sweep->add_option("--workers", sweep_opts.workers);

  // baseline
  cli::BaselineOptions base_opts;
  ParserFlags base_flags;
  std::string base_metric, base_seed;
  auto* baseline = app.add_subcommand("baseline", "score parsers run on random matrices");
  baseline->add_option("--gold", base_opts.gold)->required();
  baseline->add_option("--docs", base_opts.docs, "documents supplying segmentation");
  baseline->add_option("--metric", base_metric, "parseval or uas");
  baseline->add_option("--runs", base_opts.runs)->capture_default_str();
  baseline->add_option("--seed", base_seed, "defaults to $ATTNDISCO_SEED or 0");
  add_parser_flags(baseline, base_flags);
  baseline->add_option("--workers", base_opts.workers);

  // convert
  cli::ConvertOptions conv_opts;
  auto* convert = app.add_subcommand("convert", "binarize gold trees or convert to dependencies");
  convert->add_option("--input", conv_opts.input)->required();
  convert->add_option("--out", conv_opts.out, "output file (default stdout)");
  convert->add_flag("--binarize", conv_opts.binarize);
  convert->add_flag("--to-dep", conv_opts.to_dep);

  // stats
  cli::StatsOptions stats_opts;
  auto* stats = app.add_subcommand("stats", "structural statistics of dependency trees");
  stats->add_option("--trees", stats_opts.trees)->required();
  stats->add_option("--gold", stats_opts.gold, "gold trees for the locality report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  try {
    if (oracle) {
      oracle_opts.seed = resolve_seed(oracle_seed);
      return cli::run_oracle(oracle_opts, out, err);
    }
    if (*parse) {
      parse_opts.parser = parse_flags.config();
      if (*head_opt) parse_opts.head = head;
      return cli::run_parse(parse_opts, out, err);
    }
    if (*eval) {
      eval_opts.metric = cli::parse_metric(eval_metric);
      eval_opts.report = cli::parse_report(eval_report);
      return cli::run_eval(eval_opts, out, err);
    }
    if (*sweep) {
      sweep_opts.parser = sweep_flags.config();
      if (!sweep_metric.empty()) sweep_opts.metric = cli::parse_metric(sweep_metric);
      return cli::run_sweep(sweep_opts, out, err);
    }
    if (*baseline) {
      base_opts.parser = base_flags.config();
      if (!base_metric.empty()) base_opts.metric = cli::parse_metric(base_metric);
      base_opts.seed = resolve_seed(base_seed);
      return cli::run_baseline(base_opts, out, err);
    }
    if (*convert) return cli::run_convert(conv_opts, out, err);
    if (*stats) return cli::run_stats(stats_opts, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}
