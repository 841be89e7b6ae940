#ifndef ATTNDISCO_COMMANDS_HPP_
#define ATTNDISCO_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "attndisco/attention.hpp"
#include "attndisco/const_parser.hpp"
#include "attndisco/core.hpp"
#include "attndisco/metrics.hpp"

// Batch commands behind the attndisco CLI. Each run_* returns a process exit
// code (0 ok, 2 data error, 1 internal error) and writes human output to
// `out` and diagnostics to `err`.
namespace attndisco::cli {

enum class Algo { kCky, kEisner, kCle };
enum class Metric { kParseval, kUas };
enum class ReportMode { kMicro, kMacro, kBoth };

Algo parse_algo(const std::string& name);
Metric parse_metric(const std::string& name);
ReportMode parse_report(const std::string& name);
SpanConstraint::Level parse_constraint(const std::string& name);
CkyScoreVariant parse_variant(const std::string& name);

// Parseval for CKY, UAS for the dependency parsers.
Metric default_metric(Algo algo);

using Tree = std::variant<ConstituencyTree, DependencyTree>;

struct ParserConfig {
  Algo algo = Algo::kCky;
  SpanConstraint::Level constraint = SpanConstraint::Level::kNone;
  CkyScoreVariant variant = CkyScoreVariant::kHalveAll;
};

// Rejects combinations the parsers do not support (paragraph constraint for
// dependency parsing) with DataError.
void check_config(const ParserConfig& config);

// Runs one parser on `a` using the segmentation of `doc` when constrained.
Tree induce(const AttentionMatrix& a, const AnnotatedDocument& doc,
            const ParserConfig& config);

// Runs fn(0..count-1) on up to `workers` threads (0 = hardware concurrency).
// Exceptions are rethrown on the calling thread, lowest index first.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct ParseOptions {
  std::filesystem::path input;
  std::filesystem::path out;  // empty: write to `out` stream
  ParserConfig parser;
  int layer = 0;
  std::optional<int> head;  // unset: average heads
  int workers = 0;
};

struct EvalOptions {
  std::filesystem::path pred;
  std::filesystem::path gold;
  Metric metric = Metric::kParseval;
  ReportMode report = ReportMode::kBoth;
  std::filesystem::path csv;
};

struct SweepOptions {
  std::filesystem::path input;
  std::filesystem::path gold;
  std::filesystem::path out;
  ParserConfig parser;
  std::optional<Metric> metric;
  int workers = 0;
};

struct BaselineOptions {
  std::filesystem::path gold;
  std::filesystem::path docs;  // segmentation source, needed when constrained
  ParserConfig parser;
  std::optional<Metric> metric;
  int runs = 10;
  std::uint64_t seed = 0;
  int workers = 0;
};

struct ConvertOptions {
  std::filesystem::path input;
  std::filesystem::path out;
  bool binarize = false;
  bool to_dep = false;
};

struct StatsOptions {
  std::filesystem::path trees;
  std::filesystem::path gold;
};

struct OracleOptions {
  int min_n = 2;
  int max_n = 7;
  int trials = 200;
  std::uint64_t seed = 0;
};

int run_parse(const ParseOptions& opts, std::ostream& out, std::ostream& err);
int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int run_baseline(const BaselineOptions& opts, std::ostream& out, std::ostream& err);
int run_convert(const ConvertOptions& opts, std::ostream& out, std::ostream& err);
int run_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err);
int run_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

// Corpus micro scores of each random-matrix run, as printed by run_baseline.
std::vector<double> baseline_scores(const BaselineOptions& opts);

// Seed used for document `doc_index` in run `run`: seed + run + doc_index * runs.
std::uint64_t baseline_seed(std::uint64_t seed, int run, std::size_t doc_index, int runs);

// Fixed 4-decimal rendering used by every command.
std::string format_score(double value);

}  // namespace attndisco::cli

#endif  // ATTNDISCO_COMMANDS_HPP_
