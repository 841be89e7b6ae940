#include "attndisco/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "attndisco/dep_parser.hpp"
#include "attndisco/io.hpp"
#include "attndisco/oracle.hpp"
#include "attndisco/treeops.hpp"

namespace attndisco::cli {

namespace fs = std::filesystem;

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

Algo parse_algo(const std::string& name) {
  if (name == "cky") return Algo::kCky;
  if (name == "eisner") return Algo::kEisner;
  if (name == "cle") return Algo::kCle;
  throw DataError("unknown algorithm '" + name + "' (expected cky, eisner or cle)");
}

Metric parse_metric(const std::string& name) {
  if (name == "parseval") return Metric::kParseval;
  if (name == "uas") return Metric::kUas;
  throw DataError("unknown metric '" + name + "' (expected parseval or uas)");
}

ReportMode parse_report(const std::string& name) {
  if (name == "micro") return ReportMode::kMicro;
  if (name == "macro") return ReportMode::kMacro;
  if (name == "both") return ReportMode::kBoth;
  throw DataError("unknown report mode '" + name + "' (expected micro, macro or both)");
}

SpanConstraint::Level parse_constraint(const std::string& name) {
  if (name == "none") return SpanConstraint::Level::kNone;
  if (name == "sentence") return SpanConstraint::Level::kSentence;
  if (name == "paragraph") return SpanConstraint::Level::kParagraph;
  throw DataError("unknown constraint '" + name + "' (expected none, sentence or paragraph)");
}

CkyScoreVariant parse_variant(const std::string& name) {
  if (name == "halve-all") return CkyScoreVariant::kHalveAll;
  if (name == "halve-links") return CkyScoreVariant::kHalveLinks;
  throw DataError("unknown CKY score variant '" + name +
                  "' (expected halve-all or halve-links)");
}

Metric default_metric(Algo algo) {
  return algo == Algo::kCky ? Metric::kParseval : Metric::kUas;
}

void check_config(const ParserConfig& config) {
  if (config.algo != Algo::kCky && config.constraint == SpanConstraint::Level::kParagraph) {
    throw DataError("paragraph constraint is only supported with --algo cky");
  }
}

Tree induce(const AttentionMatrix& a, const AnnotatedDocument& doc,
            const ParserConfig& config) {
  const auto constraint = config.constraint == SpanConstraint::Level::kNone
                              ? SpanConstraint::none()
                              : SpanConstraint::from_document(doc, config.constraint);
  switch (config.algo) {
    case Algo::kCky:
      return cky_parse(a, constraint, config.variant).tree;
    case Algo::kEisner:
      return eisner_parse(a, constraint);
    case Algo::kCle:
      if (config.constraint == SpanConstraint::Level::kSentence) {
        return cle_parse_sentence_constrained(a, doc);
      }
      return cle_parse(a);
  }
  throw InternalError("unknown algorithm");
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t baseline_seed(std::uint64_t seed, int run, std::size_t doc_index, int runs) {
  return seed + static_cast<std::uint64_t>(run) +
         static_cast<std::uint64_t>(doc_index) * static_cast<std::uint64_t>(runs);
}

namespace {

// Runs `body`, mapping library errors to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

// Writes to `path`, or to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const fs::path& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw DataError("cannot write " + path.string());
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct GoldSet {
  std::vector<std::string> ids;
  std::vector<Tree> trees;
  std::map<std::string, std::size_t> index;

  std::size_t size_of(std::size_t k) const {
    return std::visit([](const auto& t) { return t.size(); }, trees[k]);
  }
};

void add_record(GoldSet& set, const std::string& id, Tree tree, const fs::path& path) {
  if (!set.index.emplace(id, set.ids.size()).second) {
    throw DataError(path.string() + ": duplicate doc_id '" + id + "'");
  }
  set.ids.push_back(id);
  set.trees.push_back(std::move(tree));
}

GoldSet load_trees(const fs::path& path, Metric metric) {
  GoldSet set;
  const io::TreeFileKind kind = io::detect_tree_file(path);
  if (metric == Metric::kParseval) {
    if (kind == io::TreeFileKind::kDependency) {
      throw DataError(path.string() + ": parseval needs a constituency tree file");
    }
    for (auto& rec : io::read_const_trees(path)) {
      try {
        add_record(set, rec.doc_id, as_binary(rec.forest), path);
      } catch (const ConversionError& e) {
        throw DataError(path.string() + " (" + rec.doc_id + "): " + e.what());
      }
    }
  } else {
    if (kind == io::TreeFileKind::kConstituency) {
      throw DataError(path.string() + ": uas needs a dependency tree file");
    }
    for (auto& rec : io::read_dep_trees(path)) add_record(set, rec.doc_id, rec.tree, path);
  }
  if (set.ids.empty()) throw DataError(path.string() + ": no trees");
  return set;
}

void check_metric(Algo algo, Metric metric) {
  if ((algo == Algo::kCky) != (metric == Metric::kParseval)) {
    throw DataError(algo == Algo::kCky ? "CKY trees are scored with --metric parseval"
                                       : "dependency trees are scored with --metric uas");
  }
}

MatchCount score(const Tree& pred, const Tree& gold) {
  if (const auto* p = std::get_if<ConstituencyTree>(&pred)) {
    return rst_parseval(*p, std::get<ConstituencyTree>(gold));
  }
  return uas(std::get<DependencyTree>(pred), std::get<DependencyTree>(gold));
}

void write_tree(std::ostream& out, const std::string& id, const Tree& tree) {
  if (const auto* c = std::get_if<ConstituencyTree>(&tree)) {
    io::write_const_tree(out, id, *c);
  } else {
    io::write_dep_tree(out, id, std::get<DependencyTree>(tree));
  }
}

std::string metric_name(Metric m) { return m == Metric::kParseval ? "parseval" : "uas"; }

// Loads every document under `input`; failures are collected per path.
struct LoadedCorpus {
  std::vector<fs::path> paths;
  std::vector<std::optional<AnnotatedDocument>> docs;
  std::vector<std::string> errors;
};

LoadedCorpus load_corpus(const fs::path& input, bool require_attention, int workers) {
  LoadedCorpus c;
  c.paths = io::list_documents(input);
  c.docs.resize(c.paths.size());
  c.errors.resize(c.paths.size());
  parallel_for(c.paths.size(), workers, [&](std::size_t k) {
    try {
      c.docs[k] = io::load_document(c.paths[k], require_attention);
    } catch (const DataError& e) {
      c.errors[k] = e.what();
    }
  });
  return c;
}

std::vector<AnnotatedDocument> require_corpus(LoadedCorpus corpus) {
  std::string msg;
  for (const auto& e : corpus.errors) {
    if (!e.empty()) msg += (msg.empty() ? "" : "\n") + e;
  }
  if (!msg.empty()) throw DataError(msg);
  std::vector<AnnotatedDocument> docs;
  for (auto& d : corpus.docs) docs.push_back(std::move(*d));
  return docs;
}

}  // namespace

int run_parse(const ParseOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(opts.parser);
    const HeadSelector sel = opts.head ? HeadSelector::single(opts.layer, *opts.head)
                                       : HeadSelector::average(opts.layer);
    LoadedCorpus corpus = load_corpus(opts.input, true, opts.workers);
    const std::size_t count = corpus.paths.size();
    std::vector<std::optional<Tree>> trees(count);
    std::vector<bool> internal(count, false);
    std::vector<bool> warn(count, false);
    parallel_for(count, opts.workers, [&](std::size_t k) {
      if (!corpus.docs[k]) return;
      const AnnotatedDocument& doc = *corpus.docs[k];
      try {
        const AttentionMatrix a = select_matrix(doc, sel);
        warn[k] = a.row_sum_warning();
        trees[k] = induce(a, doc, opts.parser);
      } catch (const DataError& e) {
        corpus.errors[k] = doc.doc_id + ": " + e.what();
      } catch (const std::exception& e) {
        corpus.errors[k] = doc.doc_id + ": " + e.what();
        internal[k] = true;
      }
    });

    Sink sink(opts.out, out);
    int status = 0;
    for (std::size_t k = 0; k < count; ++k) {
      if (!corpus.errors[k].empty()) {
        err << "error: " << corpus.errors[k] << "\n";
        status = internal[k] ? 1 : std::max(status, 2);
        continue;
      }
      if (warn[k]) {
        err << "warning: " << corpus.docs[k]->doc_id
            << ": attention rows do not sum to 1\n";
      }
      write_tree(sink.get(), corpus.docs[k]->doc_id, *trees[k]);
    }
    return status;
  });
}

int run_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GoldSet gold = load_trees(opts.gold, opts.metric);
    const GoldSet pred = load_trees(opts.pred, opts.metric);

    std::vector<std::string> missing, extra;
    for (const auto& id : gold.ids) {
      if (!pred.index.count(id)) missing.push_back(id);
    }
    for (const auto& id : pred.ids) {
      if (!gold.index.count(id)) extra.push_back(id);
    }
    if (!missing.empty() || !extra.empty()) {
      std::string msg = "prediction and gold documents differ";
      if (!missing.empty()) {
        msg += "; missing from predictions:";
        for (const auto& id : missing) msg += " " + id;
      }
      if (!extra.empty()) {
        msg += "; not in gold:";
        for (const auto& id : extra) msg += " " + id;
      }
      throw DataError(msg);
    }

    std::vector<MatchCount> counts;
    for (std::size_t k = 0; k < gold.ids.size(); ++k) {
      const Tree& p = pred.trees[pred.index.at(gold.ids[k])];
      try {
        counts.push_back(score(p, gold.trees[k]));
      } catch (const DataError& e) {
        throw DataError(gold.ids[k] + ": " + e.what());
      }
    }
    const ScoreReport report = make_report(metric_name(opts.metric), gold.ids, counts);

    out << "metric: " << report.metric << "\n";
    out << "documents: " << report.doc_ids.size() << "\n";
    if (opts.report != ReportMode::kMacro) out << "micro: " << format_score(report.micro) << "\n";
    if (opts.report != ReportMode::kMicro) {
      out << "macro: " << format_score(report.macro) << "\n";
      out << "std: " << format_score(report.std) << "\n";
    }
    if (!opts.csv.empty()) {
      Sink csv(opts.csv, out);
      csv.get() << "doc_id,matched,total,score\n";
      for (std::size_t k = 0; k < counts.size(); ++k) {
        csv.get() << report.doc_ids[k] << "," << counts[k].matched << "," << counts[k].total
                  << "," << format_score(report.per_document[k]) << "\n";
      }
    }
    return 0;
  });
}

int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(opts.parser);
    const Metric metric = opts.metric.value_or(default_metric(opts.parser.algo));
    check_metric(opts.parser.algo, metric);
    const std::vector<AnnotatedDocument> docs =
        require_corpus(load_corpus(opts.input, true, opts.workers));
    const GoldSet gold = load_trees(opts.gold, metric);

    const AnnotatedDocument& first = docs.front();
    for (const AnnotatedDocument& doc : docs) {
      bool same = doc.layers.size() == first.layers.size();
      for (std::size_t l = 0; same && l < doc.layers.size(); ++l) {
        same = doc.layers[l].heads.size() == first.layers[l].heads.size();
      }
      if (!same) {
        throw DataError("inconsistent tensor shapes: '" + doc.doc_id +
                        "' differs from '" + first.doc_id + "'");
      }
    }
    std::vector<std::size_t> gold_of(docs.size());
    for (std::size_t k = 0; k < docs.size(); ++k) {
      const auto it = gold.index.find(docs[k].doc_id);
      if (it == gold.index.end()) throw DataError("no gold tree for '" + docs[k].doc_id + "'");
      gold_of[k] = it->second;
    }

    const auto corpus_score = [&](const HeadSelector& sel) {
      std::vector<MatchCount> counts(docs.size());
      parallel_for(docs.size(), opts.workers, [&](std::size_t k) {
        const Tree t = induce(select_matrix(docs[k], sel), docs[k], opts.parser);
        counts[k] = score(t, gold.trees[gold_of[k]]);
      });
      MatchCount total;
      for (const auto& c : counts) total += c;
      return total.ratio();
    };

    Sink sink(opts.out, out);
    sink.get() << "layer,head,score\n";
    for (std::size_t l = 0; l < first.layers.size(); ++l) {
      const int layer = static_cast<int>(l);
      for (std::size_t h = 0; h < first.layers[l].heads.size(); ++h) {
        sink.get() << l << "," << h << ","
                   << format_score(corpus_score(HeadSelector::single(layer, static_cast<int>(h))))
                   << "\n";
      }
      sink.get() << l << ",avg," << format_score(corpus_score(HeadSelector::average(layer)))
                 << "\n";
    }
    return 0;
  });
}

std::vector<double> baseline_scores(const BaselineOptions& opts) {
  check_config(opts.parser);
  if (opts.runs < 1) throw DataError("--runs must be at least 1");
  const Metric metric = opts.metric.value_or(default_metric(opts.parser.algo));
  check_metric(opts.parser.algo, metric);
  const GoldSet gold = load_trees(opts.gold, metric);

  std::vector<AnnotatedDocument> docs(gold.ids.size());
  if (opts.parser.constraint != SpanConstraint::Level::kNone) {
    if (opts.docs.empty()) {
      throw DataError("a constrained baseline needs --docs for sentence segmentation");
    }
    std::map<std::string, AnnotatedDocument> by_id;
    for (auto& d : require_corpus(load_corpus(opts.docs, false, opts.workers))) {
      by_id.emplace(d.doc_id, std::move(d));
    }
    for (std::size_t k = 0; k < gold.ids.size(); ++k) {
      const auto it = by_id.find(gold.ids[k]);
      if (it == by_id.end()) throw DataError("no segmentation for '" + gold.ids[k] + "'");
      if (it->second.size() != gold.size_of(k)) {
        throw DataError("'" + gold.ids[k] + "': segmentation has " +
                        std::to_string(it->second.size()) + " EDUs, gold tree has " +
                        std::to_string(gold.size_of(k)));
      }
      docs[k] = it->second;
    }
  } else {
    for (std::size_t k = 0; k < gold.ids.size(); ++k) {
      docs[k].doc_id = gold.ids[k];
      for (std::size_t e = 0; e < gold.size_of(k); ++e) {
        docs[k].edus.push_back({static_cast<int>(e) + 1, 0, 0, std::nullopt});
      }
    }
  }

  std::vector<double> scores;
  for (int r = 0; r < opts.runs; ++r) {
    std::vector<MatchCount> counts(docs.size());
    parallel_for(docs.size(), opts.workers, [&](std::size_t k) {
      const AttentionMatrix a =
          random_matrix(docs[k].size(), baseline_seed(opts.seed, r, k, opts.runs));
      counts[k] = score(induce(a, docs[k], opts.parser), gold.trees[k]);
    });
    MatchCount total;
    for (const auto& c : counts) total += c;
    scores.push_back(total.ratio());
  }
  return scores;
}

int run_baseline(const BaselineOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<double> scores = baseline_scores(opts);
    const MeanStd ms = aggregate(scores);
    const Metric metric = opts.metric.value_or(default_metric(opts.parser.algo));
    out << "metric: " << metric_name(metric) << "\n";
    out << "runs: " << opts.runs << "\n";
    out << "seed: " << opts.seed << "\n";
    for (std::size_t r = 0; r < scores.size(); ++r) {
      out << "run " << r << ": " << format_score(scores[r]) << "\n";
    }
    out << "mean: " << format_score(ms.mean) << "\n";
    out << "std: " << format_score(ms.std) << "\n";
    out << "result: " << format_score(ms.mean) << " +- " << format_score(ms.std) << "\n";
    return 0;
  });
}

int run_convert(const ConvertOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.binarize && !opts.to_dep) {
      throw DataError("convert needs --binarize, --to-dep or both");
    }
    const auto records = io::read_const_trees(opts.input);
    std::ostringstream buffer;
    for (const auto& rec : records) {
      try {
        const ConstituencyTree tree =
            opts.binarize ? binarize_right(rec.forest) : as_binary(rec.forest);
        if (opts.to_dep) {
          io::write_dep_tree(buffer, rec.doc_id, const_to_dep(tree));
        } else {
          io::write_const_tree(buffer, rec.doc_id, tree);
        }
      } catch (const DataError& e) {
        throw DataError(rec.doc_id + ": " + e.what());
      }
    }
    Sink sink(opts.out, out);
    sink.get() << buffer.str();
    return 0;
  });
}

int run_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (io::detect_tree_file(opts.trees) == io::TreeFileKind::kConstituency) {
      throw DataError(opts.trees.string() + ": stats needs a dependency tree file");
    }
    const auto records = io::read_dep_trees(opts.trees);
    if (records.empty()) throw DataError(opts.trees.string() + ": no trees");
    std::vector<DependencyTree> trees;
    for (const auto& r : records) trees.push_back(r.tree);
    const CorpusTreeStats s = corpus_tree_stats(trees);
    out << "documents: " << s.documents << "\n";
    out << "branch_width: " << format_score(s.branch_width) << "\n";
    out << "height: " << format_score(s.height) << "\n";
    out << "leaf_ratio: " << format_score(s.leaf_ratio) << "\n";
    out << "norm_arc_length: " << format_score(s.norm_arc_length) << "\n";
    out << "vacuous_pct: " << format_score(100.0 * s.vacuous_ratio) << "\n";

    if (!opts.gold.empty()) {
      const GoldSet gold = load_trees(opts.gold, Metric::kUas);
      std::vector<DependencyTree> golds;
      for (const auto& r : records) {
        const auto it = gold.index.find(r.doc_id);
        if (it == gold.index.end()) throw DataError("no gold tree for '" + r.doc_id + "'");
        golds.push_back(std::get<DependencyTree>(gold.trees[it->second]));
      }
      const LocalityReport loc = locality_report(trees, golds);
      out << "local_ratio_correct: " << format_score(loc.local_ratio_correct) << "\n";
      out << "local_ratio_ours: " << format_score(loc.local_ratio_ours) << "\n";
      out << "local_ratio_gt: " << format_score(loc.local_ratio_gt) << "\n";
    }
    return 0;
  });
}

int run_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto results = oracle::certify(opts.min_n, opts.max_n, opts.trials, opts.seed);
    bool ok = true;
    for (const auto& r : results) {
      char gap[32];
      std::snprintf(gap, sizeof(gap), "%.3e", r.max_gap);
      out << (r.failures == 0 ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases
          << " failures=" << r.failures << " max_gap=" << gap << "\n";
      ok = ok && r.failures == 0;
    }
    return ok ? 0 : 1;
  });
}

}  // namespace attndisco::cli
