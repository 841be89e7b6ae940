#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "attndisco/attention.hpp"
#include "attndisco/const_parser.hpp"
#include "attndisco/dep_parser.hpp"
#include "attndisco/io.hpp"
#include "attndisco/metrics.hpp"
#include "attndisco/oracle.hpp"
#include "attndisco/treeops.hpp"

namespace py = pybind11;
using namespace attndisco;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const AttentionMatrix& a) {
  Rows rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows[i].assign(a.row(i).begin(), a.row(i).end());
  return rows;
}

SpanConstraint constraint_for(const std::optional<std::vector<int>>& sentences,
                              const std::optional<std::vector<int>>& paragraphs) {
  if (paragraphs) {
    if (!sentences) throw DataError("paragraph ids need sentence ids");
    return SpanConstraint::from_ids(SpanConstraint::Level::kParagraph, *sentences, *paragraphs);
  }
  if (sentences) return SpanConstraint::from_ids(SpanConstraint::Level::kSentence, *sentences);
  return SpanConstraint::none();
}

ConstituencyTree read_tree(const std::string& bracketed) {
  return as_binary(io::parse_bracketed(bracketed));
}

}  // namespace

PYBIND11_MODULE(_attndisco, m) {
  m.doc() = "Discourse tree induction from attention matrices.";
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("importance", [](const Rows& a) { return importance(AttentionMatrix::from_rows(a)); },
        py::arg("matrix"));
  m.def("random_matrix", [](std::size_t n, std::uint64_t seed) {
    return to_rows(random_matrix(n, seed));
  }, py::arg("n"), py::arg("seed"));

  m.def("cky_parse",
        [](const Rows& a, std::optional<std::vector<int>> sentences,
           std::optional<std::vector<int>> paragraphs, const std::string& variant) {
          if (variant != "halve-all" && variant != "halve-links") {
            throw DataError("unknown CKY score variant '" + variant + "'");
          }
          const auto r = cky_parse(AttentionMatrix::from_rows(a),
                                   constraint_for(sentences, paragraphs),
                                   variant == "halve-all" ? CkyScoreVariant::kHalveAll
                                                          : CkyScoreVariant::kHalveLinks);
          return py::make_tuple(io::format_const_tree(r.tree), r.score);
        },
        py::arg("matrix"), py::arg("sentences") = py::none(),
        py::arg("paragraphs") = py::none(), py::arg("variant") = "halve-all",
        "Returns (bracketed tree, root score).");
  m.def("eisner_parse",
        [](const Rows& a, std::optional<std::vector<int>> sentences) {
          return eisner_parse(AttentionMatrix::from_rows(a), constraint_for(sentences, {}))
              .heads();
        },
        py::arg("matrix"), py::arg("sentences") = py::none(),
        "Returns the head of every EDU (0 marks the root).");
  m.def("cle_parse",
        [](const Rows& a, std::optional<std::vector<int>> sentences) {
          const auto matrix = AttentionMatrix::from_rows(a);
          if (sentences) return cle_parse_sentence_constrained(matrix, *sentences).heads();
          return cle_parse(matrix).heads();
        },
        py::arg("matrix"), py::arg("sentences") = py::none());

  m.def("rst_parseval", [](const std::string& pred, const std::string& gold) {
    const auto c = rst_parseval(read_tree(pred), read_tree(gold));
    return py::make_tuple(c.matched, c.total);
  }, py::arg("pred"), py::arg("gold"));
  m.def("uas", [](std::vector<int> pred, std::vector<int> gold) {
    const auto c = uas(DependencyTree(std::move(pred)), DependencyTree(std::move(gold)));
    return py::make_tuple(c.matched, c.total);
  }, py::arg("pred"), py::arg("gold"));
  m.def("aggregate", [](const std::vector<double>& values) {
    const auto ms = aggregate(values);
    return py::make_tuple(ms.mean, ms.std);
  });

  m.def("binarize", [](const std::string& bracketed) {
    return io::format_const_tree(binarize_right(io::parse_bracketed(bracketed)));
  }, py::arg("tree"));
  m.def("const_to_dep", [](const std::string& bracketed) {
    return const_to_dep(binarize_right(io::parse_bracketed(bracketed))).heads();
  }, py::arg("tree"));
  m.def("is_vacuous", [](std::vector<int> heads) {
    return is_vacuous(DependencyTree(std::move(heads)));
  }, py::arg("heads"));
  m.def("tree_stats", [](std::vector<int> heads) {
    const auto s = tree_stats(DependencyTree(std::move(heads)));
    py::dict d;
    d["branch_width"] = s.branch_width;
    d["height"] = s.height;
    d["leaf_ratio"] = s.leaf_ratio;
    d["norm_arc_length"] = s.norm_arc_length;
    d["vacuous"] = s.vacuous;
    return d;
  }, py::arg("heads"));
  m.def("locality_report",
        [](const std::vector<std::vector<int>>& preds, const std::vector<std::vector<int>>& golds) {
          std::vector<DependencyTree> p, g;
          for (const auto& h : preds) p.emplace_back(h);
          for (const auto& h : golds) g.emplace_back(h);
          const auto r = locality_report(p, g);
          return py::make_tuple(r.local_ratio_correct, r.local_ratio_ours, r.local_ratio_gt);
        });

  m.def("certify", [](int min_n, int max_n, int trials, std::uint64_t seed) {
    py::dict out;
    for (const auto& r : oracle::certify(min_n, max_n, trials, seed)) {
      out[py::str(r.name)] = py::make_tuple(r.cases, r.failures, r.max_gap);
    }
    return out;
  }, py::arg("min_n") = 2, py::arg("max_n") = 7, py::arg("trials") = 20, py::arg("seed") = 0);
}
