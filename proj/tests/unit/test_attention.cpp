#include <cmath>

#include "attndisco/attention.hpp"
#include "doctest.h"

using namespace attndisco;

namespace {

AnnotatedDocument doc_with(std::vector<AttentionMatrix> heads) {
  AnnotatedDocument doc;
  doc.doc_id = "d";
  for (std::size_t k = 0; k < heads[0].size(); ++k) {
    doc.edus.push_back({static_cast<int>(k) + 1, 0, 0, std::nullopt});
  }
  doc.layers.push_back({0, std::move(heads)});
  return doc;
}

}  // namespace

TEST_CASE("select_matrix") {
  const auto m = AttentionMatrix::from_rows({{0.1, 0.9}, {0.8, 0.2}});
  CHECK(select_matrix(doc_with({m}), HeadSelector::average(0)) == m);

  const auto avg = select_matrix(
      doc_with({AttentionMatrix::from_rows({{0, 1}, {1, 0}}), AttentionMatrix::identity(2)}),
      HeadSelector::average(0));
  CHECK(avg == AttentionMatrix::uniform(2, 0.5));

  const auto u = AttentionMatrix::uniform(4, 0.25);
  const auto doc = doc_with(std::vector<AttentionMatrix>(8, u));
  CHECK(select_matrix(doc, HeadSelector::average(0)) == u);
  CHECK(select_matrix(doc, HeadSelector::single(0, 7)) == u);
  CHECK_THROWS_WITH_AS(select_matrix(doc, HeadSelector::single(0, 99)),
                       doctest::Contains("head 99 out of range 0..7"), SelectorError);
  CHECK_THROWS_AS(select_matrix(doc, HeadSelector::average(1)), SelectorError);
}

TEST_CASE("importance is the column sum") {
  const auto imp = importance(AttentionMatrix::from_rows({{0.1, 0.9}, {0.8, 0.2}}));
  CHECK(imp[0] == doctest::Approx(0.9));
  CHECK(imp[1] == doctest::Approx(1.1));
  for (double v : importance(AttentionMatrix::uniform(4, 0.25))) CHECK(v == doctest::Approx(1.0));
  for (double v : importance(AttentionMatrix::identity(3))) CHECK(v == 1.0);
  CHECK(importance_argmax(AttentionMatrix::uniform(3, 1.0 / 3)) == 0);
}

TEST_CASE("average of heads commutes with importance") {
  std::vector<AttentionMatrix> heads;
  for (std::uint64_t s = 0; s < 5; ++s) heads.push_back(random_matrix(6, s));
  const auto avg_imp = importance(average_heads(heads));
  for (std::size_t i = 0; i < 6; ++i) {
    double mean = 0;
    for (const auto& h : heads) mean += importance(h)[i];
    CHECK(std::abs(avg_imp[i] - mean / 5) < 1e-9);
  }
}

TEST_CASE("random_matrix") {
  CHECK(random_matrix(5, 7) == random_matrix(5, 7));
  CHECK_FALSE(random_matrix(5, 7) == random_matrix(5, 8));
  const auto m = random_matrix(9, 123);
  for (std::size_t i = 0; i < 9; ++i) {
    double sum = 0;
    for (double v : m.row(i)) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  CHECK(random_matrix(1, 42) == AttentionMatrix::identity(1));
  CHECK_THROWS_AS(random_matrix(0, 1), DataError);
}
