#include "attndisco/const_parser.hpp"

#include <limits>

#include "attndisco/attention.hpp"

namespace attndisco {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool non_decreasing(const std::vector<int>& ids) {
  for (std::size_t k = 1; k < ids.size(); ++k) {
    if (ids[k] < ids[k - 1]) return false;
  }
  return true;
}

}  // namespace

SpanConstraint SpanConstraint::from_ids(Level level, std::vector<int> sent_ids,
                                        std::vector<int> para_ids) {
  SpanConstraint c;
  c.level_ = level;
  if (level == Level::kNone) return c;
  if (!non_decreasing(sent_ids)) {
    throw DataError("sentence ids must be non-decreasing");
  }
  if (level == Level::kParagraph) {
    if (para_ids.size() != sent_ids.size()) {
      throw DataError("paragraph constraint needs one paragraph id per EDU");
    }
    if (!non_decreasing(para_ids)) {
      throw DataError("paragraph ids must be non-decreasing");
    }
  }
  c.sent_ = std::move(sent_ids);
  c.para_ = std::move(para_ids);
  return c;
}

SpanConstraint SpanConstraint::from_document(const AnnotatedDocument& doc,
                                             Level level) {
  std::vector<int> sent, para;
  sent.reserve(doc.size());
  para.reserve(doc.size());
  for (const EduInfo& edu : doc.edus) {
    sent.push_back(edu.sent_id);
    para.push_back(edu.para_id);
  }
  return from_ids(level, std::move(sent), std::move(para));
}

bool SpanConstraint::admissible(int i, int j) const {
  if (level_ == Level::kNone || i == j) return true;
  const bool within_sentence = sent_[i] == sent_[j];
  if (!within_sentence && !(sentence_start(i) && sentence_end(j))) return false;
  if (level_ == Level::kSentence || within_sentence) return true;
  if (para_[i] == para_[j]) return true;
  const bool para_start = i == 0 || para_[i - 1] != para_[i];
  const bool para_end =
      j + 1 == static_cast<int>(para_.size()) || para_[j + 1] != para_[j];
  return para_start && para_end;
}

BlockMean::BlockMean(const AttentionMatrix& a)
    : stride_(a.size() + 1), prefix_(stride_ * stride_, 0.0) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row_sum += a.at(i, j);
      prefix_[(i + 1) * stride_ + j + 1] = prefix_[i * stride_ + j + 1] + row_sum;
    }
  }
}

double BlockMean::operator()(std::size_t r0, std::size_t r1, std::size_t c0,
                             std::size_t c1) const {
  const double sum = prefix_[(r1 + 1) * stride_ + c1 + 1] -
                     prefix_[r0 * stride_ + c1 + 1] -
                     prefix_[(r1 + 1) * stride_ + c0] + prefix_[r0 * stride_ + c0];
  const double cells = static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
  return sum / cells;
}

CkyChart cky_chart(const AttentionMatrix& a, const SpanConstraint& constraint,
                   CkyScoreVariant variant) {
  const std::size_t n = a.size();
  if (n == 0) throw DataError("cannot parse an empty matrix");
  if (constraint.level() != SpanConstraint::Level::kNone && constraint.size() != n) {
    throw DataError("constraint covers " + std::to_string(constraint.size()) +
                    " EDUs but the matrix has " + std::to_string(n));
  }
  CkyChart chart;
  chart.n = n;
  chart.score.assign(n * n, kNegInf);
  chart.split.assign(n * n, -1);

  const auto leaf = importance(a);
  for (std::size_t i = 0; i < n; ++i) chart.score[i * n + i] = leaf[i];

  const BlockMean mean(a);
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      if (!constraint.admissible(static_cast<int>(i), static_cast<int>(j))) continue;
      double best = kNegInf;
      int best_k = -1;
      for (std::size_t k = i; k < j; ++k) {
        const double left = chart.score[i * n + k];
        const double right = chart.score[(k + 1) * n + j];
        if (left == kNegInf || right == kNegInf) continue;
        const double links = mean(i, k, k + 1, j) + mean(k + 1, j, i, k);
        const double value = variant == CkyScoreVariant::kHalveAll
                                 ? (left + right + links) / 2.0
                                 : left + right + links / 2.0;
        if (value > best) {
          best = value;
          best_k = static_cast<int>(k);
        }
      }
      chart.score[i * n + j] = best;
      chart.split[i * n + j] = best_k;
    }
  }
  return chart;
}

CkyResult cky_parse(const AttentionMatrix& a, const SpanConstraint& constraint,
                    CkyScoreVariant variant) {
  const CkyChart chart = cky_chart(a, constraint, variant);
  const std::size_t n = chart.n;
  if (chart.at(0, n - 1) == kNegInf) {
    throw InternalError("no admissible constituency tree over the document");
  }

  ConstituencyTree::Builder builder;
  // Post-order reconstruction with an explicit stack of (i, j, expanded).
  struct Frame {
    std::size_t i, j;
    bool expanded;
  };
  std::vector<Frame> stack{{0, n - 1, false}};
  std::vector<int> built;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.i == f.j) {
      built.push_back(builder.leaf(static_cast<int>(f.i) + 1));
      continue;
    }
    if (f.expanded) {
      const int right = built.back();
      built.pop_back();
      const int left = built.back();
      built.pop_back();
      built.push_back(builder.join(left, right));
      continue;
    }
    const int k = chart.split_at(f.i, f.j);
    if (k < 0) throw InternalError("CKY back-pointer missing");
    stack.push_back({f.i, f.j, true});
    stack.push_back({static_cast<std::size_t>(k) + 1, f.j, false});
    stack.push_back({f.i, static_cast<std::size_t>(k), false});
  }
  return {std::move(builder).finish(built.back()), chart.at(0, n - 1)};
}

}  // namespace attndisco
