// Copyright 2026 The AGED Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aged/span_pointer.h"

#include <cmath>

#include "aged/errors.h"

namespace aged {
namespace {

std::vector<double> Softmax(const Vector &logits) {
  const double top = logits.maxCoeff();
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits(i) - top);
    sum += probs[i];
  }
  for (auto &p : probs) p /= sum;
  return probs;
}

// Rows {cls_pos, sentence_pos[1..n]} of the encoding, (n + 1) x d.
Matrix CandidateRows(const ContextualEncoding &encoding,
                     const EncodedPair &pair) {
  Matrix rows(pair.candidates().size(), encoding.reps.cols());
  for (size_t i = 0; i < pair.candidates().size(); ++i) {
    rows.row(i) = encoding.reps.row(pair.candidates()[i]);
  }
  return rows;
}

void CheckLabel(int index, int n) {
  if (index < 0 || index > n) {
    throw ValidationError("label " + std::to_string(index) +
                          " outside candidate range 0.." + std::to_string(n));
  }
}

}  // namespace

std::vector<QueryVector> MakeQueries(const ContextualEncoding &encoding,
                                     const EncodedPair &pair) {
  const Eigen::Index d = encoding.reps.cols();
  std::vector<QueryVector> queries;
  queries.reserve(pair.slot_pos.size());
  for (const auto &slot : pair.slot_pos) {
    QueryVector query{slot.fe, encoding.reps.row(slot.start).transpose(),
                      std::vector<int>(d, slot.start)};
    for (int row = slot.start + 1; row <= slot.end; ++row) {
      for (Eigen::Index k = 0; k < d; ++k) {
        if (encoding.reps(row, k) > query.q(k)) {
          query.q(k) = encoding.reps(row, k);
          query.source_rows[k] = row;
        }
      }
    }
    queries.push_back(std::move(query));
  }
  return queries;
}

std::vector<PointerDistribution> PointerDistributions(
    const ParameterSet &params, const ContextualEncoding &encoding,
    const EncodedPair &pair, const std::vector<QueryVector> &queries) {
  const auto w_start = params.at(kPointerStart).matrix();
  const auto w_end = params.at(kPointerEnd).matrix();
  const Matrix candidates = CandidateRows(encoding, pair);
  std::vector<PointerDistribution> out;
  out.reserve(queries.size());
  for (const auto &query : queries) {
    const Vector start_logits = candidates * (w_start * query.q);
    const Vector end_logits = candidates * (w_end * query.q);
    out.push_back(
        PointerDistribution{query.fe, Softmax(start_logits), Softmax(end_logits)});
  }
  return out;
}

LossBreakdown SlotLoss(const std::vector<PointerDistribution> &distributions,
                       const std::vector<SlotLabel> &labels) {
  if (distributions.size() != labels.size()) {
    throw ValidationError("got " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(distributions.size()) +
                          " slots");
  }
  LossBreakdown loss;
  for (size_t j = 0; j < labels.size(); ++j) {
    const auto &dist = distributions[j];
    CheckLabel(labels[j].start, dist.n());
    CheckLabel(labels[j].end, dist.n());
    loss.loss_start -= std::log(dist.start_probs[labels[j].start]);
    loss.loss_end -= std::log(dist.end_probs[labels[j].end]);
  }
  loss.total = 0.5 * loss.loss_start + 0.5 * loss.loss_end;
  return loss;
}

void SlotLossBackward(const ParameterSet &params,
                      const ContextualEncoding &encoding,
                      const EncodedPair &pair,
                      const std::vector<QueryVector> &queries,
                      const std::vector<PointerDistribution> &distributions,
                      const std::vector<SlotLabel> &labels, double weight,
                      Matrix *d_reps, ParameterGradients *grads) {
  const auto w_start = params.at(kPointerStart).matrix();
  const auto w_end = params.at(kPointerEnd).matrix();
  auto g_start = grads->at(kPointerStart).matrix();
  auto g_end = grads->at(kPointerEnd).matrix();
  const Matrix candidates = CandidateRows(encoding, pair);
  const auto &rows = pair.candidates();

  for (size_t j = 0; j < queries.size(); ++j) {
    const auto &query = queries[j];
    Vector d_query = Vector::Zero(query.q.size());
    // Cross-entropy through softmax: d(logit) = p - onehot(gold).
    auto head = [&](const std::vector<double> &probs, int gold,
                    const Eigen::Map<const Matrix> &w,
                    Eigen::Map<Matrix> &g) {
      Vector d_logits = Eigen::Map<const Vector>(probs.data(), probs.size());
      d_logits(gold) -= 1.0;
      d_logits *= 0.5 * weight;
      const Vector transformed = w * query.q;
      const Vector d_transformed = candidates.transpose() * d_logits;
      for (size_t i = 0; i < rows.size(); ++i) {
        d_reps->row(rows[i]) += d_logits(i) * transformed.transpose();
      }
      g += d_transformed * query.q.transpose();
      d_query += w.transpose() * d_transformed;
    };
    head(distributions[j].start_probs, labels[j].start, w_start, g_start);
    head(distributions[j].end_probs, labels[j].end, w_end, g_end);
    for (Eigen::Index k = 0; k < d_query.size(); ++k) {
      (*d_reps)(query.source_rows[k], k) += d_query(k);
    }
  }
}

std::vector<PointerDistribution> Score(const Encoder &encoder,
                                       const ParameterSet &params,
                                       const EncodedPair &pair) {
  const ContextualEncoding encoding = encoder.Forward(pair);
  return PointerDistributions(params, encoding, pair,
                              MakeQueries(encoding, pair));
}

LossBreakdown ExampleLossAndGradient(const Encoder &encoder,
                                     const ParameterSet &params,
                                     const EncodedPair &pair,
                                     const std::vector<SlotLabel> &labels,
                                     double weight, ParameterGradients *grads,
                                     uint64_t dropout_seed) {
  ForwardTrace trace;
  const ContextualEncoding encoding =
      encoder.Forward(pair, &trace, dropout_seed);
  const auto queries = MakeQueries(encoding, pair);
  const auto distributions =
      PointerDistributions(params, encoding, pair, queries);
  const LossBreakdown loss = SlotLoss(distributions, labels);
  Matrix d_reps = Matrix::Zero(encoding.reps.rows(), encoding.reps.cols());
  SlotLossBackward(params, encoding, pair, queries, distributions, labels,
                   weight, &d_reps, grads);
  encoder.Backward(trace, d_reps, grads);
  return loss;
}

LossBreakdown ExampleLoss(const Encoder &encoder, const ParameterSet &params,
                          const EncodedPair &pair,
                          const std::vector<SlotLabel> &labels) {
  return SlotLoss(Score(encoder, params, pair), labels);
}

}  // namespace aged
