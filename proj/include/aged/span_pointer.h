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

// Slot queries and start/end pointer heads.
//
// Each slot's query is the elementwise max of the encoder rows covering its
// mention surface. The start distribution for a slot is
//   softmax_i( h_i . (W_start q) ),  i over {[CLS], w_1, ..., w_n},
// and likewise for the end distribution with W_end. Index 0 is "no argument".

#ifndef AGED_SPAN_POINTER_H_
#define AGED_SPAN_POINTER_H_

#include <string>
#include <vector>

#include "aged/encoding.h"
#include "aged/neural_core.h"

namespace aged {

struct QueryVector {
  std::string fe;
  Vector q;
  // For every coordinate, the assembled row that supplied the maximum.
  std::vector<int> source_rows;
};

struct PointerDistribution {
  std::string fe;
  std::vector<double> start_probs;  // length n + 1
  std::vector<double> end_probs;

  int n() const { return static_cast<int>(start_probs.size()) - 1; }
};

struct LossBreakdown {
  double loss_start = 0.0;
  double loss_end = 0.0;
  double total = 0.0;  // 0.5 * loss_start + 0.5 * loss_end
};

// One query per slot, in slot order.
std::vector<QueryVector> MakeQueries(const ContextualEncoding &encoding,
                                     const EncodedPair &pair);

std::vector<PointerDistribution> PointerDistributions(
    const ParameterSet &params, const ContextualEncoding &encoding,
    const EncodedPair &pair, const std::vector<QueryVector> &queries);

// Summed over slots. Throws ValidationError on count mismatch or labels
// outside 0..n.
LossBreakdown SlotLoss(const std::vector<PointerDistribution> &distributions,
                       const std::vector<SlotLabel> &labels);

// Gradient of weight * SlotLoss. Adds to d_reps (rows x d_model) and to the
// pointer matrices in grads.
void SlotLossBackward(const ParameterSet &params,
                      const ContextualEncoding &encoding,
                      const EncodedPair &pair,
                      const std::vector<QueryVector> &queries,
                      const std::vector<PointerDistribution> &distributions,
                      const std::vector<SlotLabel> &labels, double weight,
                      Matrix *d_reps, ParameterGradients *grads);

// Forward pass through encoder and heads for one example.
std::vector<PointerDistribution> Score(const Encoder &encoder,
                                       const ParameterSet &params,
                                       const EncodedPair &pair);

// Loss of one example, and weight * its gradient added into grads.
LossBreakdown ExampleLossAndGradient(const Encoder &encoder,
                                     const ParameterSet &params,
                                     const EncodedPair &pair,
                                     const std::vector<SlotLabel> &labels,
                                     double weight, ParameterGradients *grads,
                                     uint64_t dropout_seed = 0);

// Loss of one example without gradients.
LossBreakdown ExampleLoss(const Encoder &encoder, const ParameterSet &params,
                          const EncodedPair &pair,
                          const std::vector<SlotLabel> &labels);

}  // namespace aged

#endif  // AGED_SPAN_POINTER_H_
