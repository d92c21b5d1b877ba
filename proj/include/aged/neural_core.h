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

// A small pre-normalization transformer encoder with exact reverse-mode
// gradients.
//
//   x_0   = E_tok[id] + E_pos[i] + E_seg[segment]
//   x'    = x + Attn(LN1(x))                      (multi-head, bidirectional)
//   x''   = x' + W_2 GELU(W_1 LN2(x') + b_1) + b_2
//   H     = LN_final(x_L)
//
// Weights are stored in double precision; the encoder computes in float or
// double depending on EncoderConfig::dtype. The pointer matrices of the span
// heads live in the same ParameterSet.

#ifndef AGED_NEURAL_CORE_H_
#define AGED_NEURAL_CORE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "aged/encoding.h"

namespace aged {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class DType { kF32, kF64 };

struct EncoderConfig {
  int d_model = 32;
  int n_layers = 2;
  int n_heads = 4;
  int d_ff = 128;
  int max_len = 256;
  int vocab_size = kNumReservedTokens;
  uint64_t seed = 7;
  DType dtype = DType::kF32;
  double dropout = 0.0;

  // Throws ValidationError.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  static EncoderConfig FromJson(const nlohmann::ordered_json &json);

  bool operator==(const EncoderConfig &) const = default;
};

// Dense row-major tensor of rank 1 or 2.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  int rows() const { return shape.size() == 1 ? 1 : shape[0]; }
  int cols() const { return shape.back(); }

  Eigen::Map<Matrix> matrix() {
    return Eigen::Map<Matrix>(data.data(), rows(), cols());
  }
  Eigen::Map<const Matrix> matrix() const {
    return Eigen::Map<const Matrix>(data.data(), rows(), cols());
  }

  bool operator==(const Tensor &) const = default;
};

// Named tensors in registration order. Also used for gradients.
class ParameterSet {
 public:
  Tensor &Add(const std::string &name, std::vector<int> shape);

  bool Has(const std::string &name) const { return index_.count(name) > 0; }
  Tensor &at(const std::string &name);
  const Tensor &at(const std::string &name) const;

  const std::vector<std::string> &names() const { return names_; }
  size_t size() const { return tensors_.size(); }
  Tensor &operator[](size_t i) { return tensors_[i]; }
  const Tensor &operator[](size_t i) const { return tensors_[i]; }
  size_t element_count() const;

  // Same names and shapes, all zeros.
  ParameterSet ZerosLike() const;
  // this += scale * other; shapes must match.
  void AddScaled(const ParameterSet &other, double scale);
  void Scale(double factor);
  double SquaredNorm() const;
  bool AllFinite() const;

  // Object keyed by name, in registration order.
  nlohmann::ordered_json ToJson() const;
  static ParameterSet FromJson(const nlohmann::ordered_json &json);

  bool operator==(const ParameterSet &other) const {
    return names_ == other.names_ && tensors_ == other.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::unordered_map<std::string, size_t> index_;
};

using ParameterGradients = ParameterSet;

inline constexpr const char *kPointerStart = "pointer.start";
inline constexpr const char *kPointerEnd = "pointer.end";

// Allocates every encoder tensor plus the pointer matrices. Matrices and
// embeddings are drawn uniformly with fan-scaled bounds from a generator
// seeded by config.seed; normalization gains are 1 and biases 0.
ParameterSet InitParameters(const EncoderConfig &config);

// One row per assembled token, width d_model.
struct ContextualEncoding {
  Matrix reps;
};

class ForwardTrace;

// Evaluates the encoder for a fixed ParameterSet. Construction converts the
// weights to the working precision once; Forward and Backward are const and
// may run concurrently on distinct traces.
class Encoder {
 public:
  Encoder(const ParameterSet &params, const EncoderConfig &config);
  ~Encoder();
  Encoder(Encoder &&) noexcept;
  Encoder &operator=(Encoder &&) noexcept;

  const EncoderConfig &config() const;

  // Throws ValidationError for overlength input or out-of-range ids. When a
  // trace is given, intermediate values needed by Backward are recorded and
  // dropout (if configured) is applied using dropout_seed.
  ContextualEncoding Forward(const EncodedPair &pair,
                             ForwardTrace *trace = nullptr,
                             uint64_t dropout_seed = 0) const;

  // Accumulates d(loss)/d(param) into grads given d(loss)/d(reps).
  void Backward(const ForwardTrace &trace, const Matrix &upstream,
                ParameterGradients *grads) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Saved activations of one forward pass.
class ForwardTrace {
 public:
  ForwardTrace();
  ~ForwardTrace();
  ForwardTrace(ForwardTrace &&) noexcept;
  ForwardTrace &operator=(ForwardTrace &&) noexcept;

  // Attention probabilities, indexed [layer * n_heads + head], each L x L.
  std::vector<Matrix> AttentionWeights() const;

 private:
  friend class Encoder;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Stateless conveniences over Encoder.
ContextualEncoding Forward(const ParameterSet &params,
                           const EncoderConfig &config,
                           const EncodedPair &pair);
ParameterGradients Backward(const ParameterSet &params,
                            const EncoderConfig &config,
                            const EncodedPair &pair, const Matrix &upstream);

}  // namespace aged

#endif  // AGED_NEURAL_CORE_H_
