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

#include "aged/neural_core.h"

#include <cmath>
#include <random>
#include <variant>

#include "aged/errors.h"

namespace aged {

// ---------------------------------------------------------------------------
// EncoderConfig

void EncoderConfig::Validate() const {
  if (d_model < 1 || n_layers < 1 || n_heads < 1 || d_ff < 1 || max_len < 1 ||
      vocab_size < 1) {
    throw ValidationError("encoder dimensions must all be >= 1");
  }
  if (d_model % n_heads != 0) {
    throw ValidationError("d_model " + std::to_string(d_model) +
                          " is not divisible by n_heads " +
                          std::to_string(n_heads));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
}

nlohmann::ordered_json EncoderConfig::ToJson() const {
  return {{"d_model", d_model},   {"n_layers", n_layers},
          {"n_heads", n_heads},   {"d_ff", d_ff},
          {"max_len", max_len},   {"vocab_size", vocab_size},
          {"seed", seed},         {"dtype", dtype == DType::kF32 ? "f32" : "f64"},
          {"dropout", dropout}};
}

EncoderConfig EncoderConfig::FromJson(const nlohmann::ordered_json &json) {
  EncoderConfig config;
  config.d_model = json.at("d_model").get<int>();
  config.n_layers = json.at("n_layers").get<int>();
  config.n_heads = json.at("n_heads").get<int>();
  config.d_ff = json.at("d_ff").get<int>();
  config.max_len = json.at("max_len").get<int>();
  config.vocab_size = json.at("vocab_size").get<int>();
  config.seed = json.at("seed").get<uint64_t>();
  const auto dtype = json.value("dtype", std::string("f32"));
  if (dtype != "f32" && dtype != "f64") {
    throw ValidationError("unknown dtype \"" + dtype + "\"");
  }
  config.dtype = dtype == "f64" ? DType::kF64 : DType::kF32;
  config.dropout = json.value("dropout", 0.0);
  config.Validate();
  return config;
}

// ---------------------------------------------------------------------------
// ParameterSet

Tensor &ParameterSet::Add(const std::string &name, std::vector<int> shape) {
  if (Has(name)) throw ValidationError("duplicate parameter " + name);
  size_t count = 1;
  for (int dim : shape) count *= static_cast<size_t>(dim);
  index_.emplace(name, tensors_.size());
  names_.push_back(name);
  tensors_.push_back(Tensor{std::move(shape), std::vector<double>(count, 0.0)});
  return tensors_.back();
}

Tensor &ParameterSet::at(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValidationError("no parameter " + name);
  return tensors_[it->second];
}

const Tensor &ParameterSet::at(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValidationError("no parameter " + name);
  return tensors_[it->second];
}

size_t ParameterSet::element_count() const {
  size_t count = 0;
  for (const auto &t : tensors_) count += t.data.size();
  return count;
}

ParameterSet ParameterSet::ZerosLike() const {
  ParameterSet zeros;
  for (size_t i = 0; i < size(); ++i) zeros.Add(names_[i], tensors_[i].shape);
  return zeros;
}

void ParameterSet::AddScaled(const ParameterSet &other, double scale) {
  if (other.names_ != names_) throw ValidationError("parameter sets differ");
  for (size_t i = 0; i < size(); ++i) {
    auto &dst = tensors_[i].data;
    const auto &src = other.tensors_[i].data;
    if (dst.size() != src.size()) {
      throw ValidationError("shape mismatch for " + names_[i]);
    }
    for (size_t j = 0; j < dst.size(); ++j) dst[j] += scale * src[j];
  }
}

void ParameterSet::Scale(double factor) {
  for (auto &t : tensors_) {
    for (auto &v : t.data) v *= factor;
  }
}

double ParameterSet::SquaredNorm() const {
  double sum = 0.0;
  for (const auto &t : tensors_) {
    for (double v : t.data) sum += v * v;
  }
  return sum;
}

bool ParameterSet::AllFinite() const {
  for (const auto &t : tensors_) {
    for (double v : t.data) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

nlohmann::ordered_json ParameterSet::ToJson() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (size_t i = 0; i < size(); ++i) {
    out[names_[i]] = {{"shape", tensors_[i].shape},
                      {"data", tensors_[i].data}};
  }
  return out;
}

ParameterSet ParameterSet::FromJson(const nlohmann::ordered_json &json) {
  ParameterSet params;
  for (const auto &[name, value] : json.items()) {
    Tensor &t = params.Add(name, value.at("shape").get<std::vector<int>>());
    auto data = value.at("data").get<std::vector<double>>();
    if (data.size() != t.data.size()) {
      throw ValidationError("parameter " + name + " has " +
                            std::to_string(data.size()) +
                            " values, shape needs " +
                            std::to_string(t.data.size()));
    }
    t.data = std::move(data);
  }
  return params;
}

// ---------------------------------------------------------------------------
// Parameter layout

namespace {

std::string LayerName(int layer, const char *suffix) {
  return "layer" + std::to_string(layer) + "." + suffix;
}

void FillUniform(Tensor &t, double bound, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto &v : t.data) v = dist(rng);
}

}  // namespace

ParameterSet InitParameters(const EncoderConfig &config) {
  config.Validate();
  const int d = config.d_model;
  std::mt19937_64 rng(config.seed);
  ParameterSet params;
  auto embedding = [&](const std::string &name, int rows) {
    FillUniform(params.Add(name, {rows, d}), std::sqrt(3.0 / d), rng);
  };
  auto linear = [&](const std::string &name, int in, int out) {
    FillUniform(params.Add(name, {in, out}), std::sqrt(6.0 / (in + out)), rng);
  };
  auto bias = [&](const std::string &name, int width) {
    params.Add(name, {width});
  };
  auto norm = [&](const std::string &prefix) {
    for (auto &v : params.Add(prefix + ".gain", {d}).data) v = 1.0;
    bias(prefix + ".bias", d);
  };

  embedding("embed.token", config.vocab_size);
  embedding("embed.position", config.max_len);
  embedding("embed.segment", 2);
  for (int l = 0; l < config.n_layers; ++l) {
    norm(LayerName(l, "norm1"));
    for (const char *proj : {"query", "key", "value", "output"}) {
      const std::string prefix = LayerName(l, "attn.") + proj;
      linear(prefix + ".weight", d, d);
      // A key bias adds the same amount to every score of a query, which
      // the softmax discards, so keys carry no bias.
      if (std::string(proj) != "key") bias(prefix + ".bias", d);
    }
    norm(LayerName(l, "norm2"));
    linear(LayerName(l, "ffn.in.weight"), d, config.d_ff);
    bias(LayerName(l, "ffn.in.bias"), config.d_ff);
    linear(LayerName(l, "ffn.out.weight"), config.d_ff, d);
    bias(LayerName(l, "ffn.out.bias"), d);
  }
  norm("final_norm");
  linear(kPointerStart, d, d);
  linear(kPointerEnd, d, d);
  return params;
}

// ---------------------------------------------------------------------------
// Encoder math, generic over the working precision.

namespace {

constexpr double kNormEpsilon = 1e-5;

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Row = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename T>
Mat<T> CastMatrix(const ParameterSet &params, const std::string &name) {
  return params.at(name).matrix().template cast<T>();
}

template <typename T>
Row<T> CastRow(const ParameterSet &params, const std::string &name) {
  const Tensor &t = params.at(name);
  return Eigen::Map<const Row<double>>(t.data.data(), t.data.size())
      .template cast<T>();
}

template <typename T>
struct NormWeights {
  Row<T> gain;
  Row<T> bias;
};

template <typename T>
struct LayerWeights {
  NormWeights<T> norm1, norm2;
  Mat<T> wq, wk, wv, wo, w_in, w_out;
  Row<T> bq, bv, bo, b_in, b_out;
};

template <typename T>
struct Weights {
  Mat<T> token, position, segment;
  std::vector<LayerWeights<T>> layers;
  NormWeights<T> final_norm;

  Weights(const ParameterSet &p, const EncoderConfig &config) {
    token = CastMatrix<T>(p, "embed.token");
    position = CastMatrix<T>(p, "embed.position");
    segment = CastMatrix<T>(p, "embed.segment");
    if (token.rows() != config.vocab_size || token.cols() != config.d_model ||
        position.rows() != config.max_len) {
      throw ValidationError("parameter shapes do not match encoder config");
    }
    auto norm = [&](const std::string &prefix) {
      return NormWeights<T>{CastRow<T>(p, prefix + ".gain"),
                            CastRow<T>(p, prefix + ".bias")};
    };
    for (int l = 0; l < config.n_layers; ++l) {
      LayerWeights<T> w;
      w.norm1 = norm(LayerName(l, "norm1"));
      w.norm2 = norm(LayerName(l, "norm2"));
      w.wq = CastMatrix<T>(p, LayerName(l, "attn.query.weight"));
      w.wk = CastMatrix<T>(p, LayerName(l, "attn.key.weight"));
      w.wv = CastMatrix<T>(p, LayerName(l, "attn.value.weight"));
      w.wo = CastMatrix<T>(p, LayerName(l, "attn.output.weight"));
      w.bq = CastRow<T>(p, LayerName(l, "attn.query.bias"));
      w.bv = CastRow<T>(p, LayerName(l, "attn.value.bias"));
      w.bo = CastRow<T>(p, LayerName(l, "attn.output.bias"));
      w.w_in = CastMatrix<T>(p, LayerName(l, "ffn.in.weight"));
      w.b_in = CastRow<T>(p, LayerName(l, "ffn.in.bias"));
      w.w_out = CastMatrix<T>(p, LayerName(l, "ffn.out.weight"));
      w.b_out = CastRow<T>(p, LayerName(l, "ffn.out.bias"));
      layers.push_back(std::move(w));
    }
    final_norm = norm("final_norm");
  }
};

template <typename T>
struct NormCache {
  Mat<T> normalized;  // (x - mean) / std
  Row<T> inv_std;     // per row, stored as a row vector of length L
};

template <typename T>
struct LayerCache {
  NormCache<T> norm1, norm2;
  Mat<T> attn_in;           // LN1 output
  Mat<T> q, k, v;           // projections, L x d
  std::vector<Mat<T>> probs;  // per head, L x L
  Mat<T> context;           // concatenated head outputs, L x d
  Mat<T> attn_mask;         // dropout mask on the attention branch (or empty)
  Mat<T> ffn_in;            // LN2 output
  Mat<T> pre_act;           // L x d_ff
  Mat<T> act;               // GELU(pre_act)
  Mat<T> ffn_mask;
};

template <typename T>
struct Trace {
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<LayerCache<T>> layers;
  NormCache<T> final_norm;
};

template <typename T>
Mat<T> NormForward(const Mat<T> &x, const NormWeights<T> &w,
                   NormCache<T> *cache) {
  const Eigen::Index rows = x.rows();
  Mat<T> normalized(rows, x.cols());
  Row<T> inv_std(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const T mean = x.row(i).mean();
    const Row<T> centered = x.row(i).array() - mean;
    const T var = centered.squaredNorm() / static_cast<T>(x.cols());
    inv_std(i) = T(1) / std::sqrt(var + static_cast<T>(kNormEpsilon));
    normalized.row(i) = centered * inv_std(i);
  }
  Mat<T> out = (normalized.array().rowwise() * w.gain.array()).rowwise() +
               w.bias.array();
  if (cache != nullptr) *cache = NormCache<T>{std::move(normalized), inv_std};
  return out;
}

// Returns d(loss)/d(x); accumulates gain/bias gradients.
template <typename T>
Mat<T> NormBackward(const Mat<T> &upstream, const NormWeights<T> &w,
                    const NormCache<T> &cache, Row<T> *d_gain,
                    Row<T> *d_bias) {
  *d_gain += (upstream.array() * cache.normalized.array()).colwise().sum().matrix();
  *d_bias += upstream.colwise().sum();
  const Mat<T> d_norm = upstream.array().rowwise() * w.gain.array();
  const T width = static_cast<T>(upstream.cols());
  Mat<T> dx(upstream.rows(), upstream.cols());
  for (Eigen::Index i = 0; i < upstream.rows(); ++i) {
    const T mean_d = d_norm.row(i).sum() / width;
    const T mean_dx = d_norm.row(i).dot(cache.normalized.row(i)) / width;
    dx.row(i) = cache.inv_std(i) *
                (d_norm.row(i).array() - mean_d -
                 cache.normalized.row(i).array() * mean_dx)
                    .matrix();
  }
  return dx;
}

template <typename T>
T Gelu(T x) {
  return T(0.5) * x * (T(1) + std::erf(x / std::sqrt(T(2))));
}

template <typename T>
T GeluGrad(T x) {
  const T cdf = T(0.5) * (T(1) + std::erf(x / std::sqrt(T(2))));
  const T pdf = std::exp(T(-0.5) * x * x) / std::sqrt(T(2) * T(M_PI));
  return cdf + x * pdf;
}

template <typename T>
void SoftmaxRowsInPlace(Mat<T> &m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const T top = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - top).exp().matrix();
    m.row(i) /= m.row(i).sum();
  }
}

template <typename T>
Mat<T> DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate,
                   std::mt19937_64 &rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const T scale = static_cast<T>(1.0 / (1.0 - rate));
  Mat<T> mask(rows, cols);
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = keep(rng) ? scale : T(0);
  }
  return mask;
}

template <typename T>
class TypedEncoder {
 public:
  using Scalar = T;

  TypedEncoder(const ParameterSet &params, const EncoderConfig &config)
      : config_(config), w_(params, config) {}

  Mat<T> Forward(const EncodedPair &pair, Trace<T> *trace,
                 uint64_t dropout_seed) const {
    const int length = pair.length();
    const int d = config_.d_model;
    const int heads = config_.n_heads;
    const int dh = d / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    const bool dropout = trace != nullptr && config_.dropout > 0.0;
    std::mt19937_64 rng(dropout_seed);

    Mat<T> x(length, d);
    for (int i = 0; i < length; ++i) {
      x.row(i) = w_.token.row(pair.ids[i]) + w_.position.row(i) +
                 w_.segment.row(static_cast<int>(pair.segment[i]));
    }
    if (trace != nullptr) {
      trace->ids = pair.ids;
      trace->segments.clear();
      for (auto s : pair.segment) trace->segments.push_back(static_cast<int>(s));
      trace->layers.assign(config_.n_layers, LayerCache<T>{});
    }

    for (int l = 0; l < config_.n_layers; ++l) {
      const auto &lw = w_.layers[l];
      LayerCache<T> local;
      LayerCache<T> &c = trace ? trace->layers[l] : local;

      c.attn_in = NormForward(x, lw.norm1, &c.norm1);
      c.q = (c.attn_in * lw.wq).rowwise() + lw.bq;
      c.k = c.attn_in * lw.wk;
      c.v = (c.attn_in * lw.wv).rowwise() + lw.bv;
      c.context.resize(length, d);
      c.probs.assign(heads, Mat<T>());
      for (int h = 0; h < heads; ++h) {
        Mat<T> scores = (c.q.middleCols(h * dh, dh) *
                         c.k.middleCols(h * dh, dh).transpose()) *
                        scale;
        SoftmaxRowsInPlace(scores);
        c.context.middleCols(h * dh, dh) = scores * c.v.middleCols(h * dh, dh);
        c.probs[h] = std::move(scores);
      }
      Mat<T> branch = (c.context * lw.wo).rowwise() + lw.bo;
      if (dropout) {
        c.attn_mask = DropoutMask<T>(length, d, config_.dropout, rng);
        branch = branch.cwiseProduct(c.attn_mask);
      }
      x += branch;

      c.ffn_in = NormForward(x, lw.norm2, &c.norm2);
      c.pre_act = (c.ffn_in * lw.w_in).rowwise() + lw.b_in;
      c.act = c.pre_act.unaryExpr([](T v) { return Gelu(v); });
      branch = (c.act * lw.w_out).rowwise() + lw.b_out;
      if (dropout) {
        c.ffn_mask = DropoutMask<T>(length, d, config_.dropout, rng);
        branch = branch.cwiseProduct(c.ffn_mask);
      }
      x += branch;
    }
    NormCache<T> local_final;
    return NormForward(x, w_.final_norm,
                       trace ? &trace->final_norm : &local_final);
  }

  void Backward(const Trace<T> &trace, const Matrix &upstream,
                ParameterGradients *grads) const {
    const int length = static_cast<int>(trace.ids.size());
    const int d = config_.d_model;
    const int heads = config_.n_heads;
    const int dh = d / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    if (upstream.rows() != length || upstream.cols() != d) {
      throw ValidationError("upstream gradient shape mismatch");
    }

    // Gradients are accumulated in the working precision, then added to the
    // double-precision buffer.
    auto add_matrix = [&](const std::string &name, const Mat<T> &g) {
      grads->at(name).matrix() += g.template cast<double>();
    };
    auto add_row = [&](const std::string &name, const Row<T> &g) {
      Tensor &t = grads->at(name);
      Eigen::Map<Row<double>>(t.data.data(), t.data.size()) +=
          g.template cast<double>();
    };

    Row<T> d_gain = Row<T>::Zero(d), d_bias = Row<T>::Zero(d);
    Mat<T> dx = NormBackward<T>(upstream.template cast<T>(), w_.final_norm,
                                trace.final_norm, &d_gain, &d_bias);
    add_row("final_norm.gain", d_gain);
    add_row("final_norm.bias", d_bias);

    for (int l = config_.n_layers - 1; l >= 0; --l) {
      const auto &lw = w_.layers[l];
      const auto &c = trace.layers[l];

      // Feed-forward branch.
      Mat<T> d_branch = c.ffn_mask.size() ? Mat<T>(dx.cwiseProduct(c.ffn_mask))
                                          : dx;
      add_matrix(LayerName(l, "ffn.out.weight"), c.act.transpose() * d_branch);
      add_row(LayerName(l, "ffn.out.bias"), d_branch.colwise().sum());
      Mat<T> d_pre = (d_branch * lw.w_out.transpose())
                         .cwiseProduct(c.pre_act.unaryExpr(
                             [](T v) { return GeluGrad(v); }));
      add_matrix(LayerName(l, "ffn.in.weight"), c.ffn_in.transpose() * d_pre);
      add_row(LayerName(l, "ffn.in.bias"), d_pre.colwise().sum());
      d_gain.setZero();
      d_bias.setZero();
      dx += NormBackward<T>(d_pre * lw.w_in.transpose(), lw.norm2, c.norm2,
                            &d_gain, &d_bias);
      add_row(LayerName(l, "norm2.gain"), d_gain);
      add_row(LayerName(l, "norm2.bias"), d_bias);

      // Attention branch.
      d_branch = c.attn_mask.size() ? Mat<T>(dx.cwiseProduct(c.attn_mask)) : dx;
      add_matrix(LayerName(l, "attn.output.weight"),
                 c.context.transpose() * d_branch);
      add_row(LayerName(l, "attn.output.bias"), d_branch.colwise().sum());
      const Mat<T> d_context = d_branch * lw.wo.transpose();
      Mat<T> dq(length, d), dk(length, d), dv(length, d);
      for (int h = 0; h < heads; ++h) {
        const Mat<T> &p = c.probs[h];
        const auto d_head = d_context.middleCols(h * dh, dh);
        const Mat<T> d_probs = d_head * c.v.middleCols(h * dh, dh).transpose();
        dv.middleCols(h * dh, dh) = p.transpose() * d_head;
        const Eigen::Matrix<T, Eigen::Dynamic, 1> row_dot =
            p.cwiseProduct(d_probs).rowwise().sum();
        const Mat<T> d_scores =
            p.cwiseProduct(d_probs.colwise() - row_dot) * scale;
        dq.middleCols(h * dh, dh) = d_scores * c.k.middleCols(h * dh, dh);
        dk.middleCols(h * dh, dh) =
            d_scores.transpose() * c.q.middleCols(h * dh, dh);
      }
      add_matrix(LayerName(l, "attn.query.weight"), c.attn_in.transpose() * dq);
      add_matrix(LayerName(l, "attn.key.weight"), c.attn_in.transpose() * dk);
      add_matrix(LayerName(l, "attn.value.weight"), c.attn_in.transpose() * dv);
      add_row(LayerName(l, "attn.query.bias"), dq.colwise().sum());
      add_row(LayerName(l, "attn.value.bias"), dv.colwise().sum());
      const Mat<T> d_attn_in = dq * lw.wq.transpose() + dk * lw.wk.transpose() +
                               dv * lw.wv.transpose();
      d_gain.setZero();
      d_bias.setZero();
      dx += NormBackward<T>(d_attn_in, lw.norm1, c.norm1, &d_gain, &d_bias);
      add_row(LayerName(l, "norm1.gain"), d_gain);
      add_row(LayerName(l, "norm1.bias"), d_bias);
    }

    Tensor &token = grads->at("embed.token");
    Tensor &position = grads->at("embed.position");
    Tensor &segment = grads->at("embed.segment");
    for (int i = 0; i < length; ++i) {
      const Row<double> g = dx.row(i).template cast<double>();
      token.matrix().row(trace.ids[i]) += g;
      position.matrix().row(i) += g;
      segment.matrix().row(trace.segments[i]) += g;
    }
  }

 private:
  EncoderConfig config_;
  Weights<T> w_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Type-erased wrappers

struct ForwardTrace::Impl {
  std::variant<Trace<float>, Trace<double>> trace;
};

ForwardTrace::ForwardTrace() : impl_(std::make_unique<Impl>()) {}
ForwardTrace::~ForwardTrace() = default;
ForwardTrace::ForwardTrace(ForwardTrace &&) noexcept = default;
ForwardTrace &ForwardTrace::operator=(ForwardTrace &&) noexcept = default;

std::vector<Matrix> ForwardTrace::AttentionWeights() const {
  std::vector<Matrix> out;
  std::visit(
      [&](const auto &trace) {
        for (const auto &layer : trace.layers) {
          for (const auto &p : layer.probs) {
            out.push_back(p.template cast<double>());
          }
        }
      },
      impl_->trace);
  return out;
}

struct Encoder::Impl {
  EncoderConfig config;
  std::variant<TypedEncoder<float>, TypedEncoder<double>> typed;

  static decltype(typed) Make(const ParameterSet &params,
                              const EncoderConfig &config) {
    if (config.dtype == DType::kF64) {
      return TypedEncoder<double>(params, config);
    }
    return TypedEncoder<float>(params, config);
  }

  Impl(const ParameterSet &params, const EncoderConfig &cfg)
      : config(cfg), typed(Make(params, cfg)) {}
};

Encoder::Encoder(const ParameterSet &params, const EncoderConfig &config) {
  config.Validate();
  impl_ = std::make_unique<Impl>(params, config);
}
Encoder::~Encoder() = default;
Encoder::Encoder(Encoder &&) noexcept = default;
Encoder &Encoder::operator=(Encoder &&) noexcept = default;

const EncoderConfig &Encoder::config() const { return impl_->config; }

ContextualEncoding Encoder::Forward(const EncodedPair &pair,
                                    ForwardTrace *trace,
                                    uint64_t dropout_seed) const {
  const auto &config = impl_->config;
  if (pair.length() > config.max_len) {
    throw ValidationError("input length " + std::to_string(pair.length()) +
                          " exceeds max_len " + std::to_string(config.max_len));
  }
  if (pair.length() == 0) throw ValidationError("empty input");
  for (int id : pair.ids) {
    if (id < 0 || id >= config.vocab_size) {
      throw ValidationError("token id " + std::to_string(id) +
                            " outside vocabulary of size " +
                            std::to_string(config.vocab_size));
    }
  }
  return std::visit(
      [&](const auto &encoder) {
        using T = typename std::decay_t<decltype(encoder)>::Scalar;
        Trace<T> *typed_trace = nullptr;
        if (trace != nullptr) {
          trace->impl_->trace = Trace<T>{};
          typed_trace = &std::get<Trace<T>>(trace->impl_->trace);
        }
        Matrix reps =
            encoder.Forward(pair, typed_trace, dropout_seed).template cast<double>();
        return ContextualEncoding{std::move(reps)};
      },
      impl_->typed);
}

void Encoder::Backward(const ForwardTrace &trace, const Matrix &upstream,
                       ParameterGradients *grads) const {
  std::visit(
      [&](const auto &encoder) {
        using T = typename std::decay_t<decltype(encoder)>::Scalar;
        const auto *typed_trace = std::get_if<Trace<T>>(&trace.impl_->trace);
        if (typed_trace == nullptr) {
          throw ValidationError("trace precision does not match encoder");
        }
        encoder.Backward(*typed_trace, upstream, grads);
      },
      impl_->typed);
}

ContextualEncoding Forward(const ParameterSet &params,
                           const EncoderConfig &config,
                           const EncodedPair &pair) {
  return Encoder(params, config).Forward(pair);
}

ParameterGradients Backward(const ParameterSet &params,
                            const EncoderConfig &config,
                            const EncodedPair &pair, const Matrix &upstream) {
  Encoder encoder(params, config);
  ForwardTrace trace;
  encoder.Forward(pair, &trace);
  ParameterGradients grads = params.ZerosLike();
  encoder.Backward(trace, upstream, &grads);
  return grads;
}

}  // namespace aged
