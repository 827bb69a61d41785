//
// Copyright 2026 The intentkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef INTENTKIT_FEWSHOT_HEAD_H_
#define INTENTKIT_FEWSHOT_HEAD_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentkit/corpus.h"
#include "intentkit/embedding.h"
#include "intentkit/kernels.h"

namespace intentkit {

using kernels::Activation;

std::string ActivationName(Activation act);
Activation ParseActivation(const std::string& name);

// One hidden layer over frozen sentence embeddings:
//   probs = softmax(W2 * act(W1 * x + b1) + b2)
class ClassifierHead {
 public:
  ClassifierHead() = default;
  // All weights zero. Throws InvalidArgument on empty/duplicate intents or
  // zero dimensions.
  ClassifierHead(std::size_t input_dim, std::size_t hidden_dim,
                 std::vector<std::string> intent_order,
                 Activation activation = Activation::kTanh);

  std::size_t input_dim() const { return shape_.input; }
  std::size_t hidden_dim() const { return shape_.hidden; }
  std::size_t num_classes() const { return shape_.classes; }
  const kernels::DenseShape& shape() const { return shape_; }
  Activation activation() const { return activation_; }
  const std::vector<std::string>& intent_order() const { return intents_; }

  // Row-major H x D, H, N x H, N.
  std::vector<double>& w1() { return w1_; }
  std::vector<double>& b1() { return b1_; }
  std::vector<double>& w2() { return w2_; }
  std::vector<double>& b2() { return b2_; }
  const std::vector<double>& w1() const { return w1_; }
  const std::vector<double>& b1() const { return b1_; }
  const std::vector<double>& w2() const { return w2_; }
  const std::vector<double>& b2() const { return b2_; }

  kernels::DenseWeights weights() const { return {w1_, b1_, w2_, b2_}; }

  // Weights drawn uniformly from +-1/sqrt(fan_in) with SplitMix64(seed),
  // W1 then W2 in row-major order; biases zero.
  void InitializeUniform(std::uint64_t seed);

  // Throws InvalidArgument when shapes disagree or a weight is not finite.
  void Validate() const;

  bool operator==(const ClassifierHead&) const = default;

 private:
  kernels::DenseShape shape_;
  Activation activation_ = Activation::kTanh;
  std::vector<std::string> intents_;
  std::vector<double> w1_, b1_, w2_, b2_;
};

struct HeadGradients {
  std::vector<double> w1, b1, w2, b2;
};

struct LossAndGradient {
  double loss = 0.0;
  HeadGradients grads;
};

// Class probabilities for one embedding. Throws on dimension mismatch.
std::vector<double> Forward(const ClassifierHead& head,
                            const EmbeddingVector& x);

// Mean cross-entropy + l2/2 * (|W1|^2 + |W2|^2) and its exact gradient.
// Throws InvalidArgument on an empty batch, a label outside [0, N) or a
// dimension mismatch.
LossAndGradient ComputeLossAndGrad(
    const ClassifierHead& head, std::span<const EmbeddingVector> inputs,
    std::span<const int> labels, double l2_penalty,
    kernels::Backend backend = kernels::Backend::kParallel);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  std::uint64_t seed = 0;
  double l2_penalty = 1e-4;
  std::size_t hidden_dim = 256;
  Activation activation = Activation::kTanh;
  kernels::Backend backend = kernels::Backend::kParallel;

  // Throws InvalidArgument unless lr > 0, epochs >= 1, l2 >= 0, H >= 1.
  void Validate() const;
};

// Full-batch gradient descent from a seeded initialization.
ClassifierHead TrainHeadOnEmbeddings(std::span<const EmbeddingVector> inputs,
                                     std::span<const int> labels,
                                     std::vector<std::string> intent_order,
                                     const TrainConfig& config);

// Embeds every example once with the frozen provider, then trains.
// `intent_order` fixes output positions; every example label must be in it.
ClassifierHead TrainHead(const std::vector<LabeledUtterance>& examples,
                         std::vector<std::string> intent_order,
                         const EmbeddingProvider& provider,
                         const TrainConfig& config);

// Uses the sample's intent order (every dataset intent).
ClassifierHead TrainHead(const FewShotSample& sample,
                         const EmbeddingProvider& provider,
                         const TrainConfig& config);

struct PredictOutcome {
  std::optional<std::string> label;  // nullopt = out-of-scope
  double confidence = 0.0;
  std::vector<double> probabilities;
};

// argmax intent if its probability >= threshold, else out-of-scope. Ties go
// to the earliest intent in intent_order.
PredictOutcome Predict(const ClassifierHead& head, const EmbeddingVector& x,
                       double threshold = 0.0);

std::vector<PredictOutcome> PredictBatch(
    const ClassifierHead& head, std::span<const EmbeddingVector> inputs,
    double threshold = 0.0,
    kernels::Backend backend = kernels::Backend::kParallel);

// Single JSON document: dimensions, intent_order, activation, row-major
// weight arrays. Loading validates every shape.
std::string SerializeHead(const ClassifierHead& head);
ClassifierHead DeserializeHead(const std::string& json_text);
void SaveHead(const ClassifierHead& head, const std::string& path);
ClassifierHead LoadHead(const std::string& path);

}  // namespace intentkit

#endif  // INTENTKIT_FEWSHOT_HEAD_H_
