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

#include "intentkit/fewshot_head.h"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "intentkit/error.h"
#include "intentkit/rng.h"
#include "intentkit/text_util.h"

namespace intentkit {

std::string ActivationName(Activation act) {
  return act == Activation::kTanh ? "tanh" : "relu";
}

Activation ParseActivation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw InvalidArgument("unknown activation '" + name + "'");
}

ClassifierHead::ClassifierHead(std::size_t input_dim, std::size_t hidden_dim,
                               std::vector<std::string> intent_order,
                               Activation activation)
    : activation_(activation), intents_(std::move(intent_order)) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw InvalidArgument("classifier head dimensions must be positive");
  }
  if (intents_.empty()) throw InvalidArgument("classifier head has no intents");
  std::unordered_set<std::string> seen;
  for (const auto& name : intents_) {
    if (!seen.insert(name).second) {
      throw InvalidArgument("duplicate intent '" + name + "' in head");
    }
  }
  shape_ = {input_dim, hidden_dim, intents_.size()};
  w1_.assign(hidden_dim * input_dim, 0.0);
  b1_.assign(hidden_dim, 0.0);
  w2_.assign(intents_.size() * hidden_dim, 0.0);
  b2_.assign(intents_.size(), 0.0);
}

void ClassifierHead::InitializeUniform(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(shape_.input));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(shape_.hidden));
  for (double& w : w1_) w = rng.Uniform(-r1, r1);
  for (double& w : w2_) w = rng.Uniform(-r2, r2);
  std::fill(b1_.begin(), b1_.end(), 0.0);
  std::fill(b2_.begin(), b2_.end(), 0.0);
}

void ClassifierHead::Validate() const {
  const auto& s = shape_;
  if (s.classes != intents_.size() || w1_.size() != s.hidden * s.input ||
      b1_.size() != s.hidden || w2_.size() != s.classes * s.hidden ||
      b2_.size() != s.classes) {
    throw InvalidArgument("classifier head weight shapes are inconsistent");
  }
  for (const auto* v : {&w1_, &b1_, &w2_, &b2_}) {
    for (double x : *v) {
      if (!std::isfinite(x)) {
        throw InvalidArgument("classifier head has a non-finite weight");
      }
    }
  }
}

namespace {

void CheckDim(const ClassifierHead& head, const EmbeddingVector& x) {
  if (x.dim() != head.input_dim()) {
    throw InvalidArgument("embedding dimension " + std::to_string(x.dim()) +
                          " does not match head input " +
                          std::to_string(head.input_dim()));
  }
}

std::vector<double> Pack(const ClassifierHead& head,
                         std::span<const EmbeddingVector> inputs) {
  std::vector<double> x;
  x.reserve(inputs.size() * head.input_dim());
  for (const auto& v : inputs) {
    CheckDim(head, v);
    x.insert(x.end(), v.values.begin(), v.values.end());
  }
  return x;
}

PredictOutcome Decide(const ClassifierHead& head, std::vector<double> probs,
                      double threshold) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  PredictOutcome out;
  out.confidence = probs[best];
  if (out.confidence >= threshold) out.label = head.intent_order()[best];
  out.probabilities = std::move(probs);
  return out;
}

}  // namespace

std::vector<double> Forward(const ClassifierHead& head,
                            const EmbeddingVector& x) {
  CheckDim(head, x);
  std::vector<double> probs(head.num_classes());
  kernels::serial::ForwardBatch(head.shape(), head.activation(),
                                head.weights(), x.values, 1, probs);
  return probs;
}

LossAndGradient ComputeLossAndGrad(const ClassifierHead& head,
                                   std::span<const EmbeddingVector> inputs,
                                   std::span<const int> labels,
                                   double l2_penalty,
                                   kernels::Backend backend) {
  if (inputs.empty()) throw InvalidArgument("loss over an empty batch");
  if (inputs.size() != labels.size()) {
    throw InvalidArgument("inputs and labels differ in length");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= head.num_classes()) {
      throw InvalidArgument("label index " + std::to_string(label) +
                            " out of range [0, " +
                            std::to_string(head.num_classes()) + ")");
    }
  }
  const std::vector<double> x = Pack(head, inputs);

  LossAndGradient out;
  out.grads.w1.resize(head.w1().size());
  out.grads.b1.resize(head.b1().size());
  out.grads.w2.resize(head.w2().size());
  out.grads.b2.resize(head.b2().size());
  out.loss = kernels::LossAndGrad(
      backend, head.shape(), head.activation(), head.weights(), x, labels,
      l2_penalty,
      {out.grads.w1, out.grads.b1, out.grads.w2, out.grads.b2});
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(l2_penalty >= 0.0)) throw InvalidArgument("l2_penalty must be >= 0");
  if (hidden_dim < 1) throw InvalidArgument("hidden_dim must be >= 1");
}

ClassifierHead TrainHeadOnEmbeddings(std::span<const EmbeddingVector> inputs,
                                     std::span<const int> labels,
                                     std::vector<std::string> intent_order,
                                     const TrainConfig& config) {
  config.Validate();
  if (inputs.empty()) throw InvalidArgument("no training examples");
  ClassifierHead head(inputs.front().dim(), config.hidden_dim,
                      std::move(intent_order), config.activation);
  head.InitializeUniform(config.seed);

  const std::vector<double> x = Pack(head, inputs);
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= head.num_classes()) {
      throw InvalidArgument("training label out of range");
    }
  }
  HeadGradients g;
  g.w1.resize(head.w1().size());
  g.b1.resize(head.b1().size());
  g.w2.resize(head.w2().size());
  g.b2.resize(head.b2().size());

  auto step = [&](std::vector<double>& w, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= config.learning_rate * grad[i];
    }
  };
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    kernels::LossAndGrad(config.backend, head.shape(), head.activation(),
                         head.weights(), x, labels, config.l2_penalty,
                         {g.w1, g.b1, g.w2, g.b2});
    step(head.w1(), g.w1);
    step(head.b1(), g.b1);
    step(head.w2(), g.w2);
    step(head.b2(), g.b2);
  }
  head.Validate();
  return head;
}

ClassifierHead TrainHead(const std::vector<LabeledUtterance>& examples,
                         std::vector<std::string> intent_order,
                         const EmbeddingProvider& provider,
                         const TrainConfig& config) {
  config.Validate();
  if (examples.empty()) throw InvalidArgument("no training examples");
  std::unordered_map<std::string, int> position;
  for (std::size_t i = 0; i < intent_order.size(); ++i) {
    position.emplace(intent_order[i], static_cast<int>(i));
  }
  std::vector<std::string> texts;
  std::vector<int> labels;
  texts.reserve(examples.size());
  labels.reserve(examples.size());
  for (const auto& ex : examples) {
    if (ex.is_oos()) throw InvalidArgument("training example is out-of-scope");
    auto it = position.find(*ex.intent);
    if (it == position.end()) {
      throw InvalidArgument("training label '" + *ex.intent +
                            "' is not in the intent order");
    }
    texts.push_back(ex.text);
    labels.push_back(it->second);
  }

  std::vector<EmbeddingVector> inputs;
  try {
    inputs = provider.EmbedBatch(texts);
  } catch (const ProviderError& e) {
    throw ProviderError(e.kind(), e.provider_id(), e.operation(),
                        std::string("while embedding training examples: ") +
                            e.what());
  }
  if (inputs.size() != texts.size()) {
    throw ProviderError(ProviderErrorKind::kMalformedResponse, provider.id(),
                        "embed", "returned " + std::to_string(inputs.size()) +
                                     " vectors for " +
                                     std::to_string(texts.size()) + " texts");
  }
  return TrainHeadOnEmbeddings(inputs, labels, std::move(intent_order),
                               config);
}

ClassifierHead TrainHead(const FewShotSample& sample,
                         const EmbeddingProvider& provider,
                         const TrainConfig& config) {
  std::vector<std::string> order;
  order.reserve(sample.per_intent.size());
  for (const auto& entry : sample.per_intent) order.push_back(entry.intent);
  return TrainHead(sample.Flatten(), std::move(order), provider, config);
}

PredictOutcome Predict(const ClassifierHead& head, const EmbeddingVector& x,
                       double threshold) {
  return Decide(head, Forward(head, x), threshold);
}

std::vector<PredictOutcome> PredictBatch(
    const ClassifierHead& head, std::span<const EmbeddingVector> inputs,
    double threshold, kernels::Backend backend) {
  const std::vector<double> x = Pack(head, inputs);
  const std::size_t n = head.num_classes();
  std::vector<double> probs(inputs.size() * n);
  kernels::ForwardBatch(backend, head.shape(), head.activation(),
                        head.weights(), x, inputs.size(), probs);
  std::vector<PredictOutcome> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.push_back(Decide(head,
                         std::vector<double>(probs.begin() + i * n,
                                             probs.begin() + (i + 1) * n),
                         threshold));
  }
  return out;
}

std::string SerializeHead(const ClassifierHead& head) {
  nlohmann::ordered_json j;
  j["format"] = "intentkit-head-v1";
  j["input_dim"] = head.input_dim();
  j["hidden_dim"] = head.hidden_dim();
  j["num_classes"] = head.num_classes();
  j["activation"] = ActivationName(head.activation());
  j["intent_order"] = head.intent_order();
  j["w1"] = head.w1();
  j["b1"] = head.b1();
  j["w2"] = head.w2();
  j["b2"] = head.b2();
  return j.dump() + "\n";
}

ClassifierHead DeserializeHead(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    const auto d = j.at("input_dim").get<std::size_t>();
    const auto h = j.at("hidden_dim").get<std::size_t>();
    const auto n = j.at("num_classes").get<std::size_t>();
    auto order = j.at("intent_order").get<std::vector<std::string>>();
    if (order.size() != n) {
      throw InvalidArgument("intent_order has " + std::to_string(order.size()) +
                            " names but num_classes is " + std::to_string(n));
    }
    ClassifierHead head(d, h, std::move(order),
                        ParseActivation(j.at("activation").get<std::string>()));
    auto load = [&](const char* key, std::vector<double>& dst) {
      auto src = j.at(key).get<std::vector<double>>();
      if (src.size() != dst.size()) {
        throw InvalidArgument(std::string("weight array '") + key + "' has " +
                              std::to_string(src.size()) + " entries, expected " +
                              std::to_string(dst.size()));
      }
      dst = std::move(src);
    };
    load("w1", head.w1());
    load("b1", head.b1());
    load("w2", head.w2());
    load("b2", head.b2());
    head.Validate();
    return head;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed head document: ") + e.what());
  }
}

void SaveHead(const ClassifierHead& head, const std::string& path) {
  WriteFile(path, SerializeHead(head));
}

ClassifierHead LoadHead(const std::string& path) {
  return DeserializeHead(ReadFile(path));
}

}  // namespace intentkit
