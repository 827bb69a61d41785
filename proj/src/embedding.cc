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

#include "intentkit/embedding.h"

#include <algorithm>
#include <cmath>

#include "intentkit/error.h"
#include "intentkit/rng.h"
#include "intentkit/text_util.h"

namespace intentkit {

EmbeddingVector BasisVector(std::size_t dim, std::size_t index) {
  EmbeddingVector v;
  v.values.assign(dim, 0.0);
  if (index < dim) v.values[index] = 1.0;
  return v;
}

double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

bool NormalizeInPlace(EmbeddingVector& v) {
  const double norm = L2Norm(v.values);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (double& x : v.values) x /= norm;
  return true;
}

double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("cosine similarity: dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

EmbeddingVector Centroid(std::span<const EmbeddingVector> vectors) {
  if (vectors.empty()) throw InvalidArgument("centroid of an empty list");
  const std::size_t dim = vectors.front().dim();
  EmbeddingVector mean;
  mean.values.assign(dim, 0.0);
  for (const auto& v : vectors) {
    if (v.dim() != dim) throw InvalidArgument("centroid: mixed dimensions");
    for (std::size_t i = 0; i < dim; ++i) mean.values[i] += v.values[i];
  }
  for (double& x : mean.values) x /= static_cast<double>(vectors.size());
  if (L2Norm(mean.values) < 1e-12 || !NormalizeInPlace(mean)) {
    return BasisVector(dim, 0);
  }
  return mean;
}

EmbeddingVector HashEmbed(std::string_view text, std::size_t dim) {
  if (dim < 8) throw InvalidArgument("hash embedding dimension must be >= 8");

  std::string lowered = AsciiLower(TrimWhitespace(text));
  if (lowered.empty()) return BasisVector(dim, 0);

  std::string padded = " ";
  bool in_space = false;
  for (char c : lowered) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                       c == '\f' || c == '\v';
    if (space) {
      if (!in_space) padded += ' ';
      in_space = true;
    } else {
      padded += c;
      in_space = false;
    }
  }
  padded += ' ';

  const std::uint64_t basis = 0xCBF29CE484222325ULL ^ kTrigramHashSeed;
  EmbeddingVector v;
  v.values.assign(dim, 0.0);
  const std::string_view view(padded);
  for (std::size_t i = 0; i + 3 <= view.size(); ++i) {
    const std::uint64_t h = Fnv1a64(view.substr(i, 3), basis);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v.values[h % dim] += sign;
  }
  if (!NormalizeInPlace(v)) return BasisVector(dim, 0);
  return v;
}

EmbeddingVector EmbeddingProvider::Embed(const std::string& text) const {
  auto out = EmbedBatch(std::span<const std::string>(&text, 1));
  return std::move(out.front());
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim_ < 8) throw InvalidArgument("hash embedding dimension must be >= 8");
}

std::vector<EmbeddingVector> HashEmbeddingProvider::EmbedBatch(
    std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(HashEmbed(t, dim_));
  return out;
}

}  // namespace intentkit
