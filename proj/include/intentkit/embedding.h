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

#ifndef INTENTKIT_EMBEDDING_H_
#define INTENTKIT_EMBEDDING_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intentkit {

// A sentence embedding. Providers hand these out unit-normalized.
struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

// Unit basis vector e_index of dimension `dim`.
EmbeddingVector BasisVector(std::size_t dim, std::size_t index = 0);

double L2Norm(std::span<const double> v);

// Cosine of the angle between a and b, clamped to [-1, 1]. Zero vectors have
// similarity 0 with everything. Throws InvalidArgument on dimension mismatch.
double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Mean of `vectors` rescaled to unit length. A (near-)zero mean yields e_0.
// Throws InvalidArgument on an empty list or mixed dimensions.
EmbeddingVector Centroid(std::span<const EmbeddingVector> vectors);

// Seed folded into the FNV-1a basis for trigram hashing.
inline constexpr std::uint64_t kTrigramHashSeed = 0x7A3B9E1D5C2F4860ULL;

// Deterministic bag-of-trigrams embedding. The text is ASCII-lowercased,
// trimmed and internal whitespace runs collapse to one space; the result is
// padded with one space on each side. Each 3-byte window hashes with FNV-1a
// (basis xor kTrigramHashSeed); bucket = h mod dim, sign = top bit of h.
// The count vector is L2-normalized. Blank text maps to e_0.
// Requires dim >= 8.
EmbeddingVector HashEmbed(std::string_view text, std::size_t dim);

// Frozen sentence encoder. Implementations must return unit-norm vectors,
// one per input in input order, and must be safe for concurrent calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) const = 0;

  EmbeddingVector Embed(const std::string& text) const;
};

class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dim = 256);

  std::string id() const override { return "hash-trigram"; }
  std::size_t dimension() const override { return dim_; }
  std::vector<EmbeddingVector> EmbedBatch(
      std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
};

// Rescales to unit norm in place; returns false if the vector is zero or not
// finite.
bool NormalizeInPlace(EmbeddingVector& v);

}  // namespace intentkit

#endif  // INTENTKIT_EMBEDDING_H_
