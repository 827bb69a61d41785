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

#ifndef INTENTKIT_RNG_H_
#define INTENTKIT_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace intentkit {

// SplitMix64 (Steele, Lea & Flood 2014). Every seeded choice in the toolkit
// goes through this generator so that samples reproduce across compilers and
// platforms; std::uniform_int_distribution is implementation-defined.
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound). Rejection sampling removes modulo bias.
  std::uint64_t Below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = Next();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a. `basis` defaults to the standard offset basis.
inline std::uint64_t Fnv1a64(std::string_view bytes,
                             std::uint64_t basis = 0xCBF29CE484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Derives an independent stream seed from a base seed and a key.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view key) {
  SplitMix64 mixer(seed ^ Fnv1a64(key));
  return mixer.Next();
}

// Partial Fisher-Yates: permutes `items` so that its first `count` entries
// are a uniform sample without replacement, in draw order. Leaves the tail
// in unspecified order. Drawing a longer prefix with the same generator state
// extends a shorter one.
template <typename T>
void ShufflePrefix(std::vector<T>& items, std::size_t count, SplitMix64& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace intentkit

#endif  // INTENTKIT_RNG_H_
