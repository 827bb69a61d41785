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

#ifndef INTENTKIT_KERNELS_H_
#define INTENTKIT_KERNELS_H_

// Numeric inner loops of the toolkit, in two interchangeable flavors:
//
//   kernels::serial    straightforward per-sample loops; the reference.
//   kernels::parallel  OpenMP over independent outputs.
//
// The parallel flavor never reduces across threads: every output element is
// accumulated by exactly one thread in the same order the serial code uses,
// so both flavors produce bitwise-identical results for any thread count.
// Without OpenMP the parallel flavor runs single-threaded.
//
// All matrices are dense row-major.

#include <cstddef>
#include <span>

namespace intentkit::kernels {

enum class Activation { kTanh, kRelu };

struct DenseShape {
  std::size_t input = 0;    // D
  std::size_t hidden = 0;   // H
  std::size_t classes = 0;  // N

  bool operator==(const DenseShape&) const = default;
};

// W1 is H x D, b1 is H, W2 is N x H, b2 is N.
struct DenseWeights {
  std::span<const double> w1, b1, w2, b2;
};

struct DenseGrads {
  std::span<double> w1, b1, w2, b2;
};

enum class Backend { kSerial, kParallel };

// True when the parallel flavor was built with OpenMP.
bool HaveOpenMP();
int MaxThreads();

namespace serial {

// x is batch x D. probs (batch x N) receives softmax outputs.
void ForwardBatch(const DenseShape& shape, Activation act, DenseWeights w,
                  std::span<const double> x, std::size_t batch,
                  std::span<double> probs);

// Mean cross-entropy over the batch plus l2/2 * (|W1|^2 + |W2|^2); biases are
// not penalized. Writes exact gradients into `grads` (overwritten, not
// accumulated). labels[i] must be in [0, N).
double LossAndGrad(const DenseShape& shape, Activation act, DenseWeights w,
                   std::span<const double> x, std::span<const int> labels,
                   double l2, DenseGrads grads);

// For every query row q and every group g, out[q * groups + g] is the
// largest dot product between q and any reference row whose group_of entry
// is g; groups without rows get -infinity. queries is nq x dim, refs is
// group_of.size() x dim.
void MaxDotByGroup(std::span<const double> queries, std::size_t nq,
                   std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out);

}  // namespace serial

namespace parallel {

void ForwardBatch(const DenseShape& shape, Activation act, DenseWeights w,
                  std::span<const double> x, std::size_t batch,
                  std::span<double> probs);

double LossAndGrad(const DenseShape& shape, Activation act, DenseWeights w,
                   std::span<const double> x, std::span<const int> labels,
                   double l2, DenseGrads grads);

void MaxDotByGroup(std::span<const double> queries, std::size_t nq,
                   std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out);

}  // namespace parallel

// Dispatch helpers used by the rest of the library.
void ForwardBatch(Backend backend, const DenseShape& shape, Activation act,
                  DenseWeights w, std::span<const double> x, std::size_t batch,
                  std::span<double> probs);
double LossAndGrad(Backend backend, const DenseShape& shape, Activation act,
                   DenseWeights w, std::span<const double> x,
                   std::span<const int> labels, double l2, DenseGrads grads);
void MaxDotByGroup(Backend backend, std::span<const double> queries,
                   std::size_t nq, std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out);

// Numerically stable in-place softmax.
void SoftmaxInPlace(std::span<double> logits);

}  // namespace intentkit::kernels

#endif  // INTENTKIT_KERNELS_H_
