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

#include <cmath>
#include <limits>

#ifdef INTENTKIT_HAVE_OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "intentkit/kernels.h"
#include "intentkit/rng.h"

using namespace intentkit;
namespace k = intentkit::kernels;

namespace {

std::vector<double> Random(std::size_t n, SplitMix64& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return v;
}

struct Net {
  k::DenseShape shape;
  std::vector<double> w1, b1, w2, b2;
  k::DenseWeights weights() const { return {w1, b1, w2, b2}; }
};

Net RandomNet(std::size_t d, std::size_t h, std::size_t n, SplitMix64& rng) {
  return {{d, h, n}, Random(h * d, rng), Random(h, rng), Random(n * h, rng),
          Random(n, rng)};
}

struct Grads {
  std::vector<double> w1, b1, w2, b2;
  explicit Grads(const Net& net)
      : w1(net.w1.size()), b1(net.b1.size()), w2(net.w2.size()),
        b2(net.b2.size()) {}
  k::DenseGrads spans() { return {w1, b1, w2, b2}; }
  bool operator==(const Grads&) const = default;
};

// Forces several threads even on a one-core machine.
struct ThreadScope {
  ThreadScope() {
#ifdef INTENTKIT_HAVE_OPENMP
    saved = omp_get_max_threads();
    omp_set_num_threads(4);
#endif
  }
  ~ThreadScope() {
#ifdef INTENTKIT_HAVE_OPENMP
    omp_set_num_threads(saved);
#endif
  }
  int saved = 1;
};

}  // namespace

TEST_CASE("softmax is stable and shift invariant") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  std::vector<double> b = {1001.0, 1002.0, 1003.0};
  k::SoftmaxInPlace(a);
  k::SoftmaxInPlace(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    sum += a[i];
  }
  CHECK(sum == doctest::Approx(1.0));
  std::vector<double> big = {1e308, -1e308};
  k::SoftmaxInPlace(big);
  CHECK(big[0] == 1.0);
  CHECK(big[1] == 0.0);
}

TEST_CASE("forward matches a direct evaluation") {
  SplitMix64 rng(3);
  const Net net = RandomNet(5, 4, 3, rng);
  const auto x = Random(2 * 5, rng);
  std::vector<double> probs(2 * 3);
  k::serial::ForwardBatch(net.shape, k::Activation::kTanh, net.weights(), x, 2,
                          probs);
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<double> h(4), z(3);
    for (std::size_t j = 0; j < 4; ++j) {
      double acc = net.b1[j];
      for (std::size_t i = 0; i < 5; ++i) acc += net.w1[j * 5 + i] * x[s * 5 + i];
      h[j] = std::tanh(acc);
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = net.b2[c];
      for (std::size_t j = 0; j < 4; ++j) acc += net.w2[c * 4 + j] * h[j];
      z[c] = std::exp(acc);
      denom += z[c];
    }
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(probs[s * 3 + c] == doctest::Approx(z[c] / denom).epsilon(1e-12));
    }
  }
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  ThreadScope threads;
  SplitMix64 rng(11);
  const std::vector<k::DenseShape> shapes = {
      {8, 4, 3}, {17, 9, 5}, {256, 64, 10}, {256, 256, 60}};
  for (const auto& shape : shapes) {
    for (auto act : {k::Activation::kTanh, k::Activation::kRelu}) {
      const Net net = RandomNet(shape.input, shape.hidden, shape.classes, rng);
      const std::size_t batch = 3 * shape.classes + 1;
      const auto x = Random(batch * shape.input, rng);
      std::vector<int> labels(batch);
      for (auto& l : labels) l = static_cast<int>(rng.Below(shape.classes));

      std::vector<double> ps(batch * shape.classes), pp(ps.size());
      k::serial::ForwardBatch(shape, act, net.weights(), x, batch, ps);
      k::parallel::ForwardBatch(shape, act, net.weights(), x, batch, pp);
      CHECK(ps == pp);

      Grads gs(net), gp(net);
      const double ls =
          k::serial::LossAndGrad(shape, act, net.weights(), x, labels, 1e-3,
                                 gs.spans());
      const double lp =
          k::parallel::LossAndGrad(shape, act, net.weights(), x, labels, 1e-3,
                                   gp.spans());
      CHECK(ls == lp);
      CHECK(gs == gp);
    }
  }
}

TEST_CASE("gradients are overwritten, not accumulated") {
  SplitMix64 rng(2);
  const Net net = RandomNet(6, 5, 3, rng);
  const auto x = Random(4 * 6, rng);
  const std::vector<int> labels = {0, 1, 2, 1};
  Grads a(net), b(net);
  for (auto* v : {&b.w1, &b.b1, &b.w2, &b.b2}) {
    for (double& g : *v) g = 123.0;
  }
  for (auto backend : {k::Backend::kSerial, k::Backend::kParallel}) {
    k::LossAndGrad(backend, net.shape, k::Activation::kTanh, net.weights(), x,
                   labels, 0.0, a.spans());
    k::LossAndGrad(backend, net.shape, k::Activation::kTanh, net.weights(), x,
                   labels, 0.0, b.spans());
    CHECK(a == b);
  }
}

TEST_CASE("max dot by group matches brute force") {
  ThreadScope threads;
  SplitMix64 rng(4);
  const std::size_t dim = 32, nq = 40, groups = 7;
  const auto queries = Random(nq * dim, rng);
  std::vector<std::size_t> group_of;
  for (std::size_t g = 0; g < groups; ++g) {
    if (g == 3) continue;  // group without references
    for (std::size_t r = 0; r <= g % 3; ++r) group_of.push_back(g);
  }
  const auto refs = Random(group_of.size() * dim, rng);

  std::vector<double> os(nq * groups), op(nq * groups);
  k::serial::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, os);
  k::parallel::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, op);
  CHECK(os == op);

  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t g = 0; g < groups; ++g) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < group_of.size(); ++r) {
        if (group_of[r] != g) continue;
        double d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          d += queries[q * dim + i] * refs[r * dim + i];
        }
        best = std::max(best, d);
      }
      if (g == 3) {
        CHECK(os[q * groups + g] == -std::numeric_limits<double>::infinity());
      } else {
        CHECK(os[q * groups + g] == doctest::Approx(best).epsilon(1e-12));
      }
    }
  }
}
