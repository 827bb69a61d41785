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

// Serial vs. parallel kernel timings, plus a bitwise agreement check.
//
//   kernels_bench [--reps N]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <vector>

#include "intentkit/kernels.h"
#include "intentkit/rng.h"

namespace k = intentkit::kernels;

namespace {

std::vector<double> RandomVector(std::size_t n, std::uint64_t seed) {
  intentkit::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform() * 2.0 - 1.0;
  return v;
}

double MedianMillis(int reps, const std::function<void()>& fn) {
  std::vector<double> ms;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

void Report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 5;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) {
      reps = std::max(1, std::atoi(argv[++i]));
    }
  }
  std::printf("openmp: %s, threads: %d, reps: %d\n",
              k::HaveOpenMP() ? "yes" : "no", k::MaxThreads(), reps);
  bool all_identical = true;

  // Few-shot head training step: 60 intents x 5 shots, 256-d inputs.
  {
    const k::DenseShape shape{256, 256, 60};
    const std::size_t batch = 300;
    const auto w1 = RandomVector(shape.hidden * shape.input, 1);
    const auto b1 = RandomVector(shape.hidden, 2);
    const auto w2 = RandomVector(shape.classes * shape.hidden, 3);
    const auto b2 = RandomVector(shape.classes, 4);
    const auto x = RandomVector(batch * shape.input, 5);
    std::vector<int> labels(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      labels[i] = static_cast<int>(i % shape.classes);
    }
    const k::DenseWeights w{w1, b1, w2, b2};

    std::vector<double> gs(w1.size() + b1.size() + w2.size() + b2.size());
    std::vector<double> gp(gs.size());
    auto grads = [&](std::vector<double>& g) {
      std::span<double> all(g);
      return k::DenseGrads{all.subspan(0, w1.size()),
                           all.subspan(w1.size(), b1.size()),
                           all.subspan(w1.size() + b1.size(), w2.size()),
                           all.subspan(w1.size() + b1.size() + w2.size())};
    };
    double ls = 0.0, lp = 0.0;
    const double ts = MedianMillis(reps, [&] {
      ls = k::serial::LossAndGrad(shape, k::Activation::kTanh, w, x, labels,
                                  1e-4, grads(gs));
    });
    const double tp = MedianMillis(reps, [&] {
      lp = k::parallel::LossAndGrad(shape, k::Activation::kTanh, w, x, labels,
                                    1e-4, grads(gp));
    });
    const bool same = ls == lp && gs == gp;
    all_identical = all_identical && same;
    Report("LossAndGrad 300x256x256x60", ts, tp, same);
  }

  // Intent filtering: 3000 queries against 60 intents x 5 examples.
  {
    const std::size_t dim = 256, nq = 3000, groups = 60, per = 5;
    const auto queries = RandomVector(nq * dim, 6);
    const auto refs = RandomVector(groups * per * dim, 7);
    std::vector<std::size_t> group_of(groups * per);
    for (std::size_t i = 0; i < group_of.size(); ++i) group_of[i] = i / per;
    std::vector<double> os(nq * groups), op(nq * groups);
    const double ts = MedianMillis(reps, [&] {
      k::serial::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, os);
    });
    const double tp = MedianMillis(reps, [&] {
      k::parallel::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, op);
    });
    const bool same = os == op;
    all_identical = all_identical && same;
    Report("MaxDotByGroup 3000x300x256", ts, tp, same);
  }

  return all_identical ? 0 : 1;
}
