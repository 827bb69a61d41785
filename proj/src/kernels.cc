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

#include "intentkit/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace intentkit::kernels {

namespace {

inline double Activate(Activation act, double z) {
  return act == Activation::kTanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the pre-activation z and output a.
inline double ActivateDeriv(Activation act, double z, double a) {
  return act == Activation::kTanh ? 1.0 - a * a : (z > 0.0 ? 1.0 : 0.0);
}

double SquaredNorm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// z1/a1 (H), z2 (N) for one sample; z2 is left as logits.
void ForwardOne(const DenseShape& shape, Activation act, const DenseWeights& w,
                const double* x, double* z1, double* a1, double* z2) {
  const std::size_t D = shape.input, H = shape.hidden, N = shape.classes;
  for (std::size_t h = 0; h < H; ++h) {
    double acc = w.b1[h];
    const double* row = w.w1.data() + h * D;
    for (std::size_t d = 0; d < D; ++d) acc += row[d] * x[d];
    z1[h] = acc;
    a1[h] = Activate(act, acc);
  }
  for (std::size_t n = 0; n < N; ++n) {
    double acc = w.b2[n];
    const double* row = w.w2.data() + n * H;
    for (std::size_t h = 0; h < H; ++h) acc += row[h] * a1[h];
    z2[n] = acc;
  }
}

// Turns logits into probabilities in place; returns log-sum-exp.
double SoftmaxWithLse(double* z, std::size_t n) {
  double m = z[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, z[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::exp(z[i] - m);
    sum += z[i];
  }
  for (std::size_t i = 0; i < n; ++i) z[i] /= sum;
  return m + std::log(sum);
}

constexpr std::size_t kParallelMinWork = 1 << 14;

}  // namespace

bool HaveOpenMP() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void SoftmaxInPlace(std::span<double> logits) {
  if (!logits.empty()) SoftmaxWithLse(logits.data(), logits.size());
}

namespace serial {

void ForwardBatch(const DenseShape& shape, Activation act, DenseWeights w,
                  std::span<const double> x, std::size_t batch,
                  std::span<double> probs) {
  std::vector<double> z1(shape.hidden), a1(shape.hidden);
  for (std::size_t s = 0; s < batch; ++s) {
    double* p = probs.data() + s * shape.classes;
    ForwardOne(shape, act, w, x.data() + s * shape.input, z1.data(),
               a1.data(), p);
    SoftmaxWithLse(p, shape.classes);
  }
}

double LossAndGrad(const DenseShape& shape, Activation act, DenseWeights w,
                   std::span<const double> x, std::span<const int> labels,
                   double l2, DenseGrads grads) {
  const std::size_t D = shape.input, H = shape.hidden, N = shape.classes;
  const std::size_t batch = labels.size();
  const double batch_d = static_cast<double>(batch);
  std::fill(grads.w1.begin(), grads.w1.end(), 0.0);
  std::fill(grads.b1.begin(), grads.b1.end(), 0.0);
  std::fill(grads.w2.begin(), grads.w2.end(), 0.0);
  std::fill(grads.b2.begin(), grads.b2.end(), 0.0);

  std::vector<double> z1(H), a1(H), z2(N), delta2(N);
  double loss_sum = 0.0;
  for (std::size_t s = 0; s < batch; ++s) {
    const double* xs = x.data() + s * D;
    const std::size_t y = static_cast<std::size_t>(labels[s]);
    ForwardOne(shape, act, w, xs, z1.data(), a1.data(), z2.data());
    const double logit_y = z2[y];
    const double lse = SoftmaxWithLse(z2.data(), N);
    loss_sum += lse - logit_y;

    for (std::size_t n = 0; n < N; ++n) {
      delta2[n] = (z2[n] - (n == y ? 1.0 : 0.0)) / batch_d;
    }
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t h = 0; h < H; ++h) {
        grads.w2[n * H + h] += delta2[n] * a1[h];
      }
      grads.b2[n] += delta2[n];
    }
    for (std::size_t h = 0; h < H; ++h) {
      double back = 0.0;
      for (std::size_t n = 0; n < N; ++n) back += w.w2[n * H + h] * delta2[n];
      const double delta1 = back * ActivateDeriv(act, z1[h], a1[h]);
      for (std::size_t d = 0; d < D; ++d) {
        grads.w1[h * D + d] += delta1 * xs[d];
      }
      grads.b1[h] += delta1;
    }
  }

  for (std::size_t i = 0; i < grads.w1.size(); ++i) grads.w1[i] += l2 * w.w1[i];
  for (std::size_t i = 0; i < grads.w2.size(); ++i) grads.w2[i] += l2 * w.w2[i];
  return loss_sum / batch_d +
         0.5 * l2 * (SquaredNorm(w.w1) + SquaredNorm(w.w2));
}

void MaxDotByGroup(std::span<const double> queries, std::size_t nq,
                   std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::fill(out.begin(), out.begin() + static_cast<long>(nq * groups),
            neg_inf);
  for (std::size_t q = 0; q < nq; ++q) {
    const double* qv = queries.data() + q * dim;
    for (std::size_t r = 0; r < group_of.size(); ++r) {
      const double* rv = refs.data() + r * dim;
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += qv[d] * rv[d];
      double& best = out[q * groups + group_of[r]];
      if (dot > best) best = dot;
    }
  }
}

}  // namespace serial

namespace parallel {

void ForwardBatch(const DenseShape& shape, Activation act, DenseWeights w,
                  std::span<const double> x, std::size_t batch,
                  std::span<double> probs) {
  const long n = static_cast<long>(batch);
  const bool go_wide =
      batch * shape.hidden * (shape.input + shape.classes) >= kParallelMinWork;
#pragma omp parallel if (go_wide)
  {
    std::vector<double> z1(shape.hidden), a1(shape.hidden);
#pragma omp for schedule(static)
    for (long s = 0; s < n; ++s) {
      double* p = probs.data() + s * shape.classes;
      ForwardOne(shape, act, w, x.data() + s * shape.input, z1.data(),
                 a1.data(), p);
      SoftmaxWithLse(p, shape.classes);
    }
  }
}

double LossAndGrad(const DenseShape& shape, Activation act, DenseWeights w,
                   std::span<const double> x, std::span<const int> labels,
                   double l2, DenseGrads grads) {
  const std::size_t D = shape.input, H = shape.hidden, N = shape.classes;
  const std::size_t batch = labels.size();
  const long nb = static_cast<long>(batch);
  const double batch_d = static_cast<double>(batch);
  const bool go_wide = batch * H * (D + N) >= kParallelMinWork;

  std::vector<double> z1(batch * H), a1(batch * H), delta2(batch * N),
      delta1(batch * H), sample_loss(batch);

  // Forward and output-layer error, one sample per iteration.
#pragma omp parallel for schedule(static) if (go_wide)
  for (long s = 0; s < nb; ++s) {
    std::vector<double> z2(N);
    const std::size_t y = static_cast<std::size_t>(labels[s]);
    ForwardOne(shape, act, w, x.data() + s * D, z1.data() + s * H,
               a1.data() + s * H, z2.data());
    const double logit_y = z2[y];
    sample_loss[s] = SoftmaxWithLse(z2.data(), N) - logit_y;
    double* d2 = delta2.data() + s * N;
    for (std::size_t n = 0; n < N; ++n) {
      d2[n] = (z2[n] - (n == y ? 1.0 : 0.0)) / batch_d;
    }
  }

  // Hidden-layer error.
#pragma omp parallel for schedule(static) if (go_wide)
  for (long s = 0; s < nb; ++s) {
    const double* d2 = delta2.data() + s * N;
    for (std::size_t h = 0; h < H; ++h) {
      double back = 0.0;
      for (std::size_t n = 0; n < N; ++n) back += w.w2[n * H + h] * d2[n];
      delta1[s * H + h] =
          back * ActivateDeriv(act, z1[s * H + h], a1[s * H + h]);
    }
  }

  // Output-layer gradients: one row of W2 per iteration.
  const long nn = static_cast<long>(N);
#pragma omp parallel for schedule(static) if (go_wide)
  for (long n = 0; n < nn; ++n) {
    for (std::size_t h = 0; h < H; ++h) {
      double acc = 0.0;
      for (std::size_t s = 0; s < batch; ++s) {
        acc += delta2[s * N + n] * a1[s * H + h];
      }
      grads.w2[n * H + h] = acc;
      grads.w2[n * H + h] += l2 * w.w2[n * H + h];
    }
    double bacc = 0.0;
    for (std::size_t s = 0; s < batch; ++s) bacc += delta2[s * N + n];
    grads.b2[n] = bacc;
  }

  // Hidden-layer gradients: one row of W1 per iteration.
  const long nh = static_cast<long>(H);
#pragma omp parallel for schedule(static) if (go_wide)
  for (long h = 0; h < nh; ++h) {
    for (std::size_t d = 0; d < D; ++d) {
      double acc = 0.0;
      for (std::size_t s = 0; s < batch; ++s) {
        acc += delta1[s * H + h] * x[s * D + d];
      }
      grads.w1[h * D + d] = acc;
      grads.w1[h * D + d] += l2 * w.w1[h * D + d];
    }
    double bacc = 0.0;
    for (std::size_t s = 0; s < batch; ++s) bacc += delta1[s * H + h];
    grads.b1[h] = bacc;
  }

  double loss_sum = 0.0;
  for (std::size_t s = 0; s < batch; ++s) loss_sum += sample_loss[s];
  return loss_sum / batch_d +
         0.5 * l2 * (SquaredNorm(w.w1) + SquaredNorm(w.w2));
}

void MaxDotByGroup(std::span<const double> queries, std::size_t nq,
                   std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const long n = static_cast<long>(nq);
  const bool go_wide = nq * group_of.size() * dim >= kParallelMinWork;
#pragma omp parallel for schedule(static) if (go_wide)
  for (long q = 0; q < n; ++q) {
    double* row = out.data() + q * groups;
    std::fill(row, row + groups, neg_inf);
    const double* qv = queries.data() + q * dim;
    for (std::size_t r = 0; r < group_of.size(); ++r) {
      const double* rv = refs.data() + r * dim;
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += qv[d] * rv[d];
      if (dot > row[group_of[r]]) row[group_of[r]] = dot;
    }
  }
}

}  // namespace parallel

void ForwardBatch(Backend backend, const DenseShape& shape, Activation act,
                  DenseWeights w, std::span<const double> x, std::size_t batch,
                  std::span<double> probs) {
  if (backend == Backend::kSerial) {
    serial::ForwardBatch(shape, act, w, x, batch, probs);
  } else {
    parallel::ForwardBatch(shape, act, w, x, batch, probs);
  }
}

double LossAndGrad(Backend backend, const DenseShape& shape, Activation act,
                   DenseWeights w, std::span<const double> x,
                   std::span<const int> labels, double l2, DenseGrads grads) {
  return backend == Backend::kSerial
             ? serial::LossAndGrad(shape, act, w, x, labels, l2, grads)
             : parallel::LossAndGrad(shape, act, w, x, labels, l2, grads);
}

void MaxDotByGroup(Backend backend, std::span<const double> queries,
                   std::size_t nq, std::span<const double> refs,
                   std::span<const std::size_t> group_of, std::size_t groups,
                   std::size_t dim, std::span<double> out) {
  if (backend == Backend::kSerial) {
    serial::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, out);
  } else {
    parallel::MaxDotByGroup(queries, nq, refs, group_of, groups, dim, out);
  }
}

}  // namespace intentkit::kernels
