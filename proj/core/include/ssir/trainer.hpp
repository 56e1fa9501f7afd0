// Copyright 2026 The ssir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSIR_TRAINER_HPP_
#define SSIR_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ssir/audio_io.hpp"
#include "ssir/model.hpp"

namespace ssir {

struct TrainConfig {
  int iterations = 2500;
  double learning_rate = 1e-4;
  double weight_decay = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  int workers = 0;
  // Samples per gradient block. Blocks are summed in index order.
  std::size_t grad_chunk = 2048;
};

struct TrainReport {
  std::vector<double> loss;  // loss before each update
  double seconds = 0.0;
  double final_loss_head0 = 0.0;
  double final_loss_head1 = 0.0;
};

using ProgressFn = std::function<void(int iteration, double loss)>;

// Twin heads: 0.5 * (MSE(head0, y) + MSE(head1, y)). Single head: MSE.
template <typename Scalar>
double loss(const SiameseParams<Scalar>& params, const NetConfig& cfg,
            const Batch<Scalar>& coords, const Vector<Scalar>& targets);

template <typename Scalar>
struct LossAndGrad {
  double loss = 0.0;
  SiameseParams<Scalar> grad;
};

namespace detail {
template <typename Scalar>
struct GradSlot;
}  // namespace detail

// Buffers reused across loss_and_grad calls. Only worth keeping when the
// same network is differentiated repeatedly, as in train().
template <typename Scalar>
class GradWorkspace {
 public:
  GradWorkspace();
  ~GradWorkspace();
  GradWorkspace(GradWorkspace&&) noexcept;
  GradWorkspace& operator=(GradWorkspace&&) noexcept;

  detail::GradSlot<Scalar>& slot(std::size_t i);

 private:
  std::vector<std::unique_ptr<detail::GradSlot<Scalar>>> slots_;
};

template <typename Scalar>
LossAndGrad<Scalar> loss_and_grad(const SiameseParams<Scalar>& params,
                                  const NetConfig& cfg,
                                  const Batch<Scalar>& coords,
                                  const Vector<Scalar>& targets,
                                  std::size_t chunk = 2048, int workers = 0,
                                  GradWorkspace<Scalar>* workspace = nullptr);

template <typename Scalar>
SiameseParams<Scalar> grad(const SiameseParams<Scalar>& params,
                           const NetConfig& cfg, const Batch<Scalar>& coords,
                           const Vector<Scalar>& targets) {
  return loss_and_grad(params, cfg, coords, targets).grad;
}

// Adam with decoupled weight decay: p -= lr * wd * p, then the usual
// bias-corrected Adam update from the gradient.
template <typename Scalar>
class Adam {
 public:
  Adam(const SiameseParams<Scalar>& like, const TrainConfig& cfg);

  void step(SiameseParams<Scalar>& params, const SiameseParams<Scalar>& grad);
  int steps_taken() const { return step_; }

 private:
  double lr_, wd_, beta1_, beta2_, eps_;
  SiameseParams<Scalar> m_;
  SiameseParams<Scalar> v_;
  int step_ = 0;
};

struct TrainResult {
  SiameseParams<float> params;
  TrainReport report;
};

// Fits a fresh network to `clip` on the time grid time_grid(clip.size()).
// Throws ErrorCode::kNonFinite naming the iteration if the loss diverges.
TrainResult train(const AudioClip& clip, const NetConfig& net_cfg,
                  const TrainConfig& train_cfg, const ProgressFn& progress = {});

}  // namespace ssir

#endif  // SSIR_TRAINER_HPP_
