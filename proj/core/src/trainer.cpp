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

#include "ssir/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "ssir/encoding.hpp"
#include "ssir/error.hpp"
#include "ssir/parallel.hpp"

namespace ssir {
namespace {

template <typename Scalar>
void add_into(SiameseParams<Scalar>& acc, const SiameseParams<Scalar>& g) {
  auto a = tensor_spans(acc);
  const auto b = tensor_spans(g);
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t i = 0; i < a[t].size(); ++i) a[t][i] += b[t][i];
  }
}

// Backpropagates `dout` through one branch, consuming the tape: cos_pre is
// overwritten with the pre-activation gradient and input with the gradient
// flowing to the layer below. When `need_input_grad` is set, tape[0].input
// ends up holding the gradient with respect to the branch input.
template <typename Scalar>
void backprop(const std::vector<DenseLayer<Scalar>>& layers,
              std::vector<LayerTape<Scalar>>& tape, const Batch<Scalar>& dout_last,
              std::vector<DenseLayer<Scalar>>& grads, bool need_input_grad) {
  const Batch<Scalar>* dout = &dout_last;
  for (std::size_t k = layers.size(); k-- > 0;) {
    auto& t = tape[k];
    const Batch<Scalar>* dpre = dout;
    if (t.cos_pre.size() != 0) {
      t.cos_pre.array() *= dout->array() * t.omega;
      dpre = &t.cos_pre;
    }
    grads[k].weight.noalias() += *dpre * t.input.transpose();
    grads[k].bias += dpre->rowwise().sum();
    if (k > 0 || need_input_grad) {
      t.input.noalias() = layers[k].weight.transpose() * *dpre;
      dout = &t.input;
    }
  }
}

template <typename Scalar>
bool same_shapes(const SiameseParams<Scalar>& a, const SiameseParams<Scalar>& b) {
  const auto sa = tensor_spans(a);
  const auto sb = tensor_spans(b);
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].size() != sb[i].size()) return false;
  }
  return a.shared.size() == b.shared.size() && a.head0.size() == b.head0.size();
}

template <typename Scalar>
void set_zero(SiameseParams<Scalar>& p) {
  for (auto s : tensor_spans(p)) std::fill(s.begin(), s.end(), Scalar{0});
}

template <typename Scalar>
void check_batch(const Batch<Scalar>& coords, const Vector<Scalar>& targets) {
  if (coords.cols() == 0 || targets.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "loss: empty batch");
  }
  if (coords.cols() != targets.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "loss: " + std::to_string(coords.cols()) + " coordinates vs " +
                    std::to_string(targets.size()) + " targets");
  }
}

// Sum of squared residuals for one head, accumulated in double.
template <typename Scalar>
double sse(const Vector<Scalar>& pred, const Vector<Scalar>& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = static_cast<double>(pred(i)) - static_cast<double>(y(i));
    s += r * r;
  }
  return s;
}

}  // namespace

namespace detail {

template <typename Scalar>
struct GradSlot {
  ForwardTape<Scalar> tape;
  SiameseParams<Scalar> grad;
  Batch<Scalar> x;
  Vector<Scalar> y;
  Batch<Scalar> d0;
  Batch<Scalar> d1;
  double sse = 0.0;
};

}  // namespace detail

template <typename Scalar>
GradWorkspace<Scalar>::GradWorkspace() = default;
template <typename Scalar>
GradWorkspace<Scalar>::~GradWorkspace() = default;
template <typename Scalar>
GradWorkspace<Scalar>::GradWorkspace(GradWorkspace&&) noexcept = default;
template <typename Scalar>
GradWorkspace<Scalar>& GradWorkspace<Scalar>::operator=(GradWorkspace&&) noexcept =
    default;

template <typename Scalar>
detail::GradSlot<Scalar>& GradWorkspace<Scalar>::slot(std::size_t i) {
  while (slots_.size() <= i) slots_.push_back(std::make_unique<detail::GradSlot<Scalar>>());
  return *slots_[i];
}

template <typename Scalar>
double loss(const SiameseParams<Scalar>& params, const NetConfig& cfg,
            const Batch<Scalar>& coords, const Vector<Scalar>& targets) {
  check_batch(coords, targets);
  const auto out = forward(params, cfg, coords);
  const double n = static_cast<double>(targets.size());
  if (!cfg.twin_heads()) return sse(out.head0, targets) / n;
  return 0.5 * (sse(out.head0, targets) + sse(out.head1, targets)) / n;
}

template <typename Scalar>
LossAndGrad<Scalar> loss_and_grad(const SiameseParams<Scalar>& params,
                                  const NetConfig& cfg,
                                  const Batch<Scalar>& coords,
                                  const Vector<Scalar>& targets,
                                  std::size_t chunk, int workers,
                                  GradWorkspace<Scalar>* workspace) {
  check_batch(coords, targets);
  check_shapes(params, cfg);
  chunk = std::max<std::size_t>(chunk, 1);
  const auto n = static_cast<std::size_t>(targets.size());
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const bool twin = cfg.twin_heads();
  const bool has_trunk = !params.shared.empty();
  // dL/dprediction = (pred - y) / n for twin heads, 2 (pred - y) / n alone.
  const auto out_scale = static_cast<Scalar>((twin ? 1.0 : 2.0) / static_cast<double>(n));

  GradWorkspace<Scalar> local;
  GradWorkspace<Scalar>& ws = workspace != nullptr ? *workspace : local;
  const std::size_t wave = std::min<std::size_t>(
      chunks, workers > 0 ? static_cast<std::size_t>(workers)
                          : std::max(1u, std::thread::hardware_concurrency()));
  std::vector<detail::GradSlot<Scalar>*> slots(wave);
  for (std::size_t i = 0; i < wave; ++i) {
    slots[i] = &ws.slot(i);
    if (!same_shapes(slots[i]->grad, params)) slots[i]->grad = params.zeros_like();
  }

  LossAndGrad<Scalar> result;
  result.grad = params.zeros_like();
  double sse_total = 0.0;

  for (std::size_t first = 0; first < chunks; first += wave) {
    const std::size_t count = std::min(wave, chunks - first);
    parallel_for(
        count,
        [&](std::size_t i) {
          auto& slot = *slots[i];
          const std::size_t c = first + i;
          const auto begin = static_cast<Eigen::Index>(c * chunk);
          const auto len = static_cast<Eigen::Index>(std::min(chunk, n - c * chunk));
          slot.x = coords.middleCols(begin, len);
          slot.y = targets.segment(begin, len);
          set_zero(slot.grad);

          auto& tape = slot.tape;
          forward_with_tape(params, cfg, slot.x, tape);
          double s = sse(tape.out.head0, slot.y);
          slot.d0 = ((tape.out.head0 - slot.y) * out_scale).transpose();
          backprop(params.head0, tape.head0, slot.d0, slot.grad.head0, has_trunk);
          if (twin) {
            s += sse(tape.out.head1, slot.y);
            slot.d1 = ((tape.out.head1 - slot.y) * out_scale).transpose();
            backprop(params.head1, tape.head1, slot.d1, slot.grad.head1, has_trunk);
            if (has_trunk) tape.head0.front().input += tape.head1.front().input;
          }
          if (has_trunk) {
            backprop(params.shared, tape.shared, tape.head0.front().input,
                     slot.grad.shared, false);
          }
          slot.sse = s;
        },
        workers);
    for (std::size_t i = 0; i < count; ++i) {
      add_into(result.grad, slots[i]->grad);
      sse_total += slots[i]->sse;
    }
  }

  result.loss = (twin ? 0.5 : 1.0) * sse_total / static_cast<double>(n);
  return result;
}

template <typename Scalar>
Adam<Scalar>::Adam(const SiameseParams<Scalar>& like, const TrainConfig& cfg)
    : lr_(cfg.learning_rate),
      wd_(cfg.weight_decay),
      beta1_(cfg.adam_beta1),
      beta2_(cfg.adam_beta2),
      eps_(cfg.adam_eps),
      m_(like.zeros_like()),
      v_(like.zeros_like()) {}

template <typename Scalar>
void Adam<Scalar>::step(SiameseParams<Scalar>& params,
                        const SiameseParams<Scalar>& grad) {
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, step_);
  const double bc2 = 1.0 - std::pow(beta2_, step_);
  const auto decay = static_cast<Scalar>(1.0 - lr_ * wd_);
  const auto b1 = static_cast<Scalar>(beta1_);
  const auto b2 = static_cast<Scalar>(beta2_);
  const auto step_size = static_cast<Scalar>(lr_ / bc1);
  const auto inv_sqrt_bc2 = static_cast<Scalar>(1.0 / std::sqrt(bc2));
  const auto eps = static_cast<Scalar>(eps_);

  auto p = tensor_spans(params);
  const auto g = tensor_spans(grad);
  auto m = tensor_spans(m_);
  auto v = tensor_spans(v_);
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t i = 0; i < p[t].size(); ++i) {
      const Scalar gi = g[t][i];
      m[t][i] = b1 * m[t][i] + (Scalar{1} - b1) * gi;
      v[t][i] = b2 * v[t][i] + (Scalar{1} - b2) * gi * gi;
      if (wd_ != 0.0) p[t][i] *= decay;
      p[t][i] -= step_size * m[t][i] / (std::sqrt(v[t][i]) * inv_sqrt_bc2 + eps);
    }
  }
}

TrainResult train(const AudioClip& clip, const NetConfig& net_cfg,
                  const TrainConfig& train_cfg, const ProgressFn& progress) {
  validate(net_cfg);
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train: clip is empty");
  }
  if (train_cfg.iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "train: iterations must be >= 0");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = clip.samples.size();
  const auto times = time_grid(n);
  const Batch<float> coords = encode_batch<float>(times, net_cfg.pe);
  const Vector<float> targets =
      Eigen::Map<const Vector<float>>(clip.samples.data(), static_cast<Eigen::Index>(n));

  TrainResult result;
  result.params = init_params<float>(net_cfg, train_cfg.seed);
  Adam<float> adam(result.params, train_cfg);
  GradWorkspace<float> workspace;

  const bool full = train_cfg.batch_size == 0 || train_cfg.batch_size >= n;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::seed_seq seq{static_cast<std::uint32_t>(train_cfg.seed),
                    static_cast<std::uint32_t>(train_cfg.seed >> 32), 3u};
  std::mt19937_64 shuffle_rng(seq);
  std::size_t cursor = n;

  result.report.loss.reserve(static_cast<std::size_t>(train_cfg.iterations));
  for (int it = 0; it < train_cfg.iterations; ++it) {
    LossAndGrad<float> lg;
    if (full) {
      lg = loss_and_grad(result.params, net_cfg, coords, targets,
                         train_cfg.grad_chunk, train_cfg.workers, &workspace);
    } else {
      if (cursor >= n) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        cursor = 0;
      }
      const std::size_t len = std::min(train_cfg.batch_size, n - cursor);
      std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                                    order.begin() + static_cast<std::ptrdiff_t>(cursor + len));
      cursor += len;
      const Batch<float> x = coords(Eigen::all, idx);
      const Vector<float> y = targets(idx);
      lg = loss_and_grad(result.params, net_cfg, x, y, train_cfg.grad_chunk,
                         train_cfg.workers, &workspace);
    }
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::kNonFinite,
                  "train: non-finite loss at iteration " + std::to_string(it));
    }
    result.report.loss.push_back(lg.loss);
    if (progress) progress(it, lg.loss);
    adam.step(result.params, lg.grad);
  }

  const auto out = evaluate(result.params, net_cfg, times, train_cfg.workers);
  const double dn = static_cast<double>(n);
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double r0 = double{out.head0(ii)} - double{clip.samples[i]};
    s0 += r0 * r0;
    if (net_cfg.twin_heads()) {
      const double r1 = double{out.head1(ii)} - double{clip.samples[i]};
      s1 += r1 * r1;
    }
  }
  result.report.final_loss_head0 = s0 / dn;
  result.report.final_loss_head1 = net_cfg.twin_heads() ? s1 / dn : s0 / dn;
  result.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

template double loss(const SiameseParams<float>&, const NetConfig&,
                     const Batch<float>&, const Vector<float>&);
template double loss(const SiameseParams<double>&, const NetConfig&,
                     const Batch<double>&, const Vector<double>&);
template LossAndGrad<float> loss_and_grad(const SiameseParams<float>&,
                                          const NetConfig&, const Batch<float>&,
                                          const Vector<float>&, std::size_t, int,
                                          GradWorkspace<float>*);
template LossAndGrad<double> loss_and_grad(const SiameseParams<double>&,
                                           const NetConfig&, const Batch<double>&,
                                           const Vector<double>&, std::size_t, int,
                                           GradWorkspace<double>*);
template class GradWorkspace<float>;
template class GradWorkspace<double>;
template class Adam<float>;
template class Adam<double>;

}  // namespace ssir
