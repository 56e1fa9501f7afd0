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

#include "ssir/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "ssir/error.hpp"
#include "ssir/parallel.hpp"

namespace ssir {
namespace {

struct LayerSpec {
  int in = 0;
  int out = 0;
  bool sine = true;
  double omega = 0.0;
};

struct ArchSpec {
  std::vector<LayerSpec> shared;
  std::vector<LayerSpec> head;  // identical for both heads
};

ArchSpec arch(const NetConfig& cfg) {
  ArchSpec a;
  int width = cfg.input_dim();
  bool first = true;
  auto hidden = [&](std::vector<LayerSpec>& into, int w) {
    into.push_back({width, w, true, first ? cfg.omega0 : cfg.omega});
    first = false;
    width = w;
  };
  for (int w : cfg.shared) hidden(a.shared, w);
  for (int w : cfg.siamese) hidden(a.head, w);
  // The linear output layer borrows omega only for its init bound.
  a.head.push_back({width, 1, false, cfg.omega});
  return a;
}

const char* branch_name(int b) {
  switch (b) {
    case 0: return "shared";
    case 1: return "head0";
    default: return "head1";
  }
}

template <typename Scalar>
Batch<Scalar> dense(const DenseLayer<Scalar>& layer, const Batch<Scalar>& x) {
  Batch<Scalar> pre = layer.weight * x;
  pre.colwise() += layer.bias;
  return pre;
}

template <typename Scalar>
Batch<Scalar> run_branch(const std::vector<DenseLayer<Scalar>>& layers,
                         const std::vector<LayerSpec>& specs, Batch<Scalar> x) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    x = dense(layers[i], x);
    if (specs[i].sine) {
      x = (x.array() * static_cast<Scalar>(specs[i].omega)).sin().matrix();
    }
  }
  return x;
}

// Runs one branch whose input already sits in tape[0].input. Each layer's
// output is written straight into the next entry's input and the last one
// into `out`, so a reused tape does not reallocate.
template <typename Scalar>
void run_branch_taped(const std::vector<DenseLayer<Scalar>>& layers,
                      const std::vector<LayerSpec>& specs,
                      std::vector<LayerTape<Scalar>>& tape, Batch<Scalar>& out) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& entry = tape[i];
    Batch<Scalar>& pre = i + 1 < layers.size() ? tape[i + 1].input : out;
    pre.noalias() = layers[i].weight * entry.input;
    pre.colwise() += layers[i].bias;
    if (specs[i].sine) {
      entry.omega = static_cast<Scalar>(specs[i].omega);
      pre *= entry.omega;
      entry.cos_pre = pre.array().cos().matrix();
      pre = pre.array().sin().matrix();
    } else {
      entry.omega = Scalar{1};
      entry.cos_pre.resize(0, 0);
    }
  }
}

void check_input(const NetConfig& cfg, Eigen::Index rows) {
  if (rows != cfg.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "forward: layer 0 expects input width " +
                    std::to_string(cfg.input_dim()) + ", got " + std::to_string(rows));
  }
}

template <typename Scalar>
void fill_uniform(DenseLayer<Scalar>& layer, const LayerSpec& spec, bool first,
                  std::mt19937_64& rng) {
  const double bound =
      first ? 1.0 / spec.in : std::sqrt(6.0 / spec.in) / spec.omega;
  layer.weight.resize(spec.out, spec.in);
  layer.bias = Vector<Scalar>::Zero(spec.out);
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      layer.weight(r, c) = static_cast<Scalar>(dist(rng));
    }
  }
}

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), id};
  return std::mt19937_64(seq);
}

}  // namespace

void validate(const NetConfig& cfg) {
  validate(cfg.pe);
  for (int w : cfg.shared) {
    if (w <= 0) throw Error(ErrorCode::kInvalidArgument, "shared width must be > 0");
  }
  for (int w : cfg.siamese) {
    if (w <= 0) throw Error(ErrorCode::kInvalidArgument, "siamese width must be > 0");
  }
  if (!(cfg.omega0 > 0.0) || !(cfg.omega > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "omega0 and omega must be > 0");
  }
}

std::size_t TensorInfo::size() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::vector<TensorInfo> tensor_layout(const NetConfig& cfg) {
  const ArchSpec a = arch(cfg);
  std::vector<TensorInfo> out;
  auto add = [&](const char* branch, const std::vector<LayerSpec>& specs) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const std::string prefix =
          std::string(branch) + "[" + std::to_string(i) + "]";
      out.push_back({prefix + ".weight",
                     {static_cast<std::uint32_t>(specs[i].out),
                      static_cast<std::uint32_t>(specs[i].in)}});
      out.push_back({prefix + ".bias", {static_cast<std::uint32_t>(specs[i].out)}});
    }
  };
  add("shared", a.shared);
  add("head0", a.head);
  if (cfg.twin_heads()) add("head1", a.head);
  return out;
}

template <typename Scalar>
std::vector<std::span<Scalar>> tensor_spans(SiameseParams<Scalar>& params) {
  std::vector<std::span<Scalar>> out;
  for (auto* branch : {&params.shared, &params.head0, &params.head1}) {
    for (auto& l : *branch) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

template <typename Scalar>
std::vector<std::span<const Scalar>> tensor_spans(
    const SiameseParams<Scalar>& params) {
  std::vector<std::span<const Scalar>> out;
  for (const auto* branch : {&params.shared, &params.head0, &params.head1}) {
    for (const auto& l : *branch) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

template <typename Scalar>
bool bit_equal(const SiameseParams<Scalar>& a, const SiameseParams<Scalar>& b) {
  const auto sa = tensor_spans(a);
  const auto sb = tensor_spans(b);
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].size() != sb[i].size()) return false;
    if (std::memcmp(sa[i].data(), sb[i].data(), sa[i].size_bytes()) != 0) {
      return false;
    }
  }
  // Shapes too, not only flattened contents.
  for (const auto& [x, y] : {std::pair{&a.shared, &b.shared},
                             std::pair{&a.head0, &b.head0},
                             std::pair{&a.head1, &b.head1}}) {
    if (x->size() != y->size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i) {
      if ((*x)[i].weight.rows() != (*y)[i].weight.rows() ||
          (*x)[i].weight.cols() != (*y)[i].weight.cols()) {
        return false;
      }
    }
  }
  return true;
}

std::size_t param_count(const NetConfig& cfg) {
  std::size_t n = 0;
  for (const auto& t : tensor_layout(cfg)) n += t.size();
  return n;
}

template <typename Scalar>
std::size_t param_count(const SiameseParams<Scalar>& params) {
  std::size_t n = 0;
  for (const auto& s : tensor_spans(params)) n += s.size();
  return n;
}

template <typename Scalar>
SiameseParams<Scalar> init_params(const NetConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  const ArchSpec a = arch(cfg);
  SiameseParams<Scalar> p;
  bool first = true;

  auto rng_shared = stream(seed, 0);
  for (const auto& spec : a.shared) {
    p.shared.emplace_back();
    fill_uniform(p.shared.back(), spec, first, rng_shared);
    first = false;
  }
  auto build_head = [&](std::vector<DenseLayer<Scalar>>& head, std::uint32_t id) {
    auto rng = stream(seed, id);
    bool head_first = first;
    for (const auto& spec : a.head) {
      head.emplace_back();
      fill_uniform(head.back(), spec, head_first, rng);
      head_first = false;
    }
  };
  build_head(p.head0, 1);
  if (cfg.twin_heads()) build_head(p.head1, 2);
  return p;
}

template <typename Scalar>
SiameseParams<Scalar> zero_params(const NetConfig& cfg) {
  const ArchSpec a = arch(cfg);
  auto make = [](const std::vector<LayerSpec>& specs) {
    std::vector<DenseLayer<Scalar>> layers;
    for (const auto& s : specs) {
      layers.push_back({RowMatrix<Scalar>::Zero(s.out, s.in), Vector<Scalar>::Zero(s.out)});
    }
    return layers;
  };
  SiameseParams<Scalar> p;
  p.shared = make(a.shared);
  p.head0 = make(a.head);
  if (cfg.twin_heads()) p.head1 = make(a.head);
  return p;
}

template <typename Scalar>
void check_shapes(const SiameseParams<Scalar>& params, const NetConfig& cfg) {
  const ArchSpec a = arch(cfg);
  auto check = [](int branch, const std::vector<DenseLayer<Scalar>>& layers,
                  const std::vector<LayerSpec>& specs) {
    if (layers.size() != specs.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  std::string(branch_name(branch)) + ": expected " +
                      std::to_string(specs.size()) + " layers, got " +
                      std::to_string(layers.size()));
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& l = layers[i];
      if (l.weight.rows() != specs[i].out || l.weight.cols() != specs[i].in ||
          l.bias.size() != specs[i].out) {
        throw Error(ErrorCode::kShapeMismatch,
                    std::string(branch_name(branch)) + " layer " +
                        std::to_string(i) + ": weight " +
                        std::to_string(l.weight.rows()) + "x" +
                        std::to_string(l.weight.cols()) + ", bias " +
                        std::to_string(l.bias.size()) + "; expected " +
                        std::to_string(specs[i].out) + "x" +
                        std::to_string(specs[i].in));
      }
    }
  };
  check(0, params.shared, a.shared);
  check(1, params.head0, a.head);
  if (cfg.twin_heads()) {
    check(2, params.head1, a.head);
  } else if (!params.head1.empty()) {
    throw Error(ErrorCode::kShapeMismatch,
                "head1: single-head config but head1 has layers");
  }
}

template <typename Scalar>
HeadOutputs<Scalar> forward(const SiameseParams<Scalar>& params,
                            const NetConfig& cfg, const Batch<Scalar>& coords) {
  check_input(cfg, coords.rows());
  check_shapes(params, cfg);
  const ArchSpec a = arch(cfg);
  Batch<Scalar> trunk = run_branch(params.shared, a.shared, coords);
  HeadOutputs<Scalar> out;
  out.head0 = run_branch(params.head0, a.head, trunk).transpose();
  if (cfg.twin_heads()) {
    out.head1 = run_branch(params.head1, a.head, std::move(trunk)).transpose();
  }
  return out;
}

template <typename Scalar>
void forward_with_tape(const SiameseParams<Scalar>& params, const NetConfig& cfg,
                       const Batch<Scalar>& coords, ForwardTape<Scalar>& tape) {
  check_input(cfg, coords.rows());
  check_shapes(params, cfg);
  const ArchSpec a = arch(cfg);
  tape.shared.resize(params.shared.size());
  tape.head0.resize(params.head0.size());
  tape.head1.resize(params.head1.size());
  // The trunk output lands directly in the first head layer's input.
  Batch<Scalar>& trunk = tape.head0.front().input;
  if (params.shared.empty()) {
    trunk = coords;
  } else {
    tape.shared.front().input = coords;
    run_branch_taped(params.shared, a.shared, tape.shared, trunk);
  }
  Batch<Scalar> row;
  if (cfg.twin_heads()) {
    tape.head1.front().input = trunk;
    run_branch_taped(params.head1, a.head, tape.head1, row);
    tape.out.head1 = row.transpose();
  } else {
    tape.out.head1.resize(0);
  }
  run_branch_taped(params.head0, a.head, tape.head0, row);
  tape.out.head0 = row.transpose();
}

template <typename Scalar>
ForwardTape<Scalar> forward_with_tape(const SiameseParams<Scalar>& params,
                                      const NetConfig& cfg,
                                      const Batch<Scalar>& coords) {
  ForwardTape<Scalar> tape;
  forward_with_tape(params, cfg, coords, tape);
  return tape;
}

template <typename Scalar>
HeadOutputs<Scalar> evaluate(const SiameseParams<Scalar>& params,
                             const NetConfig& cfg, std::span<const double> times,
                             int workers) {
  check_shapes(params, cfg);
  const std::size_t n = times.size();
  const std::size_t chunks = (n + kEvalChunk - 1) / kEvalChunk;
  HeadOutputs<Scalar> out;
  out.head0.resize(static_cast<Eigen::Index>(n));
  if (cfg.twin_heads()) out.head1.resize(static_cast<Eigen::Index>(n));
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::size_t begin = c * kEvalChunk;
        const std::size_t len = std::min(kEvalChunk, n - begin);
        const auto coords = encode_batch<Scalar>(times.subspan(begin, len), cfg.pe);
        const auto part = forward(params, cfg, coords);
        const auto b = static_cast<Eigen::Index>(begin);
        const auto l = static_cast<Eigen::Index>(len);
        out.head0.segment(b, l) = part.head0;
        if (cfg.twin_heads()) out.head1.segment(b, l) = part.head1;
      },
      workers);
  return out;
}

#define SSIR_INSTANTIATE_MODEL(T)                                              \
  template std::vector<std::span<T>> tensor_spans(SiameseParams<T>&);          \
  template std::vector<std::span<const T>> tensor_spans(                       \
      const SiameseParams<T>&);                                                \
  template bool bit_equal(const SiameseParams<T>&, const SiameseParams<T>&);   \
  template std::size_t param_count(const SiameseParams<T>&);                   \
  template SiameseParams<T> init_params<T>(const NetConfig&, std::uint64_t);   \
  template SiameseParams<T> zero_params<T>(const NetConfig&);                  \
  template void check_shapes(const SiameseParams<T>&, const NetConfig&);       \
  template HeadOutputs<T> forward(const SiameseParams<T>&, const NetConfig&,   \
                                  const Batch<T>&);                            \
  template ForwardTape<T> forward_with_tape(const SiameseParams<T>&,           \
                                            const NetConfig&, const Batch<T>&); \
  template void forward_with_tape(const SiameseParams<T>&, const NetConfig&,   \
                                  const Batch<T>&, ForwardTape<T>&);           \
  template HeadOutputs<T> evaluate(const SiameseParams<T>&, const NetConfig&,  \
                                   std::span<const double>, int);

SSIR_INSTANTIATE_MODEL(float)
SSIR_INSTANTIATE_MODEL(double)

#undef SSIR_INSTANTIATE_MODEL

}  // namespace ssir
