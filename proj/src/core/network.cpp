/**
 * Copyright 2026 The fax Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "core/network.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "core/rng.hpp"

namespace fax {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using MatMap = Eigen::Map<Matrix>;
using ConstMatMap = Eigen::Map<const Matrix>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

std::string layer_label(std::size_t index, const LayerSpec &layer) {
  return "layer " + std::to_string(index) + " (" + layer_name(layer) + ")";
}

std::size_t parse_count(std::string_view field, std::string_view whole) {
  std::size_t value = 0;
  const auto *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    throw ConfigError("bad architecture field '" + std::string(field) + "' in '" + std::string(whole) + "'");
  }
  return value;
}

void im2col(const double *x, const Shape3 &in, std::size_t k, std::size_t s, const Shape3 &out, double *col) {
  const std::size_t plane = out.height * out.width;
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        double *dst = col + ((c * k + ky) * k + kx) * plane;
        for (std::size_t oy = 0; oy < out.height; ++oy) {
          const double *src = x + (c * in.height + oy * s + ky) * in.width + kx;
          for (std::size_t ox = 0; ox < out.width; ++ox) {
            dst[oy * out.width + ox] = src[ox * s];
          }
        }
      }
    }
  }
}

void col2im_add(const double *col, const Shape3 &in, std::size_t k, std::size_t s, const Shape3 &out, double *dx) {
  const std::size_t plane = out.height * out.width;
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        const double *src = col + ((c * k + ky) * k + kx) * plane;
        for (std::size_t oy = 0; oy < out.height; ++oy) {
          double *dst = dx + (c * in.height + oy * s + ky) * in.width + kx;
          for (std::size_t ox = 0; ox < out.width; ++ox) {
            dst[ox * s] += src[oy * out.width + ox];
          }
        }
      }
    }
  }
}

/// Per-sample forward/backward engine. Holds scratch buffers so a batch
/// reuses allocations across samples.
class Engine {
 public:
  Engine(const NetworkState &net) : net_(net), shapes_(layer_shapes(net.layers, net.input)) {
    const std::size_t n = net.layers.size();
    acts_.resize(n + 1);
    argmax_.resize(n);
    for (std::size_t i = 0; i <= n; ++i) acts_[i].resize(shapes_[i].size());
  }

  std::size_t outputs() const { return shapes_.back().size(); }

  /// Runs one image through all layers; activations stay cached for backward.
  std::span<const double> run(const ImageTensor &image) {
    if (image.shape() != net_.input) {
      throw ShapeError(layer_label(0, net_.layers.front()) + ": expected " + net_.input.str() + " input, got " +
                       image.shape().str());
    }
    std::copy(image.values().begin(), image.values().end(), acts_[0].begin());
    for (std::size_t i = 0; i < net_.layers.size(); ++i) layer_forward(i);
    return acts_.back();
  }

  /// Backpropagates dL/dlogits for the sample most recently passed to run(),
  /// adding parameter gradients into `grads`.
  void backprop(std::span<const double> dlogits, ParamSet &grads) {
    delta_.assign(dlogits.begin(), dlogits.end());
    for (std::size_t i = net_.layers.size(); i-- > 0;) {
      const bool need_input_grad = first_trainable_ < i;
      layer_backward(i, grads[i], need_input_grad);
      if (!need_input_grad) break;
      delta_.swap(delta_prev_);
    }
  }

  void set_first_trainable() {
    first_trainable_ = 0;
    for (std::size_t i = 0; i < net_.layers.size(); ++i) {
      if (!net_.params[i].weights.empty()) {
        first_trainable_ = i;
        return;
      }
    }
  }

 private:
  void layer_forward(std::size_t i) {
    const ActShape &in = shapes_[i];
    const ActShape &out = shapes_[i + 1];
    const double *x = acts_[i].data();
    double *y = acts_[i + 1].data();
    const ParamBuffers &p = net_.params[i];
    std::visit(Overloaded{
                   [&](const Conv2D &conv) {
                     const std::size_t patch = in.dims.channels * conv.kernel * conv.kernel;
                     const std::size_t plane = out.dims.height * out.dims.width;
                     col_.resize(patch * plane);
                     im2col(x, in.dims, conv.kernel, conv.stride, out.dims, col_.data());
                     ConstMatMap w(p.weights.data(), conv.out_channels, patch);
                     ConstMatMap col(col_.data(), patch, plane);
                     MatMap result(y, conv.out_channels, plane);
                     result.noalias() = w * col;
                     result.colwise() += ConstVecMap(p.bias.data(), conv.out_channels);
                   },
                   [&](const MaxPool &pool) {
                     auto &arg = argmax_[i];
                     arg.resize(out.size());
                     const Shape3 &id = in.dims;
                     const Shape3 &od = out.dims;
                     for (std::size_t c = 0; c < od.channels; ++c) {
                       for (std::size_t oy = 0; oy < od.height; ++oy) {
                         for (std::size_t ox = 0; ox < od.width; ++ox) {
                           std::size_t best = (c * id.height + oy * pool.size) * id.width + ox * pool.size;
                           for (std::size_t ky = 0; ky < pool.size; ++ky) {
                             for (std::size_t kx = 0; kx < pool.size; ++kx) {
                               const std::size_t at =
                                   (c * id.height + oy * pool.size + ky) * id.width + ox * pool.size + kx;
                               if (x[at] > x[best]) best = at;
                             }
                           }
                           const std::size_t o = (c * od.height + oy) * od.width + ox;
                           arg[o] = static_cast<std::uint32_t>(best);
                           y[o] = x[best];
                         }
                       }
                     }
                   },
                   [&](const ReLU &) {
                     for (std::size_t j = 0; j < in.size(); ++j) y[j] = x[j] > 0.0 ? x[j] : 0.0;
                   },
                   [&](const Flatten &) { std::copy(x, x + in.size(), y); },
                   [&](const Dense &dense) {
                     ConstMatMap w(p.weights.data(), dense.out, in.size());
                     VecMap result(y, dense.out);
                     result.noalias() = w * ConstVecMap(x, in.size());
                     result += ConstVecMap(p.bias.data(), dense.out);
                   },
               },
               net_.layers[i]);
  }

  // Reads delta_ (gradient w.r.t. layer output) and writes delta_prev_
  // (gradient w.r.t. layer input) when requested.
  void layer_backward(std::size_t i, ParamBuffers &g, bool need_input_grad) {
    const ActShape &in = shapes_[i];
    const ActShape &out = shapes_[i + 1];
    const double *x = acts_[i].data();
    const ParamBuffers &p = net_.params[i];
    if (need_input_grad) delta_prev_.assign(in.size(), 0.0);
    double *dx = delta_prev_.data();
    const double *dy = delta_.data();
    std::visit(Overloaded{
                   [&](const Conv2D &conv) {
                     const std::size_t patch = in.dims.channels * conv.kernel * conv.kernel;
                     const std::size_t plane = out.dims.height * out.dims.width;
                     col_.resize(patch * plane);
                     im2col(x, in.dims, conv.kernel, conv.stride, out.dims, col_.data());
                     ConstMatMap col(col_.data(), patch, plane);
                     ConstMatMap d(dy, conv.out_channels, plane);
                     MatMap gw(g.weights.data(), conv.out_channels, patch);
                     gw.noalias() += d * col.transpose();
                     VecMap(g.bias.data(), conv.out_channels) += d.rowwise().sum();
                     if (need_input_grad) {
                       ConstMatMap w(p.weights.data(), conv.out_channels, patch);
                       dcol_.resize(patch * plane);
                       MatMap dcol(dcol_.data(), patch, plane);
                       dcol.noalias() = w.transpose() * d;
                       col2im_add(dcol_.data(), in.dims, conv.kernel, conv.stride, out.dims, dx);
                     }
                   },
                   [&](const MaxPool &) {
                     const auto &arg = argmax_[i];
                     for (std::size_t o = 0; o < out.size(); ++o) dx[arg[o]] += dy[o];
                   },
                   [&](const ReLU &) {
                     for (std::size_t j = 0; j < in.size(); ++j) dx[j] = x[j] > 0.0 ? dy[j] : 0.0;
                   },
                   [&](const Flatten &) { std::copy(dy, dy + in.size(), dx); },
                   [&](const Dense &dense) {
                     ConstVecMap d(dy, dense.out);
                     ConstVecMap xv(x, in.size());
                     MatMap(g.weights.data(), dense.out, in.size()).noalias() += d * xv.transpose();
                     VecMap(g.bias.data(), dense.out) += d;
                     if (need_input_grad) {
                       ConstMatMap w(p.weights.data(), dense.out, in.size());
                       VecMap(dx, in.size()).noalias() = w.transpose() * d;
                     }
                   },
               },
               net_.layers[i]);
  }

  const NetworkState &net_;
  std::vector<ActShape> shapes_;
  std::vector<AlignedBuffer> acts_;
  std::vector<std::vector<std::uint32_t>> argmax_;
  AlignedBuffer col_, dcol_, delta_, delta_prev_;
  std::size_t first_trainable_ = 0;
};

void check_targets(std::span<const ImageTensor> batch, std::span<const SoftTarget> targets, std::size_t classes) {
  if (batch.size() != targets.size()) {
    throw ShapeError("batch has " + std::to_string(batch.size()) + " images but " + std::to_string(targets.size()) +
                     " targets");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto &t = targets[i];
    if (t.a >= classes || t.b >= classes) {
      throw ShapeError("target of batch item " + std::to_string(i) + " is outside the " + std::to_string(classes) +
                       " network outputs");
    }
  }
}

struct ItemLoss {
  double loss;
  std::vector<double> dlogits;  // unscaled: softmax - target mixture
};

ItemLoss item_loss(std::span<const double> logits, const SoftTarget &t, bool want_grad) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - peak);
  const double lse = peak + std::log(sum);
  ItemLoss out;
  out.loss = t.lambda * (lse - logits[t.a]) + (1.0 - t.lambda) * (lse - logits[t.b]);
  if (want_grad) {
    out.dlogits.resize(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k) out.dlogits[k] = std::exp(logits[k] - lse);
    out.dlogits[t.a] -= t.lambda;
    out.dlogits[t.b] -= 1.0 - t.lambda;
  }
  return out;
}

LossAndGrads evaluate_loss(const NetworkState &net, std::span<const ImageTensor> batch,
                           std::span<const SoftTarget> targets, bool want_grad) {
  Engine engine(net);
  check_targets(batch, targets, engine.outputs());
  engine.set_first_trainable();
  LossAndGrads result;
  if (want_grad) result.grads = zeros_like(net.params);
  const double scale = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto logits = engine.run(batch[i]);
    ItemLoss item = item_loss(logits, targets[i], want_grad);
    if (!std::isfinite(item.loss)) {
      throw NumericError("non-finite loss at batch item " + std::to_string(i), static_cast<long long>(i));
    }
    total += item.loss;
    if (want_grad) {
      for (double &v : item.dlogits) v *= scale;
      engine.backprop(item.dlogits, result.grads);
    }
  }
  result.loss = total * scale;
  return result;
}

template <class T>
void write_pod(std::ostream &out, const T &value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream &in, const std::string &path) {
  T value{};
  const auto at = static_cast<long long>(in.tellg());
  if (!in.read(reinterpret_cast<char *>(&value), sizeof(T))) throw DataError("truncated network file " + path, at);
  return value;
}

constexpr char kNetMagic[8] = {'F', 'A', 'X', 'N', 'E', 'T', '0', '1'};

}  // namespace

std::string layer_name(const LayerSpec &layer) {
  return std::visit(Overloaded{
                        [](const Conv2D &c) {
                          return "Conv2D(" + std::to_string(c.out_channels) + ", " + std::to_string(c.kernel) + "x" +
                                 std::to_string(c.kernel) + ", stride " + std::to_string(c.stride) + ")";
                        },
                        [](const MaxPool &p) { return "MaxPool(" + std::to_string(p.size) + ")"; },
                        [](const ReLU &) { return std::string("ReLU"); },
                        [](const Flatten &) { return std::string("Flatten"); },
                        [](const Dense &d) { return "Dense(" + std::to_string(d.out) + ")"; },
                    },
                    layer);
}

std::vector<LayerSpec> default_architecture() {
  return {Conv2D{32, 5, 1}, ReLU{}, MaxPool{2}, Conv2D{64, 5, 1}, ReLU{},
          MaxPool{2},       Flatten{}, Dense{128}, ReLU{},           Dense{kNumClasses}};
}

std::string format_architecture(std::span<const LayerSpec> layers) {
  std::string out;
  for (const auto &layer : layers) {
    if (!out.empty()) out += ',';
    out += std::visit(Overloaded{
                          [](const Conv2D &c) {
                            std::string s = "conv:" + std::to_string(c.out_channels) + ":" + std::to_string(c.kernel);
                            if (c.stride != 1) s += ":" + std::to_string(c.stride);
                            return s;
                          },
                          [](const MaxPool &p) { return "pool:" + std::to_string(p.size); },
                          [](const ReLU &) { return std::string("relu"); },
                          [](const Flatten &) { return std::string("flatten"); },
                          [](const Dense &d) { return "dense:" + std::to_string(d.out); },
                      },
                      layer);
  }
  return out;
}

std::vector<LayerSpec> parse_architecture(std::string_view text) {
  std::vector<LayerSpec> layers;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (f <= item.size()) {
      const std::size_t colon = std::min(item.find(':', f), item.size());
      fields.push_back(item.substr(f, colon - f));
      f = colon + 1;
    }
    const auto &kind = fields.front();
    if (kind == "conv" && (fields.size() == 3 || fields.size() == 4)) {
      layers.push_back(Conv2D{parse_count(fields[1], text), parse_count(fields[2], text),
                              fields.size() == 4 ? parse_count(fields[3], text) : 1});
    } else if (kind == "pool" && fields.size() == 2) {
      layers.push_back(MaxPool{parse_count(fields[1], text)});
    } else if (kind == "relu" && fields.size() == 1) {
      layers.push_back(ReLU{});
    } else if (kind == "flatten" && fields.size() == 1) {
      layers.push_back(Flatten{});
    } else if (kind == "dense" && fields.size() == 2) {
      layers.push_back(Dense{parse_count(fields[1], text)});
    } else {
      throw ConfigError("unknown layer '" + std::string(item) + "' in architecture '" + std::string(text) + "'");
    }
    pos = comma + 1;
  }
  return layers;
}

std::vector<ActShape> layer_shapes(std::span<const LayerSpec> layers, Shape3 input) {
  if (layers.empty()) throw ShapeError("network has no layers");
  if (input.size() == 0) throw ShapeError("input shape " + input.str() + " is empty");
  std::vector<ActShape> shapes{ActShape{input, false}};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const ActShape in = shapes.back();
    const std::string where = layer_label(i, layers[i]);
    ActShape out = std::visit(
        Overloaded{
            [&](const Conv2D &c) {
              if (in.flat) throw ShapeError(where + ": convolution after Flatten");
              if (c.kernel > in.dims.height || c.kernel > in.dims.width) {
                throw ShapeError(where + ": kernel larger than input " + in.dims.str());
              }
              return ActShape{{c.out_channels, (in.dims.height - c.kernel) / c.stride + 1,
                               (in.dims.width - c.kernel) / c.stride + 1},
                              false};
            },
            [&](const MaxPool &p) {
              if (in.flat) throw ShapeError(where + ": pooling after Flatten");
              if (p.size > in.dims.height || p.size > in.dims.width) {
                throw ShapeError(where + ": pool window larger than input " + in.dims.str());
              }
              return ActShape{{in.dims.channels, in.dims.height / p.size, in.dims.width / p.size}, false};
            },
            [&](const ReLU &) { return in; },
            [&](const Flatten &) {
              if (in.flat) throw ShapeError(where + ": input is already flat");
              return ActShape{{in.size(), 1, 1}, true};
            },
            [&](const Dense &d) {
              if (!in.flat) throw ShapeError(where + ": Dense requires a Flatten before it");
              return ActShape{{d.out, 1, 1}, true};
            },
        },
        layers[i]);
    shapes.push_back(out);
  }
  if (!shapes.back().flat) throw ShapeError("network output must be flat; end with Flatten or Dense");
  return shapes;
}

ParamSet zeros_like(const ParamSet &like) {
  ParamSet out(like.size());
  for (std::size_t i = 0; i < like.size(); ++i) {
    out[i].weights.assign(like[i].weights.size(), 0.0);
    out[i].bias.assign(like[i].bias.size(), 0.0);
  }
  return out;
}

std::size_t parameter_count(const ParamSet &params) {
  std::size_t n = 0;
  for (const auto &p : params) n += p.weights.size() + p.bias.size();
  return n;
}

std::size_t NetworkState::num_outputs() const { return layer_shapes(layers, input).back().size(); }

NetworkState init_network(std::span<const LayerSpec> layers, Shape3 input, std::uint64_t seed) {
  const auto shapes = layer_shapes(layers, input);
  NetworkState net;
  net.input = input;
  net.layers.assign(layers.begin(), layers.end());
  net.params.resize(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::size_t fan_in = 0;
    std::size_t outs = 0;
    if (const auto *c = std::get_if<Conv2D>(&layers[i])) {
      fan_in = shapes[i].dims.channels * c->kernel * c->kernel;
      outs = c->out_channels;
    } else if (const auto *d = std::get_if<Dense>(&layers[i])) {
      fan_in = shapes[i].size();
      outs = d->out;
    } else {
      continue;
    }
    KeyedRng rng(seed, RngDomain::kInit, i);
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    auto &p = net.params[i];
    p.weights.resize(outs * fan_in);
    for (double &w : p.weights) w = stddev * rng.normal();
    p.bias.assign(outs, 0.0);
  }
  net.moment1 = zeros_like(net.params);
  net.moment2 = zeros_like(net.params);
  return net;
}

Matrix forward(const NetworkState &net, std::span<const ImageTensor> batch) {
  Engine engine(net);
  Matrix logits(static_cast<Eigen::Index>(batch.size()), static_cast<Eigen::Index>(engine.outputs()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto out = engine.run(batch[i]);
    std::copy(out.begin(), out.end(), logits.row(static_cast<Eigen::Index>(i)).data());
  }
  return logits;
}

Matrix softmax_rows(const Matrix &logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double peak = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - peak).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

LossAndGrads loss_and_grads(const NetworkState &net, std::span<const ImageTensor> batch,
                            std::span<const SoftTarget> targets) {
  return evaluate_loss(net, batch, targets, true);
}

double loss_only(const NetworkState &net, std::span<const ImageTensor> batch, std::span<const SoftTarget> targets) {
  return evaluate_loss(net, batch, targets, false).loss;
}

static_assert(std::endian::native == std::endian::little, "network files are written in host byte order");

void save_network(const NetworkState &net, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  const std::string arch = format_architecture(net.layers);
  out.write(kNetMagic, sizeof kNetMagic);
  write_pod(out, static_cast<std::uint32_t>(arch.size()));
  out.write(arch.data(), static_cast<std::streamsize>(arch.size()));
  for (auto d : {net.input.channels, net.input.height, net.input.width}) write_pod(out, static_cast<std::uint32_t>(d));
  write_pod(out, net.step);
  for (const auto &p : net.params) {
    out.write(reinterpret_cast<const char *>(p.weights.data()),
              static_cast<std::streamsize>(p.weights.size() * sizeof(double)));
    out.write(reinterpret_cast<const char *>(p.bias.data()),
              static_cast<std::streamsize>(p.bias.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing " + path);
}

NetworkState load_network(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open network file " + path);
  char magic[sizeof kNetMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kNetMagic, sizeof magic) != 0) {
    throw DataError("unexpected magic in network file " + path, 0);
  }
  const auto arch_len = read_pod<std::uint32_t>(in, path);
  if (arch_len > (1u << 16)) throw DataError("implausible architecture length in " + path, 8);
  std::string arch(arch_len, '\0');
  if (!in.read(arch.data(), arch_len)) throw DataError("truncated network file " + path, 12);
  Shape3 input;
  input.channels = read_pod<std::uint32_t>(in, path);
  input.height = read_pod<std::uint32_t>(in, path);
  input.width = read_pod<std::uint32_t>(in, path);
  const auto step = read_pod<std::uint64_t>(in, path);
  NetworkState net = init_network(parse_architecture(arch), input, 0);
  net.step = step;
  for (auto &p : net.params) {
    for (auto *buf : {&p.weights, &p.bias}) {
      const auto at = static_cast<long long>(in.tellg());
      if (!in.read(reinterpret_cast<char *>(buf->data()), static_cast<std::streamsize>(buf->size() * sizeof(double)))) {
        throw DataError("truncated parameters in network file " + path, at);
      }
    }
  }
  return net;
}

}  // namespace fax
