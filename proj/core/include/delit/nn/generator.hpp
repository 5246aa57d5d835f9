/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "delit/errors.hpp"
#include "delit/nn/layers.hpp"

namespace delit::nn {

struct GeneratorConfig {
    int image_size = 64;
    int base_channels = 32;
    /// 0 picks the default, log2(image_size) - 2.
    int depth = 0;
};

inline int resolved_depth(const GeneratorConfig& cfg) {
    if (cfg.depth > 0) return cfg.depth;
    int d = 0;
    for (int s = cfg.image_size; s > 1; s /= 2) ++d;
    return d - 2;
}

inline void validate_generator_config(const GeneratorConfig& cfg) {
    const int s = cfg.image_size;
    if (s < 32 || s > 512 || (s & (s - 1)) != 0) {
        throw ValidationError("image_size: must be a power of two in [32, 512], got " +
                              std::to_string(s));
    }
    if (cfg.base_channels < 1) {
        throw ValidationError("base_channels: must be >= 1, got " +
                              std::to_string(cfg.base_channels));
    }
    const int d = resolved_depth(cfg);
    if (d < 2) throw ValidationError("depth: must be >= 2, got " + std::to_string(d));
    if ((s >> d) < 1) {
        throw ValidationError("depth: bottleneck would be smaller than 1 pixel (image_size " +
                              std::to_string(s) + ", depth " + std::to_string(d) + ")");
    }
}

/// Encoder-decoder with skip concatenation. Encoder stages are 4x4
/// stride-2 convolutions (LeakyReLU 0.2) doubling channels up to an
/// 8x base cap; each decoder stage is a nearest 2x upsample followed
/// by a 3x3 convolution (ReLU), concatenated with the matching encoder
/// activation. The full-resolution input is concatenated onto the last
/// upsample, so the head sees the raw pixels directly: the output only
/// needs a low-frequency correction of the input, not a resynthesis of
/// label detail from the bottleneck. The head is a 3x3 convolution to
/// 3 channels under a sigmoid, so outputs live in [0,1]. No
/// normalization layers.
template <typename T>
class UnetGenerator {
public:
    UnetGenerator() = default;

    explicit UnetGenerator(const GeneratorConfig& cfg) : cfg_(cfg), depth_(resolved_depth(cfg)) {
        if (depth_ < 2) throw ValidationError("depth: must be >= 2");
        if ((cfg.image_size >> depth_) < 1 || (cfg.image_size & (cfg.image_size - 1)) != 0) {
            throw ValidationError("image_size: must be a power of two with a >= 1 pixel bottleneck");
        }
        const int cap = 8 * cfg.base_channels;
        auto ch = [&](int stage) {  // channels after encoder stage 1..depth
            return std::min(cfg.base_channels << (stage - 1), cap);
        };
        enc_.reserve(static_cast<std::size_t>(depth_));
        enc_act_.assign(static_cast<std::size_t>(depth_), LeakyRelu<T>(T(0.2)));
        for (int i = 1; i <= depth_; ++i) {
            enc_.emplace_back("g.enc" + std::to_string(i), i == 1 ? 3 : ch(i - 1), ch(i), 4, 2, 1);
        }
        dec_act_.assign(static_cast<std::size_t>(depth_ - 1), LeakyRelu<T>(T(0)));
        for (int j = 0; j < depth_ - 1; ++j) {
            const int stage = depth_ - j;  // decoding back past encoder stage `stage`
            const int in_ch = (j == 0) ? ch(depth_) : 2 * ch(stage);
            dec_.emplace_back("g.dec" + std::to_string(stage), in_ch, ch(stage - 1), 3, 1, 1);
        }
        head_ = Conv2d<T>("g.head", 2 * ch(1) + 3, 3, 3, 1, 1);
    }

    void init(Rng& rng) {
        for (auto& c : enc_) c.init(rng, T(0.02));
        for (auto& c : dec_) c.init(rng, T(0.02));
        head_.init(rng, T(0.02));
    }

    Tensor<T> forward(const Tensor<T>& x) {
        if (x.c != 3 || x.h != cfg_.image_size || x.w != cfg_.image_size) {
            throw ValidationError("generator_forward: input must be Bx3x" +
                                  std::to_string(cfg_.image_size) + "x" +
                                  std::to_string(cfg_.image_size));
        }
        enc_out_.assign(static_cast<std::size_t>(depth_), Tensor<T>());
        Tensor<T> cur = x;
        for (int i = 0; i < depth_; ++i) {
            cur = enc_act_[static_cast<std::size_t>(i)].forward(
                enc_[static_cast<std::size_t>(i)].forward(cur));
            enc_out_[static_cast<std::size_t>(i)] = cur;
        }
        dec_ch_.assign(static_cast<std::size_t>(depth_ - 1), 0);
        for (int j = 0; j < depth_ - 1; ++j) {
            cur = upsample2x(cur);
            cur = dec_act_[static_cast<std::size_t>(j)].forward(
                dec_[static_cast<std::size_t>(j)].forward(cur));
            dec_ch_[static_cast<std::size_t>(j)] = cur.c;
            cur = concat_channels(cur, enc_out_[static_cast<std::size_t>(depth_ - 2 - j)]);
        }
        cur = upsample2x(cur);
        cur = concat_channels(cur, x);
        return out_act_.forward(head_.forward(cur));
    }

    /// Backpropagates dLoss/dOutput; returns dLoss/dInput. Parameter
    /// gradients accumulate unless with_param_grads is false.
    Tensor<T> backward(const Tensor<T>& dy, bool with_param_grads = true) {
        Tensor<T> d = head_.backward(out_act_.backward(dy), with_param_grads);
        auto [d_feat, d_input] = split_channels(d, d.c - 3);
        d = upsample2x_backward(d_feat);

        std::vector<Tensor<T>> skip_grad(static_cast<std::size_t>(depth_));
        for (int j = depth_ - 2; j >= 0; --j) {
            auto [dd, ds] = split_channels(d, dec_ch_[static_cast<std::size_t>(j)]);
            skip_grad[static_cast<std::size_t>(depth_ - 2 - j)] = std::move(ds);
            dd = dec_[static_cast<std::size_t>(j)].backward(
                dec_act_[static_cast<std::size_t>(j)].backward(dd), with_param_grads);
            d = upsample2x_backward(dd);
        }
        for (int i = depth_ - 1; i >= 0; --i) {
            if (i < depth_ - 1) {  // skip branch rejoins the trunk here
                const Tensor<T>& s = skip_grad[static_cast<std::size_t>(i)];
                for (std::size_t k = 0; k < d.v.size(); ++k) d.v[k] += s.v[k];
            }
            d = enc_[static_cast<std::size_t>(i)].backward(
                enc_act_[static_cast<std::size_t>(i)].backward(d), with_param_grads);
        }
        for (std::size_t k = 0; k < d.v.size(); ++k) d.v[k] += d_input.v[k];
        return d;
    }

    void zero_grads() {
        for (auto& c : enc_) c.zero_grads();
        for (auto& c : dec_) c.zero_grads();
        head_.zero_grads();
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> out;
        for (auto& c : enc_) {
            auto p = c.params();
            out.insert(out.end(), p.begin(), p.end());
        }
        for (auto& c : dec_) {
            auto p = c.params();
            out.insert(out.end(), p.begin(), p.end());
        }
        auto p = head_.params();
        out.insert(out.end(), p.begin(), p.end());
        return out;
    }

    const GeneratorConfig& config() const { return cfg_; }
    int depth() const { return depth_; }

private:
    GeneratorConfig cfg_;
    int depth_ = 0;
    std::vector<Conv2d<T>> enc_;
    std::vector<LeakyRelu<T>> enc_act_;
    std::vector<Conv2d<T>> dec_;
    std::vector<LeakyRelu<T>> dec_act_;
    Conv2d<T> head_;
    Sigmoid<T> out_act_;

    std::vector<Tensor<T>> enc_out_;
    std::vector<int> dec_ch_;
};

/// Seeded construction + initialization in one step.
template <typename T>
UnetGenerator<T> build_generator(const GeneratorConfig& cfg, std::uint64_t seed) {
    validate_generator_config(cfg);
    UnetGenerator<T> g(cfg);
    Rng rng(derive_seed(seed, fnv1a64("generator")));
    g.init(rng);
    return g;
}

}  // namespace delit::nn
