/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "delit/errors.hpp"
#include "delit/nn/layers.hpp"

namespace delit::nn {

struct DiscriminatorConfig {
    int base_channels = 32;
    int n_layers = 3;       // stride-2 blocks
    int input_channels = 6;  // lit concatenated with candidate albedo
};

inline void validate_discriminator_config(const DiscriminatorConfig& cfg) {
    if (cfg.base_channels < 1) {
        throw ValidationError("base_channels: must be >= 1, got " +
                              std::to_string(cfg.base_channels));
    }
    if (cfg.n_layers < 1) {
        throw ValidationError("n_layers: must be >= 1, got " + std::to_string(cfg.n_layers));
    }
    if (cfg.input_channels != 6) {
        throw ValidationError("input_channels: fixed to 6, got " +
                              std::to_string(cfg.input_channels));
    }
}

/// Patch discriminator on 6-channel (lit, candidate) input: n_layers 4x4
/// stride-2 convolutions (LeakyReLU 0.2, channels doubling to an 8x base
/// cap), one 4x4 stride-1 block, and a 4x4 stride-1 projection to one
/// logit channel. No squashing on the output. Each stride-1 layer (pad 1)
/// trims one pixel, so an HxW input yields an (H/2^n_layers - 2) square
/// logit grid: 6x6 for 64x64 inputs at n_layers=3.
template <typename T>
class PatchDiscriminator {
public:
    PatchDiscriminator() = default;

    explicit PatchDiscriminator(const DiscriminatorConfig& cfg) : cfg_(cfg) {
        validate_discriminator_config(cfg);
        const int cap = 8 * cfg.base_channels;
        int ch_in = cfg.input_channels;
        int ch_out = cfg.base_channels;
        for (int i = 1; i <= cfg.n_layers; ++i) {
            convs_.emplace_back("d.block" + std::to_string(i), ch_in, ch_out, 4, 2, 1);
            ch_in = ch_out;
            ch_out = std::min(2 * ch_out, cap);
        }
        convs_.emplace_back("d.block" + std::to_string(cfg.n_layers + 1), ch_in, ch_out, 4, 1, 1);
        acts_.assign(convs_.size(), LeakyRelu<T>(T(0.2)));
        head_ = Conv2d<T>("d.head", ch_out, 1, 4, 1, 1);
    }

    void init(Rng& rng) {
        for (auto& c : convs_) c.init(rng, T(0.02));
        head_.init(rng, T(0.02));
    }

    /// Returns the Bx1xhxw patch-logit grid.
    Tensor<T> forward(const Tensor<T>& lit, const Tensor<T>& candidate) {
        if (!lit.same_shape(candidate)) {
            throw ValidationError("discriminator_forward: lit and candidate shapes differ");
        }
        return forward(concat_channels(lit, candidate));
    }

    Tensor<T> forward(const Tensor<T>& pair) {
        if (pair.c != cfg_.input_channels) {
            throw ValidationError("discriminator_forward: expected " +
                                  std::to_string(cfg_.input_channels) + " channels, got " +
                                  std::to_string(pair.c));
        }
        if (logit_grid(pair.h) < 1 || logit_grid(pair.w) < 1) {
            throw ValidationError("discriminator_forward: input too small for n_layers=" +
                                  std::to_string(cfg_.n_layers));
        }
        Tensor<T> cur = pair;
        for (std::size_t i = 0; i < convs_.size(); ++i) {
            cur = acts_[i].forward(convs_[i].forward(cur));
        }
        return head_.forward(cur);
    }

    /// dLoss/dLogits -> dLoss/dPair (6-channel). Parameter gradients
    /// accumulate unless with_param_grads is false; the generator update
    /// only needs the data gradient.
    Tensor<T> backward(const Tensor<T>& dy, bool with_param_grads = true) {
        Tensor<T> d = head_.backward(dy, with_param_grads);
        for (std::size_t i = convs_.size(); i-- > 0;) {
            d = convs_[i].backward(acts_[i].backward(d), with_param_grads);
        }
        return d;
    }

    int logit_grid(int in_dim) const { return (in_dim >> cfg_.n_layers) - 2; }

    void zero_grads() {
        for (auto& c : convs_) c.zero_grads();
        head_.zero_grads();
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> out;
        for (auto& c : convs_) {
            auto p = c.params();
            out.insert(out.end(), p.begin(), p.end());
        }
        auto p = head_.params();
        out.insert(out.end(), p.begin(), p.end());
        return out;
    }

    const DiscriminatorConfig& config() const { return cfg_; }

private:
    DiscriminatorConfig cfg_;
    std::vector<Conv2d<T>> convs_;
    std::vector<LeakyRelu<T>> acts_;
    Conv2d<T> head_;
};

template <typename T>
PatchDiscriminator<T> build_discriminator(const DiscriminatorConfig& cfg, std::uint64_t seed) {
    PatchDiscriminator<T> d(cfg);
    Rng rng(derive_seed(seed, fnv1a64("discriminator")));
    d.init(rng);
    return d;
}

}  // namespace delit::nn
