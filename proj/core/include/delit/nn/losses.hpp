/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <utility>

#include "delit/errors.hpp"
#include "delit/nn/tensor.hpp"

namespace delit::nn {

/// log(sigmoid(x)) evaluated without overflow, clamped below at -30.
inline double log_sigmoid(double x) {
    const double v = x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
    return v < -30.0 ? -30.0 : v;
}

struct AdversarialLosses {
    double d_loss;
    double g_adv_loss;
};

/// Binary cross-entropy over patch logits, real labelled 1 and fake 0.
/// The generator term is the non-saturating form -mean(log sigma(fake)).
template <typename T>
AdversarialLosses adversarial_losses(const Tensor<T>& real_logits, const Tensor<T>& fake_logits) {
    for (const auto& v : real_logits.v) {
        if (!std::isfinite(static_cast<double>(v))) {
            throw ValidationError("adversarial_losses: non-finite real logit");
        }
    }
    for (const auto& v : fake_logits.v) {
        if (!std::isfinite(static_cast<double>(v))) {
            throw ValidationError("adversarial_losses: non-finite fake logit");
        }
    }
    if (real_logits.v.empty() || fake_logits.v.empty()) {
        throw ValidationError("adversarial_losses: empty logit array");
    }
    double real_term = 0.0, fake_term = 0.0, g_term = 0.0;
    for (const auto& v : real_logits.v) real_term += log_sigmoid(static_cast<double>(v));
    for (const auto& v : fake_logits.v) {
        const double x = static_cast<double>(v);
        fake_term += log_sigmoid(-x);  // log(1 - sigma(x)) = log(sigma(-x))
        g_term += log_sigmoid(x);
    }
    const double nr = static_cast<double>(real_logits.v.size());
    const double nf = static_cast<double>(fake_logits.v.size());
    return {-real_term / nr - fake_term / nf, -g_term / nf};
}

/// d(d_loss)/d(logits) for both halves of the discriminator batch.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> d_loss_grad(const Tensor<T>& real_logits,
                                            const Tensor<T>& fake_logits) {
    Tensor<T> dr = real_logits, df = fake_logits;
    const T nr = static_cast<T>(real_logits.v.size());
    const T nf = static_cast<T>(fake_logits.v.size());
    for (auto& x : dr.v) x = (T(1) / (T(1) + std::exp(-x)) - T(1)) / nr;
    for (auto& x : df.v) x = (T(1) / (T(1) + std::exp(-x))) / nf;
    return {std::move(dr), std::move(df)};
}

/// d(g_adv_loss)/d(fake_logits) for the non-saturating generator term.
template <typename T>
Tensor<T> g_adv_grad(const Tensor<T>& fake_logits) {
    Tensor<T> d = fake_logits;
    const T nf = static_cast<T>(fake_logits.v.size());
    for (auto& x : d.v) x = (T(1) / (T(1) + std::exp(-x)) - T(1)) / nf;
    return d;
}

/// mean|a - b| over every element.
template <typename T>
double l1_loss(const Tensor<T>& a, const Tensor<T>& b) {
    if (!a.same_shape(b)) throw ValidationError("l1_loss: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        acc += std::abs(static_cast<double>(a.v[i]) - static_cast<double>(b.v[i]));
    }
    return acc / static_cast<double>(a.v.size());
}

/// d(mean|a - b|)/da; the subgradient at zero is taken as 0.
template <typename T>
Tensor<T> l1_loss_grad(const Tensor<T>& a, const Tensor<T>& b) {
    Tensor<T> d = a;
    const T n = static_cast<T>(a.v.size());
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const T diff = a.v[i] - b.v[i];
        d.v[i] = diff > T(0) ? T(1) / n : (diff < T(0) ? T(-1) / n : T(0));
    }
    return d;
}

}  // namespace delit::nn
