/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "delit/errors.hpp"
#include "delit/nn/layers.hpp"

namespace delit::nn {

/// First-order adaptive-moment optimizer. GAN-friendly defaults:
/// beta1 0.5, beta2 0.999, eps 1e-8. Moment buffers are keyed by
/// parameter name so the model objects stay freely movable; pass a
/// fresh params() view to each step.
template <typename T>
class Adam {
public:
    Adam() = default;
    explicit Adam(double lr, double beta1 = 0.5, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}

    void step(const std::vector<ParamRef<T>>& params) {
        ++t_;
        const double bc1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
        for (const auto& p : params) {
            auto& slot = state_[p.name];
            if (slot.m.size() != p.value->v.size()) {
                slot.m.assign(p.value->v.size(), T(0));
                slot.v.assign(p.value->v.size(), T(0));
            }
            for (std::size_t i = 0; i < p.value->v.size(); ++i) {
                const double g = static_cast<double>(p.grad->v[i]);
                double m = b1_ * static_cast<double>(slot.m[i]) + (1.0 - b1_) * g;
                double v = b2_ * static_cast<double>(slot.v[i]) + (1.0 - b2_) * g * g;
                slot.m[i] = static_cast<T>(m);
                slot.v[i] = static_cast<T>(v);
                p.value->v[i] -=
                    static_cast<T>(lr_ * (m / bc1) / (std::sqrt(v / bc2) + eps_));
            }
        }
    }

    struct Slot {
        std::vector<T> m, v;
    };

    double learning_rate() const { return lr_; }
    std::int64_t t() const { return t_; }
    const std::map<std::string, Slot>& state() const { return state_; }

    /// Checkpoint restore.
    void restore(double lr, double beta1, double beta2, double eps, std::int64_t t,
                 std::map<std::string, Slot> state) {
        lr_ = lr;
        b1_ = beta1;
        b2_ = beta2;
        eps_ = eps;
        t_ = t;
        state_ = std::move(state);
    }

    double beta1() const { return b1_; }
    double beta2() const { return b2_; }
    double epsilon() const { return eps_; }

private:
    double lr_ = 2e-4, b1_ = 0.5, b2_ = 0.999, eps_ = 1e-8;
    std::int64_t t_ = 0;
    std::map<std::string, Slot> state_;
};

}  // namespace delit::nn
