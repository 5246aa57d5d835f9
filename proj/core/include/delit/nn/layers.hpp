/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "delit/nn/tensor.hpp"
#include "delit/rng.hpp"

namespace delit::nn {

/// Named view of one learnable array and its gradient accumulator.
template <typename T>
struct ParamRef {
    std::string name;
    Tensor<T>* value;
    Tensor<T>* grad;
};

template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// 2-D convolution, im2col + GEMM. Weights are [out_ch, in_ch, k, k].
/// forward() caches its input; backward() rebuilds the patch matrix
/// instead of caching it, which keeps the footprint flat at large
/// resolutions.
template <typename T>
class Conv2d {
public:
    Conv2d() = default;
    Conv2d(std::string name, int in_ch, int out_ch, int ksize, int stride, int pad)
        : name_(std::move(name)), in_ch_(in_ch), out_ch_(out_ch), k_(ksize),
          stride_(stride), pad_(pad),
          w_(out_ch, in_ch, ksize, ksize), b_(1, out_ch, 1, 1),
          dw_(out_ch, in_ch, ksize, ksize), db_(1, out_ch, 1, 1) {}

    /// Zero-mean Gaussian weights (stddev 0.02 across the project),
    /// zero biases.
    void init(Rng& rng, T stddev) {
        for (auto& x : w_.v) x = static_cast<T>(rng.normal()) * stddev;
        b_.fill(T(0));
    }

    int out_dim(int in_dim) const { return (in_dim + 2 * pad_ - k_) / stride_ + 1; }

    Tensor<T> forward(const Tensor<T>& x) {
        if (x.c != in_ch_) throw ValidationError(name_ + ": channel mismatch");
        x_ = x;
        const int oh = out_dim(x.h), ow = out_dim(x.w);
        Tensor<T> y(x.n, out_ch_, oh, ow);

        MatX<T> cols = im2col(x, oh, ow);
        Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            wm(w_.v.data(), out_ch_, in_ch_ * k_ * k_);
        MatX<T> out = wm * cols;  // [out_ch, n*oh*ow]

        const std::size_t plane = static_cast<std::size_t>(oh) * ow;
        for (int in = 0; in < x.n; ++in) {
            for (int oc = 0; oc < out_ch_; ++oc) {
                T bias = b_.v[static_cast<std::size_t>(oc)];
                T* dst = &y.v[(static_cast<std::size_t>(in) * out_ch_ + oc) * plane];
                const std::size_t col0 = static_cast<std::size_t>(in) * plane;
                for (std::size_t j = 0; j < plane; ++j) {
                    dst[j] = out(oc, static_cast<Eigen::Index>(col0 + j)) + bias;
                }
            }
        }
        return y;
    }

    /// dY -> dX; accumulates dW/db unless with_param_grads is false (the
    /// generator update propagates through the discriminator without
    /// touching its gradients).
    Tensor<T> backward(const Tensor<T>& dy, bool with_param_grads = true) {
        const int oh = dy.h, ow = dy.w;
        const std::size_t plane = static_cast<std::size_t>(oh) * ow;

        MatX<T> dym(out_ch_, static_cast<Eigen::Index>(dy.n * plane));
        for (int in = 0; in < dy.n; ++in) {
            for (int oc = 0; oc < out_ch_; ++oc) {
                const T* src = &dy.v[(static_cast<std::size_t>(in) * out_ch_ + oc) * plane];
                const std::size_t col0 = static_cast<std::size_t>(in) * plane;
                for (std::size_t j = 0; j < plane; ++j) {
                    dym(oc, static_cast<Eigen::Index>(col0 + j)) = src[j];
                }
            }
        }

        Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            wm(w_.v.data(), out_ch_, in_ch_ * k_ * k_);

        if (with_param_grads) {
            MatX<T> cols = im2col(x_, oh, ow);
            Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
                dwm(dw_.v.data(), out_ch_, in_ch_ * k_ * k_);
            dwm.noalias() += dym * cols.transpose();
            for (int oc = 0; oc < out_ch_; ++oc) {
                db_.v[static_cast<std::size_t>(oc)] += dym.row(oc).sum();
            }
        }

        MatX<T> dcols = wm.transpose() * dym;  // [in_ch*k*k, n*oh*ow]
        return col2im(dcols, x_.n, x_.h, x_.w, oh, ow);
    }

    void zero_grads() {
        dw_.fill(T(0));
        db_.fill(T(0));
    }

    std::vector<ParamRef<T>> params() {
        return {{name_ + ".w", &w_, &dw_}, {name_ + ".b", &b_, &db_}};
    }

    const std::string& name() const { return name_; }
    int in_channels() const { return in_ch_; }
    int out_channels() const { return out_ch_; }

private:
    MatX<T> im2col(const Tensor<T>& x, int oh, int ow) const {
        const int ckk = in_ch_ * k_ * k_;
        MatX<T> cols(ckk, static_cast<Eigen::Index>(x.n) * oh * ow);
        const std::size_t plane = static_cast<std::size_t>(oh) * ow;
#pragma omp parallel for schedule(static) collapse(2)
        for (int in = 0; in < x.n; ++in) {
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    const auto col =
                        static_cast<Eigen::Index>(in * plane + static_cast<std::size_t>(oy) * ow + ox);
                    T* dst = cols.data() + static_cast<std::size_t>(col) * ckk;
                    int r = 0;
                    for (int ic = 0; ic < in_ch_; ++ic) {
                        for (int ky = 0; ky < k_; ++ky) {
                            const int iy = oy * stride_ - pad_ + ky;
                            for (int kx = 0; kx < k_; ++kx, ++r) {
                                const int ix = ox * stride_ - pad_ + kx;
                                dst[r] = (iy >= 0 && iy < x.h && ix >= 0 && ix < x.w)
                                             ? x.at(in, ic, iy, ix)
                                             : T(0);
                            }
                        }
                    }
                }
            }
        }
        return cols;
    }

    Tensor<T> col2im(const MatX<T>& dcols, int n, int ih, int iw, int oh, int ow) const {
        Tensor<T> dx(n, in_ch_, ih, iw);
        const std::size_t plane = static_cast<std::size_t>(oh) * ow;
        const int ckk = in_ch_ * k_ * k_;
        // Scatter-add; serial over samples to keep accumulation order fixed.
        for (int in = 0; in < n; ++in) {
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    const auto col =
                        static_cast<Eigen::Index>(in * plane + static_cast<std::size_t>(oy) * ow + ox);
                    const T* src = dcols.data() + static_cast<std::size_t>(col) * ckk;
                    int r = 0;
                    for (int ic = 0; ic < in_ch_; ++ic) {
                        for (int ky = 0; ky < k_; ++ky) {
                            const int iy = oy * stride_ - pad_ + ky;
                            for (int kx = 0; kx < k_; ++kx, ++r) {
                                const int ix = ox * stride_ - pad_ + kx;
                                if (iy >= 0 && iy < ih && ix >= 0 && ix < iw) {
                                    dx.at(in, ic, iy, ix) += src[r];
                                }
                            }
                        }
                    }
                }
            }
        }
        return dx;
    }

    std::string name_;
    int in_ch_ = 0, out_ch_ = 0, k_ = 0, stride_ = 1, pad_ = 0;
    Tensor<T> w_, b_, dw_, db_;
    Tensor<T> x_;  // forward cache
};

/// LeakyReLU (slope 0 gives plain ReLU).
template <typename T>
class LeakyRelu {
public:
    explicit LeakyRelu(T slope = T(0.2)) : slope_(slope) {}

    Tensor<T> forward(const Tensor<T>& x) {
        x_ = x;
        Tensor<T> y = x;
        for (auto& v : y.v) {
            if (v < T(0)) v *= slope_;
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& dy) const {
        Tensor<T> dx = dy;
        for (std::size_t i = 0; i < dx.v.size(); ++i) {
            if (x_.v[i] < T(0)) dx.v[i] *= slope_;
        }
        return dx;
    }

private:
    T slope_;
    Tensor<T> x_;
};

/// Logistic squashing onto (0,1); the generator's output activation.
template <typename T>
class Sigmoid {
public:
    Tensor<T> forward(const Tensor<T>& x) {
        y_ = x;
        for (auto& v : y_.v) v = T(1) / (T(1) + std::exp(-v));
        return y_;
    }

    Tensor<T> backward(const Tensor<T>& dy) const {
        Tensor<T> dx = dy;
        for (std::size_t i = 0; i < dx.v.size(); ++i) {
            dx.v[i] *= y_.v[i] * (T(1) - y_.v[i]);
        }
        return dx;
    }

private:
    Tensor<T> y_;
};

/// Nearest-neighbour 2x upsample; the stride-2 upsampling half of each
/// decoder stage (followed by a 3x3 convolution).
template <typename T>
Tensor<T> upsample2x(const Tensor<T>& x) {
    Tensor<T> y(x.n, x.c, x.h * 2, x.w * 2);
    for (int in = 0; in < x.n; ++in)
        for (int ic = 0; ic < x.c; ++ic)
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix) {
                    const T v = x.at(in, ic, iy, ix);
                    y.at(in, ic, 2 * iy, 2 * ix) = v;
                    y.at(in, ic, 2 * iy, 2 * ix + 1) = v;
                    y.at(in, ic, 2 * iy + 1, 2 * ix) = v;
                    y.at(in, ic, 2 * iy + 1, 2 * ix + 1) = v;
                }
    return y;
}

template <typename T>
Tensor<T> upsample2x_backward(const Tensor<T>& dy) {
    Tensor<T> dx(dy.n, dy.c, dy.h / 2, dy.w / 2);
    for (int in = 0; in < dy.n; ++in)
        for (int ic = 0; ic < dy.c; ++ic)
            for (int iy = 0; iy < dx.h; ++iy)
                for (int ix = 0; ix < dx.w; ++ix) {
                    dx.at(in, ic, iy, ix) = dy.at(in, ic, 2 * iy, 2 * ix) +
                                            dy.at(in, ic, 2 * iy, 2 * ix + 1) +
                                            dy.at(in, ic, 2 * iy + 1, 2 * ix) +
                                            dy.at(in, ic, 2 * iy + 1, 2 * ix + 1);
                }
    return dx;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w) {
        throw ValidationError("concat_channels: spatial/batch shape mismatch");
    }
    Tensor<T> y(a.n, a.c + b.c, a.h, a.w);
    const std::size_t plane = static_cast<std::size_t>(a.h) * a.w;
    for (int in = 0; in < a.n; ++in) {
        std::copy_n(&a.v[static_cast<std::size_t>(in) * a.c * plane], a.c * plane,
                    &y.v[static_cast<std::size_t>(in) * y.c * plane]);
        std::copy_n(&b.v[static_cast<std::size_t>(in) * b.c * plane], b.c * plane,
                    &y.v[static_cast<std::size_t>(in) * y.c * plane + a.c * plane]);
    }
    return y;
}

/// Stacks two same-shaped tensors along the batch dimension.
template <typename T>
Tensor<T> concat_batch(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.c != b.c || a.h != b.h || a.w != b.w) {
        throw ValidationError("concat_batch: per-sample shape mismatch");
    }
    Tensor<T> y(a.n + b.n, a.c, a.h, a.w);
    std::copy(a.v.begin(), a.v.end(), y.v.begin());
    std::copy(b.v.begin(), b.v.end(), y.v.begin() + static_cast<std::ptrdiff_t>(a.v.size()));
    return y;
}

/// Splits a batch back at sample index n_a.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> split_batch(const Tensor<T>& y, int n_a) {
    Tensor<T> a(n_a, y.c, y.h, y.w);
    Tensor<T> b(y.n - n_a, y.c, y.h, y.w);
    std::copy_n(y.v.begin(), a.v.size(), a.v.begin());
    std::copy_n(y.v.begin() + static_cast<std::ptrdiff_t>(a.v.size()), b.v.size(), b.v.begin());
    return {std::move(a), std::move(b)};
}

/// Splits a gradient flowing into concat_channels(a, b) back into the two
/// operand gradients; c_a is a's channel count.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> split_channels(const Tensor<T>& dy, int c_a) {
    Tensor<T> da(dy.n, c_a, dy.h, dy.w);
    Tensor<T> db(dy.n, dy.c - c_a, dy.h, dy.w);
    const std::size_t plane = static_cast<std::size_t>(dy.h) * dy.w;
    for (int in = 0; in < dy.n; ++in) {
        std::copy_n(&dy.v[static_cast<std::size_t>(in) * dy.c * plane], c_a * plane,
                    &da.v[static_cast<std::size_t>(in) * c_a * plane]);
        std::copy_n(&dy.v[static_cast<std::size_t>(in) * dy.c * plane + c_a * plane],
                    (dy.c - c_a) * plane,
                    &db.v[static_cast<std::size_t>(in) * db.c * plane]);
    }
    return {std::move(da), std::move(db)};
}

}  // namespace delit::nn
