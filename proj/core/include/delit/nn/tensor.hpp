/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <vector>

#include "delit/errors.hpp"
#include "delit/image.hpp"

namespace delit::nn {

/// Dense NCHW tensor. Templated on the scalar so the same layer code
/// trains in float and runs numeric checks in double.
template <typename T>
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<std::size_t>(n_) * c_ * h_ * w_, T(0)) {}

    T& at(int in, int ic, int iy, int ix) {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    T at(int in, int ic, int iy, int ix) const {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    std::size_t size() const { return v.size(); }
    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
    void fill(T value) { std::fill(v.begin(), v.end(), value); }
};

/// Image (HWC, [0,1]) -> single-sample tensor slot `slot` of `dst`.
template <typename T>
void image_to_tensor(const Image& img, Tensor<T>& dst, int slot) {
    if (dst.c != 3 || dst.h != img.height || dst.w != img.width) {
        throw ValidationError("image_to_tensor: shape mismatch");
    }
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) dst.at(slot, c, y, x) = T(img.at(y, x, c));
}

template <typename T>
Image tensor_to_image(const Tensor<T>& src, int slot) {
    Image img(src.w, src.h);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < src.h; ++y)
            for (int x = 0; x < src.w; ++x)
                img.at(y, x, c) = static_cast<float>(src.at(slot, c, y, x));
    return img;
}

}  // namespace delit::nn
