/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "delit/errors.hpp"

namespace delit {

void validate_unit_range(const Image& img, const char* what) {
    for (float v : img.pixels) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
            throw ValidationError(std::string(what) +
                                  ": pixel value outside [0,1] or non-finite (" +
                                  std::to_string(v) + ")");
        }
    }
}

Image resize_bilinear(const Image& src, int new_w, int new_h) {
    if (new_w <= 0 || new_h <= 0) {
        throw ValidationError("resize_bilinear: target dimensions must be positive");
    }
    if (new_w == src.width && new_h == src.height) return src;

    Image dst(new_w, new_h);
    const float sx = static_cast<float>(src.width) / new_w;
    const float sy = static_cast<float>(src.height) / new_h;
    for (int y = 0; y < new_h; ++y) {
        // Pixel-center mapping keeps the resample shift-free.
        float fy = (y + 0.5f) * sy - 0.5f;
        int y0 = static_cast<int>(std::floor(fy));
        float wy = fy - y0;
        int y1 = std::min(y0 + 1, src.height - 1);
        y0 = std::clamp(y0, 0, src.height - 1);
        for (int x = 0; x < new_w; ++x) {
            float fx = (x + 0.5f) * sx - 0.5f;
            int x0 = static_cast<int>(std::floor(fx));
            float wx = fx - x0;
            int x1 = std::min(x0 + 1, src.width - 1);
            x0 = std::clamp(x0, 0, src.width - 1);
            for (int c = 0; c < 3; ++c) {
                float top = src.at(y0, x0, c) * (1.0f - wx) + src.at(y0, x1, c) * wx;
                float bot = src.at(y1, x0, c) * (1.0f - wx) + src.at(y1, x1, c) * wx;
                dst.at(y, x, c) = top * (1.0f - wy) + bot * wy;
            }
        }
    }
    return dst;
}

double mean_abs_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw ValidationError("mean_abs_diff: image shapes differ");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        acc += std::fabs(static_cast<double>(a.pixels[i]) - b.pixels[i]);
    }
    return a.pixels.empty() ? 0.0 : acc / static_cast<double>(a.pixels.size());
}

bool images_equal(const Image& a, const Image& b) {
    return a.same_shape(b) && a.pixels == b.pixels;
}

}  // namespace delit
