/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <vector>

namespace delit {

/// H x W x 3 array of linear-RGB floats, row-major, channel-interleaved.
/// Albedo and lit images share this type; both carry the [0,1] range
/// contract, checked by validate_unit_range() where the contract applies.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;  // size = width * height * 3

    Image() = default;
    Image(int w, int h, float fill = 0.0f)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    float& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    float at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }

    std::size_t value_count() const { return pixels.size(); }
};

/// Throws ValidationError when any value is NaN/Inf or outside [0,1].
/// `what` names the image in the error message.
void validate_unit_range(const Image& img, const char* what);

/// Bilinear resample to (new_w, new_h). The documented filter for every
/// resolution change in the pipeline (inference input fitting, CLI output
/// restoration).
Image resize_bilinear(const Image& src, int new_w, int new_h);

/// Mean absolute difference over all channels; shapes must match.
double mean_abs_diff(const Image& a, const Image& b);

bool images_equal(const Image& a, const Image& b);

}  // namespace delit
