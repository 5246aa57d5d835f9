/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/label_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "delit/color.hpp"
#include "delit/errors.hpp"
#include "delit/rng.hpp"

namespace delit {

namespace {

bool is_pow2_in_range(int v) {
    if (v < 32 || v > 512) return false;
    return (v & (v - 1)) == 0;
}

using Color = std::array<float, 3>;

Color sample_palette_color(Rng& rng) {
    float h = static_cast<float>(rng.uniform(0.0, 360.0));
    float s = static_cast<float>(rng.uniform(0.1, 1.0));
    float v = static_cast<float>(rng.uniform(0.15, 1.0));
    return hsv_to_linear_rgb(h, s, v);
}

void fill_rect(Image& img, int x0, int y0, int x1, int y1, const Color& c) {
    x0 = std::clamp(x0, 0, img.width);
    x1 = std::clamp(x1, 0, img.width);
    y0 = std::clamp(y0, 0, img.height);
    y1 = std::clamp(y1, 0, img.height);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            img.at(y, x, 0) = c[0];
            img.at(y, x, 1) = c[1];
            img.at(y, x, 2) = c[2];
        }
    }
}

void fill_ellipse(Image& img, float cx, float cy, float rx, float ry, const Color& c) {
    int y0 = std::clamp(static_cast<int>(std::floor(cy - ry)), 0, img.height);
    int y1 = std::clamp(static_cast<int>(std::ceil(cy + ry)) + 1, 0, img.height);
    int x0 = std::clamp(static_cast<int>(std::floor(cx - rx)), 0, img.width);
    int x1 = std::clamp(static_cast<int>(std::ceil(cx + rx)) + 1, 0, img.width);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            float dx = (x + 0.5f - cx) / rx;
            float dy = (y + 0.5f - cy) / ry;
            if (dx * dx + dy * dy <= 1.0f) {
                img.at(y, x, 0) = c[0];
                img.at(y, x, 1) = c[1];
                img.at(y, x, 2) = c[2];
            }
        }
    }
}

void draw_rect_element(Image& img, Rng& rng, const Color& c) {
    const int W = img.width, H = img.height;
    int w = 1 + static_cast<int>(rng.uniform_int(std::max(1, W / 2)));
    int h = 1 + static_cast<int>(rng.uniform_int(std::max(1, H / 2)));
    int x0 = static_cast<int>(rng.uniform_int(W - w + 1));
    int y0 = static_cast<int>(rng.uniform_int(H - h + 1));
    fill_rect(img, x0, y0, x0 + w, y0 + h, c);
}

void draw_ellipse_element(Image& img, Rng& rng, const Color& c) {
    const int W = img.width, H = img.height;
    float rx = 1.0f + static_cast<float>(rng.uniform(0.0, W / 4.0));
    float ry = 1.0f + static_cast<float>(rng.uniform(0.0, H / 4.0));
    float cx = static_cast<float>(rng.uniform(rx, W - rx));
    float cy = static_cast<float>(rng.uniform(ry, H - ry));
    fill_ellipse(img, cx, cy, rx, ry, c);
}

// A stack of broken horizontal bars; stands in for lines of text without
// pulling in font rendering.
void draw_bar_cluster(Image& img, Rng& rng, const Color& c) {
    const int W = img.width, H = img.height;
    int line_h = std::max(1, static_cast<int>(rng.uniform(H / 32.0, H / 10.0)));
    int n_lines = 1 + static_cast<int>(rng.uniform_int(4));
    int gap = std::max(1, line_h / 2);
    int block_h = n_lines * line_h + (n_lines - 1) * gap;
    int y0 = static_cast<int>(rng.uniform_int(std::max(1, H - block_h)));
    int x_start = static_cast<int>(rng.uniform_int(std::max(1, W / 2)));
    int max_w = W - x_start;
    for (int line = 0; line < n_lines; ++line) {
        int y = y0 + line * (line_h + gap);
        int x = x_start;
        int line_w = std::max(2, static_cast<int>(rng.uniform(max_w * 0.4, max_w * 1.0)));
        while (x < x_start + line_w) {
            int seg = std::max(1, static_cast<int>(rng.uniform(line_h * 1.0, line_h * 4.0)));
            int seg_gap = std::max(1, static_cast<int>(rng.uniform(line_h * 0.3, line_h * 1.0)));
            fill_rect(img, x, y, std::min(x + seg, x_start + line_w), y + line_h, c);
            x += seg + seg_gap;
        }
    }
}

void draw_frame_element(Image& img, Rng& rng, const Color& c) {
    const int W = img.width, H = img.height;
    int t = 1 + static_cast<int>(rng.uniform_int(std::max(1, std::min(W, H) / 8)));
    int inset = static_cast<int>(rng.uniform_int(std::max(1, std::min(W, H) / 6)));
    int x0 = inset, y0 = inset, x1 = W - inset, y1 = H - inset;
    fill_rect(img, x0, y0, x1, y0 + t, c);          // top
    fill_rect(img, x0, y1 - t, x1, y1, c);          // bottom
    fill_rect(img, x0, y0, x0 + t, y1, c);          // left
    fill_rect(img, x1 - t, y0, x1, y1, c);          // right
}

}  // namespace

void validate_label_spec(const LabelSpec& spec) {
    if (spec.label_id.empty()) {
        throw ValidationError("label_id: must be non-empty");
    }
    if (!is_pow2_in_range(spec.width)) {
        throw ValidationError("width: must be a power of two in [32, 512], got " +
                              std::to_string(spec.width));
    }
    if (!is_pow2_in_range(spec.height)) {
        throw ValidationError("height: must be a power of two in [32, 512], got " +
                              std::to_string(spec.height));
    }
    if (spec.palette_size < 2 || spec.palette_size > 8) {
        throw ValidationError("palette_size: must be in [2, 8], got " +
                              std::to_string(spec.palette_size));
    }
    if (spec.element_count < 4 || spec.element_count > 40) {
        throw ValidationError("element_count: must be in [4, 40], got " +
                              std::to_string(spec.element_count));
    }
}

namespace detail {

Image compose_label(const LabelSpec& spec) {
    Rng rng(derive_seed(spec.seed, fnv1a64("label_synth")));

    std::vector<Color> palette(static_cast<std::size_t>(spec.palette_size));
    for (auto& c : palette) c = sample_palette_color(rng);

    Image img(spec.width, spec.height);
    fill_rect(img, 0, 0, spec.width, spec.height, palette[0]);

    for (int i = 0; i < spec.element_count; ++i) {
        // Slot 0 is reserved for the background so composited elements
        // always contrast with it.
        const Color& c = palette[1 + rng.uniform_int(palette.size() - 1)];
        switch (rng.uniform_int(4)) {
            case 0: draw_rect_element(img, rng, c); break;
            case 1: draw_ellipse_element(img, rng, c); break;
            case 2: draw_bar_cluster(img, rng, c); break;
            default: draw_frame_element(img, rng, c); break;
        }
    }
    return img;
}

}  // namespace detail

Image synth_label(const LabelSpec& spec) {
    validate_label_spec(spec);
    return detail::compose_label(spec);
}

std::vector<std::pair<LabelSpec, Image>> sample_label_batch(std::uint64_t master_seed,
                                                            int count,
                                                            int width,
                                                            int height) {
    if (count < 1) {
        throw ValidationError("count: must be >= 1, got " + std::to_string(count));
    }
    std::vector<std::pair<LabelSpec, Image>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        LabelSpec spec;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%06d", i);
        spec.label_id = buf;
        spec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
        spec.width = width;
        spec.height = height;
        Rng rng(derive_seed(spec.seed, fnv1a64("label_params")));
        spec.palette_size = 2 + static_cast<int>(rng.uniform_int(7));    // [2, 8]
        spec.element_count = 4 + static_cast<int>(rng.uniform_int(37));  // [4, 40]
        Image img = synth_label(spec);
        out.emplace_back(std::move(spec), std::move(img));
    }
    return out;
}

}  // namespace delit
