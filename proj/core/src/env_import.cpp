/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/env_import.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "delit/errors.hpp"
#include "delit/image_io.hpp"

namespace delit {

namespace {

struct Region {
    int x0, y0, x1, y1;  // half-open pixel rectangle
};

struct PanoramaGrid {
    int width, height;
    std::vector<double> lum;       // solid-angle-weighted luminance
    std::vector<double> rgb;       // solid-angle-weighted radiance, 3 per pixel
    std::vector<double> sin_theta; // per-row solid-angle weight

    double region_lum(const Region& r) const {
        double acc = 0.0;
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) acc += lum[static_cast<std::size_t>(y) * width + x];
        return acc;
    }
};

/// Direction for an equirectangular pixel, in camera space: the panorama
/// center row/column maps to +z (straight at the surface), x east, y up.
std::array<double, 3> pixel_direction(int x, int y, int width, int height) {
    const double phi = 2.0 * M_PI * ((x + 0.5) / width - 0.5);   // [-pi, pi)
    const double theta = M_PI * ((y + 0.5) / height - 0.5);      // [-pi/2, pi/2)
    const double c = std::cos(theta);
    return {c * std::sin(phi), -std::sin(theta), c * std::cos(phi)};
}

}  // namespace

EnvironmentLight load_environment(const std::filesystem::path& png_path) {
    const Image pano = load_png(png_path);
    const int W = pano.width, H = pano.height;

    PanoramaGrid grid;
    grid.width = W;
    grid.height = H;
    grid.lum.resize(static_cast<std::size_t>(W) * H);
    grid.rgb.resize(static_cast<std::size_t>(W) * H * 3);
    double total_weight = 0.0;
    std::array<double, 3> total_rgb{0, 0, 0};
    for (int y = 0; y < H; ++y) {
        const double w = std::cos(M_PI * ((y + 0.5) / H - 0.5));  // solid angle per pixel
        for (int x = 0; x < W; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * W + x;
            double r = pano.at(y, x, 0), g = pano.at(y, x, 1), b = pano.at(y, x, 2);
            grid.rgb[i * 3 + 0] = r * w;
            grid.rgb[i * 3 + 1] = g * w;
            grid.rgb[i * 3 + 2] = b * w;
            grid.lum[i] = (0.2126 * r + 0.7152 * g + 0.0722 * b) * w;
            total_weight += w;
            for (int c = 0; c < 3; ++c) total_rgb[c] += grid.rgb[i * 3 + c];
        }
    }
    if (total_weight <= 0.0) throw IoError("load_environment: degenerate panorama " + png_path.string());

    // Median cut: three rounds of splitting every region along its longer
    // axis at the luminance median -> 8 regions.
    std::vector<Region> regions{{0, 0, W, H}};
    for (int round = 0; round < 3; ++round) {
        std::vector<Region> next;
        for (const Region& r : regions) {
            const int rw = r.x1 - r.x0, rh = r.y1 - r.y0;
            if (rw <= 1 && rh <= 1) {
                next.push_back(r);
                continue;
            }
            const bool split_x = rw >= rh;
            const double half = grid.region_lum(r) / 2.0;
            double acc = 0.0;
            int cut = split_x ? r.x0 + 1 : r.y0 + 1;
            if (split_x) {
                for (int x = r.x0; x < r.x1 - 1; ++x) {
                    for (int y = r.y0; y < r.y1; ++y) acc += grid.lum[static_cast<std::size_t>(y) * W + x];
                    if (acc >= half) { cut = x + 1; break; }
                    cut = x + 2;
                }
                next.push_back({r.x0, r.y0, cut, r.y1});
                next.push_back({cut, r.y0, r.x1, r.y1});
            } else {
                for (int y = r.y0; y < r.y1 - 1; ++y) {
                    for (int x = r.x0; x < r.x1; ++x) acc += grid.lum[static_cast<std::size_t>(y) * W + x];
                    if (acc >= half) { cut = y + 1; break; }
                    cut = y + 2;
                }
                next.push_back({r.x0, r.y0, r.x1, cut});
                next.push_back({r.x0, cut, r.x1, r.y1});
            }
        }
        regions = std::move(next);
    }

    // Each region becomes a directional light at its luminance centroid.
    // Radiance is the region's weighted-mean radiance scaled by its share
    // of the sphere; back-facing centroids fall through to ambient.
    EnvironmentLight env;
    env.env_id = "import-" + png_path.stem().string();
    std::array<double, 3> captured{0, 0, 0};
    for (const Region& r : regions) {
        std::array<double, 3> dir_acc{0, 0, 0};
        std::array<double, 3> rgb_acc{0, 0, 0};
        double lum_acc = 0.0, w_acc = 0.0;
        for (int y = r.y0; y < r.y1; ++y) {
            for (int x = r.x0; x < r.x1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * W + x;
                const auto d = pixel_direction(x, y, W, H);
                const double lw = grid.lum[i];
                for (int c = 0; c < 3; ++c) {
                    dir_acc[c] += d[c] * lw;
                    rgb_acc[c] += grid.rgb[i * 3 + c];
                }
                lum_acc += lw;
                w_acc += std::cos(M_PI * ((y + 0.5) / H - 0.5));
            }
        }
        if (lum_acc <= 0.0 || w_acc <= 0.0) continue;
        double n = std::sqrt(dir_acc[0] * dir_acc[0] + dir_acc[1] * dir_acc[1] +
                             dir_acc[2] * dir_acc[2]);
        if (n <= 1e-12 || dir_acc[2] / n <= 1e-3) continue;  // folded into ambient
        DirectionalLight light;
        for (int c = 0; c < 3; ++c) {
            light.direction[c] = dir_acc[c] / n;
            // Mean radiance over the region, weighted by its sphere share.
            light.radiance[c] = (rgb_acc[c] / w_acc) * (w_acc / total_weight) * M_PI;
        }
        env.lights.push_back(light);
        for (int c = 0; c < 3; ++c) captured[c] += rgb_acc[c];
    }

    // Residual energy (everything not claimed by a light) becomes ambient.
    for (int c = 0; c < 3; ++c) {
        env.ambient[c] = std::max(0.0, (total_rgb[c] - captured[c]) / total_weight);
    }
    validate_environment(env);
    return env;
}

}  // namespace delit
