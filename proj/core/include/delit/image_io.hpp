/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <filesystem>

#include "delit/image.hpp"

namespace delit {

/// Writes an 8-bit 3-channel sRGB PNG. Pixels are clamped to [0,1] and
/// encoded with the IEC 61966-2-1 curve, then rounded to nearest level.
void save_png(const Image& img, const std::filesystem::path& path);

/// Reads a PNG (or any codec-supported raster) into a linear-RGB image.
/// Gray and alpha inputs are expanded/flattened to 3 channels.
Image load_png(const std::filesystem::path& path);

}  // namespace delit
