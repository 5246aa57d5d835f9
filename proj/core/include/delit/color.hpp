/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <array>

namespace delit {

// All images are linear RGB internally. Disk PNGs are 8-bit sRGB with the
// IEC 61966-2-1 piecewise transfer function; these two functions are the
// only place the curve lives.

/// Linear [0,1] -> sRGB-encoded [0,1].
float srgb_encode(float linear);

/// sRGB-encoded [0,1] -> linear [0,1].
float srgb_decode(float encoded);

/// HSV -> linear RGB. h in degrees (wrapped into [0,360)), s and v in [0,1].
/// The HSV cylinder is interpreted over linear RGB, so flat fills sampled in
/// HSV land directly in the working space.
std::array<float, 3> hsv_to_linear_rgb(float h_deg, float s, float v);

}  // namespace delit
