/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <filesystem>

#include "delit/light_sim.hpp"

namespace delit {

/// Best-effort reduction of an equirectangular 8-bit PNG panorama to the
/// analytic light model: median-cut extraction of at most 8 dominant
/// directional lights on the camera-facing hemisphere plus the residual
/// mean as ambient. Regions whose centroid faces away from the camera are
/// folded into the ambient term.
EnvironmentLight load_environment(const std::filesystem::path& png_path);

}  // namespace delit
