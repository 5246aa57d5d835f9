/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "delit/image.hpp"

namespace delit {

/// Tiles rows x columns of same-sized images into one PNG with labelled
/// columns: a 16-pixel title strip, 4-pixel white gutters, 4-pixel
/// margin. Output dimensions are
///   width  = 2*4 + C*W + (C-1)*4
///   height = 2*4 + 16 + 4 + R*H + (R-1)*4.
/// Typical uses are 3-column input / prediction / ground-truth triptychs
/// and 4-column method comparisons. Size mismatches raise a validation
/// error naming the offending row.
void export_grid(const std::vector<std::vector<Image>>& rows,
                 const std::vector<std::string>& column_titles,
                 const std::filesystem::path& out_path);

}  // namespace delit
