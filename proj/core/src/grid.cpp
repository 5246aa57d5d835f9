/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/grid.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "delit/color.hpp"
#include "delit/errors.hpp"

namespace delit {

namespace {

constexpr int kMargin = 4;
constexpr int kGutter = 4;
constexpr int kTitleStrip = 16;

std::uint8_t encode8(float linear) {
    const float s = srgb_encode(std::clamp(linear, 0.0f, 1.0f));
    return static_cast<std::uint8_t>(std::lround(s * 255.0f));
}

}  // namespace

void export_grid(const std::vector<std::vector<Image>>& rows,
                 const std::vector<std::string>& column_titles,
                 const std::filesystem::path& out_path) {
    if (rows.empty()) throw ValidationError("export_grid: no rows");
    const std::size_t n_cols = column_titles.size();
    if (n_cols == 0) throw ValidationError("export_grid: no column titles");
    const int cell_w = rows[0].empty() ? 0 : rows[0][0].width;
    const int cell_h = rows[0].empty() ? 0 : rows[0][0].height;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != n_cols) {
            throw ValidationError("export_grid: row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " cells, expected " +
                                  std::to_string(n_cols));
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            const Image& img = rows[r][c];
            if (img.width != cell_w || img.height != cell_h) {
                throw ValidationError("export_grid: row " + std::to_string(r) + ", column " +
                                      std::to_string(c) + " is " + std::to_string(img.width) +
                                      "x" + std::to_string(img.height) + ", expected " +
                                      std::to_string(cell_w) + "x" + std::to_string(cell_h));
            }
        }
    }

    const int ncols = static_cast<int>(n_cols);
    const int nrows = static_cast<int>(rows.size());
    const int width = 2 * kMargin + ncols * cell_w + (ncols - 1) * kGutter;
    const int height = 2 * kMargin + kTitleStrip + kGutter + nrows * cell_h + (nrows - 1) * kGutter;

    cv::Mat canvas(height, width, CV_8UC3, cv::Scalar(255, 255, 255));
    const int grid_top = kMargin + kTitleStrip + kGutter;
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < ncols; ++c) {
            const Image& img = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const int x0 = kMargin + c * (cell_w + kGutter);
            const int y0 = grid_top + r * (cell_h + kGutter);
            for (int y = 0; y < cell_h; ++y) {
                auto* row_ptr = canvas.ptr<cv::Vec3b>(y0 + y);
                for (int x = 0; x < cell_w; ++x) {
                    row_ptr[x0 + x] = cv::Vec3b(encode8(img.at(y, x, 2)), encode8(img.at(y, x, 1)),
                                                encode8(img.at(y, x, 0)));
                }
            }
        }
    }

    constexpr auto font = cv::FONT_HERSHEY_SIMPLEX;
    constexpr double font_scale = 0.35;
    for (int c = 0; c < ncols; ++c) {
        const std::string& title = column_titles[static_cast<std::size_t>(c)];
        int baseline = 0;
        const cv::Size ts = cv::getTextSize(title, font, font_scale, 1, &baseline);
        const int col_x = kMargin + c * (cell_w + kGutter);
        const int tx = std::max(col_x, col_x + (cell_w - ts.width) / 2);
        const int ty = kMargin + (kTitleStrip + ts.height) / 2;
        cv::putText(canvas, title, cv::Point(tx, ty), font, font_scale, cv::Scalar(40, 40, 40), 1,
                    cv::LINE_8);
    }

    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    if (!cv::imwrite(out_path.string(), canvas,
                     {cv::IMWRITE_PNG_COMPRESSION, 6})) {
        throw IoError("export_grid: failed to write " + out_path.string());
    }
}

}  // namespace delit
