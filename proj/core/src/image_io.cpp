/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "delit/color.hpp"
#include "delit/errors.hpp"

namespace delit {

void save_png(const Image& img, const std::filesystem::path& path) {
    if (img.width <= 0 || img.height <= 0) {
        throw ValidationError("save_png: empty image for " + path.string());
    }
    cv::Mat mat(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = mat.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                float v = std::clamp(img.at(y, x, c), 0.0f, 1.0f);
                float s = srgb_encode(v);
                // OpenCV stores BGR.
                row[x][2 - c] = static_cast<unsigned char>(std::lround(s * 255.0f));
            }
        }
    }
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (!cv::imwrite(path.string(), mat, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
        throw IoError("save_png: failed to write " + path.string());
    }
}

Image load_png(const std::filesystem::path& path) {
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (mat.empty()) {
        throw IoError("load_png: cannot read " + path.string());
    }
    Image img(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y) {
        const auto* row = mat.ptr<cv::Vec3b>(y);
        for (int x = 0; x < mat.cols; ++x) {
            for (int c = 0; c < 3; ++c) {
                img.at(y, x, c) = srgb_decode(row[x][2 - c] / 255.0f);
            }
        }
    }
    return img;
}

}  // namespace delit
