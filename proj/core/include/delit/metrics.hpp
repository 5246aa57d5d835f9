/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "delit/image.hpp"
#include "delit/train.hpp"

namespace delit {

/// Mean absolute difference over all pixels and channels.
double l1_error(const Image& a, const Image& b);

/// -10 log10(MSE), with one quirk for reports: identical (or nearly
/// identical) images return the 99.0 dB sentinel instead of infinity.
double psnr(const Image& a, const Image& b);
double psnr_from_mse(double mse);
inline constexpr double kPsnrSentinel = 99.0;

/// Structural similarity over sliding 8x8 uniform windows, C1 = 0.01^2,
/// C2 = 0.03^2, biased (1/64) moments, averaged over windows and
/// channels. Requires min(width, height) >= 8.
double ssim(const Image& a, const Image& b);

struct PairMetrics {
    std::string pair_id;
    double l1 = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double median = 0.0;  // midpoint average for even counts
    double std_dev = 0.0;  // population form
};

struct MetricReport {
    std::string baseline;  // "model" or "identity"
    std::vector<PairMetrics> per_pair;  // ordered by pair_id
    Aggregate l1, psnr_db, ssim;
    std::vector<std::string> failures;  // "<pair_id>: <reason>"
};

struct EvaluationResult {
    MetricReport model;
    MetricReport identity;
};

/// Scores every pair of one split: the model report compares infer(lit)
/// against albedo, the identity report compares lit itself against
/// albedo. Per-pair failures are recorded and skipped, not fatal.
EvaluationResult evaluate(ModelBundle& bundle, const std::filesystem::path& manifest_path,
                          Split split);

/// Deterministic JSON serialization; identical reports are byte-identical
/// on disk.
void save_report(const MetricReport& report, const std::filesystem::path& path);

}  // namespace delit
