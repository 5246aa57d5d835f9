/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "delit/errors.hpp"

namespace delit {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ValidationError(std::string(op) + ": image shapes differ (" +
                              std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                              std::to_string(b.width) + "x" + std::to_string(b.height) + ")");
    }
}

}  // namespace

double l1_error(const Image& a, const Image& b) {
    require_same_shape(a, b, "l1_error");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        acc += std::abs(static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]));
    }
    return acc / static_cast<double>(a.pixels.size());
}

double psnr_from_mse(double mse) {
    if (mse <= 0.0) return kPsnrSentinel;
    const double db = -10.0 * std::log10(mse);
    return db > kPsnrSentinel ? kPsnrSentinel : db;
}

double psnr(const Image& a, const Image& b) {
    require_same_shape(a, b, "psnr");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        acc += d * d;
    }
    return psnr_from_mse(acc / static_cast<double>(a.pixels.size()));
}

double ssim(const Image& a, const Image& b) {
    require_same_shape(a, b, "ssim");
    constexpr int kWin = 8;
    if (a.width < kWin || a.height < kWin) {
        throw ValidationError("ssim: images must be at least 8x8, got " +
                              std::to_string(a.width) + "x" + std::to_string(a.height));
    }
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    constexpr double inv_n = 1.0 / (kWin * kWin);

    double total = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < 3; ++c) {
        for (int wy = 0; wy + kWin <= a.height; ++wy) {
            for (int wx = 0; wx + kWin <= a.width; ++wx) {
                double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
                for (int y = wy; y < wy + kWin; ++y) {
                    for (int x = wx; x < wx + kWin; ++x) {
                        const double va = a.at(y, x, c);
                        const double vb = b.at(y, x, c);
                        sx += va;
                        sy += vb;
                        sxx += va * va;
                        syy += vb * vb;
                        sxy += va * vb;
                    }
                }
                const double mx = sx * inv_n, my = sy * inv_n;
                const double vx = sxx * inv_n - mx * mx;
                const double vy = syy * inv_n - my * my;
                const double cov = sxy * inv_n - mx * my;
                total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                         ((mx * mx + my * my + c1) * (vx + vy + c2));
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

namespace {

Aggregate aggregate(std::vector<double> values) {
    Aggregate agg;
    if (values.empty()) return agg;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.std_dev = std::sqrt(ss / n);
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    agg.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return agg;
}

void finalize(MetricReport& r) {
    std::sort(r.per_pair.begin(), r.per_pair.end(),
              [](const PairMetrics& x, const PairMetrics& y) { return x.pair_id < y.pair_id; });
    std::vector<double> l1s, psnrs, ssims;
    for (const auto& p : r.per_pair) {
        l1s.push_back(p.l1);
        psnrs.push_back(p.psnr_db);
        ssims.push_back(p.ssim);
    }
    r.l1 = aggregate(std::move(l1s));
    r.psnr_db = aggregate(std::move(psnrs));
    r.ssim = aggregate(std::move(ssims));
    std::sort(r.failures.begin(), r.failures.end());
}

}  // namespace

EvaluationResult evaluate(ModelBundle& bundle, const std::filesystem::path& manifest_path,
                          Split split) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    const std::filesystem::path root = manifest_path.parent_path();

    EvaluationResult res;
    res.model.baseline = "model";
    res.identity.baseline = "identity";

    std::size_t n_split = 0;
    for (const auto& entry : manifest.entries) {
        if (entry.split != split) continue;
        ++n_split;
        LoadedPair pair;
        try {
            pair = load_pair(root, entry);
        } catch (const std::exception& e) {
            res.model.failures.push_back(entry.pair_id + ": " + e.what());
            res.identity.failures.push_back(entry.pair_id + ": " + e.what());
            continue;
        }
        res.identity.per_pair.push_back({entry.pair_id, l1_error(pair.lit, pair.albedo),
                                         psnr(pair.lit, pair.albedo), ssim(pair.lit, pair.albedo)});
        try {
            const Image pred = infer(bundle, pair.lit);
            res.model.per_pair.push_back({entry.pair_id, l1_error(pred, pair.albedo),
                                          psnr(pred, pair.albedo), ssim(pred, pair.albedo)});
        } catch (const std::exception& e) {
            res.model.failures.push_back(entry.pair_id + ": " + e.what());
        }
    }
    if (n_split == 0) {
        throw ValidationError("evaluate: split '" + std::string(to_string(split)) +
                              "' has no pairs in " + manifest_path.string());
    }
    finalize(res.model);
    finalize(res.identity);
    return res;
}

void save_report(const MetricReport& report, const std::filesystem::path& path) {
    using json = nlohmann::ordered_json;
    json j;
    j["baseline"] = report.baseline;
    j["pair_count"] = report.per_pair.size();
    auto agg = [](const Aggregate& a) {
        return json{{"mean", a.mean}, {"median", a.median}, {"std", a.std_dev}};
    };
    j["aggregates"] = {
        {"l1", agg(report.l1)}, {"psnr_db", agg(report.psnr_db)}, {"ssim", agg(report.ssim)}};
    json pairs = json::array();
    for (const auto& p : report.per_pair) {
        pairs.push_back({{"pair_id", p.pair_id}, {"l1", p.l1}, {"psnr_db", p.psnr_db},
                         {"ssim", p.ssim}});
    }
    j["per_pair"] = std::move(pairs);
    j["failures"] = report.failures;

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("save_report: cannot open " + path.string());
    f << j.dump(2) << '\n';
    if (!f) throw IoError("save_report: write failed for " + path.string());
}

}  // namespace delit
