/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "delit/errors.hpp"
#include "delit/label_synth.hpp"

using namespace delit;

namespace {

LabelSpec valid_spec() {
    LabelSpec s;
    s.label_id = "000042";
    s.seed = 7;
    s.width = 64;
    s.height = 64;
    s.palette_size = 4;
    s.element_count = 10;
    return s;
}

std::size_t distinct_colors(const Image& img) {
    std::set<std::array<float, 3>> colors;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            colors.insert({img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2)});
    return colors.size();
}

double rgb_hue_deg(float r, float g, float b) {
    const float mx = std::max({r, g, b});
    const float mn = std::min({r, g, b});
    const float d = mx - mn;
    if (d < 1e-9f) return 0.0;
    double h;
    if (mx == r) h = std::fmod((g - b) / d, 6.0f);
    else if (mx == g) h = (b - r) / d + 2.0f;
    else h = (r - g) / d + 4.0f;
    h *= 60.0;
    return h < 0.0 ? h + 360.0 : h;
}

}  // namespace

TEST_SUITE_BEGIN("label_synth");

TEST_CASE("synth_label is bit-deterministic in its spec") {
    const LabelSpec spec = valid_spec();
    CHECK(images_equal(synth_label(spec), synth_label(spec)));
}

TEST_CASE("element_count=0 hook yields a constant background fill") {
    LabelSpec spec = valid_spec();
    spec.element_count = 0;
    const Image img = detail::compose_label(spec);
    const float r = img.at(0, 0, 0), g = img.at(0, 0, 1), b = img.at(0, 0, 2);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            REQUIRE(img.at(y, x, 0) == r);
            REQUIRE(img.at(y, x, 1) == g);
            REQUIRE(img.at(y, x, 2) == b);
        }
    CHECK(distinct_colors(img) == 1);
}

TEST_CASE("output stays in gamut with at least two distinct colors") {
    for (std::uint64_t seed : {0ull, 3ull, 99ull, 12345ull}) {
        LabelSpec spec = valid_spec();
        spec.seed = seed;
        const Image img = synth_label(spec);
        const auto [mn, mx] = std::minmax_element(img.pixels.begin(), img.pixels.end());
        CHECK(*mn >= 0.0f);
        CHECK(*mx <= 1.0f);
        CHECK(distinct_colors(img) >= 2);
    }
}

TEST_CASE("validation errors name the offending field") {
    LabelSpec spec = valid_spec();
    spec.width = 48;
    CHECK_THROWS_WITH_AS(synth_label(spec), doctest::Contains("width"), ValidationError);
    spec = valid_spec();
    spec.height = 1024;
    CHECK_THROWS_WITH_AS(synth_label(spec), doctest::Contains("height"), ValidationError);
    spec = valid_spec();
    spec.palette_size = 1;
    CHECK_THROWS_WITH_AS(synth_label(spec), doctest::Contains("palette_size"), ValidationError);
    spec = valid_spec();
    spec.element_count = 41;
    CHECK_THROWS_WITH_AS(synth_label(spec), doctest::Contains("element_count"), ValidationError);
    spec = valid_spec();
    spec.label_id = "";
    CHECK_THROWS_WITH_AS(synth_label(spec), doctest::Contains("label_id"), ValidationError);
}

TEST_CASE("sample_label_batch produces distinct, reproducible labels") {
    const auto batch = sample_label_batch(0, 150, 32, 32);
    REQUIRE(batch.size() == 150);
    std::set<std::string> ids;
    for (const auto& [spec, img] : batch) {
        ids.insert(spec.label_id);
        CHECK(img.width == 32);
        CHECK(img.height == 32);
    }
    CHECK(ids.size() == 150);
    CHECK(batch[0].first.label_id == "000000");
    CHECK(batch[149].first.label_id == "000149");

    const auto again = sample_label_batch(0, 1, 32, 32);
    CHECK(again[0].first.label_id == batch[0].first.label_id);
    CHECK(images_equal(again[0].second, batch[0].second));
}

TEST_CASE("different master seeds change at least one image") {
    const auto a = sample_label_batch(0, 10, 32, 32);
    const auto b = sample_label_batch(1, 10, 32, 32);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!images_equal(a[i].second, b[i].second)) any_differ = true;
    }
    CHECK(any_differ);
}

TEST_CASE("background hues avoid a dominant bucket over a large batch") {
    const auto batch = sample_label_batch(2026, 120, 32, 32);
    std::array<int, 6> buckets{};
    for (const auto& [spec, img] : batch) {
        LabelSpec bg = spec;
        bg.element_count = 0;  // the documented hook exposes the bare background
        const Image fill = detail::compose_label(bg);
        const double hue = rgb_hue_deg(fill.at(0, 0, 0), fill.at(0, 0, 1), fill.at(0, 0, 2));
        ++buckets[std::min<std::size_t>(5, static_cast<std::size_t>(hue / 60.0))];
    }
    const int max_bucket = *std::max_element(buckets.begin(), buckets.end());
    CHECK(max_bucket <= static_cast<int>(0.4 * 120));
}

TEST_SUITE_END();
