/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "delit/errors.hpp"
#include "delit/label_synth.hpp"
#include "delit/light_sim.hpp"
#include "delit/rng.hpp"

using namespace delit;

namespace {

constexpr double kDeg = M_PI / 180.0;

Image test_albedo(int size = 32, std::uint64_t seed = 7) {
    LabelSpec spec;
    spec.label_id = "t";
    spec.seed = seed;
    spec.width = size;
    spec.height = size;
    spec.palette_size = 5;
    spec.element_count = 8;
    return synth_label(spec);
}

EnvironmentLight ambient_only(double r, double g, double b) {
    EnvironmentLight env;
    env.env_id = "ambient";
    env.ambient = {r, g, b};
    return env;
}

MaterialParams diffuse_only() {
    MaterialParams m;
    m.roughness = 0.5;
    m.metalness = 0.0;
    m.specular_strength = 0.0;
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("light_sim");

TEST_CASE("make_environment is deterministic and class-conformant") {
    const EnvironmentLight a = make_environment(3, DimnessClass::bright);
    const EnvironmentLight b = make_environment(3, DimnessClass::bright);
    CHECK(a.env_id == b.env_id);
    REQUIRE(a.lights.size() == b.lights.size());
    for (std::size_t i = 0; i < a.lights.size(); ++i) {
        CHECK(a.lights[i].direction == b.lights[i].direction);
        CHECK(a.lights[i].radiance == b.lights[i].radiance);
    }

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const EnvironmentLight env = make_environment(seed, DimnessClass::bright);
        CHECK_NOTHROW(validate_environment(env));
        CHECK(env.lights.size() >= 2);
        CHECK(env.lights.size() <= 5);
        for (double amb : env.ambient) {
            CHECK(amb >= 0.4);
            CHECK(amb <= 0.8);
        }
        for (const auto& l : env.lights) {
            const double norm = std::sqrt(l.radiance[0] * l.radiance[0] +
                                          l.radiance[1] * l.radiance[1] +
                                          l.radiance[2] * l.radiance[2]);
            CHECK(norm >= 0.5 - 1e-9);
            CHECK(norm <= 2.0 + 1e-9);
        }
    }
}

TEST_CASE("dim environments carry the warm R>=G>=B bias") {
    for (std::uint64_t seed : {3ull, 17ull, 230ull}) {
        const EnvironmentLight env = make_environment(seed, DimnessClass::dim);
        CHECK(env.lights.size() >= 1);
        CHECK(env.lights.size() <= 2);
        for (const auto& l : env.lights) {
            CHECK(l.radiance[0] >= l.radiance[1]);
            CHECK(l.radiance[1] >= l.radiance[2]);
        }
    }
}

TEST_CASE("environment ids differ across seeds and classes") {
    std::set<std::string> ids;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ids.insert(make_environment(seed, DimnessClass::bright).env_id);
        ids.insert(make_environment(seed, DimnessClass::medium).env_id);
        ids.insert(make_environment(seed, DimnessClass::dim).env_id);
    }
    CHECK(ids.size() == 60);
}

TEST_CASE("rotate_environment identity, full turn, and composition") {
    const EnvironmentLight env = make_environment(5, DimnessClass::medium);

    const EnvironmentLight zero = rotate_environment(env, 0.0);
    for (std::size_t i = 0; i < env.lights.size(); ++i) {
        CHECK(zero.lights[i].direction == env.lights[i].direction);
    }

    const EnvironmentLight full = rotate_environment(env, 360.0);
    EnvironmentLight quad = env;
    for (int k = 0; k < 4; ++k) quad = rotate_environment(quad, 90.0);
    for (std::size_t i = 0; i < env.lights.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            CHECK(std::fabs(full.lights[i].direction[c] - env.lights[i].direction[c]) < 1e-9);
            CHECK(std::fabs(quad.lights[i].direction[c] - env.lights[i].direction[c]) < 1e-9);
        }
    }
    CHECK(quad.ambient == env.ambient);
    CHECK(quad.rotation_deg == doctest::Approx(env.rotation_deg));
}

TEST_CASE("rotation keeps directions unit-norm, z-positive, and tracks the angle") {
    EnvironmentLight env = make_environment(6, DimnessClass::bright);
    env = rotate_environment(env, 123.4);
    CHECK(env.rotation_deg == doctest::Approx(123.4));
    env = rotate_environment(env, 300.0);
    CHECK(env.rotation_deg == doctest::Approx(63.4));
    CHECK_NOTHROW(validate_environment(env));
}

TEST_CASE("normal_map flat is all (0,0,1)") {
    const NormalMap nm = normal_map({GeometryKind::flat, 90.0}, 8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            const float* n = nm.at(y, x);
            CHECK(n[0] == 0.0f);
            CHECK(n[1] == 0.0f);
            CHECK(n[2] == 1.0f);
        }
}

TEST_CASE("cylinder normals: center column faces the camera, arc=180 stays z-positive") {
    const int w = 65;  // odd width puts one column exactly on the axis
    const NormalMap nm = normal_map({GeometryKind::cylinder, 180.0}, w, 4);
    int argmax = 0;
    for (int x = 0; x < w; ++x) {
        REQUIRE(nm.at(1, x)[2] > 0.0f);
        if (nm.at(1, x)[2] > nm.at(1, argmax)[2]) argmax = x;
    }
    CHECK(argmax == w / 2);
    CHECK(nm.at(1, w / 2)[0] == doctest::Approx(0.0));
    CHECK(nm.at(1, w / 2)[2] == doctest::Approx(1.0));
    // Leftmost pixel center sits half a pixel inside the 90-degree edge.
    const double theta0 = 180.0 * kDeg * (0.5 / w - 0.5);
    CHECK(nm.at(1, 0)[0] == doctest::Approx(std::sin(theta0)).epsilon(1e-6));
}

TEST_CASE("box normals tilt the outer quarters by 15 degrees") {
    const NormalMap nm = normal_map({GeometryKind::box, 90.0}, 64, 4);
    const float sin15 = static_cast<float>(std::sin(15.0 * kDeg));
    const float cos15 = static_cast<float>(std::cos(15.0 * kDeg));
    CHECK(nm.at(0, 0)[0] == doctest::Approx(-sin15));
    CHECK(nm.at(0, 0)[2] == doctest::Approx(cos15));
    CHECK(nm.at(0, 32)[0] == 0.0f);
    CHECK(nm.at(0, 32)[2] == 1.0f);
    CHECK(nm.at(0, 63)[0] == doctest::Approx(sin15));
}

TEST_CASE("all proxy normals are unit-norm") {
    for (const GeometryProxy g : {GeometryProxy{GeometryKind::flat, 90.0},
                                  GeometryProxy{GeometryKind::cylinder, 147.0},
                                  GeometryProxy{GeometryKind::box, 90.0}}) {
        const NormalMap nm = normal_map(g, 33, 9);
        for (int y = 0; y < nm.height; ++y)
            for (int x = 0; x < nm.width; ++x) {
                const float* n = nm.at(y, x);
                const double norm = std::sqrt(static_cast<double>(n[0]) * n[0] +
                                              static_cast<double>(n[1]) * n[1] +
                                              static_cast<double>(n[2]) * n[2]);
                REQUIRE(norm == doctest::Approx(1.0).epsilon(1e-6));
            }
    }
}

TEST_CASE("normal_map and geometry validation reject bad input") {
    CHECK_THROWS_AS(normal_map({GeometryKind::flat, 90.0}, 0, 8), ValidationError);
    CHECK_THROWS_WITH_AS(normal_map({GeometryKind::cylinder, 181.0}, 8, 8),
                         doctest::Contains("cylinder_arc_deg"), ValidationError);
    CHECK_THROWS_AS(normal_map({GeometryKind::cylinder, 0.0}, 8, 8), ValidationError);
}

TEST_CASE("sample_material is deterministic with documented ranges") {
    const MaterialParams a = sample_material(11, 0.5);
    const MaterialParams b = sample_material(11, 0.5);
    CHECK(a.roughness == b.roughness);
    CHECK(a.metalness == b.metalness);
    CHECK(a.specular_strength == b.specular_strength);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const MaterialParams m = sample_material(seed, 1.0);
        CHECK(m.roughness >= 0.25);
        CHECK(m.roughness <= 1.0);
        CHECK(m.specular_strength >= 0.1);
        CHECK(m.specular_strength <= 0.9);
        CHECK((m.metalness == 0.0 || (m.metalness >= 0.5 && m.metalness <= 1.0)));
    }
}

TEST_CASE("metalness-zero frequency sits at 0.8 over 10k seeds") {
    int zero = 0;
    const int n = 10000;
    for (std::uint64_t seed = 0; seed < n; ++seed) {
        if (sample_material(seed, 0.5).metalness == 0.0) ++zero;
    }
    const double frac = static_cast<double>(zero) / n;
    CHECK(frac >= 0.78);
    CHECK(frac <= 0.82);
}

TEST_CASE("uniform ambient with no lights reduces shade to the tonemap") {
    const Image albedo = test_albedo();
    const NormalMap flat = normal_map({GeometryKind::flat, 90.0}, albedo.width, albedo.height);
    const Image lit = shade(albedo, flat, ambient_only(1.0, 1.0, 1.0), diffuse_only());
    for (std::size_t i = 0; i < albedo.pixels.size(); ++i) {
        const float a = albedo.pixels[i];
        REQUIRE(lit.pixels[i] == doctest::Approx(a / (1.0f + a)).epsilon(1e-6));
    }
}

TEST_CASE("pre-tonemap hook returns the albedo exactly under identity lighting") {
    const Image albedo = test_albedo(64, 123);
    const NormalMap flat = normal_map({GeometryKind::flat, 90.0}, 64, 64);
    const Image linear = shade_linear(albedo, flat, ambient_only(1.0, 1.0, 1.0), diffuse_only());
    double max_err = 0.0;
    for (std::size_t i = 0; i < albedo.pixels.size(); ++i) {
        max_err = std::max(max_err,
                           std::fabs(static_cast<double>(linear.pixels[i]) - albedo.pixels[i]));
    }
    CHECK(max_err <= 1e-6);
}

TEST_CASE("black albedo kills diffuse; dielectric specular is achromatic") {
    Image black(16, 16, 0.0f);
    const NormalMap flat = normal_map({GeometryKind::flat, 90.0}, 16, 16);
    EnvironmentLight env = ambient_only(0.0, 0.0, 0.0);
    env.lights.push_back({{0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}});
    MaterialParams m = diffuse_only();
    m.specular_strength = 0.6;
    const Image lit = shade(black, flat, env, m);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            REQUIRE(lit.at(y, x, 0) > 0.0f);  // specular survives black albedo
            REQUIRE(lit.at(y, x, 0) == lit.at(y, x, 1));
            REQUIRE(lit.at(y, x, 1) == lit.at(y, x, 2));
        }

    MaterialParams no_spec = diffuse_only();
    const Image dark = shade(black, flat, env, no_spec);
    for (float v : dark.pixels) REQUIRE(v == 0.0f);
}

TEST_CASE("head-on light over 0.5 gray lands on 1/3 exactly") {
    Image gray(8, 8, 0.5f);
    const NormalMap flat = normal_map({GeometryKind::flat, 90.0}, 8, 8);
    EnvironmentLight env = ambient_only(0.0, 0.0, 0.0);
    env.lights.push_back({{0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}});
    const Image lit = shade(gray, flat, env, diffuse_only());
    for (float v : lit.pixels) REQUIRE(v == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("scaling ambient up never darkens any pixel") {
    const Image albedo = test_albedo();
    const NormalMap nm = normal_map({GeometryKind::cylinder, 120.0}, 32, 32);
    EnvironmentLight env = make_environment(9, DimnessClass::medium);
    EnvironmentLight brighter = env;
    for (double& a : brighter.ambient) a *= 2.0;
    const MaterialParams m = sample_material(4, 0.5);
    const Image lo = shade(albedo, nm, env, m);
    const Image hi = shade(albedo, nm, brighter, m);
    for (std::size_t i = 0; i < lo.pixels.size(); ++i) REQUIRE(hi.pixels[i] >= lo.pixels[i]);
}

TEST_CASE("ambient-only flat shading ignores environment rotation") {
    const Image albedo = test_albedo();
    const NormalMap flat = normal_map({GeometryKind::flat, 90.0}, 32, 32);
    const EnvironmentLight env = ambient_only(0.3, 0.5, 0.2);
    const MaterialParams m = sample_material(2, 0.5);
    const Image base = shade(albedo, flat, env, m);
    for (double angle : {13.0, 90.0, 217.5, 359.0}) {
        CHECK(images_equal(shade(albedo, flat, rotate_environment(env, angle), m), base));
    }
}

// The next two cases pin the symmetries the training-time augmentation
// relies on: relabeling RGB or turning the whole scene about the camera
// axis commutes with shading, so augmented pairs are renders the pipeline
// could have produced itself.

TEST_CASE("shading commutes with an RGB channel permutation") {
    const Image albedo = test_albedo();
    const NormalMap nm = normal_map({GeometryKind::box, 90.0}, 32, 32);
    const EnvironmentLight env = make_environment(11, DimnessClass::bright);
    const MaterialParams m = sample_material(6, 0.5);

    auto swap_rb = [](Image img) {
        for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
            std::swap(img.pixels[i], img.pixels[i + 2]);
        }
        return img;
    };
    EnvironmentLight env_p = env;
    std::swap(env_p.ambient[0], env_p.ambient[2]);
    for (auto& l : env_p.lights) std::swap(l.radiance[0], l.radiance[2]);

    const Image lit = shade(albedo, nm, env, m);
    const Image lit_p = shade(swap_rb(albedo), nm, env_p, m);
    CHECK(images_equal(swap_rb(lit), lit_p));  // per-channel pipeline: exact
}

TEST_CASE("shading commutes with a joint quarter-turn of scene and lights") {
    const int n = 32;
    const Image albedo = test_albedo(n);
    const NormalMap nm = normal_map({GeometryKind::box, 90.0}, n, n);
    MaterialParams m;
    m.roughness = 0.4;
    m.metalness = 0.3;
    m.specular_strength = 0.7;
    auto unit = [](double x, double y, double z) {
        const double k = std::sqrt(x * x + y * y + z * z);
        return std::array<double, 3>{x / k, y / k, z / k};
    };
    EnvironmentLight env = ambient_only(0.2, 0.3, 0.25);
    env.lights.push_back({unit(0.5, -0.3, 0.8), {0.9, 0.4, 0.2}});
    env.lights.push_back({unit(-0.4, 0.1, 0.6), {0.2, 0.5, 1.1}});

    // 90 degrees clockwise on screen: pixels move dst(y,x) = src(n-1-x, y),
    // vectors (vx,vy) -> (-vy,vx); the camera axis z is untouched, so the
    // view vector and half-vector construction rotate covariantly.
    auto rot_image = [n](const Image& src) {
        Image dst(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                for (int c = 0; c < 3; ++c) dst.at(y, x, c) = src.at(n - 1 - x, y, c);
        return dst;
    };
    NormalMap nm_rot;
    nm_rot.width = n;
    nm_rot.height = n;
    nm_rot.values.resize(nm.values.size());
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const float* s = nm.at(n - 1 - x, y);
            float* d = &nm_rot.values[(static_cast<std::size_t>(y) * n + x) * 3];
            d[0] = -s[1];
            d[1] = s[0];
            d[2] = s[2];
        }
    }
    EnvironmentLight env_rot = env;
    for (auto& l : env_rot.lights) {
        l.direction = {-l.direction[1], l.direction[0], l.direction[2]};
    }

    const Image expected = rot_image(shade(albedo, nm, env, m));
    const Image actual = shade(rot_image(albedo), nm_rot, env_rot, m);
    REQUIRE(actual.pixels.size() == expected.pixels.size());
    for (std::size_t i = 0; i < expected.pixels.size(); ++i) {
        REQUIRE(std::abs(actual.pixels[i] - expected.pixels[i]) <= 1e-6f);
    }
}

TEST_CASE("shade stays finite and in range at the roughness boundary") {
    const Image albedo = test_albedo();
    const NormalMap nm = normal_map({GeometryKind::cylinder, 60.0}, 32, 32);
    EnvironmentLight env = make_environment(1, DimnessClass::bright);
    MaterialParams m;
    m.roughness = 1e-6;  // exponent clamps at 512
    m.metalness = 1.0;
    m.specular_strength = 1.0;
    const Image lit = shade(albedo, nm, env, m);
    for (float v : lit.pixels) {
        REQUIRE(std::isfinite(v));
        REQUIRE(v >= 0.0f);
        REQUIRE(v <= 1.0f);
    }
}

TEST_CASE("shade rejects dimension mismatches") {
    const Image albedo = test_albedo();
    const NormalMap nm = normal_map({GeometryKind::flat, 90.0}, 16, 16);
    CHECK_THROWS_AS(shade(albedo, nm, ambient_only(1, 1, 1), diffuse_only()), ValidationError);
}

TEST_CASE("render_pair determinism and provenance") {
    const auto labels = sample_label_batch(3, 1, 32, 32);
    std::vector<EnvironmentLight> pool;
    for (std::uint64_t s = 0; s < 5; ++s) pool.push_back(make_environment(s, DimnessClass::bright));

    const RenderedPair a = render_pair(labels[0], pool, 77, 0.5);
    const RenderedPair b = render_pair(labels[0], pool, 77, 0.5);
    CHECK(images_equal(a.lit, b.lit));
    CHECK(images_equal(a.albedo, b.albedo));
    CHECK(a.env_id == b.env_id);
    CHECK(a.rotation_deg == b.rotation_deg);
    CHECK(a.label_id == labels[0].first.label_id);
    CHECK(a.render_seed == 77);
    CHECK(a.lit.same_shape(a.albedo));
    CHECK(a.rotation_deg >= 0.0);
    CHECK(a.rotation_deg < 360.0);
    if (a.geometry.kind == GeometryKind::cylinder) {
        CHECK(a.geometry.cylinder_arc_deg >= 30.0);
        CHECK(a.geometry.cylinder_arc_deg <= 150.0);
    }

    std::vector<EnvironmentLight> single{make_environment(40, DimnessClass::dim)};
    const RenderedPair forced = render_pair(labels[0], single, 5, 0.5);
    CHECK(forced.env_id == single[0].env_id);

    CHECK_THROWS_AS(render_pair(labels[0], {}, 1, 0.5), ValidationError);
}

TEST_CASE("1000 renders cover a 50-environment pool") {
    const auto labels = sample_label_batch(8, 1, 32, 32);
    std::vector<EnvironmentLight> pool;
    for (std::uint64_t s = 0; s < 20; ++s) pool.push_back(make_environment(s, DimnessClass::bright));
    for (std::uint64_t s = 0; s < 20; ++s) pool.push_back(make_environment(s, DimnessClass::medium));
    for (std::uint64_t s = 0; s < 10; ++s) pool.push_back(make_environment(s, DimnessClass::dim));
    REQUIRE(pool.size() == 50);

    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        seen.insert(render_pair(labels[0], pool, seed, 0.5).env_id);
    }
    CHECK(seen.size() == 50);
}

TEST_SUITE_END();
