/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/light_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "delit/errors.hpp"
#include "delit/rng.hpp"

namespace delit {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

/// Uniform direction on the z > 0 hemisphere (Archimedes: z is uniform).
std::array<double, 3> sample_hemisphere(Rng& rng) {
    double z = 1.0 - rng.uniform();  // (0, 1]
    double phi = rng.uniform(0.0, 2.0 * M_PI);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

struct ClassParams {
    double ambient_lo, ambient_hi;
    int lights_lo, lights_hi;
    double norm_lo, norm_hi;
    bool warm_bias;
};

ClassParams params_for(DimnessClass c) {
    switch (c) {
        case DimnessClass::bright: return {0.4, 0.8, 2, 5, 0.5, 2.0, false};
        case DimnessClass::medium: return {0.15, 0.4, 1, 4, 0.3, 1.2, false};
        case DimnessClass::dim:    return {0.02, 0.15, 1, 2, 0.1, 0.6, true};
    }
    throw ValidationError("dimness_class: invalid enum value");
}

}  // namespace

const char* to_string(DimnessClass c) {
    switch (c) {
        case DimnessClass::bright: return "bright";
        case DimnessClass::medium: return "medium";
        case DimnessClass::dim: return "dim";
    }
    return "?";
}

DimnessClass dimness_from_string(const std::string& s) {
    if (s == "bright") return DimnessClass::bright;
    if (s == "medium") return DimnessClass::medium;
    if (s == "dim") return DimnessClass::dim;
    throw ValidationError("dimness_class: unknown value '" + s + "'");
}

const char* to_string(GeometryKind k) {
    switch (k) {
        case GeometryKind::flat: return "flat";
        case GeometryKind::cylinder: return "cylinder";
        case GeometryKind::box: return "box";
    }
    return "?";
}

GeometryKind geometry_from_string(const std::string& s) {
    if (s == "flat") return GeometryKind::flat;
    if (s == "cylinder") return GeometryKind::cylinder;
    if (s == "box") return GeometryKind::box;
    throw ValidationError("geometry.kind: unknown value '" + s + "'");
}

void validate_environment(const EnvironmentLight& env) {
    for (double a : env.ambient) {
        if (!std::isfinite(a) || a < 0.0) {
            throw ValidationError("ambient: values must be finite and non-negative");
        }
    }
    if (env.lights.size() > 8) {
        throw ValidationError("lights: at most 8 directional lights, got " +
                              std::to_string(env.lights.size()));
    }
    for (const auto& l : env.lights) {
        if (std::fabs(norm3(l.direction) - 1.0) > 1e-6) {
            throw ValidationError("lights.direction: must be unit-norm");
        }
        if (l.direction[2] <= 0.0) {
            throw ValidationError("lights.direction: z component must be positive");
        }
        for (double r : l.radiance) {
            if (!std::isfinite(r) || r < 0.0) {
                throw ValidationError("lights.radiance: values must be finite and non-negative");
            }
        }
    }
    if (env.rotation_deg < 0.0 || env.rotation_deg >= 360.0) {
        throw ValidationError("rotation_deg: must lie in [0, 360)");
    }
}

EnvironmentLight make_environment(std::uint64_t seed, DimnessClass dimness) {
    const ClassParams p = params_for(dimness);
    Rng rng(derive_seed(seed, fnv1a64("make_environment"), fnv1a64(to_string(dimness))));

    EnvironmentLight env;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s-%016llx", to_string(dimness),
                  static_cast<unsigned long long>(seed));
    env.env_id = buf;

    for (int c = 0; c < 3; ++c) env.ambient[c] = rng.uniform(p.ambient_lo, p.ambient_hi);

    int n_lights = p.lights_lo + static_cast<int>(rng.uniform_int(
                       static_cast<std::uint64_t>(p.lights_hi - p.lights_lo + 1)));
    env.lights.resize(static_cast<std::size_t>(n_lights));
    for (auto& light : env.lights) {
        light.direction = sample_hemisphere(rng);
        std::array<double, 3> color;
        if (p.warm_bias) {
            // Sort descending into (R, G, B) to bias toward ember tones.
            for (auto& v : color) v = rng.uniform(0.3, 1.0);
            std::sort(color.begin(), color.end(), std::greater<>());
        } else {
            for (auto& v : color) v = rng.uniform(0.6, 1.0);
        }
        double target = rng.uniform(p.norm_lo, p.norm_hi);
        double scale = target / norm3(color);
        for (int c = 0; c < 3; ++c) light.radiance[c] = color[c] * scale;
    }
    return env;
}

EnvironmentLight rotate_environment(const EnvironmentLight& env, double angle_deg) {
    EnvironmentLight out = env;
    const double a = angle_deg * kDegToRad;
    const double ca = std::cos(a), sa = std::sin(a);
    for (auto& light : out.lights) {
        const double x = light.direction[0], y = light.direction[1];
        light.direction[0] = ca * x - sa * y;
        light.direction[1] = sa * x + ca * y;
        // z untouched; rotation about z preserves the norm.
    }
    double r = std::fmod(env.rotation_deg + angle_deg, 360.0);
    if (r < 0.0) r += 360.0;
    out.rotation_deg = r;
    return out;
}

void validate_material(const MaterialParams& m) {
    if (!(m.roughness > 0.0) || m.roughness > 1.0) {
        throw ValidationError("roughness: must lie in (0, 1]");
    }
    if (m.metalness < 0.0 || m.metalness > 1.0) {
        throw ValidationError("metalness: must lie in [0, 1]");
    }
    if (m.specular_strength < 0.0 || m.specular_strength > 1.0) {
        throw ValidationError("specular_strength: must lie in [0, 1]");
    }
}

MaterialParams sample_material(std::uint64_t seed, double roughness_threshold) {
    if (!(roughness_threshold > 0.0) || roughness_threshold > 1.0) {
        throw ValidationError("roughness_threshold: must lie in (0, 1]");
    }
    Rng rng(derive_seed(seed, fnv1a64("sample_material")));
    MaterialParams m;
    m.roughness = rng.uniform(roughness_threshold * 0.25, 1.0);
    bool metallic = rng.bernoulli(0.2);
    double metal_value = rng.uniform(0.5, 1.0);  // drawn unconditionally: stable stream
    m.metalness = metallic ? metal_value : 0.0;
    m.specular_strength = rng.uniform(0.1, 0.9);
    return m;
}

void validate_geometry(const GeometryProxy& g) {
    switch (g.kind) {
        case GeometryKind::flat:
        case GeometryKind::box:
            return;
        case GeometryKind::cylinder:
            if (!(g.cylinder_arc_deg > 0.0) || g.cylinder_arc_deg > 180.0) {
                throw ValidationError("cylinder_arc_deg: must lie in (0, 180]");
            }
            return;
    }
    throw ValidationError("geometry.kind: invalid enum value");
}

NormalMap normal_map(const GeometryProxy& geometry, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("normal_map: dimensions must be positive");
    }
    validate_geometry(geometry);

    NormalMap nm;
    nm.width = width;
    nm.height = height;
    nm.values.resize(static_cast<std::size_t>(width) * height * 3);

    // All three proxies vary only along x, so compute one row and repeat.
    std::vector<float> row(static_cast<std::size_t>(width) * 3);
    for (int u = 0; u < width; ++u) {
        double nx = 0.0, ny = 0.0, nz = 1.0;
        const double x_frac = (u + 0.5) / width;  // pixel centers: arc never hits +-90 deg
        switch (geometry.kind) {
            case GeometryKind::flat:
                break;
            case GeometryKind::cylinder: {
                double theta = geometry.cylinder_arc_deg * kDegToRad * (x_frac - 0.5);
                nx = std::sin(theta);
                nz = std::cos(theta);
                break;
            }
            case GeometryKind::box: {
                constexpr double kTilt = 15.0 * kDegToRad;
                if (x_frac < 0.25) {
                    nx = -std::sin(kTilt);
                    nz = std::cos(kTilt);
                } else if (x_frac > 0.75) {
                    nx = std::sin(kTilt);
                    nz = std::cos(kTilt);
                }
                break;
            }
        }
        row[u * 3 + 0] = static_cast<float>(nx);
        row[u * 3 + 1] = static_cast<float>(ny);
        row[u * 3 + 2] = static_cast<float>(nz);
    }
    for (int y = 0; y < height; ++y) {
        std::copy(row.begin(), row.end(),
                  nm.values.begin() + static_cast<std::size_t>(y) * width * 3);
    }
    return nm;
}

Image shade_linear(const Image& albedo, const NormalMap& normals,
                   const EnvironmentLight& env, const MaterialParams& material) {
    if (albedo.width != normals.width || albedo.height != normals.height) {
        throw ValidationError("shade: albedo and normal map dimensions differ");
    }
    validate_environment(env);
    validate_material(material);

    const double s_exp = std::clamp(2.0 / (material.roughness * material.roughness) - 2.0,
                                    2.0, 512.0);
    const double diffuse_scale = 1.0 - material.metalness * 0.7;

    struct LightTerms {
        float l[3];
        float h[3];
        float radiance[3];
    };
    std::vector<LightTerms> lights(env.lights.size());
    for (std::size_t i = 0; i < env.lights.size(); ++i) {
        const auto& src = env.lights[i];
        // Half vector between the light and the view direction (0,0,1).
        std::array<double, 3> h{src.direction[0], src.direction[1], src.direction[2] + 1.0};
        double hn = norm3(h);
        for (int c = 0; c < 3; ++c) {
            lights[i].l[c] = static_cast<float>(src.direction[c]);
            lights[i].h[c] = static_cast<float>(h[c] / hn);
            lights[i].radiance[c] = static_cast<float>(src.radiance[c]);
        }
    }
    const float ambient[3] = {static_cast<float>(env.ambient[0]),
                              static_cast<float>(env.ambient[1]),
                              static_cast<float>(env.ambient[2])};

    Image out(albedo.width, albedo.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < albedo.height; ++y) {
        for (int x = 0; x < albedo.width; ++x) {
            const float* n = normals.at(y, x);
            float irr[3] = {ambient[0], ambient[1], ambient[2]};
            float spec[3] = {0.0f, 0.0f, 0.0f};
            for (const auto& li : lights) {
                float ndl = n[0] * li.l[0] + n[1] * li.l[1] + n[2] * li.l[2];
                if (ndl > 0.0f) {
                    irr[0] += li.radiance[0] * ndl;
                    irr[1] += li.radiance[1] * ndl;
                    irr[2] += li.radiance[2] * ndl;
                }
                float ndh = n[0] * li.h[0] + n[1] * li.h[1] + n[2] * li.h[2];
                if (ndh > 0.0f) {
                    float highlight = std::pow(ndh, static_cast<float>(s_exp));
                    spec[0] += li.radiance[0] * highlight;
                    spec[1] += li.radiance[1] * highlight;
                    spec[2] += li.radiance[2] * highlight;
                }
            }
            for (int c = 0; c < 3; ++c) {
                float a = albedo.at(y, x, c);
                float spec_color = static_cast<float>(1.0 - material.metalness) +
                                   a * static_cast<float>(material.metalness);
                float diffuse = a * irr[c] * static_cast<float>(diffuse_scale);
                float specular =
                    static_cast<float>(material.specular_strength) * spec[c] * spec_color;
                out.at(y, x, c) = diffuse + specular;
            }
        }
    }
    return out;
}

Image shade(const Image& albedo, const NormalMap& normals,
            const EnvironmentLight& env, const MaterialParams& material) {
    Image lit = shade_linear(albedo, normals, env, material);
    for (float& v : lit.pixels) {
        v = std::clamp(v / (1.0f + v), 0.0f, 1.0f);
    }
    return lit;
}

RenderedPair render_pair(const std::pair<LabelSpec, Image>& label,
                         const std::vector<EnvironmentLight>& env_pool,
                         std::uint64_t render_seed,
                         double roughness_threshold) {
    if (env_pool.empty()) {
        throw ValidationError("env_pool: must be non-empty");
    }
    Rng rng(derive_seed(fnv1a64(label.first.label_id), render_seed, fnv1a64("render_pair")));

    const EnvironmentLight& base_env = env_pool[rng.uniform_int(env_pool.size())];
    double rotation = rng.uniform(0.0, 360.0);

    GeometryProxy geometry;
    const double arc = rng.uniform(30.0, 150.0);  // drawn unconditionally: stable stream
    switch (rng.uniform_int(3)) {
        case 0: geometry.kind = GeometryKind::flat; break;
        case 1:
            geometry.kind = GeometryKind::cylinder;
            geometry.cylinder_arc_deg = arc;
            break;
        default: geometry.kind = GeometryKind::box; break;
    }

    MaterialParams material = sample_material(rng.next_u64(), roughness_threshold);

    EnvironmentLight env = rotate_environment(base_env, rotation);
    NormalMap normals = normal_map(geometry, label.second.width, label.second.height);

    RenderedPair pair;
    pair.lit = shade(label.second, normals, env, material);
    pair.albedo = label.second;
    pair.label_id = label.first.label_id;
    pair.env_id = base_env.env_id;
    pair.rotation_deg = env.rotation_deg;
    pair.material = material;
    pair.geometry = geometry;
    pair.render_seed = render_seed;
    return pair;
}

}  // namespace delit
