/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "delit/image.hpp"
#include "delit/label_synth.hpp"

namespace delit {

/// One directional light in camera space. direction is unit-norm with
/// z > 0 (it faces the camera-facing surface); radiance is non-negative
/// per channel.
struct DirectionalLight {
    std::array<double, 3> direction{0.0, 0.0, 1.0};
    std::array<double, 3> radiance{0.0, 0.0, 0.0};
};

/// Ambient term plus up to 8 directional lights; the analytic stand-in
/// for an environment panorama.
struct EnvironmentLight {
    std::string env_id;
    std::array<double, 3> ambient{0.0, 0.0, 0.0};
    std::vector<DirectionalLight> lights;
    double rotation_deg = 0.0;  // accumulated rotation about camera z, [0,360)
};

void validate_environment(const EnvironmentLight& env);

enum class DimnessClass { bright, medium, dim };

const char* to_string(DimnessClass c);
DimnessClass dimness_from_string(const std::string& s);

/// Deterministic environment synthesis.
///   bright: ambient/channel in [0.4,0.8], 2-5 lights, radiance norm [0.5,2.0]
///   medium: ambient [0.15,0.4],           1-4 lights, norm [0.3,1.2]
///   dim:    ambient [0.02,0.15],          1-2 lights, norm [0.1,0.6],
///           warm bias (R >= G >= B per light)
/// Light directions are uniform over the camera-facing hemisphere (z > 0).
EnvironmentLight make_environment(std::uint64_t seed, DimnessClass dimness);

/// Copy of `env` with every light direction rotated about the camera
/// z-axis by angle_deg and rotation_deg updated modulo 360. Ambient is
/// untouched; directions stay unit-norm with their z components unchanged.
EnvironmentLight rotate_environment(const EnvironmentLight& env, double angle_deg);

struct MaterialParams {
    double roughness = 0.5;          // (0, 1]
    double metalness = 0.0;          // [0, 1]
    double specular_strength = 0.5;  // [0, 1]
};

void validate_material(const MaterialParams& m);

/// roughness ~ U[threshold*0.25, 1]; metalness 0 with probability 0.8,
/// else U[0.5, 1]; specular_strength ~ U[0.1, 0.9]. The two metalness
/// families stand in for dielectric (cardboard, plastic) versus metallic
/// foil labels.
MaterialParams sample_material(std::uint64_t seed, double roughness_threshold);

enum class GeometryKind { flat, cylinder, box };

const char* to_string(GeometryKind k);
GeometryKind geometry_from_string(const std::string& s);

/// Surface proxy the label is wrapped onto. Only the per-pixel normals
/// matter under the orthographic camera, so the proxy reduces to a normal
/// map recipe.
struct GeometryProxy {
    GeometryKind kind = GeometryKind::flat;
    double cylinder_arc_deg = 90.0;  // visible arc, (0, 180]; cylinder only
};

void validate_geometry(const GeometryProxy& g);

/// H x W x 3 unit normals in camera space (camera looks down -z).
///   flat:     every normal (0,0,1)
///   cylinder: vertical axis; at column u the normal is
///             (sin θ, 0, cos θ) with θ = arc * ((u+0.5)/W - 1/2),
///             linear across the width, evaluated at pixel centers
///   box:      flat center; columns left of 25% width and right of 75%
///             width tilt by -15°/+15° about the y-axis
struct NormalMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;  // interleaved xyz

    const float* at(int y, int x) const {
        return &values[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

NormalMap normal_map(const GeometryProxy& geometry, int width, int height);

/// Pre-tonemap shading in linear radiometric units. Per pixel:
///   diffuse  = albedo * (ambient + sum_i radiance_i * max(0, n.l_i))
///              * (1 - metalness*0.7)
///   specular = specular_strength * sum_i radiance_i * specColor
///              * max(0, n.h_i)^s
/// with h_i the unit half-vector between l_i and the view (0,0,1),
/// s = clamp(2/roughness^2 - 2, 2, 512), and
/// specColor = white*(1-metalness) + albedo*metalness.
/// Values may exceed 1; this is the buffer shade() feeds the tonemap.
Image shade_linear(const Image& albedo, const NormalMap& normals,
                   const EnvironmentLight& env, const MaterialParams& material);

/// shade_linear followed by per-channel Reinhard tonemapping x/(1+x) and
/// a clamp to [0,1].
Image shade(const Image& albedo, const NormalMap& normals,
            const EnvironmentLight& env, const MaterialParams& material);

/// One training example with full provenance; every field round-trips
/// through the dataset manifest.
struct RenderedPair {
    Image lit;
    Image albedo;
    std::string label_id;
    std::string env_id;
    double rotation_deg = 0.0;
    MaterialParams material;
    GeometryProxy geometry;
    std::uint64_t render_seed = 0;
};

/// Deterministic in (label_id, render_seed): draws an environment from
/// the pool, a rotation in [0,360), a geometry from
/// {flat, cylinder(arc in [30,150]), box}, a material, then shades.
RenderedPair render_pair(const std::pair<LabelSpec, Image>& label,
                         const std::vector<EnvironmentLight>& env_pool,
                         std::uint64_t render_seed,
                         double roughness_threshold);

}  // namespace delit
