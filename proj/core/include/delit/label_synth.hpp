/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "delit/image.hpp"

namespace delit {

/// Recipe for one procedural brand label. Everything the compositor does
/// is a pure function of this struct.
struct LabelSpec {
    std::string label_id;
    std::uint64_t seed = 0;
    int width = 0;        // power of two in [32, 512]
    int height = 0;       // power of two in [32, 512]
    int palette_size = 0; // colors, 2..8
    int element_count = 0;// composited primitives, 4..40
};

/// Throws ValidationError naming the offending field.
void validate_label_spec(const LabelSpec& spec);

/// Renders the flat albedo label described by `spec`: a solid background
/// fill plus `element_count` primitives (rectangles, ellipses, bar
/// clusters standing in for text lines, border frames), all flat fills in
/// linear RGB. Colors come from an HSV-sampled palette; the background
/// holds palette slot 0 and primitives draw slots 1+, so any non-empty
/// composition shows at least two colors. Bit-deterministic in `spec`.
Image synth_label(const LabelSpec& spec);

/// Derives `count` label specs and images from one master seed. Per-label
/// seeds come from derive_seed(master_seed, index); label_id is the
/// zero-padded decimal index; palette_size and element_count are sampled
/// uniformly from their valid ranges.
std::vector<std::pair<LabelSpec, Image>> sample_label_batch(std::uint64_t master_seed,
                                                            int count,
                                                            int width,
                                                            int height);

namespace detail {
/// Compositor without spec validation; the element_count=0 path is used
/// by tests to observe the bare background fill.
Image compose_label(const LabelSpec& spec);
}  // namespace detail

}  // namespace delit
