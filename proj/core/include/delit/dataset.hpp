/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "delit/light_sim.hpp"

namespace delit {

enum class Split { train, test };

const char* to_string(Split s);
Split split_from_string(const std::string& s);

/// Everything render_pair recorded, minus the pixel data.
struct PairProvenance {
    std::string env_id;
    double rotation_deg = 0.0;
    MaterialParams material;
    GeometryProxy geometry;
    std::uint64_t render_seed = 0;
    bool external = false;
};

struct ManifestEntry {
    std::string pair_id;
    std::string label_id;
    std::string lit_path;     // relative to the manifest directory
    std::string albedo_path;  // relative to the manifest directory
    Split split = Split::train;
    PairProvenance provenance;
};

/// On-disk corpus description. Serialized as a single JSON document
/// (manifest.json) next to the lit/ and albedo/ image directories; save ->
/// load -> save is byte-identical.
struct DatasetManifest {
    int version = 1;
    std::string name;
    std::uint64_t master_seed = 0;
    int image_size = 0;
    double split_ratio = 1.0;
    std::vector<ManifestEntry> entries;

    std::vector<std::string> label_ids() const;  // unique, in first-seen order
};

/// Label-level split: the two sets are disjoint and cover every label in
/// the manifest, so test pairs always show labels unseen in training.
struct SplitAssignment {
    std::set<std::string> train_labels;
    std::set<std::string> test_labels;
    bool test_empty_warning = false;
};

/// Generates n_labels procedural labels, a 50-environment pool
/// (20 bright / 20 medium / 10 dim), renders_per_label pairs per label,
/// writes PNGs under out_dir/lit and out_dir/albedo plus
/// out_dir/manifest.json. Entries start in the train split
/// (split_ratio 1.0) until assign_split/apply_split rewrites them.
/// Rendering is parallelized per pair; output is a pure function of the
/// arguments regardless of worker count.
DatasetManifest build_dataset(int n_labels, int renders_per_label,
                              std::uint64_t master_seed,
                              const std::filesystem::path& out_dir, int image_size,
                              double roughness_threshold = 0.5);

/// Orders labels by derive_seed(manifest.master_seed, fnv1a64(label_id))
/// and takes the first ceil(ratio * n_labels) as train. Deterministic and
/// stable under entry reordering. Sets test_empty_warning when every
/// label lands in train.
SplitAssignment assign_split(const DatasetManifest& manifest, double ratio);

/// Writes the assignment into every entry and records the ratio.
void apply_split(DatasetManifest& manifest, const SplitAssignment& assignment,
                 double ratio);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct LoadedPair {
    Image lit;
    Image albedo;
    ManifestEntry meta;
};

/// Decodes the PNG pair behind one manifest entry (sRGB -> linear).
/// Errors name the pair_id.
LoadedPair load_pair(const std::filesystem::path& manifest_dir, const ManifestEntry& entry);

/// All pairs of one split, in manifest order (or shuffled when
/// shuffle_seed is set). Missing files and lit/albedo dimension
/// mismatches surface as IoError/ValidationError naming the pair_id.
std::vector<LoadedPair> load_pairs(const std::filesystem::path& manifest_path, Split split,
                                   std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Builds an all-test manifest from two directories of same-named image
/// files (external lit/albedo pairs, e.g. third-party corpora or
/// foreign model predictions). label_id and pair_id are the filename
/// stem; master_seed is fnv1a64(name). Mismatched name sets raise a
/// ValidationError listing the first 10 offenders.
DatasetManifest import_external(const std::filesystem::path& lit_dir,
                                const std::filesystem::path& albedo_dir,
                                const std::string& name);

}  // namespace delit
