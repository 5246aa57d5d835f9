/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "delit/errors.hpp"
#include "delit/image_io.hpp"
#include "delit/rng.hpp"

namespace delit {

using nlohmann::json;

const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    throw ValidationError("split: unknown value '" + s + "'");
}

std::vector<std::string> DatasetManifest::label_ids() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (seen.insert(e.label_id).second) out.push_back(e.label_id);
    }
    return out;
}

namespace {

json material_to_json(const MaterialParams& m) {
    return json{{"roughness", m.roughness},
                {"metalness", m.metalness},
                {"specular_strength", m.specular_strength}};
}

MaterialParams material_from_json(const json& j) {
    MaterialParams m;
    m.roughness = j.at("roughness").get<double>();
    m.metalness = j.at("metalness").get<double>();
    m.specular_strength = j.at("specular_strength").get<double>();
    return m;
}

json geometry_to_json(const GeometryProxy& g) {
    json j{{"kind", to_string(g.kind)}};
    if (g.kind == GeometryKind::cylinder) j["arc_deg"] = g.cylinder_arc_deg;
    return j;
}

GeometryProxy geometry_from_json(const json& j) {
    GeometryProxy g;
    g.kind = geometry_from_string(j.at("kind").get<std::string>());
    if (g.kind == GeometryKind::cylinder) g.cylinder_arc_deg = j.at("arc_deg").get<double>();
    return g;
}

json entry_to_json(const ManifestEntry& e) {
    return json{{"pair_id", e.pair_id},
                {"label_id", e.label_id},
                {"lit_path", e.lit_path},
                {"albedo_path", e.albedo_path},
                {"split", to_string(e.split)},
                {"provenance",
                 json{{"env_id", e.provenance.env_id},
                      {"rotation_deg", e.provenance.rotation_deg},
                      {"material", material_to_json(e.provenance.material)},
                      {"geometry", geometry_to_json(e.provenance.geometry)},
                      {"render_seed", e.provenance.render_seed},
                      {"external", e.provenance.external}}}};
}

ManifestEntry entry_from_json(const json& j) {
    ManifestEntry e;
    e.pair_id = j.at("pair_id").get<std::string>();
    e.label_id = j.at("label_id").get<std::string>();
    e.lit_path = j.at("lit_path").get<std::string>();
    e.albedo_path = j.at("albedo_path").get<std::string>();
    e.split = split_from_string(j.at("split").get<std::string>());
    const json& p = j.at("provenance");
    e.provenance.env_id = p.at("env_id").get<std::string>();
    e.provenance.rotation_deg = p.at("rotation_deg").get<double>();
    e.provenance.material = material_from_json(p.at("material"));
    e.provenance.geometry = geometry_from_json(p.at("geometry"));
    e.provenance.render_seed = p.at("render_seed").get<std::uint64_t>();
    e.provenance.external = p.at("external").get<bool>();
    return e;
}

void validate_manifest(const DatasetManifest& m) {
    std::set<std::string> pair_ids;
    std::map<std::string, Split> label_split;
    for (const auto& e : m.entries) {
        if (!pair_ids.insert(e.pair_id).second) {
            throw ValidationError("manifest: duplicate pair_id '" + e.pair_id + "'");
        }
        auto [it, inserted] = label_split.emplace(e.label_id, e.split);
        if (!inserted && it->second != e.split) {
            throw ValidationError("manifest: label '" + e.label_id +
                                  "' appears in both splits");
        }
    }
}

}  // namespace

DatasetManifest build_dataset(int n_labels, int renders_per_label,
                              std::uint64_t master_seed,
                              const std::filesystem::path& out_dir, int image_size,
                              double roughness_threshold) {
    if (n_labels < 1) throw ValidationError("n_labels: must be >= 1");
    if (renders_per_label < 1) throw ValidationError("renders_per_label: must be >= 1");

    auto labels = sample_label_batch(master_seed, n_labels, image_size, image_size);

    // Fixed pool mix: 20 bright, 20 medium, 10 dim.
    std::vector<EnvironmentLight> env_pool;
    env_pool.reserve(50);
    for (int i = 0; i < 20; ++i)
        env_pool.push_back(make_environment(derive_seed(master_seed, fnv1a64("env"), i),
                                            DimnessClass::bright));
    for (int i = 0; i < 20; ++i)
        env_pool.push_back(make_environment(derive_seed(master_seed, fnv1a64("env"), 20 + i),
                                            DimnessClass::medium));
    for (int i = 0; i < 10; ++i)
        env_pool.push_back(make_environment(derive_seed(master_seed, fnv1a64("env"), 40 + i),
                                            DimnessClass::dim));

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "lit", ec);
    std::filesystem::create_directories(out_dir / "albedo", ec);
    if (!std::filesystem::is_directory(out_dir)) {
        throw IoError("build_dataset: cannot create output directory " + out_dir.string());
    }

    const int total = n_labels * renders_per_label;
    std::vector<ManifestEntry> entries(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx) {
        const int li = idx / renders_per_label;
        const int r = idx % renders_per_label;
        const auto& label = labels[static_cast<std::size_t>(li)];
        const std::uint64_t render_seed =
            derive_seed(master_seed, fnv1a64("render"), static_cast<std::uint64_t>(li),
                        static_cast<std::uint64_t>(r));
        RenderedPair pair = render_pair(label, env_pool, render_seed, roughness_threshold);

        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s-%04d", pair.label_id.c_str(), r);
        ManifestEntry& e = entries[static_cast<std::size_t>(idx)];
        e.pair_id = buf;
        e.label_id = pair.label_id;
        e.lit_path = "lit/" + e.pair_id + ".png";
        e.albedo_path = "albedo/" + e.pair_id + ".png";
        e.split = Split::train;
        e.provenance.env_id = pair.env_id;
        e.provenance.rotation_deg = pair.rotation_deg;
        e.provenance.material = pair.material;
        e.provenance.geometry = pair.geometry;
        e.provenance.render_seed = pair.render_seed;
        e.provenance.external = false;

        save_png(pair.lit, out_dir / e.lit_path);
        save_png(pair.albedo, out_dir / e.albedo_path);
    }

    DatasetManifest manifest;
    manifest.name = "synth";
    manifest.master_seed = master_seed;
    manifest.image_size = image_size;
    manifest.split_ratio = 1.0;
    manifest.entries = std::move(entries);
    save_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

SplitAssignment assign_split(const DatasetManifest& manifest, double ratio) {
    if (manifest.entries.empty()) {
        throw ValidationError("manifest: empty, nothing to split");
    }
    if (!(ratio > 0.0) || !(ratio < 1.0)) {
        throw ValidationError("ratio: must lie in (0, 1)");
    }
    auto labels = manifest.label_ids();
    std::vector<std::pair<std::uint64_t, std::string>> ordered;
    ordered.reserve(labels.size());
    for (auto& id : labels) {
        ordered.emplace_back(derive_seed(manifest.master_seed, fnv1a64(id)), id);
    }
    std::sort(ordered.begin(), ordered.end());

    const auto n_train = static_cast<std::size_t>(
        std::ceil(ratio * static_cast<double>(labels.size())));
    SplitAssignment out;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (i < n_train) {
            out.train_labels.insert(ordered[i].second);
        } else {
            out.test_labels.insert(ordered[i].second);
        }
    }
    out.test_empty_warning = out.test_labels.empty();
    return out;
}

void apply_split(DatasetManifest& manifest, const SplitAssignment& assignment,
                 double ratio) {
    for (auto& e : manifest.entries) {
        if (assignment.train_labels.count(e.label_id)) {
            e.split = Split::train;
        } else if (assignment.test_labels.count(e.label_id)) {
            e.split = Split::test;
        } else {
            throw ValidationError("apply_split: label '" + e.label_id +
                                  "' missing from the assignment");
        }
    }
    manifest.split_ratio = ratio;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    validate_manifest(manifest);
    json j{{"version", manifest.version},
           {"name", manifest.name},
           {"master_seed", manifest.master_seed},
           {"image_size", manifest.image_size},
           {"split_ratio", manifest.split_ratio}};
    json arr = json::array();
    for (const auto& e : manifest.entries) arr.push_back(entry_to_json(e));
    j["entries"] = std::move(arr);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_manifest: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_manifest: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("load_manifest: parse failure in " + path.string() + ": " + e.what());
    }
    DatasetManifest m;
    m.version = j.at("version").get<int>();
    if (m.version != 1) {
        throw ValidationError("manifest: unsupported version " + std::to_string(m.version));
    }
    m.name = j.at("name").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.image_size = j.at("image_size").get<int>();
    m.split_ratio = j.at("split_ratio").get<double>();
    for (const auto& je : j.at("entries")) m.entries.push_back(entry_from_json(je));
    validate_manifest(m);
    return m;
}

LoadedPair load_pair(const std::filesystem::path& manifest_dir, const ManifestEntry& entry) {
    LoadedPair p;
    p.meta = entry;
    try {
        p.lit = load_png(manifest_dir / entry.lit_path);
        p.albedo = load_png(manifest_dir / entry.albedo_path);
    } catch (const IoError& e) {
        throw IoError("pair '" + entry.pair_id + "': " + e.what());
    }
    if (!p.lit.same_shape(p.albedo)) {
        throw ValidationError("pair '" + entry.pair_id +
                              "': lit and albedo dimensions differ");
    }
    return p;
}

std::vector<LoadedPair> load_pairs(const std::filesystem::path& manifest_path, Split split,
                                   std::optional<std::uint64_t> shuffle_seed) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    const auto dir = manifest_path.parent_path();

    std::vector<const ManifestEntry*> selected;
    for (const auto& e : manifest.entries) {
        if (e.split == split) selected.push_back(&e);
    }
    if (shuffle_seed) {
        Rng rng(derive_seed(*shuffle_seed, fnv1a64("load_pairs")));
        for (std::size_t i = selected.size(); i > 1; --i) {
            std::swap(selected[i - 1], selected[rng.uniform_int(i)]);
        }
    }
    std::vector<LoadedPair> out;
    out.reserve(selected.size());
    for (const auto* e : selected) out.push_back(load_pair(dir, *e));
    return out;
}

DatasetManifest import_external(const std::filesystem::path& lit_dir,
                                const std::filesystem::path& albedo_dir,
                                const std::string& name) {
    auto list_stems = [](const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) {
            throw IoError("import_external: not a directory: " + dir.string());
        }
        std::map<std::string, std::filesystem::path> stems;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            stems.emplace(entry.path().stem().string(), entry.path());
        }
        return stems;
    };
    auto lit = list_stems(lit_dir);
    auto alb = list_stems(albedo_dir);

    std::vector<std::string> mismatches;
    for (const auto& [stem, _] : lit)
        if (!alb.count(stem)) mismatches.push_back(stem + " (lit only)");
    for (const auto& [stem, _] : alb)
        if (!lit.count(stem)) mismatches.push_back(stem + " (albedo only)");
    if (!mismatches.empty()) {
        std::ostringstream msg;
        msg << "import_external: " << mismatches.size() << " unmatched filenames:";
        for (std::size_t i = 0; i < mismatches.size() && i < 10; ++i) {
            msg << ' ' << mismatches[i];
        }
        throw ValidationError(msg.str());
    }
    if (lit.empty()) {
        throw ValidationError("import_external: no image files found in " + lit_dir.string());
    }

    DatasetManifest m;
    m.name = name;
    m.master_seed = fnv1a64(name);
    m.image_size = 0;  // heterogeneous; recorded per load
    m.split_ratio = 0.0;
    for (const auto& [stem, lit_path] : lit) {
        ManifestEntry e;
        e.pair_id = stem;
        e.label_id = stem;
        e.lit_path = std::filesystem::relative(lit_path, lit_dir.parent_path()).string();
        e.albedo_path =
            std::filesystem::relative(alb.at(stem), lit_dir.parent_path()).string();
        e.split = Split::test;
        e.provenance.external = true;
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace delit
