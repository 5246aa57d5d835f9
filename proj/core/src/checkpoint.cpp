/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "delit/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are written as native little-endian floats");

namespace delit {

namespace {

using json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'D', 'E', 'L', 'I', 'T', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

json opt_header(const nn::Adam<float>& opt, std::uint64_t& offset) {
    json slots = json::array();
    for (const auto& [name, slot] : opt.state()) {
        json s;
        s["name"] = name;
        s["count"] = slot.m.size();
        s["m_offset"] = offset;
        offset += slot.m.size();
        s["v_offset"] = offset;
        offset += slot.v.size();
        slots.push_back(std::move(s));
    }
    json h;
    h["learning_rate"] = opt.learning_rate();
    h["beta1"] = opt.beta1();
    h["beta2"] = opt.beta2();
    h["epsilon"] = opt.epsilon();
    h["t"] = opt.t();
    h["slots"] = std::move(slots);
    return h;
}

json param_header(const std::vector<nn::ParamRef<float>>& params, std::uint64_t& offset) {
    json arr = json::array();
    for (const auto& p : params) {
        json e;
        e["name"] = p.name;
        e["shape"] = {p.value->n, p.value->c, p.value->h, p.value->w};
        e["offset"] = offset;
        offset += p.value->v.size();
        arr.push_back(std::move(e));
    }
    return arr;
}

void append_floats(std::vector<float>& blob, const std::vector<float>& src) {
    blob.insert(blob.end(), src.begin(), src.end());
}

}  // namespace

void save_checkpoint(const ModelBundle& bundle, const std::filesystem::path& path) {
    auto& b = const_cast<ModelBundle&>(bundle);  // params() is non-const; no mutation happens
    const auto g_params = b.G.params();
    const auto d_params = b.D.params();

    std::uint64_t offset = 0;
    json h;
    h["generator"] = {{"image_size", bundle.g_cfg.image_size},
                      {"base_channels", bundle.g_cfg.base_channels},
                      {"depth", bundle.g_cfg.depth}};
    h["discriminator"] = {{"base_channels", bundle.d_cfg.base_channels},
                          {"n_layers", bundle.d_cfg.n_layers},
                          {"input_channels", bundle.d_cfg.input_channels}};
    h["train"] = {{"epochs", bundle.train_cfg.epochs},
                  {"batch_size", bundle.train_cfg.batch_size},
                  {"learning_rate", bundle.train_cfg.learning_rate},
                  {"adversarial_weight", bundle.train_cfg.adversarial_weight},
                  {"reconstruction_weight", bundle.train_cfg.reconstruction_weight},
                  {"seed", bundle.train_cfg.seed},
                  {"checkpoint_interval", bundle.train_cfg.checkpoint_interval},
                  {"augment_flips", bundle.train_cfg.augment_flips},
                  {"augment_rotations", bundle.train_cfg.augment_rotations},
                  {"augment_channel_perms", bundle.train_cfg.augment_channel_perms}};
    h["epoch"] = bundle.epoch;
    json hist = json::array();
    for (const auto& e : bundle.history) {
        hist.push_back({{"epoch", e.epoch}, {"d_loss", e.d_loss}, {"g_adv", e.g_adv}, {"rec", e.rec}});
    }
    h["history"] = std::move(hist);
    h["g_params"] = param_header(g_params, offset);
    h["d_params"] = param_header(d_params, offset);
    h["g_opt"] = opt_header(bundle.g_opt, offset);
    h["d_opt"] = opt_header(bundle.d_opt, offset);

    std::vector<float> blob;
    blob.reserve(offset);
    for (const auto& p : g_params) append_floats(blob, p.value->v);
    for (const auto& p : d_params) append_floats(blob, p.value->v);
    for (const auto& [name, slot] : bundle.g_opt.state()) {
        append_floats(blob, slot.m);
        append_floats(blob, slot.v);
    }
    for (const auto& [name, slot] : bundle.d_opt.state()) {
        append_floats(blob, slot.m);
        append_floats(blob, slot.v);
    }
    if (blob.size() != offset) throw IoError("save_checkpoint: blob layout mismatch");

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("save_checkpoint: cannot open " + path.string());
    const std::string header = h.dump();
    const std::uint64_t hlen = header.size();
    f.write(kMagic, sizeof(kMagic));
    f.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    f.write(header.data(), static_cast<std::streamsize>(header.size()));
    f.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size() * sizeof(float)));
    if (!f) throw IoError("save_checkpoint: write failed for " + path.string());
}

namespace {

void read_slice(const std::vector<float>& blob, std::uint64_t offset, std::vector<float>& dst,
                const std::string& what) {
    if (offset + dst.size() > blob.size()) {
        throw IoError("load_checkpoint: blob too short for " + what);
    }
    std::memcpy(dst.data(), blob.data() + offset, dst.size() * sizeof(float));
}

void restore_opt(const json& h, const std::vector<float>& blob, double lr, nn::Adam<float>& opt) {
    std::map<std::string, nn::Adam<float>::Slot> state;
    for (const auto& s : h.at("slots")) {
        nn::Adam<float>::Slot slot;
        slot.m.resize(s.at("count").get<std::size_t>());
        slot.v.resize(slot.m.size());
        read_slice(blob, s.at("m_offset").get<std::uint64_t>(), slot.m, "optimizer moment");
        read_slice(blob, s.at("v_offset").get<std::uint64_t>(), slot.v, "optimizer moment");
        state.emplace(s.at("name").get<std::string>(), std::move(slot));
    }
    opt.restore(lr, h.at("beta1").get<double>(), h.at("beta2").get<double>(),
                h.at("epsilon").get<double>(), h.at("t").get<std::int64_t>(), std::move(state));
}

void restore_params(const json& arr, const std::vector<float>& blob,
                    std::vector<nn::ParamRef<float>> params, const std::string& which) {
    if (arr.size() != params.size()) {
        throw IoError("load_checkpoint: " + which + " parameter count mismatch (file has " +
                      std::to_string(arr.size()) + ", model expects " +
                      std::to_string(params.size()) + ")");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const json& e = arr[i];
        if (e.at("name").get<std::string>() != params[i].name) {
            throw IoError("load_checkpoint: parameter name mismatch at " + params[i].name);
        }
        const auto shape = e.at("shape").get<std::vector<int>>();
        const nn::Tensor<float>& t = *params[i].value;
        if (shape != std::vector<int>{t.n, t.c, t.h, t.w}) {
            throw IoError("load_checkpoint: shape mismatch for " + params[i].name);
        }
        read_slice(blob, e.at("offset").get<std::uint64_t>(), params[i].value->v, params[i].name);
    }
}

}  // namespace

ModelBundle load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_checkpoint: cannot open " + path.string());
    char magic[8];
    std::uint32_t version = 0;
    std::uint64_t hlen = 0;
    f.read(magic, sizeof(magic));
    f.read(reinterpret_cast<char*>(&version), sizeof(version));
    f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!f || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
        throw IoError("load_checkpoint: " + path.string() + " is not a checkpoint file");
    }
    if (version != kVersion) {
        throw IoError("load_checkpoint: unsupported version " + std::to_string(version));
    }
    std::string header(hlen, '\0');
    f.read(header.data(), static_cast<std::streamsize>(hlen));
    if (!f) throw IoError("load_checkpoint: truncated header in " + path.string());
    std::vector<float> blob;
    {
        const auto pos = f.tellg();
        f.seekg(0, std::ios::end);
        const auto end = f.tellg();
        f.seekg(pos);
        blob.resize(static_cast<std::size_t>(end - pos) / sizeof(float));
        f.read(reinterpret_cast<char*>(blob.data()),
               static_cast<std::streamsize>(blob.size() * sizeof(float)));
        if (!f) throw IoError("load_checkpoint: truncated blob in " + path.string());
    }

    json h;
    try {
        h = json::parse(header);
    } catch (const json::exception& e) {
        throw IoError("load_checkpoint: bad header in " + path.string() + ": " + e.what());
    }

    try {
        ModelBundle b;
        const json& g = h.at("generator");
        b.g_cfg = {g.at("image_size").get<int>(), g.at("base_channels").get<int>(),
                   g.at("depth").get<int>()};
        const json& d = h.at("discriminator");
        b.d_cfg = {d.at("base_channels").get<int>(), d.at("n_layers").get<int>(),
                   d.at("input_channels").get<int>()};
        const json& t = h.at("train");
        b.train_cfg = {t.at("epochs").get<int>(),
                       t.at("batch_size").get<int>(),
                       t.at("learning_rate").get<double>(),
                       t.at("adversarial_weight").get<double>(),
                       t.at("reconstruction_weight").get<double>(),
                       t.at("seed").get<std::uint64_t>(),
                       t.at("checkpoint_interval").get<int>(),
                       t.at("augment_flips").get<bool>(),
                       t.at("augment_rotations").get<bool>(),
                       t.at("augment_channel_perms").get<bool>()};
        b.epoch = h.at("epoch").get<int>();
        for (const auto& e : h.at("history")) {
            b.history.push_back({e.at("epoch").get<int>(), e.at("d_loss").get<double>(),
                                 e.at("g_adv").get<double>(), e.at("rec").get<double>()});
        }
        b.G = nn::UnetGenerator<float>(b.g_cfg);
        b.D = nn::PatchDiscriminator<float>(b.d_cfg);
        restore_params(h.at("g_params"), blob, b.G.params(), "generator");
        restore_params(h.at("d_params"), blob, b.D.params(), "discriminator");
        restore_opt(h.at("g_opt"), blob, h.at("g_opt").at("learning_rate").get<double>(), b.g_opt);
        restore_opt(h.at("d_opt"), blob, h.at("d_opt").at("learning_rate").get<double>(), b.d_opt);
        return b;
    } catch (const json::exception& e) {
        throw IoError("load_checkpoint: bad header field in " + path.string() + ": " + e.what());
    }
}

}  // namespace delit
