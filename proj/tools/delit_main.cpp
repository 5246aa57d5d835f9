/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

// delit: dataset synthesis, GAN training, evaluation, and inference for
// flat-label albedo extraction. Exit codes: 0 success, 1 runtime failure,
// 2 usage error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delit/checkpoint.hpp"
#include "delit/dataset.hpp"
#include "delit/errors.hpp"
#include "delit/grid.hpp"
#include "delit/image_io.hpp"
#include "delit/metrics.hpp"
#include "delit/train.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Every command that produces an output directory drops the effective
/// option values there, so runs are self-describing and rerunnable.
void write_resolved_config(const fs::path& dir, const std::string& command,
                           const std::vector<std::pair<std::string, std::string>>& values) {
    fs::create_directories(dir);
    std::ofstream f(dir / "resolved_config.ini", std::ios::trunc);
    if (!f) throw delit::IoError("cannot write " + (dir / "resolved_config.ini").string());
    f << "[" << command << "]\n";
    for (const auto& [k, v] : values) f << k << " = " << v << "\n";
}

struct SynthArgs {
    int labels = 30;
    int renders_per_label = 20;
    std::uint64_t seed = 1;
    int size = 64;
    double split_ratio = 0.8;
    double roughness_threshold = 0.5;
    std::string out;
};

int run_synth(const SynthArgs& a) {
    delit::DatasetManifest manifest = delit::build_dataset(
        a.labels, a.renders_per_label, a.seed, a.out, a.size, a.roughness_threshold);
    const delit::SplitAssignment split = delit::assign_split(manifest, a.split_ratio);
    delit::apply_split(manifest, split, a.split_ratio);
    delit::save_manifest(manifest, fs::path(a.out) / "manifest.json");
    write_resolved_config(a.out, "synth",
                          {{"labels", std::to_string(a.labels)},
                           {"renders_per_label", std::to_string(a.renders_per_label)},
                           {"seed", std::to_string(a.seed)},
                           {"size", std::to_string(a.size)},
                           {"split_ratio", fmt_double(a.split_ratio)},
                           {"roughness_threshold", fmt_double(a.roughness_threshold)},
                           {"out", a.out}});
    if (split.test_empty_warning) {
        std::cerr << "warning: split ratio leaves the test split empty\n";
    }
    std::cout << manifest.entries.size() << " pairs, " << split.train_labels.size()
              << " train labels / " << split.test_labels.size() << " test labels\n";
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string out;
    int epochs = 30;
    int batch_size = 4;
    double learning_rate = 2e-4;
    double lambda_adv = 1.0;
    double lambda_rec = 100.0;
    std::uint64_t seed = 1;
    int checkpoint_interval = 5;
    int base_channels = 32;
    int depth = 0;
    int d_layers = 3;
    bool no_augment = false;
    bool resume = false;
};

delit::TrainConfig to_train_config(const TrainArgs& a) {
    delit::TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch_size = a.batch_size;
    cfg.learning_rate = a.learning_rate;
    cfg.adversarial_weight = a.lambda_adv;
    cfg.reconstruction_weight = a.lambda_rec;
    cfg.seed = a.seed;
    cfg.checkpoint_interval = a.checkpoint_interval;
    cfg.augment_flips = !a.no_augment;
    cfg.augment_rotations = !a.no_augment;
    cfg.augment_channel_perms = !a.no_augment;
    return cfg;
}

fs::path latest_checkpoint(const fs::path& dir) {
    if (fs::exists(dir / "checkpoint_final.delit")) return dir / "checkpoint_final.delit";
    std::vector<fs::path> found;
    if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
            const std::string name = e.path().filename().string();
            if (name.rfind("checkpoint_epoch", 0) == 0 && e.path().extension() == ".delit") {
                found.push_back(e.path());
            }
        }
    }
    std::sort(found.begin(), found.end());
    return found.empty() ? fs::path() : found.back();
}

int run_train(const TrainArgs& a) {
    const fs::path manifest_path = fs::path(a.data) / "manifest.json";
    const delit::DatasetManifest manifest = delit::load_manifest(manifest_path);
    const delit::TrainConfig cfg = to_train_config(a);

    delit::ModelBundle bundle;
    if (a.resume) {
        const fs::path ckpt = latest_checkpoint(a.out);
        if (ckpt.empty()) {
            throw delit::IoError("--resume given but no checkpoint found in " + a.out);
        }
        bundle = delit::load_checkpoint(ckpt);
        std::cout << "resuming from " << ckpt.filename().string() << " at epoch " << bundle.epoch
                  << "\n";
    } else {
        delit::nn::GeneratorConfig g_cfg;
        g_cfg.image_size = manifest.image_size;
        g_cfg.base_channels = a.base_channels;
        g_cfg.depth = a.depth;
        delit::nn::DiscriminatorConfig d_cfg;
        d_cfg.base_channels = a.base_channels;
        d_cfg.n_layers = a.d_layers;
        bundle = delit::make_bundle(g_cfg, d_cfg, cfg);
    }

    write_resolved_config(a.out, "train",
                          {{"data", a.data},
                           {"out", a.out},
                           {"epochs", std::to_string(a.epochs)},
                           {"batch_size", std::to_string(a.batch_size)},
                           {"learning_rate", fmt_double(a.learning_rate)},
                           {"lambda_adv", fmt_double(a.lambda_adv)},
                           {"lambda_rec", fmt_double(a.lambda_rec)},
                           {"seed", std::to_string(a.seed)},
                           {"checkpoint_interval", std::to_string(a.checkpoint_interval)},
                           {"base_channels", std::to_string(a.base_channels)},
                           {"depth", std::to_string(a.depth)},
                           {"d_layers", std::to_string(a.d_layers)},
                           {"augment_flips", a.no_augment ? "false" : "true"},
                           {"augment_rotations", a.no_augment ? "false" : "true"},
                           {"augment_channel_perms", a.no_augment ? "false" : "true"},
                           {"resume", a.resume ? "true" : "false"}});

    const std::vector<delit::LoadedPair> pairs =
        delit::load_pairs(manifest_path, delit::Split::train);
    std::cout << "training on " << pairs.size() << " pairs (" << manifest.image_size << "x"
              << manifest.image_size << ")\n";

    const int first_epoch = bundle.epoch;
    delit::train(bundle, pairs, cfg, a.out);
    for (const auto& e : bundle.history) {
        if (e.epoch <= first_epoch) continue;
        std::printf("epoch %d/%d d=%.6f g_adv=%.6f rec=%.6f\n", e.epoch, cfg.epochs, e.d_loss,
                    e.g_adv, e.rec);
    }
    std::cout << "final checkpoint: " << (fs::path(a.out) / "checkpoint_final.delit").string()
              << "\n";
    return 0;
}

struct EvalArgs {
    std::string data;
    std::string ckpt;
    std::string split = "test";
    std::string out;
    std::string grid;
    int grid_rows = 7;
};

int run_eval(const EvalArgs& a) {
    const fs::path manifest_path = fs::path(a.data) / "manifest.json";
    delit::ModelBundle bundle = delit::load_checkpoint(a.ckpt);
    const delit::Split split = delit::split_from_string(a.split);

    const delit::EvaluationResult res = delit::evaluate(bundle, manifest_path, split);
    const fs::path out_dir = a.out;
    delit::save_report(res.model, out_dir / "model_report.json");
    delit::save_report(res.identity, out_dir / "identity_report.json");

    const fs::path grid_path = a.grid.empty() ? out_dir / "grid.png" : fs::path(a.grid);
    const delit::DatasetManifest manifest = delit::load_manifest(manifest_path);
    std::vector<std::vector<delit::Image>> rows;
    for (const auto& entry : manifest.entries) {
        if (entry.split != split) continue;
        if (static_cast<int>(rows.size()) >= a.grid_rows) break;
        const delit::LoadedPair pair = delit::load_pair(manifest_path.parent_path(), entry);
        rows.push_back({pair.lit, delit::infer(bundle, pair.lit), pair.albedo});
    }
    delit::export_grid(rows, {"Input", "Ours", "Ground truth"}, grid_path);

    write_resolved_config(out_dir, "eval",
                          {{"data", a.data},
                           {"ckpt", a.ckpt},
                           {"split", a.split},
                           {"out", a.out},
                           {"grid", grid_path.string()},
                           {"grid_rows", std::to_string(a.grid_rows)}});

    std::printf("model    l1 mean %.6f  psnr mean %.3f  ssim mean %.4f\n", res.model.l1.mean,
                res.model.psnr_db.mean, res.model.ssim.mean);
    std::printf("identity l1 mean %.6f  psnr mean %.3f  ssim mean %.4f\n", res.identity.l1.mean,
                res.identity.psnr_db.mean, res.identity.ssim.mean);
    if (!res.model.failures.empty()) {
        std::cerr << res.model.failures.size() << " pair(s) failed; see model_report.json\n";
    }
    return 0;
}

struct InferArgs {
    std::string ckpt;
    std::string input;
    std::string output;
};

int run_infer(const InferArgs& a) {
    delit::ModelBundle bundle = delit::load_checkpoint(a.ckpt);
    const delit::Image lit = delit::load_png(a.input);
    delit::save_png(delit::infer(bundle, lit), a.output);
    std::cout << a.output << "\n";
    return 0;
}

struct CompareArgs {
    std::string inputs;
    std::string ours;
    std::string theirs;
    std::string gt;
    std::string grid;
};

std::set<std::string> png_stems(const fs::path& dir) {
    std::set<std::string> stems;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".png") stems.insert(e.path().stem().string());
    }
    return stems;
}

int run_compare(const CompareArgs& a) {
    const std::vector<std::pair<std::string, fs::path>> dirs = {
        {"inputs", a.inputs}, {"ours", a.ours}, {"theirs", a.theirs}, {"gt", a.gt}};
    std::set<std::string> all;
    std::vector<std::set<std::string>> per_dir;
    for (const auto& [name, dir] : dirs) {
        if (!fs::is_directory(dir)) {
            throw delit::IoError("--" + name + ": not a directory: " + dir.string());
        }
        per_dir.push_back(png_stems(dir));
        all.insert(per_dir.back().begin(), per_dir.back().end());
    }
    std::vector<std::string> mismatches;
    for (const auto& stem : all) {
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            if (!per_dir[i].count(stem)) {
                mismatches.push_back(stem + ".png missing from --" + dirs[i].first);
            }
        }
    }
    if (!mismatches.empty()) {
        std::string msg = "compare: filename sets differ across directories:";
        for (std::size_t i = 0; i < mismatches.size() && i < 10; ++i) {
            msg += "\n  " + mismatches[i];
        }
        if (mismatches.size() > 10) {
            msg += "\n  (and " + std::to_string(mismatches.size() - 10) + " more)";
        }
        throw delit::ValidationError(msg);
    }
    if (all.empty()) throw delit::ValidationError("compare: no .png files found");

    // Fig-style column order: input, competing method, ours, ground truth.
    std::vector<std::vector<delit::Image>> rows;
    for (const auto& stem : all) {
        const delit::Image input = delit::load_png(fs::path(a.inputs) / (stem + ".png"));
        auto cell = [&](const fs::path& dir) {
            delit::Image img = delit::load_png(dir / (stem + ".png"));
            if (!img.same_shape(input)) {  // bilinear resample to the input size
                img = delit::resize_bilinear(img, input.width, input.height);
            }
            return img;
        };
        rows.push_back({input, cell(a.theirs), cell(a.ours), cell(a.gt)});
    }
    delit::export_grid(rows, {"Input", "Theirs", "Ours", "Ground truth"}, a.grid);
    std::cout << a.grid << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delit: flat-label albedo extraction pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read defaults from a key-value file (sections per subcommand); "
                   "command-line flags override file values");
    app.allow_config_extras(false);
    app.set_version_flag("--version", "delit 0.1.0");

    SynthArgs synth;
    CLI::App* s = app.add_subcommand("synth", "Generate a procedural lit/albedo corpus");
    s->add_option("--labels", synth.labels, "Number of distinct labels")->capture_default_str();
    s->add_option("--renders-per-label", synth.renders_per_label, "Lit renders per label")
        ->capture_default_str();
    s->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
    s->add_option("--size", synth.size, "Image size in pixels (power of two)")
        ->capture_default_str();
    s->add_option("--split-ratio", synth.split_ratio, "Train fraction of labels")
        ->capture_default_str();
    s->add_option("--roughness-threshold", synth.roughness_threshold,
                  "Lower bound scale for sampled roughness")
        ->capture_default_str();
    s->add_option("--out", synth.out, "Output directory")->required();

    TrainArgs train;
    CLI::App* t = app.add_subcommand("train", "Train the albedo GAN on a corpus");
    t->add_option("--data", train.data, "Corpus directory (contains manifest.json)")
        ->envname("DELIT_DATA_ROOT")
        ->required();
    t->add_option("--out", train.out, "Run directory for checkpoints and logs")->required();
    t->add_option("--epochs", train.epochs, "Total epochs to reach")->capture_default_str();
    t->add_option("--batch-size", train.batch_size, "Minibatch size")->capture_default_str();
    t->add_option("--lr", train.learning_rate, "Adam learning rate")->capture_default_str();
    t->add_option("--lambda-adv", train.lambda_adv, "Adversarial loss weight")
        ->capture_default_str();
    t->add_option("--lambda-rec", train.lambda_rec, "L1 reconstruction loss weight")
        ->capture_default_str();
    t->add_option("--seed", train.seed, "Training seed (init + shuffling)")
        ->capture_default_str();
    t->add_option("--checkpoint-interval", train.checkpoint_interval, "Epochs between checkpoints")
        ->capture_default_str();
    t->add_flag("--no-augment", train.no_augment,
                "Disable seeded flip/rotation/channel-permutation augmentation");
    t->add_option("--base-channels", train.base_channels, "First-stage channel count")
        ->capture_default_str();
    t->add_option("--depth", train.depth, "Generator downsampling stages (0 = auto)")
        ->capture_default_str();
    t->add_option("--d-layers", train.d_layers, "Discriminator stride-2 blocks")
        ->capture_default_str();
    t->add_flag("--resume", train.resume, "Continue from the latest checkpoint in --out");

    EvalArgs eval;
    CLI::App* e = app.add_subcommand("eval", "Score a checkpoint and export a triptych grid");
    e->add_option("--data", eval.data, "Corpus directory (contains manifest.json)")
        ->envname("DELIT_DATA_ROOT")
        ->required();
    e->add_option("--ckpt", eval.ckpt, "Checkpoint file")->required();
    e->add_option("--split", eval.split, "Split to score: train or test")
        ->capture_default_str();
    e->add_option("--out", eval.out, "Report directory")->required();
    e->add_option("--grid", eval.grid, "Grid PNG path (default <out>/grid.png)");
    e->add_option("--grid-rows", eval.grid_rows, "Pairs shown in the grid")
        ->capture_default_str();

    InferArgs infer;
    CLI::App* i = app.add_subcommand("infer", "Extract albedo from one image");
    i->add_option("--ckpt", infer.ckpt, "Checkpoint file")->required();
    i->add_option("--input", infer.input, "Input PNG")->required();
    i->add_option("--output", infer.output, "Output PNG")->required();

    CompareArgs compare;
    CLI::App* c = app.add_subcommand("compare", "Build a 4-column method-comparison grid");
    c->add_option("--inputs", compare.inputs, "Directory of input images")->required();
    c->add_option("--ours", compare.ours, "Directory of this model's outputs")->required();
    c->add_option("--theirs", compare.theirs, "Directory of a competing method's outputs")
        ->required();
    c->add_option("--gt", compare.gt, "Directory of ground-truth albedos")->required();
    c->add_option("--grid", compare.grid, "Output grid PNG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (s->parsed()) return run_synth(synth);
        if (t->parsed()) return run_train(train);
        if (e->parsed()) return run_eval(eval);
        if (i->parsed()) return run_infer(infer);
        if (c->parsed()) return run_compare(compare);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
