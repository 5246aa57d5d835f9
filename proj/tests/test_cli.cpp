/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

// Subprocess tests for the delit tool: exit codes, output contracts, and a
// miniature synth -> train -> eval -> infer -> compare pipeline.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "delit/image.hpp"
#include "delit/image_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using testutil::RunResult;
using testutil::TempDir;
using testutil::run_tool;

namespace {

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version flag prints the tool version") {
    const RunResult r = run_tool("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "delit 0.1.0\n");
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_tool("").exit_code == 2);

    const RunResult missing = run_tool("synth");
    CHECK(missing.exit_code == 2);
    CHECK(contains(missing.output, "--out"));

    TempDir dir;
    CHECK(run_tool("synth --out " + q(dir.path()) + " --frobnicate").exit_code == 2);
    CHECK(run_tool("train --out " + q(dir.path())).exit_code == 2);  // --data required
}

TEST_CASE("runtime failures exit with code 1") {
    TempDir dir;
    const RunResult r =
        run_tool("train --data " + q(dir / "nope") + " --out " + q(dir / "run"));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "error:"));

    const RunResult inf = run_tool("infer --ckpt " + q(dir / "missing.delit") + " --input " +
                                   q(dir / "a.png") + " --output " + q(dir / "b.png"));
    CHECK(inf.exit_code == 1);
    CHECK(contains(inf.output, "error:"));
}

TEST_CASE("synth reports the corpus summary and drops a resolved config") {
    TempDir dir;
    const fs::path corpus = dir / "corpus";
    const RunResult r = run_tool(
        "synth --labels 5 --renders-per-label 2 --size 32 --seed 7 --out " + q(corpus));
    CHECK(r.exit_code == 0);
    // ceil(0.8 * 5) = 4 train labels, so no warning and the summary is the whole output.
    CHECK(r.output == "10 pairs, 4 train labels / 1 test labels\n");
    CHECK(fs::exists(corpus / "manifest.json"));
    CHECK(fs::exists(corpus / "lit" / "000000-0000.png"));
    CHECK(fs::exists(corpus / "albedo" / "000004-0001.png"));

    const std::string cfg = testutil::read_file(corpus / "resolved_config.ini");
    CHECK(contains(cfg, "[synth]"));
    CHECK(contains(cfg, "seed = 7"));
    CHECK(contains(cfg, "size = 32"));

    // An all-train ratio still succeeds but warns about the empty test split.
    const RunResult warn = run_tool(
        "synth --labels 4 --renders-per-label 1 --size 32 --out " + q(dir / "warn"));
    CHECK(warn.exit_code == 0);
    CHECK(contains(warn.output, "test split empty"));
    CHECK(contains(warn.output, "4 pairs, 4 train labels / 0 test labels"));
}

TEST_CASE("synth runs with the same seed produce identical bytes") {
    TempDir dir;
    const std::string args = "synth --labels 3 --renders-per-label 1 --size 32 --seed 9 --out ";
    CHECK(run_tool(args + q(dir / "a")).exit_code == 0);
    CHECK(run_tool(args + q(dir / "b")).exit_code == 0);
    CHECK(testutil::files_equal(dir / "a" / "manifest.json", dir / "b" / "manifest.json"));
    CHECK(testutil::files_equal(dir / "a" / "lit" / "000002-0000.png",
                                dir / "b" / "lit" / "000002-0000.png"));
    CHECK(testutil::files_equal(dir / "a" / "albedo" / "000000-0000.png",
                                dir / "b" / "albedo" / "000000-0000.png"));
}

TEST_CASE("end-to-end pipeline on a miniature corpus") {
    TempDir dir;
    const fs::path corpus = dir / "corpus";
    const fs::path run = dir / "run";
    REQUIRE(run_tool("synth --labels 5 --renders-per-label 2 --size 32 --seed 11 --out " +
                     q(corpus))
                .exit_code == 0);

    const std::string small_net =
        " --batch-size 2 --base-channels 4 --d-layers 2 --checkpoint-interval 1 --seed 3";
    const RunResult train =
        run_tool("train --data " + q(corpus) + " --out " + q(run) + small_net + " --epochs 2");
    CHECK(train.exit_code == 0);
    CHECK(contains(train.output, "training on 8 pairs (32x32)"));
    CHECK(contains(train.output, "epoch 2/2"));
    CHECK(contains(train.output, "final checkpoint:"));
    CHECK(fs::exists(run / "checkpoint_epoch0001.delit"));
    CHECK(fs::exists(run / "checkpoint_final.delit"));
    CHECK(contains(testutil::read_file(run / "loss_log.csv"), "epoch,d_loss,g_adv,rec"));
    const std::string cfg = testutil::read_file(run / "resolved_config.ini");
    CHECK(contains(cfg, "[train]"));
    CHECK(contains(cfg, "augment_flips = true"));

    // Resume picks up the final checkpoint and only runs the remaining epoch.
    const RunResult resume =
        run_tool("train --data " + q(corpus) + " --out " + q(run) + small_net +
                 " --epochs 3 --resume");
    CHECK(resume.exit_code == 0);
    CHECK(contains(resume.output, "resuming from checkpoint_final.delit at epoch 2"));
    CHECK(contains(resume.output, "epoch 3/3"));
    CHECK_FALSE(contains(resume.output, "epoch 2/3"));

    const fs::path rep = dir / "rep";
    const RunResult eval = run_tool("eval --data " + q(corpus) + " --ckpt " +
                                    q(run / "checkpoint_final.delit") + " --out " + q(rep) +
                                    " --grid-rows 2");
    CHECK(eval.exit_code == 0);
    CHECK(contains(eval.output, "model    l1 mean"));
    CHECK(contains(eval.output, "identity l1 mean"));
    CHECK(fs::exists(rep / "model_report.json"));
    CHECK(fs::exists(rep / "identity_report.json"));
    const delit::Image grid = delit::load_png(rep / "grid.png");
    CHECK(grid.width > 0);

    // --data can come from the environment instead of the flag.
    const RunResult env_eval =
        run_tool("eval --ckpt " + q(run / "checkpoint_final.delit") + " --out " +
                     q(dir / "rep_env"),
                 "DELIT_DATA_ROOT=" + corpus.string());
    CHECK(env_eval.exit_code == 0);
    CHECK(contains(env_eval.output, "model    l1 mean"));

    // Inference preserves input dimensions, native or not.
    const fs::path native_out = dir / "native.png";
    const RunResult inf = run_tool("infer --ckpt " + q(run / "checkpoint_final.delit") +
                                   " --input " + q(corpus / "lit" / "000000-0000.png") +
                                   " --output " + q(native_out));
    CHECK(inf.exit_code == 0);
    CHECK(contains(inf.output, "native.png"));
    const delit::Image native = delit::load_png(native_out);
    CHECK(native.width == 32);
    CHECK(native.height == 32);

    delit::save_png(delit::Image(40, 24, 0.5f), dir / "wide.png");
    const fs::path wide_out = dir / "wide_out.png";
    REQUIRE(run_tool("infer --ckpt " + q(run / "checkpoint_final.delit") + " --input " +
                     q(dir / "wide.png") + " --output " + q(wide_out))
                .exit_code == 0);
    const delit::Image wide = delit::load_png(wide_out);
    CHECK(wide.width == 40);
    CHECK(wide.height == 24);
}

TEST_CASE("compare builds a four-column grid and rejects mismatched sets") {
    TempDir dir;
    for (const char* name : {"inputs", "ours", "theirs", "gt"}) {
        fs::create_directories(dir / name);
    }
    for (const char* stem : {"boxa", "boxb"}) {
        const std::string file = std::string(stem) + ".png";
        delit::save_png(delit::Image(32, 32, 0.4f), dir / "inputs" / file);
        delit::save_png(delit::Image(16, 16, 0.5f), dir / "ours" / file);
        delit::save_png(delit::Image(16, 16, 0.6f), dir / "theirs" / file);
        delit::save_png(delit::Image(32, 32, 0.7f), dir / "gt" / file);
    }
    const std::string args = "compare --inputs " + q(dir / "inputs") + " --ours " +
                             q(dir / "ours") + " --theirs " + q(dir / "theirs") + " --gt " +
                             q(dir / "gt") + " --grid " + q(dir / "grid.png");
    const RunResult r = run_tool(args);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "(2 rows)"));
    CHECK(delit::load_png(dir / "grid.png").width > 0);

    fs::remove(dir / "theirs" / "boxb.png");
    const RunResult bad = run_tool(args);
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.output, "boxb.png missing from --theirs"));
}

TEST_CASE("config file supplies defaults and rejects unknown keys") {
    TempDir dir;
    const fs::path cfg = dir / "delit.ini";
    {
        std::ofstream f(cfg);
        f << "[synth]\n"
          << "labels = 4\n"
          << "renders-per-label = 1\n"
          << "size = 32\n"
          << "seed = 3\n"
          << "out = " << (dir / "from_cfg").string() << "\n";
    }
    const RunResult r = run_tool("--config " + q(cfg) + " synth");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "4 pairs, 4 train labels / 0 test labels"));
    CHECK(fs::exists(dir / "from_cfg" / "manifest.json"));

    // Command-line flags override the file.
    const RunResult ovr =
        run_tool("--config " + q(cfg) + " synth --labels 6 --out " + q(dir / "override"));
    CHECK(ovr.exit_code == 0);
    CHECK(contains(ovr.output, "6 pairs, 5 train labels / 1 test labels"));

    {
        std::ofstream f(cfg, std::ios::app);
        f << "frobnicate = 1\n";
    }
    CHECK(run_tool("--config " + q(cfg) + " synth").exit_code == 2);
}

}  // TEST_SUITE("cli")
