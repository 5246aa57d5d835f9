/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "delit/dataset.hpp"
#include "delit/nn/adam.hpp"
#include "delit/nn/discriminator.hpp"
#include "delit/nn/generator.hpp"

namespace delit {

/// Optimization hyperparameters. Defaults: 30 epochs of batch-4 Adam at
/// 2e-4 (beta1 0.5, beta2 0.999, eps 1e-8), generator loss
/// adversarial_weight * g_adv + reconstruction_weight * L1. Setting
/// reconstruction_weight to 0 recovers the pure adversarial regime;
/// adversarial_weight 0 gives plain supervised L1 regression.
///
/// The augment_* toggles apply seeded per-sample transforms that are exact
/// symmetries of the render model, so every augmented pair is one the
/// renderer could have produced itself: mirrors and quarter-turns rotate
/// the camera about its axis (light directions transform covariantly,
/// n.l and n.h are unchanged), and RGB permutations relabel channels
/// through the per-channel shading pipeline. Together they multiply the
/// label diversity the networks see by 48, which starves label
/// memorization without widening the data distribution.
struct TrainConfig {
    int epochs = 30;
    int batch_size = 4;
    double learning_rate = 2e-4;
    double adversarial_weight = 1.0;
    double reconstruction_weight = 100.0;
    std::uint64_t seed = 0;
    int checkpoint_interval = 5;
    bool augment_flips = true;
    bool augment_rotations = true;
    bool augment_channel_perms = true;
};

void validate_train_config(const TrainConfig& cfg);

struct EpochLosses {
    int epoch = 0;
    double d_loss = 0.0;
    double g_adv = 0.0;
    double rec = 0.0;
};

/// Generator + discriminator + optimizer state + progress. Exclusively
/// owned by the training loop; checkpointed copies are safe to use for
/// concurrent inference.
struct ModelBundle {
    nn::GeneratorConfig g_cfg;
    nn::DiscriminatorConfig d_cfg;
    TrainConfig train_cfg;
    nn::UnetGenerator<float> G;
    nn::PatchDiscriminator<float> D;
    nn::Adam<float> g_opt;
    nn::Adam<float> d_opt;
    int epoch = 0;
    std::vector<EpochLosses> history;
};

ModelBundle make_bundle(const nn::GeneratorConfig& g_cfg, const nn::DiscriminatorConfig& d_cfg,
                        const TrainConfig& train_cfg);

/// One minibatch: lit inputs plus (except at inference) ground-truth
/// albedo targets, both Bx3xHxW in [0,1].
struct PairBatch {
    nn::Tensor<float> lit;
    nn::Tensor<float> target_albedo;
};

struct StepLosses {
    double d_loss = 0.0;
    double g_adv = 0.0;
    double rec = 0.0;
};

/// One alternating update: discriminator step on (real, fake) pairs with
/// the generator output held constant, then a generator step on
/// adversarial_weight * g_adv + reconstruction_weight * L1. Throws
/// TrainAbortError (with the loss history up to the failure) on
/// non-finite losses.
StepLosses train_step(ModelBundle& bundle, const PairBatch& batch, const TrainConfig& cfg);

/// Epoch loop over seed-shuffled batches of `pairs`. Writes
/// out_dir/loss_log.csv (epoch, d_loss, g_adv, rec; six decimals) and
/// out_dir/checkpoint_epoch####.delit every checkpoint_interval epochs
/// plus a final out_dir/checkpoint_final.delit. Resumes from the epoch
/// counter already in `bundle`, so a reloaded checkpoint continues where
/// it stopped; epochs <= bundle.epoch returns the bundle untouched.
void train(ModelBundle& bundle, const std::vector<LoadedPair>& pairs, const TrainConfig& cfg,
           const std::filesystem::path& out_dir);

/// Single-image wrapper over the generator. Inputs not matching the
/// configured size are resampled with the bilinear filter documented in
/// resize_bilinear, and the prediction is resampled back.
Image infer(ModelBundle& bundle, const Image& lit);

}  // namespace delit
