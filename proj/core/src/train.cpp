/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#include "delit/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "delit/checkpoint.hpp"
#include "delit/errors.hpp"
#include "delit/nn/losses.hpp"

namespace delit {

void validate_train_config(const TrainConfig& cfg) {
    if (cfg.epochs < 0) throw ValidationError("epochs: must be >= 0");
    if (cfg.batch_size < 1) throw ValidationError("batch_size: must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning_rate: must be > 0");
    if (cfg.adversarial_weight < 0.0) throw ValidationError("adversarial_weight: must be >= 0");
    if (cfg.reconstruction_weight < 0.0) {
        throw ValidationError("reconstruction_weight: must be >= 0");
    }
    if (cfg.adversarial_weight + cfg.reconstruction_weight <= 0.0) {
        throw ValidationError("adversarial_weight + reconstruction_weight: must be > 0");
    }
    if (cfg.checkpoint_interval < 1) throw ValidationError("checkpoint_interval: must be >= 1");
}

ModelBundle make_bundle(const nn::GeneratorConfig& g_cfg, const nn::DiscriminatorConfig& d_cfg,
                        const TrainConfig& train_cfg) {
    validate_generator_config(g_cfg);
    validate_discriminator_config(d_cfg);
    validate_train_config(train_cfg);
    ModelBundle b;
    b.g_cfg = g_cfg;
    b.d_cfg = d_cfg;
    b.train_cfg = train_cfg;
    b.G = nn::build_generator<float>(g_cfg, train_cfg.seed);
    b.D = nn::build_discriminator<float>(d_cfg, train_cfg.seed);
    b.g_opt = nn::Adam<float>(train_cfg.learning_rate);
    b.d_opt = nn::Adam<float>(train_cfg.learning_rate);
    return b;
}

namespace {

[[noreturn]] void abort_training(const ModelBundle& bundle, const std::string& what) {
    std::string msg = "training aborted: " + what + "; loss history:";
    const std::size_t from = bundle.history.size() > 8 ? bundle.history.size() - 8 : 0;
    for (std::size_t i = from; i < bundle.history.size(); ++i) {
        const auto& e = bundle.history[i];
        char buf[128];
        std::snprintf(buf, sizeof(buf), " [epoch %d d=%.6f g_adv=%.6f rec=%.6f]", e.epoch,
                      e.d_loss, e.g_adv, e.rec);
        msg += buf;
    }
    if (bundle.history.empty()) msg += " (empty)";
    throw TrainAbortError(msg);
}

/// Diverged or poisoned parameters surface as NaN/Inf activations; report
/// them as a training abort (with history) rather than a validation error.
void ensure_finite(const ModelBundle& bundle, const nn::Tensor<float>& t, const char* what) {
    for (float v : t.v) {
        if (!std::isfinite(v)) abort_training(bundle, std::string("non-finite ") + what);
    }
}

}  // namespace

StepLosses train_step(ModelBundle& bundle, const PairBatch& batch, const TrainConfig& cfg) {
    if (!batch.lit.same_shape(batch.target_albedo)) {
        throw ValidationError("train_step: lit and target_albedo shapes differ");
    }
    StepLosses out;

    // Discriminator step on one stacked real+fake batch; the generator
    // output enters as a constant here.
    nn::Tensor<float> fake = bundle.G.forward(batch.lit);
    ensure_finite(bundle, fake, "generator output");
    nn::Tensor<float> both =
        nn::concat_batch(nn::concat_channels(batch.lit, batch.target_albedo),
                         nn::concat_channels(batch.lit, fake));
    nn::Tensor<float> logits = bundle.D.forward(both);
    ensure_finite(bundle, logits, "discriminator logits");
    auto [real_logits, fake_logits] = nn::split_batch(logits, batch.lit.n);
    out.d_loss = nn::adversarial_losses(real_logits, fake_logits).d_loss;
    auto grads = nn::d_loss_grad(real_logits, fake_logits);
    nn::Tensor<float> d_grad = nn::concat_batch(grads.first, grads.second);
    // Halve the discriminator objective while optimizing it (the usual
    // pix2pix braking); the logged d_loss stays unscaled.
    for (auto& v : d_grad.v) v *= 0.5f;
    bundle.D.zero_grads();
    bundle.D.backward(d_grad, true);
    bundle.d_opt.step(bundle.D.params());

    // Generator step: fake logits recomputed with gradients flowing
    // through G; the discriminator only supplies the data gradient.
    bundle.G.zero_grads();
    fake = bundle.G.forward(batch.lit);
    ensure_finite(bundle, fake, "generator output");
    nn::Tensor<float> g_logits = bundle.D.forward(batch.lit, fake);
    ensure_finite(bundle, g_logits, "discriminator logits");
    out.g_adv = nn::adversarial_losses(g_logits, g_logits).g_adv_loss;
    out.rec = nn::l1_loss(fake, batch.target_albedo);

    nn::Tensor<float> d_fake(fake.n, fake.c, fake.h, fake.w);
    d_fake.fill(0.0f);
    if (cfg.adversarial_weight > 0.0) {
        nn::Tensor<float> dlogits = nn::g_adv_grad(g_logits);
        for (auto& v : dlogits.v) v *= static_cast<float>(cfg.adversarial_weight);
        nn::Tensor<float> dpair = bundle.D.backward(dlogits, false);
        d_fake = nn::split_channels(dpair, 3).second;  // lit half is an input, not a parameter
    }
    if (cfg.reconstruction_weight > 0.0) {
        nn::Tensor<float> drec = nn::l1_loss_grad(fake, batch.target_albedo);
        for (std::size_t i = 0; i < d_fake.v.size(); ++i) {
            d_fake.v[i] += static_cast<float>(cfg.reconstruction_weight) * drec.v[i];
        }
    }
    bundle.G.backward(d_fake, true);
    bundle.g_opt.step(bundle.G.params());

    if (!std::isfinite(out.d_loss) || !std::isfinite(out.g_adv) || !std::isfinite(out.rec)) {
        abort_training(bundle, "non-finite step loss");
    }
    return out;
}

namespace {

PairBatch gather_batch(const std::vector<LoadedPair>& pairs, const std::vector<std::size_t>& order,
                       std::size_t begin, std::size_t end, int size) {
    PairBatch b;
    b.lit = nn::Tensor<float>(static_cast<int>(end - begin), 3, size, size);
    b.target_albedo = nn::Tensor<float>(static_cast<int>(end - begin), 3, size, size);
    for (std::size_t i = begin; i < end; ++i) {
        const LoadedPair& p = pairs[order[i]];
        if (p.lit.width != size || p.lit.height != size) {
            throw ValidationError("train: pair " + p.meta.pair_id + " is " +
                                  std::to_string(p.lit.width) + "x" +
                                  std::to_string(p.lit.height) + ", expected " +
                                  std::to_string(size) + "x" + std::to_string(size));
        }
        nn::image_to_tensor(p.lit, b.lit, static_cast<int>(i - begin));
        nn::image_to_tensor(p.albedo, b.target_albedo, static_cast<int>(i - begin));
    }
    return b;
}

/// In-place horizontal/vertical mirror of one sample across all channels.
void flip_sample(nn::Tensor<float>& t, int n, bool horizontal, bool vertical) {
    for (int c = 0; c < t.c; ++c) {
        if (horizontal) {
            for (int y = 0; y < t.h; ++y)
                for (int x = 0; x < t.w / 2; ++x) {
                    std::swap(t.at(n, c, y, x), t.at(n, c, y, t.w - 1 - x));
                }
        }
        if (vertical) {
            for (int y = 0; y < t.h / 2; ++y)
                for (int x = 0; x < t.w; ++x) {
                    std::swap(t.at(n, c, y, x), t.at(n, c, t.h - 1 - y, x));
                }
        }
    }
}

/// Quarter-turn rotation of one (square) sample, k * 90 degrees clockwise.
void rotate90_sample(nn::Tensor<float>& t, int n, int k) {
    if (k == 0) return;
    std::vector<float> src(static_cast<std::size_t>(t.h) * t.w);
    for (int c = 0; c < t.c; ++c) {
        for (int y = 0; y < t.h; ++y)
            for (int x = 0; x < t.w; ++x) src[static_cast<std::size_t>(y) * t.w + x] = t.at(n, c, y, x);
        for (int y = 0; y < t.h; ++y) {
            for (int x = 0; x < t.w; ++x) {
                int sy = y, sx = x;
                switch (k) {
                    case 1: sy = t.h - 1 - x; sx = y; break;
                    case 2: sy = t.h - 1 - y; sx = t.w - 1 - x; break;
                    default: sy = x; sx = t.w - 1 - y; break;
                }
                t.at(n, c, y, x) = src[static_cast<std::size_t>(sy) * t.w + sx];
            }
        }
    }
}

/// Applies one of the six RGB orderings to a 3-channel sample.
void permute_channels_sample(nn::Tensor<float>& t, int n, int perm) {
    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    if (perm == 0) return;
    const std::size_t plane = static_cast<std::size_t>(t.h) * t.w;
    std::vector<float> src(3 * plane);
    std::copy_n(&t.at(n, 0, 0, 0), 3 * plane, src.begin());
    for (int c = 0; c < 3; ++c) {
        std::copy_n(&src[static_cast<std::size_t>(kPerms[perm][c]) * plane], plane,
                    &t.at(n, c, 0, 0));
    }
}

/// Mirrors, quarter-turns, and RGB permutations are exact symmetries of the
/// render model (see TrainConfig), so both images of a pair transform
/// together and the result is still a sample the renderer could have
/// produced. One independent draw per sample per epoch.
void augment_batch(PairBatch& batch, Rng& rng, const TrainConfig& cfg) {
    for (int i = 0; i < batch.lit.n; ++i) {
        if (cfg.augment_flips) {
            const bool h = rng.bernoulli(0.5);
            const bool v = rng.bernoulli(0.5);
            if (h || v) {
                flip_sample(batch.lit, i, h, v);
                flip_sample(batch.target_albedo, i, h, v);
            }
        }
        if (cfg.augment_rotations && batch.lit.h == batch.lit.w) {
            const int k = static_cast<int>(rng.uniform_int(4));
            rotate90_sample(batch.lit, i, k);
            rotate90_sample(batch.target_albedo, i, k);
        }
        if (cfg.augment_channel_perms) {
            const int perm = static_cast<int>(rng.uniform_int(6));
            permute_channels_sample(batch.lit, i, perm);
            permute_channels_sample(batch.target_albedo, i, perm);
        }
    }
}

void write_loss_log(const ModelBundle& bundle, const std::filesystem::path& out_dir) {
    std::ofstream f(out_dir / "loss_log.csv", std::ios::trunc);
    if (!f) throw IoError("train: cannot write " + (out_dir / "loss_log.csv").string());
    f << "epoch,d_loss,g_adv,rec\n";
    char buf[160];
    for (const auto& e : bundle.history) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", e.epoch, e.d_loss, e.g_adv, e.rec);
        f << buf;
    }
}

}  // namespace

void train(ModelBundle& bundle, const std::vector<LoadedPair>& pairs, const TrainConfig& cfg,
           const std::filesystem::path& out_dir) {
    validate_train_config(cfg);
    if (pairs.empty()) throw ValidationError("train: empty training split");
    std::filesystem::create_directories(out_dir);

    const int size = bundle.g_cfg.image_size;

    for (int epoch = bundle.epoch; epoch < cfg.epochs; ++epoch) {
        // Each epoch's batch order is a pure function of (seed, epoch), so a
        // resumed run replays exactly the batches the uninterrupted run saw.
        std::vector<std::size_t> order(pairs.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng shuffle_rng(derive_seed(cfg.seed, fnv1a64("shuffle"), static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i) {  // Fisher-Yates
            std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);
        }
        Rng augment_rng(derive_seed(cfg.seed, fnv1a64("augment"), static_cast<std::uint64_t>(epoch)));

        double d_sum = 0.0, g_sum = 0.0, r_sum = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t begin = 0; begin < pairs.size();
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(pairs.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            PairBatch batch = gather_batch(pairs, order, begin, end, size);
            if (cfg.augment_flips || cfg.augment_rotations || cfg.augment_channel_perms) {
                augment_batch(batch, augment_rng, cfg);
            }
            const StepLosses s = train_step(bundle, batch, cfg);
            d_sum += s.d_loss;
            g_sum += s.g_adv;
            r_sum += s.rec;
            ++n_batches;
        }
        bundle.epoch = epoch + 1;
        bundle.history.push_back({bundle.epoch, d_sum / static_cast<double>(n_batches),
                                  g_sum / static_cast<double>(n_batches),
                                  r_sum / static_cast<double>(n_batches)});
        write_loss_log(bundle, out_dir);

        if (bundle.epoch % cfg.checkpoint_interval == 0 || bundle.epoch == cfg.epochs) {
            char name[64];
            std::snprintf(name, sizeof(name), "checkpoint_epoch%04d.delit", bundle.epoch);
            save_checkpoint(bundle, out_dir / name);
        }
    }
    save_checkpoint(bundle, out_dir / "checkpoint_final.delit");
    write_loss_log(bundle, out_dir);
}

Image infer(ModelBundle& bundle, const Image& lit) {
    validate_unit_range(lit, "lit");
    const int size = bundle.g_cfg.image_size;
    const bool resample = lit.width != size || lit.height != size;
    const Image input = resample ? resize_bilinear(lit, size, size) : lit;

    nn::Tensor<float> x(1, 3, size, size);
    nn::image_to_tensor(input, x, 0);
    nn::Tensor<float> y = bundle.G.forward(x);
    Image out = nn::tensor_to_image(y, 0);
    return resample ? resize_bilinear(out, lit.width, lit.height) : out;
}

}  // namespace delit
