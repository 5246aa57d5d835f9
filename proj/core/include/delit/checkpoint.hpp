/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <filesystem>

#include "delit/train.hpp"

namespace delit {

/// Single-file archive: 8-byte magic "DELITCKP", little-endian u32
/// format version, u64 JSON header length, the JSON header (configs,
/// epoch, loss history, and a name -> shape -> blob-offset table for
/// every parameter and optimizer moment), then one flat little-endian
/// float32 blob. save -> load -> save is byte-identical.
void save_checkpoint(const ModelBundle& bundle, const std::filesystem::path& path);

ModelBundle load_checkpoint(const std::filesystem::path& path);

}  // namespace delit
