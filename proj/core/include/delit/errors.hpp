/* SPDX-FileCopyrightText: 2026 Delit Authors
 *
 * SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <stdexcept>
#include <string>

namespace delit {

/// Rejected input: a parameter or data structure violates its contract.
/// The message names the offending field or argument.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem or codec failure. The message carries the failing path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training aborted on a non-finite loss; carries a diagnostic snapshot.
class TrainAbortError : public std::runtime_error {
public:
    explicit TrainAbortError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace delit
