// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace srlkit {

// FNV-1a, 64-bit. Fixed constants, byte-order independent; used wherever a
// stable cross-platform content hash is needed (cache keys, provenance).
std::uint64_t fnv1a64(std::string_view bytes);

// 16-digit lowercase hex of fnv1a64(bytes).
std::string content_hash(std::string_view bytes);

// Shortest round-trip decimal form of a double ("0", "0.5", "1e-09", ...).
std::string canonical_double(double value);

}  // namespace srlkit
