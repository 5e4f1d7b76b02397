// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace pedsim {

inline constexpr const char* kVersion = "0.1.0";

// Version tag written into every generated artifact (annotation JSON,
// reports, manifests). Bump when a file format changes incompatibly.
inline constexpr int kFormatVersion = 1;

}  // namespace pedsim
