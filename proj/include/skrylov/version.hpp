// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#define SKRYLOV_VERSION_MAJOR 0
#define SKRYLOV_VERSION_MINOR 1
#define SKRYLOV_VERSION_PATCH 0

namespace skrylov {
inline constexpr const char* version_string = "0.1.0";
}
