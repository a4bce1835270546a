// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>

namespace skrylov {

/// Work counters for the costs that matter at scale: operator applications,
/// inner products (dot products and norms of full-length vectors), and
/// sketch applications. Small sketch-space arithmetic is not counted.
struct Counters {
  std::int64_t matvecs = 0;
  std::int64_t inner_products = 0;
  std::int64_t sketch_applies = 0;

  Counters& operator+=(const Counters& other) {
    matvecs += other.matvecs;
    inner_products += other.inner_products;
    sketch_applies += other.sketch_applies;
    return *this;
  }
};

}  // namespace skrylov
