// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

/// \file
/// Umbrella header: the whole library in one include.

#include "skrylov/arnoldi.hpp"
#include "skrylov/baseline.hpp"
#include "skrylov/counters.hpp"
#include "skrylov/fom.hpp"
#include "skrylov/givens.hpp"
#include "skrylov/incremental_qr.hpp"
#include "skrylov/matrix_market.hpp"
#include "skrylov/operator_ref.hpp"
#include "skrylov/problems.hpp"
#include "skrylov/projectors.hpp"
#include "skrylov/recycle.hpp"
#include "skrylov/report.hpp"
#include "skrylov/rng.hpp"
#include "skrylov/sketch.hpp"
#include "skrylov/solver.hpp"
#include "skrylov/sparse.hpp"
#include "skrylov/version.hpp"
