// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace mcfuse {

struct Assignment {
    /// (row, col) pairs sorted by row; min(rows, cols) of them.
    std::vector<std::pair<int, int>> pairs;
    double cost = 0.0;
};

/// Minimum-cost one-to-one assignment on a rectangular matrix (shortest
/// augmenting path with potentials, O(n^2 m)). Deterministic for a given
/// matrix.
Assignment hungarian(const Eigen::MatrixXd& cost);

/// Maximum-score assignment; pairs with score <= 0 are dropped from the result.
Assignment max_score_matching(const Eigen::MatrixXd& score);

}  // namespace mcfuse
