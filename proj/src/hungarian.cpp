// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace mcfuse {

namespace {

// Rows <= cols. Returns col index per row.
std::vector<int> solve_wide(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

Assignment hungarian(const Eigen::MatrixXd& cost) {
    Assignment out;
    if (cost.rows() == 0 || cost.cols() == 0) return out;
    if (cost.rows() <= cost.cols()) {
        const auto r2c = solve_wide(cost);
        for (int r = 0; r < static_cast<int>(r2c.size()); ++r) out.pairs.emplace_back(r, r2c[r]);
    } else {
        const auto c2r = solve_wide(cost.transpose());
        for (int c = 0; c < static_cast<int>(c2r.size()); ++c) out.pairs.emplace_back(c2r[c], c);
        std::sort(out.pairs.begin(), out.pairs.end());
    }
    for (const auto& [r, c] : out.pairs) out.cost += cost(r, c);
    return out;
}

Assignment max_score_matching(const Eigen::MatrixXd& score) {
    Assignment full = hungarian(-score);
    Assignment out;
    for (const auto& [r, c] : full.pairs) {
        if (score(r, c) > 0.0) {
            out.pairs.emplace_back(r, c);
            out.cost += score(r, c);
        }
    }
    return out;
}

}  // namespace mcfuse
