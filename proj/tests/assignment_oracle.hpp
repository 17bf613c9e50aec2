// Exhaustive assignment oracle shared by the unit and acceptance suites.
// Enumerates every way of pairing min(R, P) rows with distinct columns, so
// it is independent of the Hungarian implementation it checks.
#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace seldkit_test {

struct BruteResult {
    double total = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, int>> pairs;
};

inline void brute_recurse(const std::vector<std::vector<double>>& cost, std::size_t row,
                          std::size_t needed, std::vector<bool>& col_used, double running,
                          std::vector<std::pair<int, int>>& current, BruteResult& best) {
    const std::size_t rows = cost.size();
    if (current.size() == needed) {
        if (running < best.total - 1e-9 ||
            (std::abs(running - best.total) <= 1e-9 && current < best.pairs)) {
            best.total = running;
            best.pairs = current;
        }
        return;
    }
    if (row >= rows) return;
    if (rows - row < needed - current.size()) return;

    brute_recurse(cost, row + 1, needed, col_used, running, current, best);
    for (std::size_t c = 0; c < cost[row].size(); ++c) {
        if (col_used[c]) continue;
        col_used[c] = true;
        current.emplace_back(static_cast<int>(row), static_cast<int>(c));
        brute_recurse(cost, row + 1, needed, col_used, running + cost[row][c], current, best);
        current.pop_back();
        col_used[c] = false;
    }
}

inline BruteResult brute_force_assignment(const std::vector<std::vector<double>>& cost) {
    BruteResult best;
    if (cost.empty() || cost[0].empty()) {
        best.total = 0.0;
        return best;
    }
    std::vector<bool> col_used(cost[0].size(), false);
    std::vector<std::pair<int, int>> current;
    brute_recurse(cost, 0, std::min(cost.size(), cost[0].size()), col_used, 0.0, current, best);
    return best;
}

}  // namespace seldkit_test
