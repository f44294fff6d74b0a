#pragma once

#include <map>
#include <utility>
#include <vector>

// Adjusted Rand index between two labelings, from the contingency table.
namespace testsupport {

inline double comb2(double n) { return n * (n - 1.0) / 2.0; }

inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    std::map<std::pair<int, int>, double> contingency;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < n; ++i) {
        contingency[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, count] : contingency) sum_ij += comb2(count);
    for (const auto& [key, count] : rows) sum_a += comb2(count);
    for (const auto& [key, count] : cols) sum_b += comb2(count);
    const double expected = sum_a * sum_b / comb2(static_cast<double>(n));
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (maximum - expected);
}

}  // namespace testsupport
