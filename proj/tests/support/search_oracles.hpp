#pragma once

// Brute-force references for the search engines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"

namespace oracle {

/// Every sum of residue masses (in 1e-5 Da units) up to max_units, by
/// breadth-first expansion of explicit multiset sums.
inline std::vector<bool> reachable_sums(const std::vector<double>& residue_masses, std::int64_t max_units) {
    std::vector<std::int64_t> units;
    for (double m : residue_masses) units.push_back(std::llround(m * 1e5));
    std::vector<bool> reached(static_cast<std::size_t>(max_units + 1), false);
    reached[0] = true;
    std::vector<std::int64_t> frontier{0};
    while (!frontier.empty()) {
        std::vector<std::int64_t> next;
        for (auto s : frontier) {
            for (auto u : units) {
                const auto t = s + u;
                if (t <= max_units && !reached[static_cast<std::size_t>(t)]) {
                    reached[static_cast<std::size_t>(t)] = true;
                    next.push_back(t);
                }
            }
        }
        frontier.swap(next);
    }
    return reached;
}

/// Bin k is feasible when some reachable sum lies within one bin width of k·resolution.
inline std::vector<bool> knapsack_bins(const std::vector<bool>& reached, std::int64_t res_units, std::size_t bins) {
    std::vector<bool> out(bins, false);
    const auto n = static_cast<std::int64_t>(reached.size());
    for (std::size_t k = 0; k < bins; ++k) {
        const auto c = static_cast<std::int64_t>(k) * res_units;
        for (auto s = std::max<std::int64_t>(0, c - res_units); s <= c + res_units && s < n; ++s) {
            if (reached[static_cast<std::size_t>(s)]) {
                out[k] = true;
                break;
            }
        }
    }
    return out;
}

/// All token strings of length 1..max_len over the alphabet.
inline void enumerate_sequences(const std::vector<std::string>& alphabet, std::size_t max_len,
                                const std::function<void(const std::string&)>& visit) {
    std::function<void(std::string, std::size_t)> rec = [&](std::string prefix, std::size_t len) {
        if (len > 0) visit(prefix);
        if (len == max_len) return;
        for (const auto& a : alphabet) rec(prefix + a, len + 1);
    };
    rec("", 0);
}

/// q-values by the textbook definition: FDR at every threshold, then the
/// minimum over all thresholds at or below each score.
inline std::vector<double> q_values(const std::vector<double>& scores, const std::vector<bool>& decoy) {
    const std::size_t n = scores.size();
    std::vector<double> fdr_at(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0, d = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (scores[j] >= scores[i]) (decoy[j] ? d : t) += 1;
        }
        fdr_at[i] = d / std::max(1.0, t);
    }
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (scores[j] <= scores[i]) best = std::min(best, fdr_at[j]);
        }
        q[i] = best;
    }
    return q;
}

}  // namespace oracle
