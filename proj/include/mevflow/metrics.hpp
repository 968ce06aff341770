#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mevflow/address.hpp"

namespace mevflow {

struct Metrics {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
};

/// Zero-denominator convention: precision, recall and F1 fall back to 0.
inline Metrics metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                                   std::uint64_t tn) {
    Metrics m{tp, fp, fn, tn};
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    const std::uint64_t total = tp + fp + fn + tn;
    if (total > 0) m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
    return m;
}

/// Confusion counts of a predicted set against truth over a universe.
inline Metrics evaluate(const std::set<Hash32>& predicted, const std::set<Hash32>& truth,
                        const std::set<Hash32>& universe) {
    for (const Hash32& h : predicted)
        if (!universe.count(h))
            throw std::invalid_argument("prediction " + h.hex() + " outside the universe");
    for (const Hash32& h : truth)
        if (!universe.count(h))
            throw std::invalid_argument("truth entry " + h.hex() + " outside the universe");
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (const Hash32& h : universe) {
        const bool p = predicted.count(h) > 0;
        const bool t = truth.count(h) > 0;
        if (p && t) ++tp;
        else if (p) ++fp;
        else if (t) ++fn;
        else ++tn;
    }
    return metrics_from_counts(tp, fp, fn, tn);
}

struct DominanceReport {
    std::uint64_t window_blocks = 0;
    // window start block -> contract -> share; shares per window sum to 1
    std::map<std::uint64_t, std::map<Address, double>> windows;
};

/// Occurrence-share dominance: within each window every contract occurrence
/// across MEV transactions carries equal weight. Empty windows are omitted.
inline DominanceReport dominance_report(
    const std::vector<std::pair<std::uint64_t, std::vector<Address>>>& tx_contracts,
    std::uint64_t window_blocks) {
    if (window_blocks == 0) throw std::invalid_argument("window size must be positive");
    DominanceReport report;
    report.window_blocks = window_blocks;
    std::map<std::uint64_t, std::map<Address, std::uint64_t>> counts;
    std::map<std::uint64_t, std::uint64_t> totals;
    for (const auto& [block, contracts] : tx_contracts) {
        const std::uint64_t window = (block / window_blocks) * window_blocks;
        for (const Address& c : contracts) {
            ++counts[window][c];
            ++totals[window];
        }
    }
    for (const auto& [window, per_contract] : counts) {
        const double total = static_cast<double>(totals[window]);
        for (const auto& [contract, n] : per_contract)
            report.windows[window][contract] = static_cast<double>(n) / total;
    }
    return report;
}

}  // namespace mevflow
