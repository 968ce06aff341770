#pragma once

// Independent literal re-implementation of the sandwich detection algorithm,
// used only to cross-check the production detector. Decodes raw logs by hand
// and re-derives conditions c5-c9 from scratch; the only shared code is the
// plain domain structs.

#include <map>
#include <set>
#include <vector>

#include "mevflow/chain.hpp"

namespace oracle {

using mevflow::Address;
using mevflow::BigInt;
using mevflow::Block;
using mevflow::Hash32;
using mevflow::Log;
using mevflow::Transaction;

inline std::map<Address, BigInt> taker_profits(const Transaction& tx) {
    std::map<Address, std::map<Address, BigInt>> net;
    const Hash32 transfer_topic = Hash32::from_hex(
        "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef");
    for (const Log& log : tx.logs) {
        if (log.topics.size() != 3 || !(log.topics[0] == transfer_topic)) continue;
        Address from{}, to{};
        for (int i = 0; i < 20; ++i) {
            from.value[i] = log.topics[1].value[12 + i];
            to.value[i] = log.topics[2].value[12 + i];
        }
        BigInt amount = 0;
        for (std::uint8_t byte : log.data) amount = (amount << 8) | byte;
        net[from][log.address] -= amount;
        net[to][log.address] += amount;
    }
    std::map<Address, BigInt> combined;
    std::set<Address> scope{tx.from};
    if (tx.to) scope.insert(*tx.to);
    for (const Address& a : scope)
        if (net.count(a))
            for (const auto& [token, v] : net.at(a)) combined[token] += v;
    return combined;
}

/// Nearest-following unmatched pairing over literal c5-c9, front/back indices.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> detect(const Block& block) {
    struct Row {
        std::uint32_t index;
        Address to;
        std::map<Address, BigInt> profit;
    };
    std::vector<Row> rows;
    for (const Transaction& tx : block.transactions) {
        if (!tx.to || tx.to->is_zero()) continue;
        rows.push_back(Row{tx.tx_index, *tx.to, taker_profits(tx)});
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<bool> used(rows.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (used[j] || !(rows[j].to == rows[i].to)) continue;
            const auto& pi = rows[i].profit;
            const auto& pj = rows[j].profit;
            if (pi.size() <= 1 || pj.size() <= 1) continue;  // c5
            bool has_negative = false;                       // c6
            for (const auto& [t, v] : pi)
                if (v < 0) has_negative = true;
            if (!has_negative) continue;
            bool any_zero = false;  // c7
            for (const auto& [t, v] : pj)
                if (v == 0) any_zero = true;
            if (any_zero) continue;
            std::set<Address> ki, kj;  // c8: mutual subset
            for (const auto& [t, v] : pi) ki.insert(t);
            for (const auto& [t, v] : pj) kj.insert(t);
            if (ki != kj) continue;
            bool negative_total = false;  // c9
            for (const auto& [t, v] : pi) {
                BigInt total = v;
                if (pj.count(t)) total += pj.at(t);
                if (total < 0) negative_total = true;
            }
            if (negative_total) continue;
            pairs.emplace_back(rows[i].index, rows[j].index);
            used[i] = used[j] = true;
            break;
        }
    }
    return pairs;
}

}  // namespace oracle
