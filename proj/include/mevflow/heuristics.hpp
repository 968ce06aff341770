#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mevflow/flowgraph.hpp"

namespace mevflow {

struct SandwichConfig {
    /// Demand at least one transaction between front and back (j > i+1).
    bool require_victim = false;
    /// Literal Algorithm 1 line 6: reject unless every front-run entry is
    /// strictly negative. Default keeps the non-degenerate reading: reject
    /// only when no strictly negative entry exists.
    bool c6_all_entries_negative = false;
    /// Literal Algorithm 1 line 7: any zero entry in the back-run rejects.
    /// The alternative reading rejects only when all entries are zero.
    bool c7_reject_any_zero = true;
    ProfitScope scope = ProfitScope::Combined;
};

struct SandwichPair {
    TxRef front;
    TxRef back;
    std::map<Address, BigInt> per_token_total;  // >= 0 per token by condition 9
    Address shared_recipient;
};

namespace detail {

struct SandwichCandidate {
    TxRef ref;
    Address recipient;
    std::map<Address, BigInt> profit;
};

inline bool sandwich_conditions_hold(const std::map<Address, BigInt>& front,
                                     const std::map<Address, BigInt>& back,
                                     const SandwichConfig& cfg) {
    // c5: more than one traded token on each side
    if (front.size() <= 1 || back.size() <= 1) return false;
    // c6: the front-run realizes a loss
    if (cfg.c6_all_entries_negative) {
        for (const auto& [token, v] : front)
            if (v >= 0) return false;
    } else {
        bool any_negative = false;
        for (const auto& [token, v] : front)
            if (v < 0) { any_negative = true; break; }
        if (!any_negative) return false;
    }
    // c7: back-run entries strictly nonzero
    if (cfg.c7_reject_any_zero) {
        for (const auto& [token, v] : back)
            if (v == 0) return false;
    } else {
        bool all_zero = true;
        for (const auto& [token, v] : back)
            if (v != 0) { all_zero = false; break; }
        if (all_zero) return false;
    }
    // c8: identical token key sets
    if (front.size() != back.size()) return false;
    for (auto fit = front.begin(), bit = back.begin(); fit != front.end(); ++fit, ++bit)
        if (!(fit->first == bit->first)) return false;
    // c9: combined totals non-negative per token
    for (const auto& [token, v] : front) {
        BigInt total = v;
        auto it = back.find(token);
        if (it != back.end()) total += it->second;
        if (total < 0) return false;
    }
    return true;
}

}  // namespace detail

/// Algorithm 1 over one block: pairs of same-recipient transactions whose
/// taker profits pass conditions c5-c9. Scans ascending; each unmatched front
/// takes the nearest following unmatched back; a transaction joins at most
/// one pair.
inline std::vector<SandwichPair> detect_sandwiches(const Block& block,
                                                   const SandwichConfig& cfg = {}) {
    std::vector<detail::SandwichCandidate> txs;
    txs.reserve(block.transactions.size());
    for (const Transaction& tx : block.transactions) {
        if (!tx.to.has_value() || tx.to->is_zero()) continue;  // Alg. 1 dereferences tx.to
        detail::SandwichCandidate c;
        c.ref = tx_ref_of(tx);
        c.recipient = *tx.to;
        c.profit = taker_profits(tx, build_graph(tx), cfg.scope);
        txs.push_back(std::move(c));
    }

    std::vector<SandwichPair> out;
    std::vector<bool> matched(txs.size(), false);
    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (matched[i]) continue;
        for (std::size_t j = i + 1; j < txs.size(); ++j) {
            if (matched[j]) continue;
            if (!(txs[j].recipient == txs[i].recipient)) continue;
            if (cfg.require_victim && txs[j].ref.tx_index <= txs[i].ref.tx_index + 1) continue;
            if (!detail::sandwich_conditions_hold(txs[i].profit, txs[j].profit, cfg)) continue;
            SandwichPair pair;
            pair.front = txs[i].ref;
            pair.back = txs[j].ref;
            pair.shared_recipient = txs[i].recipient;
            for (const auto& [token, v] : txs[i].profit) pair.per_token_total[token] += v;
            for (const auto& [token, v] : txs[j].profit) pair.per_token_total[token] += v;
            out.push_back(std::move(pair));
            matched[i] = matched[j] = true;
            break;
        }
    }
    return out;
}

struct NftArbReport {
    TxRef tx;
    Address collection;
    BigInt token_id;
    Address seller;
    Address taker;
    Address buyer;
    Address pay_token;
    TokenAmount paid;      // taker -> seller
    TokenAmount received;  // buyer -> taker, strictly greater than paid
};

/// Appendix Algorithm 2: a third party moves an NFT seller -> taker -> buyer
/// inside one transaction and pockets the difference between the two ERC-20
/// payment legs in the same token. Native-ETH-paid trades are invisible here.
inline std::optional<NftArbReport> detect_nft_arbitrage(const Transaction& tx) {
    const DecodedTransfers decoded = decode_transfers(tx);
    if (decoded.erc721.empty()) return std::nullopt;

    // group by (collection, token id) in order of first appearance
    std::vector<std::pair<Address, BigInt>> keys;
    std::map<std::pair<Address, BigInt>, std::vector<const NftTransfer*>> groups;
    for (const NftTransfer& t : decoded.erc721) {
        auto key = std::make_pair(t.collection, t.token_id);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(&t);
    }

    for (const auto& key : keys) {
        const auto& transfers = groups[key];
        if (transfers.size() != 2) continue;
        const NftTransfer& t0 = *transfers[0];
        const NftTransfer& t1 = *transfers[1];

        Address seller, taker, buyer;
        if (t0.to == t1.from) {
            seller = t0.from;
            taker = t0.to;
            buyer = t1.to;
        } else if (t0.from == t1.to) {
            seller = t1.from;
            taker = t1.to;
            buyer = t0.to;
        } else {
            continue;
        }
        // self-trade: the sender is a principal, not a third-party taker
        if (tx.from == seller || tx.from == buyer) return std::nullopt;

        std::optional<std::pair<TokenAmount, Address>> paid;      // taker -> seller
        std::optional<std::pair<TokenAmount, Address>> received;  // buyer -> taker
        for (const TokenTransfer& t : decoded.erc20) {
            if (t.from == taker && t.to == seller) paid = {t.amount, t.token};
            if (t.from == buyer && t.to == taker) received = {t.amount, t.token};
        }
        if (!paid || !received) continue;
        if (!(paid->second == received->second)) continue;
        if (!(paid->first < received->first)) continue;

        NftArbReport report;
        report.tx = tx_ref_of(tx);
        report.collection = key.first;
        report.token_id = key.second;
        report.seller = seller;
        report.taker = taker;
        report.buyer = buyer;
        report.pay_token = paid->second;
        report.paid = paid->first;
        report.received = received->first;
        return report;
    }
    return std::nullopt;
}

}  // namespace mevflow
