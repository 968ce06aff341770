#pragma once

#include <map>
#include <set>
#include <vector>

#include "mevflow/chain.hpp"

namespace mevflow {

struct TxRef {
    Hash32 hash;
    std::uint64_t block_number = 0;
    std::uint32_t tx_index = 0;

    auto operator<=>(const TxRef&) const = default;
};

inline TxRef tx_ref_of(const Transaction& tx) {
    return TxRef{tx.hash, tx.block_number, tx.tx_index};
}

struct TransferEdge {
    Address from;
    Address to;
    Address token;
    BigInt amount;
    std::uint32_t log_index = 0;
};

/// Per-transaction directed multigraph of ERC-20 transfers, edges in log order.
struct TransferGraph {
    TxRef tx_ref;
    std::set<Address> nodes;
    std::vector<TransferEdge> edges;
    std::set<Address> tokens;
};

/// address -> token -> exact net amount. Zero entries for touched tokens are
/// retained; Algorithm 1's condition 7 tests equality with zero.
using ProfitMap = std::map<Address, std::map<Address, BigInt>>;

inline TransferGraph build_graph(const TxRef& ref, const std::vector<TokenTransfer>& transfers) {
    TransferGraph g;
    g.tx_ref = ref;
    g.edges.reserve(transfers.size());
    for (const TokenTransfer& t : transfers) {
        g.nodes.insert(t.from);
        g.nodes.insert(t.to);
        g.tokens.insert(t.token);
        g.edges.push_back(TransferEdge{t.from, t.to, t.token, t.amount, t.log_index});
    }
    return g;
}

inline TransferGraph build_graph(const Transaction& tx) {
    return build_graph(tx_ref_of(tx), decode_transfers(tx).erc20);
}

/// net[a][t] = received minus sent of token t at address a.
inline ProfitMap profits(const TransferGraph& graph) {
    ProfitMap net;
    for (const TransferEdge& e : graph.edges) {
        net[e.from][e.token] -= e.amount;
        net[e.to][e.token] += e.amount;
    }
    return net;
}

enum class ProfitScope {
    Combined,       // tx.from + tx.to (the MEV-taker scope of Algorithm 1)
    RecipientOnly,  // strict per-recipient mode for sensitivity analysis
};

/// Element-wise sum of the profit rows for the taker scope. With `to` absent
/// (contract creation) the sender row alone is the scope.
inline std::map<Address, BigInt> taker_profits(const Transaction& tx, const TransferGraph& graph,
                                               ProfitScope scope = ProfitScope::Combined) {
    const ProfitMap net = profits(graph);
    std::set<Address> member_set;
    if (scope == ProfitScope::Combined) member_set.insert(tx.from);
    if (tx.to.has_value()) member_set.insert(*tx.to);
    if (member_set.empty()) member_set.insert(tx.from);

    std::map<Address, BigInt> out;
    for (const Address& a : member_set) {
        auto it = net.find(a);
        if (it == net.end()) continue;
        for (const auto& [token, amount] : it->second) out[token] += amount;
    }
    return out;
}

/// Profit row summed over an arbitrary address scope (A4 merged takers).
inline std::map<Address, BigInt> scope_profits(const ProfitMap& net,
                                               const std::set<Address>& scope) {
    std::map<Address, BigInt> out;
    for (const Address& a : scope) {
        auto it = net.find(a);
        if (it == net.end()) continue;
        for (const auto& [token, amount] : it->second) out[token] += amount;
    }
    return out;
}

}  // namespace mevflow
