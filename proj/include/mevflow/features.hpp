#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mevflow/corpus.hpp"
#include "mevflow/flowgraph.hpp"

namespace mevflow {

inline constexpr int kFeatureCount = 14;

// Column indices of the 14 node features (0-based).
inline constexpr int kF1TokensNegative = 0;   // # tokens with net < 0
inline constexpr int kF2TokensPositive = 1;   // # tokens with net > 0
inline constexpr int kF3TokensZero = 2;       // # tokens with net = 0
inline constexpr int kF4TokensSent = 3;       // # distinct tokens sent
inline constexpr int kF5TokensReceived = 4;   // # distinct tokens received
inline constexpr int kF6TokensInTx = 5;       // # distinct tokens in the tx
inline constexpr int kF7IsNull = 6;
inline constexpr int kF8IsBuilder = 7;
inline constexpr int kF9IsContract = 8;       // CA 1, EOA 0, UNKNOWN 0.5
inline constexpr int kF10IsSender = 9;
inline constexpr int kF11IsRecipient = 10;
inline constexpr int kF12TransfersOut = 11;
inline constexpr int kF13TransfersIn = 12;
inline constexpr int kF14TransfersInTx = 13;

enum class FeatureGroup { Profits, Tokens, Addresses, Transfers };

inline const std::vector<int>& feature_group_columns(FeatureGroup g) {
    static const std::vector<int> profits{kF1TokensNegative, kF2TokensPositive, kF3TokensZero};
    static const std::vector<int> tokens{kF4TokensSent, kF5TokensReceived, kF6TokensInTx};
    static const std::vector<int> addresses{kF7IsNull, kF8IsBuilder, kF9IsContract, kF10IsSender,
                                            kF11IsRecipient};
    static const std::vector<int> transfers{kF12TransfersOut, kF13TransfersIn, kF14TransfersInTx};
    switch (g) {
        case FeatureGroup::Profits: return profits;
        case FeatureGroup::Tokens: return tokens;
        case FeatureGroup::Addresses: return addresses;
        default: return transfers;
    }
}

inline std::string to_string(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::Profits: return "profits";
        case FeatureGroup::Tokens: return "tokens";
        case FeatureGroup::Addresses: return "addresses";
        default: return "transfers";
    }
}

inline FeatureGroup feature_group_from_string(const std::string& s) {
    if (s == "profits") return FeatureGroup::Profits;
    if (s == "tokens") return FeatureGroup::Tokens;
    if (s == "addresses") return FeatureGroup::Addresses;
    if (s == "transfers") return FeatureGroup::Transfers;
    throw std::invalid_argument("unknown feature group \"" + s + "\"");
}

/// GNN input: deduplicated directed edges (no self-edges; layers add the self
/// path explicitly) and a |nodes| x 14 feature matrix.
struct FeatureGraph {
    TxRef tx_ref;
    std::vector<Address> nodes;                    // first-appearance order
    std::vector<std::pair<int, int>> edges;        // (src,dst), sorted, dedup
    std::vector<double> x;                         // row-major |nodes| x 14
    std::optional<int> label;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    double& at(int row, int col) { return x[static_cast<std::size_t>(row) * kFeatureCount + col]; }
    double at(int row, int col) const {
        return x[static_cast<std::size_t>(row) * kFeatureCount + col];
    }
};

struct FeatureContext {
    Address builder;
    Address tx_from;
    std::optional<Address> tx_to;
    const AddressKindMap* kinds = nullptr;
};

inline FeatureContext make_context(const Block& block, const Transaction& tx,
                                   const AddressKindMap& kinds) {
    return FeatureContext{block.fee_recipient, tx.from, tx.to, &kinds};
}

/// Table 3 features, raw counts (scaling is a separate step). ERC-721
/// transfers never enter the feature graph.
inline FeatureGraph extract_features(const TransferGraph& graph, const FeatureContext& ctx) {
    FeatureGraph fg;
    fg.tx_ref = graph.tx_ref;

    std::map<Address, int> index;
    for (const TransferEdge& e : graph.edges) {
        if (index.try_emplace(e.from, static_cast<int>(fg.nodes.size())).second)
            fg.nodes.push_back(e.from);
        if (index.try_emplace(e.to, static_cast<int>(fg.nodes.size())).second)
            fg.nodes.push_back(e.to);
    }

    std::set<std::pair<int, int>> edge_set;
    for (const TransferEdge& e : graph.edges) {
        const int s = index[e.from];
        const int d = index[e.to];
        if (s != d) edge_set.insert({s, d});
    }
    fg.edges.assign(edge_set.begin(), edge_set.end());

    const int n = fg.num_nodes();
    fg.x.assign(static_cast<std::size_t>(n) * kFeatureCount, 0.0);
    if (n == 0) return fg;

    const ProfitMap net = profits(graph);
    std::vector<std::set<Address>> sent_tokens(n), recv_tokens(n);
    std::vector<int> out_count(n, 0), in_count(n, 0);
    for (const TransferEdge& e : graph.edges) {
        const int s = index[e.from];
        const int d = index[e.to];
        sent_tokens[s].insert(e.token);
        recv_tokens[d].insert(e.token);
        ++out_count[s];
        ++in_count[d];
    }

    const double tokens_in_tx = static_cast<double>(graph.tokens.size());
    const double transfers_in_tx = static_cast<double>(graph.edges.size());

    for (int i = 0; i < n; ++i) {
        const Address& a = fg.nodes[i];
        int neg = 0, pos = 0, zero = 0;
        if (auto it = net.find(a); it != net.end()) {
            for (const auto& [token, v] : it->second) {
                if (v < 0) ++neg;
                else if (v > 0) ++pos;
                else ++zero;
            }
        }
        fg.at(i, kF1TokensNegative) = neg;
        fg.at(i, kF2TokensPositive) = pos;
        fg.at(i, kF3TokensZero) = zero;
        fg.at(i, kF4TokensSent) = static_cast<double>(sent_tokens[i].size());
        fg.at(i, kF5TokensReceived) = static_cast<double>(recv_tokens[i].size());
        fg.at(i, kF6TokensInTx) = tokens_in_tx;
        fg.at(i, kF7IsNull) = a.is_zero() ? 1.0 : 0.0;
        fg.at(i, kF8IsBuilder) = a == ctx.builder ? 1.0 : 0.0;
        switch (ctx.kinds ? ctx.kinds->kind_of(a) : AddressKind::UNKNOWN) {
            case AddressKind::CA: fg.at(i, kF9IsContract) = 1.0; break;
            case AddressKind::EOA: fg.at(i, kF9IsContract) = 0.0; break;
            default: fg.at(i, kF9IsContract) = 0.5; break;
        }
        fg.at(i, kF10IsSender) = a == ctx.tx_from ? 1.0 : 0.0;
        fg.at(i, kF11IsRecipient) = (ctx.tx_to && a == *ctx.tx_to) ? 1.0 : 0.0;
        fg.at(i, kF12TransfersOut) = out_count[i];
        fg.at(i, kF13TransfersIn) = in_count[i];
        fg.at(i, kF14TransfersInTx) = transfers_in_tx;
    }
    return fg;
}

enum class ScaleScheme { None, Log1pCounts };

inline ScaleScheme scale_scheme_from_string(const std::string& s) {
    if (s == "none") return ScaleScheme::None;
    if (s == "log1p-counts") return ScaleScheme::Log1pCounts;
    throw std::invalid_argument("unknown scale scheme \"" + s + "\"");
}

inline std::string to_string(ScaleScheme s) {
    return s == ScaleScheme::None ? "none" : "log1p-counts";
}

/// log1p-counts maps x -> ln(1+x) on the count columns (F1-F6, F12-F14);
/// indicator columns are untouched.
inline FeatureGraph scale_features(FeatureGraph fg, ScaleScheme scheme) {
    if (scheme == ScaleScheme::None) return fg;
    static const int count_cols[] = {kF1TokensNegative, kF2TokensPositive, kF3TokensZero,
                                     kF4TokensSent,     kF5TokensReceived, kF6TokensInTx,
                                     kF12TransfersOut,  kF13TransfersIn,   kF14TransfersInTx};
    for (int i = 0; i < fg.num_nodes(); ++i)
        for (int c : count_cols) fg.at(i, c) = std::log1p(fg.at(i, c));
    return fg;
}

/// Zeroes the group's columns; dimensionality stays 14 so checkpoints remain
/// shape-compatible. Idempotent.
inline FeatureGraph mask_feature_group(FeatureGraph fg, FeatureGroup group) {
    for (int i = 0; i < fg.num_nodes(); ++i)
        for (int c : feature_group_columns(group)) fg.at(i, c) = 0.0;
    return fg;
}

/// Reorders nodes by perm (new_index = perm[old_index]), rows and edges along.
inline FeatureGraph permute_feature_graph(const FeatureGraph& fg, const std::vector<int>& perm) {
    FeatureGraph out;
    out.tx_ref = fg.tx_ref;
    out.label = fg.label;
    const int n = fg.num_nodes();
    out.nodes.resize(n);
    out.x.assign(fg.x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        out.nodes[perm[i]] = fg.nodes[i];
        for (int c = 0; c < kFeatureCount; ++c) out.at(perm[i], c) = fg.at(i, c);
    }
    std::set<std::pair<int, int>> edges;
    for (const auto& [s, d] : fg.edges) edges.insert({perm[s], perm[d]});
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

// ---- dataset serialization: one {"tx","nodes","edges","x","y"} object per line

inline ordered_json feature_graph_to_json(const FeatureGraph& fg) {
    ordered_json j;
    j["tx"] = fg.tx_ref.hash.hex();
    j["nodes"] = fg.num_nodes();
    ordered_json edges = ordered_json::array();
    for (const auto& [s, d] : fg.edges) edges.push_back(ordered_json::array({s, d}));
    j["edges"] = std::move(edges);
    ordered_json x = ordered_json::array();
    for (int i = 0; i < fg.num_nodes(); ++i) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < kFeatureCount; ++c) row.push_back(fg.at(i, c));
        x.push_back(std::move(row));
    }
    j["x"] = std::move(x);
    if (fg.label) j["y"] = *fg.label;
    return j;
}

inline FeatureGraph feature_graph_from_json(const ordered_json& j) {
    FeatureGraph fg;
    fg.tx_ref.hash = Hash32::from_hex(j.at("tx").get<std::string>());
    const int n = j.at("nodes").get<int>();
    fg.nodes.resize(n);  // addresses are not round-tripped; the GNN needs none
    for (const auto& e : j.at("edges")) {
        const int s = e.at(0).get<int>();
        const int d = e.at(1).get<int>();
        if (s < 0 || s >= n || d < 0 || d >= n)
            throw std::invalid_argument("edge endpoint out of range");
        fg.edges.emplace_back(s, d);
    }
    fg.x.assign(static_cast<std::size_t>(n) * kFeatureCount, 0.0);
    const auto& x = j.at("x");
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("feature row count mismatch");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(x.at(i).size()) != kFeatureCount)
            throw std::invalid_argument("feature column count must be 14");
        for (int c = 0; c < kFeatureCount; ++c) fg.at(i, c) = x.at(i).at(c).get<double>();
    }
    if (j.contains("y")) fg.label = j.at("y").get<int>();
    return fg;
}

inline void save_feature_graphs(const std::string& path, const std::vector<FeatureGraph>& graphs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const FeatureGraph& fg : graphs) out << feature_graph_to_json(fg).dump() << '\n';
}

inline std::vector<FeatureGraph> load_feature_graphs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file " + path);
    std::vector<FeatureGraph> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("dataset line " + std::to_string(line_no) + ": malformed JSON");
        out.push_back(feature_graph_from_json(j));
    }
    return out;
}

}  // namespace mevflow
