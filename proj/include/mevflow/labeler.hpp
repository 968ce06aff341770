#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mevflow/features.hpp"
#include "mevflow/heuristics.hpp"
#include "mevflow/registry.hpp"
#include "mevflow/rng.hpp"

namespace mevflow {

enum class MevCategory { S1, S2, A1, A2, A3, A4, A5 };

inline std::string to_string(MevCategory c) {
    switch (c) {
        case MevCategory::S1: return "S1";
        case MevCategory::S2: return "S2";
        case MevCategory::A1: return "A1";
        case MevCategory::A2: return "A2";
        case MevCategory::A3: return "A3";
        case MevCategory::A4: return "A4";
        default: return "A5";
    }
}

inline MevCategory mev_category_from_string(const std::string& s) {
    if (s == "S1") return MevCategory::S1;
    if (s == "S2") return MevCategory::S2;
    if (s == "A1") return MevCategory::A1;
    if (s == "A2") return MevCategory::A2;
    if (s == "A3") return MevCategory::A3;
    if (s == "A4") return MevCategory::A4;
    if (s == "A5") return MevCategory::A5;
    throw std::invalid_argument("unknown MEV category \"" + s + "\"");
}

struct MevLabel {
    std::vector<TxRef> txs;  // S categories two entries, A categories one
    MevCategory category = MevCategory::A1;
    std::vector<Address> takers;
    std::map<Address, BigInt> profit;   // taker-scope nets, >= 0 with one > 0
    std::vector<Address> contracts;     // exchange contracts involved
};

struct ArbRuleConfig {
    int max_cycle_edges = 12;   // walk length cap
    int max_graph_edges = 64;   // beyond this the cycle search is skipped
};

namespace labeler_detail {

/// Closed-walk search over transfer edges with the taker scope contracted to
/// one logical node. Adjacent pairs that change token must be covered by an
/// exchange action at the junction; A2 mode additionally allows burn/mint
/// discontinuities through the null address.
class CycleSearch {
  public:
    CycleSearch(const std::vector<TransferEdge>& edges, const std::set<Address>& scope,
                const std::set<Address>& covered, bool allow_virtual, const ArbRuleConfig& cfg)
        : edges_(edges), scope_(scope), covered_(covered), allow_virtual_(allow_virtual),
          cfg_(cfg) {
        if (allow_virtual_) {
            for (const TransferEdge& e : edges_) flow_tokens_[{e.from, e.to}].insert(e.token);
        }
    }

    bool found() {
        if (edges_.size() > static_cast<std::size_t>(cfg_.max_graph_edges)) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (!scope_.count(edges_[i].from)) continue;
            if (dfs(i, i, std::uint64_t{1} << i, 1, false)) return true;
        }
        return false;
    }

  private:
    bool in_scope(const Address& a) const { return scope_.count(a) > 0; }

    /// Distinct tokens flowing src -> dst is exactly one (the burn/mint leg
    /// of a one-for-one exchange; multi-asset redemptions belong to A3).
    bool single_token_flow(const Address& src, const Address& dst) const {
        auto it = flow_tokens_.find({src, dst});
        return it != flow_tokens_.end() && it->second.size() == 1;
    }

    /// May the walk step from edge e to edge f? Returns whether the pair is
    /// admissible; `changed` reports a token change across the junction.
    bool pair_ok(const TransferEdge& e, const TransferEdge& f, bool& changed) const {
        changed = !(e.token == f.token);
        const bool adjacent = e.to == f.from || (in_scope(e.to) && in_scope(f.from));
        if (adjacent) {
            if (!changed) return true;
            return covered_.count(e.to) > 0;  // the junction venue must be registered
        }
        if (!allow_virtual_ || !changed || !(f.to == e.from)) return false;
        // burn leg to null, replacement minted by the burned token's contract
        if (e.to.is_zero() && f.from == e.token && covered_.count(f.from) &&
            single_token_flow(f.from, e.from))
            return true;
        // deposit leg into the minted token's contract, mint arrives from null
        if (f.from.is_zero() && f.token == e.to && covered_.count(e.to) &&
            single_token_flow(f.from, e.from))
            return true;
        return false;
    }

    bool dfs(std::size_t first, std::size_t last, std::uint64_t used, int len, bool any_change) {
        if (len >= 2) {
            bool wrap_change = false;
            if (pair_ok(edges_[last], edges_[first], wrap_change) && (any_change || wrap_change))
                return true;
        }
        if (len >= cfg_.max_cycle_edges) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (used & (std::uint64_t{1} << i)) continue;
            bool changed = false;
            if (!pair_ok(edges_[last], edges_[i], changed)) continue;
            if (dfs(first, i, used | (std::uint64_t{1} << i), len + 1, any_change || changed))
                return true;
        }
        return false;
    }

    const std::vector<TransferEdge>& edges_;
    const std::set<Address>& scope_;
    const std::set<Address>& covered_;
    bool allow_virtual_;
    ArbRuleConfig cfg_;
    std::map<std::pair<Address, Address>, std::set<Address>> flow_tokens_;
};

/// Profitability gate shared by A1-A4: at least one strictly positive token
/// net and none negative over the taker scope.
inline bool profit_gate(const std::map<Address, BigInt>& scoped) {
    bool any_positive = false;
    for (const auto& [token, v] : scoped) {
        if (v < 0) return false;
        if (v > 0) any_positive = true;
    }
    return any_positive;
}

/// A3: one outgoing set-token leg (to null or the action contract) paired
/// with two or more distinct incoming tokens from that action's contract or
/// from null.
inline bool set_redemption(const TransferGraph& graph, const std::set<Address>& scope,
                           const std::vector<ExchangeAction>& actions) {
    std::set<Address> venues;
    for (const ExchangeAction& a : actions) venues.insert(a.contract);
    for (const Address& venue : venues) {
        for (const TransferEdge& out : graph.edges) {
            if (!scope.count(out.from)) continue;
            if (!(out.to.is_zero() || out.to == venue)) continue;
            std::set<Address> incoming;
            for (const TransferEdge& in : graph.edges) {
                if (!scope.count(in.to)) continue;
                if (!(in.from == venue || in.from.is_zero())) continue;
                if (in.token == out.token) continue;
                incoming.insert(in.token);
            }
            if (incoming.size() >= 2) return true;
        }
    }
    return false;
}

inline std::optional<MevCategory> match_scope(const TransferGraph& graph, const ProfitMap& net,
                                              const std::set<Address>& scope,
                                              const std::set<Address>& covered,
                                              const std::vector<ExchangeAction>& actions,
                                              const ArbRuleConfig& cfg) {
    if (!profit_gate(scope_profits(net, scope))) return std::nullopt;
    if (CycleSearch(graph.edges, scope, covered, /*allow_virtual=*/false, cfg).found())
        return MevCategory::A1;
    if (CycleSearch(graph.edges, scope, covered, /*allow_virtual=*/true, cfg).found())
        return MevCategory::A2;
    if (set_redemption(graph, scope, actions)) return MevCategory::A3;
    return std::nullopt;
}

}  // namespace labeler_detail

/// Taxonomy rules A1-A4, first match wins in that order. A4 merges one
/// secondary address (positive net in some token) into the taker scope and
/// re-runs A1-A3.
inline std::optional<MevLabel> classify_arbitrage(const Transaction& tx,
                                                  const TransferGraph& graph,
                                                  const std::vector<ExchangeAction>& actions,
                                                  const ArbRuleConfig& cfg = {}) {
    if (graph.edges.empty()) return std::nullopt;
    const ProfitMap net = profits(graph);

    std::set<Address> covered;
    for (const ExchangeAction& a : actions) covered.insert(a.contract);

    std::set<Address> scope{tx.from};
    if (tx.to) scope.insert(*tx.to);

    auto finish = [&](MevCategory category, const std::set<Address>& members) {
        MevLabel label;
        label.txs = {tx_ref_of(tx)};
        label.category = category;
        label.takers.assign(members.begin(), members.end());
        label.profit = scope_profits(net, members);
        std::set<Address> contracts(covered.begin(), covered.end());
        label.contracts.assign(contracts.begin(), contracts.end());
        return label;
    };

    if (auto cat = labeler_detail::match_scope(graph, net, scope, covered, actions, cfg))
        return finish(*cat, scope);

    // A4: one secondary address whose sent amount of some token is smaller
    // than its received amount, i.e. a strictly positive net entry.
    for (const Address& candidate : graph.nodes) {
        if (scope.count(candidate) || candidate.is_zero()) continue;
        auto it = net.find(candidate);
        if (it == net.end()) continue;
        bool positive = false;
        for (const auto& [token, v] : it->second)
            if (v > 0) { positive = true; break; }
        if (!positive) continue;
        std::set<Address> merged = scope;
        merged.insert(candidate);
        if (labeler_detail::match_scope(graph, net, merged, covered, actions, cfg))
            return finish(MevCategory::A4, merged);
    }
    return std::nullopt;
}

/// Registry gate over Algorithm 1 pairs: heuristic findings become S1 when
/// every action in both legs sits on one pool contract, S2 when the legs span
/// two or more. Pairs without actions stay unlabeled.
inline std::vector<MevLabel> classify_sandwiches(const Block& block,
                                                 const ExchangeRegistry& registry,
                                                 const SandwichConfig& cfg = {}) {
    std::vector<MevLabel> out;
    std::map<std::uint32_t, const Transaction*> by_index;
    for (const Transaction& tx : block.transactions) by_index[tx.tx_index] = &tx;

    for (const SandwichPair& pair : detect_sandwiches(block, cfg)) {
        const Transaction* front = by_index.at(pair.front.tx_index);
        const Transaction* back = by_index.at(pair.back.tx_index);
        const auto front_actions = identify_exchanges(*front, registry);
        const auto back_actions = identify_exchanges(*back, registry);
        if (front_actions.empty() || back_actions.empty()) continue;

        std::set<Address> contracts;
        for (const ExchangeAction& a : front_actions) contracts.insert(a.contract);
        for (const ExchangeAction& a : back_actions) contracts.insert(a.contract);

        MevLabel label;
        label.txs = {pair.front, pair.back};
        label.category = contracts.size() == 1 ? MevCategory::S1 : MevCategory::S2;
        std::set<Address> takers{front->from, back->from, pair.shared_recipient};
        label.takers.assign(takers.begin(), takers.end());
        label.profit = pair.per_token_total;
        label.contracts.assign(contracts.begin(), contracts.end());
        out.push_back(std::move(label));
    }
    return out;
}

/// A5 via the NFT heuristic, shaped as a label for reports and ground truth.
inline std::optional<MevLabel> label_nft_arbitrage(const Transaction& tx) {
    auto report = detect_nft_arbitrage(tx);
    if (!report) return std::nullopt;
    MevLabel label;
    label.txs = {report->tx};
    label.category = MevCategory::A5;
    label.takers = {report->taker};
    label.profit[report->pay_token] = report->received - report->paid;
    return label;
}

// ---- label serialization (one JSON object per line)

inline ordered_json label_to_json(const MevLabel& label) {
    ordered_json j;
    j["category"] = to_string(label.category);
    ordered_json txs = ordered_json::array();
    for (const TxRef& ref : label.txs) {
        ordered_json t;
        t["hash"] = ref.hash.hex();
        t["block"] = ref.block_number;
        t["tx_index"] = ref.tx_index;
        txs.push_back(std::move(t));
    }
    j["txs"] = std::move(txs);
    ordered_json takers = ordered_json::array();
    for (const Address& a : label.takers) takers.push_back(a.hex());
    j["takers"] = std::move(takers);
    ordered_json profit = ordered_json::object();
    for (const auto& [token, v] : label.profit) profit[token.hex()] = to_decimal(v);
    j["profit"] = std::move(profit);
    ordered_json contracts = ordered_json::array();
    for (const Address& a : label.contracts) contracts.push_back(a.hex());
    j["contracts"] = std::move(contracts);
    return j;
}

inline MevLabel label_from_json(const ordered_json& j) {
    MevLabel label;
    label.category = mev_category_from_string(j.at("category").get<std::string>());
    for (const auto& t : j.at("txs")) {
        TxRef ref;
        ref.hash = Hash32::from_hex(t.at("hash").get<std::string>());
        ref.block_number = t.at("block").get<std::uint64_t>();
        ref.tx_index = t.at("tx_index").get<std::uint32_t>();
        label.txs.push_back(ref);
    }
    for (const auto& a : j.at("takers")) label.takers.push_back(Address::from_hex(a.get<std::string>()));
    for (const auto& [key, value] : j.at("profit").items())
        label.profit[Address::from_hex(key)] = bigint_from_decimal(value.get<std::string>());
    for (const auto& a : j.at("contracts"))
        label.contracts.push_back(Address::from_hex(a.get<std::string>()));
    return label;
}

inline void save_labels(const std::string& path, const std::vector<MevLabel>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const MevLabel& label : labels) out << label_to_json(label).dump() << '\n';
}

inline std::vector<MevLabel> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labels file " + path);
    std::vector<MevLabel> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) throw std::runtime_error("malformed label line in " + path);
        out.push_back(label_from_json(j));
    }
    return out;
}

/// Full per-block labeling: sandwich pairs plus per-transaction A1-A4 and A5.
inline std::vector<MevLabel> label_block(const Block& block, const ExchangeRegistry& registry,
                                         const SandwichConfig& sandwich_cfg = {},
                                         const ArbRuleConfig& arb_cfg = {}) {
    std::vector<MevLabel> out = classify_sandwiches(block, registry, sandwich_cfg);
    for (const Transaction& tx : block.transactions) {
        const TransferGraph graph = build_graph(tx);
        const auto actions = identify_exchanges(tx, registry);
        if (auto label = classify_arbitrage(tx, graph, actions, arb_cfg))
            out.push_back(std::move(*label));
        if (auto label = label_nft_arbitrage(tx)) out.push_back(std::move(*label));
    }
    return out;
}

// ---- dataset construction (training protocol of the evaluation section)

struct DatasetConfig {
    std::uint64_t seed = 0;
    int min_transfers = 2;  // train-side candidate filter
    std::uint64_t train_begin = 0, train_end = 0;  // inclusive block ranges
    std::uint64_t test_begin = 0, test_end = 0;
    ScaleScheme scheme = ScaleScheme::Log1pCounts;
};

struct LabeledDataset {
    std::vector<FeatureGraph> train;  // exactly class-balanced
    std::vector<FeatureGraph> test;   // natural imbalance preserved
    DatasetConfig provenance;
};

class DatasetError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Balanced train split (positives = A1-A4 labels; negatives seeded uniform
/// sample of non-arbitrage txs with >= min_transfers transfers) plus an
/// untouched test split of every tx with >= 1 transfer.
inline LabeledDataset build_dataset(const std::vector<Block>& blocks,
                                    const ExchangeRegistry& registry, const AddressKindMap& kinds,
                                    const DatasetConfig& cfg, const ArbRuleConfig& arb_cfg = {}) {
    if (cfg.train_begin > cfg.train_end || cfg.test_begin > cfg.test_end)
        throw DatasetError("empty block range");
    const bool overlap = cfg.train_begin <= cfg.test_end && cfg.test_begin <= cfg.train_end;
    if (overlap) throw DatasetError("train and test block ranges overlap");

    LabeledDataset ds;
    ds.provenance = cfg;
    std::vector<FeatureGraph> negatives;

    for (const Block& block : blocks) {
        const bool in_train = block.number >= cfg.train_begin && block.number <= cfg.train_end;
        const bool in_test = block.number >= cfg.test_begin && block.number <= cfg.test_end;
        if (!in_train && !in_test) continue;
        for (const Transaction& tx : block.transactions) {
            const TransferGraph graph = build_graph(tx);
            if (graph.edges.empty()) continue;
            const auto actions = identify_exchanges(tx, registry);
            const bool positive = classify_arbitrage(tx, graph, actions, arb_cfg).has_value();
            if (in_train && !positive &&
                graph.edges.size() < static_cast<std::size_t>(cfg.min_transfers))
                continue;
            FeatureGraph fg =
                scale_features(extract_features(graph, make_context(block, tx, kinds)), cfg.scheme);
            fg.label = positive ? 1 : 0;
            if (in_test) {
                ds.test.push_back(std::move(fg));
            } else if (positive) {
                ds.train.push_back(std::move(fg));
            } else {
                negatives.push_back(std::move(fg));
            }
        }
    }

    const std::size_t num_positive = ds.train.size();
    if (num_positive == 0) throw DatasetError("no arbitrage positives in the train range");
    if (negatives.size() < num_positive)
        throw DatasetError("not enough non-arbitrage candidates to balance the train split");

    // seeded uniform sample without replacement, sized to the positives
    DetRng rng(cfg.seed ^ 0x646174617365740aULL);
    for (std::size_t i = 0; i < num_positive; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(negatives.size() - i));
        std::swap(negatives[i], negatives[j]);
        ds.train.push_back(std::move(negatives[i]));
    }
    return ds;
}

}  // namespace mevflow
