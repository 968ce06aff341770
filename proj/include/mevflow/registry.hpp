#pragma once

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

enum class MatchKind { EventTopic, FunctionSelector };

/// One (contract, topic0-or-selector) row. Hashes are explicit hex in the
/// file; names alone cannot reproduce them without full argument signatures.
struct RegistryEntry {
    std::string platform;
    Address contract;
    MatchKind kind = MatchKind::EventTopic;
    Hash32 topic0;       // EventTopic rows
    Selector selector;   // FunctionSelector rows
    std::string action;
};

class ExchangeRegistry {
  public:
    void add(RegistryEntry entry) {
        if (entry.kind == MatchKind::EventTopic) {
            if (!by_topic_.try_emplace({entry.contract, entry.topic0}, entries_.size()).second)
                throw std::invalid_argument("duplicate registry key " + entry.contract.hex() +
                                            " / " + entry.topic0.hex());
        } else {
            if (!by_selector_.try_emplace({entry.contract, entry.selector}, entries_.size()).second)
                throw std::invalid_argument("duplicate registry key " + entry.contract.hex() +
                                            " / " + entry.selector.hex());
        }
        entries_.push_back(std::move(entry));
    }

    const std::vector<RegistryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    const RegistryEntry* match_event(const Address& contract, const Hash32& topic0) const {
        auto it = by_topic_.find({contract, topic0});
        return it == by_topic_.end() ? nullptr : &entries_[it->second];
    }

    const RegistryEntry* match_call(const Address& contract, const Selector& selector) const {
        auto it = by_selector_.find({contract, selector});
        return it == by_selector_.end() ? nullptr : &entries_[it->second];
    }

  private:
    std::vector<RegistryEntry> entries_;
    std::map<std::pair<Address, Hash32>, std::size_t> by_topic_;
    std::map<std::pair<Address, Selector>, std::size_t> by_selector_;
};

inline constexpr int kRegistryFormatVersion = 1;

inline ExchangeRegistry parse_registry(const ordered_json& j) {
    if (j.at("format_version").get<int>() != kRegistryFormatVersion)
        throw std::invalid_argument("unsupported registry format_version");
    ExchangeRegistry registry;
    for (const auto& e : j.at("entries")) {
        RegistryEntry entry;
        entry.platform = e.at("platform").get<std::string>();
        entry.contract = Address::from_hex(e.at("contract").get<std::string>());
        const std::string kind = e.at("kind").get<std::string>();
        if (kind == "event") {
            entry.kind = MatchKind::EventTopic;
            entry.topic0 = Hash32::from_hex(e.at("topic0").get<std::string>());
        } else if (kind == "function") {
            entry.kind = MatchKind::FunctionSelector;
            entry.selector = Selector::from_hex(e.at("selector").get<std::string>());
        } else {
            throw std::invalid_argument("registry kind must be event or function");
        }
        entry.action = e.at("action").get<std::string>();
        registry.add(std::move(entry));
    }
    return registry;
}

inline ExchangeRegistry load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open registry " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed registry JSON in " + path);
    return parse_registry(j);
}

inline ordered_json registry_to_json(const ExchangeRegistry& registry) {
    ordered_json j;
    j["format_version"] = kRegistryFormatVersion;
    ordered_json entries = ordered_json::array();
    for (const RegistryEntry& e : registry.entries()) {
        ordered_json row;
        row["platform"] = e.platform;
        row["contract"] = e.contract.hex();
        if (e.kind == MatchKind::EventTopic) {
            row["kind"] = "event";
            row["topic0"] = e.topic0.hex();
        } else {
            row["kind"] = "function";
            row["selector"] = e.selector.hex();
        }
        row["action"] = e.action;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline void save_registry(const ExchangeRegistry& registry, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << registry_to_json(registry).dump(2) << '\n';
}

/// An identified intended token exchange, anchored at the matching log or
/// call so the labeler can reason about venues.
struct ExchangeAction {
    TxRef tx;
    Address contract;
    std::string platform;
    std::string action;
    std::optional<std::uint32_t> log_index;   // event matches
    std::optional<int> call_position;         // -1 top-level, else trace index
};

/// Registry matching: one action per matching log, one for a matching
/// top-level input selector, one per matching trace call when traces exist.
inline std::vector<ExchangeAction> identify_exchanges(const Transaction& tx,
                                                      const ExchangeRegistry& registry) {
    std::vector<ExchangeAction> out;
    const TxRef ref = tx_ref_of(tx);
    for (std::uint32_t i = 0; i < tx.logs.size(); ++i) {
        const Log& log = tx.logs[i];
        if (log.topics.empty()) continue;
        if (const RegistryEntry* e = registry.match_event(log.address, log.topics[0])) {
            ExchangeAction action{ref, e->contract, e->platform, e->action, i, std::nullopt};
            out.push_back(std::move(action));
        }
    }
    if (tx.to && tx.input_selector) {
        if (const RegistryEntry* e = registry.match_call(*tx.to, *tx.input_selector)) {
            ExchangeAction action{ref, e->contract, e->platform, e->action, std::nullopt, -1};
            out.push_back(std::move(action));
        }
    }
    if (tx.trace_calls) {
        for (std::size_t i = 0; i < tx.trace_calls->size(); ++i) {
            const TraceCall& call = (*tx.trace_calls)[i];
            if (const RegistryEntry* e = registry.match_call(call.callee, call.selector)) {
                ExchangeAction action{ref,          e->contract,         e->platform,
                                      e->action,    std::nullopt,        static_cast<int>(i)};
                out.push_back(std::move(action));
            }
        }
    }
    return out;
}

}  // namespace mevflow
