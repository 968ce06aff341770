#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mevflow/chain.hpp"

namespace mevflow {

using ordered_json = nlohmann::ordered_json;

enum class AddressKind { CA, EOA, UNKNOWN };

inline std::string to_string(AddressKind k) {
    switch (k) {
        case AddressKind::CA: return "CA";
        case AddressKind::EOA: return "EOA";
        default: return "UNKNOWN";
    }
}

inline AddressKind address_kind_from_string(const std::string& s) {
    if (s == "CA") return AddressKind::CA;
    if (s == "EOA") return AddressKind::EOA;
    if (s == "UNKNOWN") return AddressKind::UNKNOWN;
    throw std::invalid_argument("unknown address kind \"" + s + "\"");
}

/// Contract-vs-EOA knowledge. The null address is CA by convention; it is
/// never an EOA actor.
class AddressKindMap {
  public:
    void set(const Address& a, AddressKind k) { kinds_[a] = k; }

    AddressKind kind_of(const Address& a) const {
        if (a.is_zero()) return AddressKind::CA;
        auto it = kinds_.find(a);
        return it == kinds_.end() ? AddressKind::UNKNOWN : it->second;
    }

    const std::map<Address, AddressKind>& entries() const { return kinds_; }
    std::size_t size() const { return kinds_.size(); }

  private:
    std::map<Address, AddressKind> kinds_;
};

enum class CorpusSource { Fixture, Rpc };

struct CorpusHeader {
    int format_version = 1;
    std::uint64_t chain_id = 1;
    CorpusSource source = CorpusSource::Fixture;
};

struct Corpus {
    CorpusHeader header;
    std::vector<Block> blocks;  // ascending by number
    AddressKindMap kinds;
};

class CorpusError : public std::runtime_error {
  public:
    CorpusError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline constexpr int kCorpusFormatVersion = 1;
inline constexpr const char* kCorpusExtension = ".mevcorpus.jsonl";

namespace corpus_json {

inline std::string bytes_hex(const std::vector<std::uint8_t>& data) {
    std::string out = "0x";
    out.reserve(2 + 2 * data.size());
    for (auto b : data) {
        out += detail::kHexDigits[b >> 4];
        out += detail::kHexDigits[b & 0x0f];
    }
    return out;
}

inline std::vector<std::uint8_t> bytes_from_hex(const std::string& text) {
    if (text.size() < 2 || text[0] != '0' || text[1] != 'x' || text.size() % 2 != 0)
        throw std::invalid_argument("expected 0x-prefixed even-length hex");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2 - 1);
    for (std::size_t i = 2; i < text.size(); i += 2) {
        const int hi = detail::hex_nibble(text[i]);
        const int lo = detail::hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex digit in byte string");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

inline ordered_json log_to_json(const Log& log) {
    ordered_json j;
    j["address"] = log.address.hex();
    ordered_json topics = ordered_json::array();
    for (const Hash32& t : log.topics) topics.push_back(t.hex());
    j["topics"] = std::move(topics);
    j["data"] = bytes_hex(log.data);
    return j;
}

inline Log log_from_json(const ordered_json& j) {
    Log log;
    log.address = Address::from_hex(j.at("address").get<std::string>());
    for (const auto& t : j.at("topics")) log.topics.push_back(Hash32::from_hex(t.get<std::string>()));
    if (log.topics.size() > 4) throw std::invalid_argument("log carries more than 4 topics");
    log.data = bytes_from_hex(j.at("data").get<std::string>());
    return log;
}

inline ordered_json tx_to_json(const Transaction& tx) {
    ordered_json j;
    j["hash"] = tx.hash.hex();
    j["from"] = tx.from.hex();
    j["to"] = tx.to ? ordered_json(tx.to->hex()) : ordered_json(nullptr);
    j["input_selector"] =
        tx.input_selector ? ordered_json(tx.input_selector->hex()) : ordered_json(nullptr);
    j["tx_index"] = tx.tx_index;
    ordered_json logs = ordered_json::array();
    for (const Log& log : tx.logs) logs.push_back(log_to_json(log));
    j["logs"] = std::move(logs);
    if (tx.trace_calls) {
        ordered_json calls = ordered_json::array();
        for (const TraceCall& c : *tx.trace_calls)
            calls.push_back(ordered_json::array({c.callee.hex(), c.selector.hex()}));
        j["trace_calls"] = std::move(calls);
    } else {
        j["trace_calls"] = nullptr;
    }
    return j;
}

inline Transaction tx_from_json(const ordered_json& j, std::uint64_t block_number) {
    Transaction tx;
    tx.hash = Hash32::from_hex(j.at("hash").get<std::string>());
    tx.from = Address::from_hex(j.at("from").get<std::string>());
    if (!j.at("to").is_null()) tx.to = Address::from_hex(j.at("to").get<std::string>());
    if (!j.at("input_selector").is_null())
        tx.input_selector = Selector::from_hex(j.at("input_selector").get<std::string>());
    tx.tx_index = j.at("tx_index").get<std::uint32_t>();
    tx.block_number = block_number;
    for (const auto& l : j.at("logs")) tx.logs.push_back(log_from_json(l));
    if (!j.at("trace_calls").is_null()) {
        std::vector<TraceCall> calls;
        for (const auto& c : j.at("trace_calls"))
            calls.push_back(TraceCall{Address::from_hex(c.at(0).get<std::string>()),
                                      Selector::from_hex(c.at(1).get<std::string>())});
        tx.trace_calls = std::move(calls);
    }
    return tx;
}

inline ordered_json block_to_json(const Block& block) {
    ordered_json j;
    j["number"] = block.number;
    j["fee_recipient"] = block.fee_recipient.hex();
    ordered_json txs = ordered_json::array();
    for (const Transaction& tx : block.transactions) txs.push_back(tx_to_json(tx));
    j["transactions"] = std::move(txs);
    return j;
}

inline Block block_from_json(const ordered_json& j) {
    Block block;
    block.number = j.at("number").get<std::uint64_t>();
    block.fee_recipient = Address::from_hex(j.at("fee_recipient").get<std::string>());
    std::optional<std::uint32_t> prev_index;
    for (const auto& t : j.at("transactions")) {
        Transaction tx = tx_from_json(t, block.number);
        if (prev_index && tx.tx_index <= *prev_index)
            throw std::invalid_argument("transactions not strictly ordered by tx_index");
        prev_index = tx.tx_index;
        block.transactions.push_back(std::move(tx));
    }
    return block;
}

}  // namespace corpus_json

/// Line-by-line corpus reader. Header is validated at construction; blocks
/// stream in file order; address-kind lines accumulate as they are passed.
class CorpusReader {
  public:
    explicit CorpusReader(const std::string& path) : in_(path) {
        if (!in_) throw std::runtime_error("cannot open corpus file " + path);
        std::string line;
        if (!std::getline(in_, line)) throw CorpusError(1, "missing corpus header");
        ++line_no_;
        ordered_json j = parse_line(line);
        try {
            header_.format_version = j.at("format_version").get<int>();
            header_.chain_id = j.at("chain_id").get<std::uint64_t>();
            const std::string source = j.at("source").get<std::string>();
            if (source == "fixture") header_.source = CorpusSource::Fixture;
            else if (source == "rpc") header_.source = CorpusSource::Rpc;
            else throw std::invalid_argument("unknown source \"" + source + "\"");
        } catch (const CorpusError&) {
            throw;
        } catch (const std::exception& e) {
            throw CorpusError(line_no_, std::string("bad header: ") + e.what());
        }
        if (header_.format_version != kCorpusFormatVersion)
            throw CorpusError(line_no_, "unsupported format_version " +
                                            std::to_string(header_.format_version));
    }

    const CorpusHeader& header() const { return header_; }

    /// Next block in file order, or nullopt at end of file.
    std::optional<Block> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.empty()) continue;
            ordered_json j = parse_line(line);
            try {
                if (j.contains("block")) {
                    Block block = corpus_json::block_from_json(j.at("block"));
                    if (last_block_ && block.number <= *last_block_)
                        throw std::invalid_argument("block numbers not strictly ascending");
                    last_block_ = block.number;
                    return block;
                }
                if (j.contains("address_kind")) {
                    const auto& k = j.at("address_kind");
                    kinds_.set(Address::from_hex(k.at("address").get<std::string>()),
                               address_kind_from_string(k.at("kind").get<std::string>()));
                    continue;
                }
                throw std::invalid_argument("record is neither block nor address_kind");
            } catch (const std::exception& e) {
                throw CorpusError(line_no_, e.what());
            }
        }
        return std::nullopt;
    }

    /// Complete only once next() has returned nullopt.
    const AddressKindMap& kinds() const { return kinds_; }

  private:
    ordered_json parse_line(const std::string& line) {
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) throw CorpusError(line_no_, "malformed JSON record");
        return j;
    }

    std::ifstream in_;
    std::size_t line_no_ = 0;
    CorpusHeader header_;
    AddressKindMap kinds_;
    std::optional<std::uint64_t> last_block_;
};

inline Corpus load_corpus(const std::string& path) {
    CorpusReader reader(path);
    Corpus corpus;
    corpus.header = reader.header();
    while (auto block = reader.next()) corpus.blocks.push_back(std::move(*block));
    corpus.kinds = reader.kinds();
    return corpus;
}

/// Canonical writer: header line, kind lines sorted by address, blocks
/// ascending. Loading a canonical file and saving it again is byte-identical.
inline void save_corpus(const std::string& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    ordered_json header;
    header["format_version"] = corpus.header.format_version;
    header["chain_id"] = corpus.header.chain_id;
    header["source"] = corpus.header.source == CorpusSource::Fixture ? "fixture" : "rpc";
    out << header.dump() << '\n';
    for (const auto& [address, kind] : corpus.kinds.entries()) {
        ordered_json j;
        j["address_kind"] = ordered_json{{"address", address.hex()}, {"kind", to_string(kind)}};
        out << j.dump() << '\n';
    }
    for (const Block& block : corpus.blocks) {
        ordered_json j;
        j["block"] = corpus_json::block_to_json(block);
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace mevflow
