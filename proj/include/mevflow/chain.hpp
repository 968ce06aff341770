#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevflow/address.hpp"
#include "mevflow/bigint.hpp"

namespace mevflow {

/// keccak-256("Transfer(address,address,uint256)"), shared by ERC-20 and
/// ERC-721; the two standards are told apart by indexed-topic count.
inline const Hash32& transfer_event_topic() {
    static const Hash32 topic =
        Hash32::from_hex("0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef");
    return topic;
}

struct Log {
    Address address;              // emitting contract
    std::vector<Hash32> topics;   // 0..4 entries
    std::vector<std::uint8_t> data;
};

struct TraceCall {
    Address callee;
    Selector selector;
};

struct Transaction {
    Hash32 hash;
    Address from;
    std::optional<Address> to;    // absent for contract creation
    std::optional<Selector> input_selector;
    std::uint64_t block_number = 0;
    std::uint32_t tx_index = 0;
    std::vector<Log> logs;        // ordered by log index
    std::optional<std::vector<TraceCall>> trace_calls;
};

struct Block {
    std::uint64_t number = 0;
    Address fee_recipient;        // builder
    std::vector<Transaction> transactions;  // strictly ordered by tx_index
};

struct TokenTransfer {
    Address token;
    Address from;
    Address to;
    TokenAmount amount;           // >= 0
    std::uint32_t log_index = 0;
};

struct NftTransfer {
    Address collection;
    Address from;
    Address to;
    BigInt token_id;
    std::uint32_t log_index = 0;
};

struct DecodedTransfers {
    std::vector<TokenTransfer> erc20;
    std::vector<NftTransfer> erc721;
};

class DecodeError : public std::runtime_error {
  public:
    DecodeError(std::uint32_t log_index, const std::string& what)
        : std::runtime_error("log " + std::to_string(log_index) + ": " + what),
          log_index_(log_index) {}
    std::uint32_t log_index() const { return log_index_; }

  private:
    std::uint32_t log_index_;
};

/// Decodes ERC-20/ERC-721 transfer logs. A log is an ERC-20 transfer iff
/// topic0 is the Transfer hash and it carries exactly 3 topics (amount in a
/// 32-byte data word); ERC-721 iff 4 topics (token id in topic3, empty data).
/// Anything else is ignored. Malformed data on a matching topic0 is an error,
/// never a silent skip.
inline DecodedTransfers decode_transfers(const Transaction& tx) {
    DecodedTransfers out;
    for (std::uint32_t i = 0; i < tx.logs.size(); ++i) {
        const Log& log = tx.logs[i];
        if (log.topics.empty() || !(log.topics[0] == transfer_event_topic())) continue;
        if (log.topics.size() == 3) {
            if (log.data.size() != 32)
                throw DecodeError(i, "ERC-20 Transfer data must be 32 bytes, got " +
                                         std::to_string(log.data.size()));
            TokenTransfer t;
            t.token = log.address;
            t.from = address_from_topic(log.topics[1]);
            t.to = address_from_topic(log.topics[2]);
            t.amount = bigint_from_be(log.data);
            t.log_index = i;
            out.erc20.push_back(std::move(t));
        } else if (log.topics.size() == 4) {
            if (!log.data.empty())
                throw DecodeError(i, "ERC-721 Transfer data must be empty, got " +
                                         std::to_string(log.data.size()) + " bytes");
            NftTransfer t;
            t.collection = log.address;
            t.from = address_from_topic(log.topics[1]);
            t.to = address_from_topic(log.topics[2]);
            t.token_id = bigint_from_be(log.topics[3].value);
            t.log_index = i;
            out.erc721.push_back(std::move(t));
        }
        // 1 or 2 topics under the Transfer hash: not a standard token transfer.
    }
    return out;
}

/// Convenience for building well-formed transfer logs (tests, synthetic data).
inline Log make_erc20_transfer_log(const Address& token, const Address& from, const Address& to,
                                   const TokenAmount& amount) {
    Log log;
    log.address = token;
    log.topics.resize(3);
    log.topics[0] = transfer_event_topic();
    for (int i = 0; i < 20; ++i) {
        log.topics[1].value[12 + i] = from.value[i];
        log.topics[2].value[12 + i] = to.value[i];
    }
    log.data.assign(32, 0);
    BigInt v = amount;
    if (v < 0) throw std::invalid_argument("transfer amount must be >= 0");
    for (int i = 31; i >= 0 && v != 0; --i) {
        log.data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    if (v != 0) throw std::invalid_argument("transfer amount exceeds 256 bits");
    return log;
}

inline Log make_erc721_transfer_log(const Address& collection, const Address& from,
                                    const Address& to, const BigInt& token_id) {
    Log log;
    log.address = collection;
    log.topics.resize(4);
    log.topics[0] = transfer_event_topic();
    for (int i = 0; i < 20; ++i) {
        log.topics[1].value[12 + i] = from.value[i];
        log.topics[2].value[12 + i] = to.value[i];
    }
    BigInt v = token_id;
    if (v < 0) throw std::invalid_argument("token id must be >= 0");
    for (int i = 31; i >= 0 && v != 0; --i) {
        log.topics[3].value[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    if (v != 0) throw std::invalid_argument("token id exceeds 256 bits");
    return log;
}

}  // namespace mevflow
