#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mevflow/corpus.hpp"

namespace mevflow {

class RpcError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BlockNotFoundError : public RpcError {
    using RpcError::RpcError;
};

struct RpcRetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds base_delay{250};  // doubles per retry
};

inline const char* kRpcUrlEnvVar = "MEVFLOW_RPC_URL";

/// Minimal JSON-RPC 2.0 client over HTTP. Only the three methods the
/// pipeline needs: block-by-number, receipt-by-hash, code-at-address.
class RpcClient {
  public:
    explicit RpcClient(std::string endpoint, RpcRetryPolicy retry = {})
        : endpoint_(std::move(endpoint)), retry_(retry) {}

    const std::string& endpoint() const { return endpoint_; }

    nlohmann::json call(const std::string& method, nlohmann::json params) {
        nlohmann::json request{
            {"jsonrpc", "2.0"}, {"id", next_id_++}, {"method", method}, {"params", std::move(params)}};
        const std::string body = request.dump();

        std::string last_error;
        for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(retry_.base_delay * (1 << (attempt - 1)));
            httplib::Client client(endpoint_);
            client.set_connection_timeout(10);
            client.set_read_timeout(30);
            auto res = client.Post("/", body, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw RpcError(method + ": HTTP " + std::to_string(res->status));
            nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
            if (reply.is_discarded()) throw RpcError(method + ": malformed JSON-RPC reply");
            if (reply.contains("error") && !reply["error"].is_null())
                throw RpcError(method + ": " + reply["error"].dump());
            return reply.at("result");
        }
        throw RpcError(method + ": retries exhausted (" + last_error + ")");
    }

  private:
    std::string endpoint_;
    RpcRetryPolicy retry_;
    std::uint64_t next_id_ = 1;
};

namespace rpc_detail {

inline std::uint64_t parse_quantity(const std::string& hex) {
    if (hex.size() < 3 || hex[0] != '0' || hex[1] != 'x')
        throw RpcError("bad hex quantity \"" + hex + "\"");
    return std::stoull(hex.substr(2), nullptr, 16);
}

inline std::string quantity_hex(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::optional<Selector> selector_of_input(const std::string& input) {
    if (input.size() < 10) return std::nullopt;  // "0x" + 8 hex digits
    return Selector::from_hex(input.substr(0, 10));
}

}  // namespace rpc_detail

/// Assembles one Block from eth_getBlockByNumber plus a receipt call per
/// transaction. Transient failures retry with bounded exponential backoff.
inline Block fetch_block(RpcClient& client, std::uint64_t number) {
    nlohmann::json raw =
        client.call("eth_getBlockByNumber", {rpc_detail::quantity_hex(number), true});
    if (raw.is_null())
        throw BlockNotFoundError("block " + std::to_string(number) + " not found");

    Block block;
    block.number = rpc_detail::parse_quantity(raw.at("number").get<std::string>());
    block.fee_recipient = Address::from_hex(raw.at("miner").get<std::string>());

    for (const auto& jtx : raw.at("transactions")) {
        Transaction tx;
        tx.hash = Hash32::from_hex(jtx.at("hash").get<std::string>());
        tx.from = Address::from_hex(jtx.at("from").get<std::string>());
        if (jtx.contains("to") && !jtx.at("to").is_null())
            tx.to = Address::from_hex(jtx.at("to").get<std::string>());
        if (jtx.contains("input"))
            tx.input_selector = rpc_detail::selector_of_input(jtx.at("input").get<std::string>());
        tx.block_number = block.number;
        tx.tx_index = static_cast<std::uint32_t>(
            rpc_detail::parse_quantity(jtx.at("transactionIndex").get<std::string>()));

        nlohmann::json receipt = client.call("eth_getTransactionReceipt", {tx.hash.hex()});
        if (receipt.is_null())
            throw RpcError("missing receipt for " + tx.hash.hex());
        for (const auto& jlog : receipt.at("logs")) {
            Log log;
            log.address = Address::from_hex(jlog.at("address").get<std::string>());
            for (const auto& t : jlog.at("topics"))
                log.topics.push_back(Hash32::from_hex(t.get<std::string>()));
            log.data = corpus_json::bytes_from_hex(jlog.at("data").get<std::string>());
            tx.logs.push_back(std::move(log));
        }
        block.transactions.push_back(std::move(tx));
    }
    return block;
}

struct KindResolution {
    AddressKindMap kinds;
    int warnings = 0;  // per-address RPC failures degraded to UNKNOWN
};

/// Code-at-address query: nonempty code means contract account. Per-address
/// failures degrade to UNKNOWN; a batch never aborts.
inline KindResolution resolve_kinds(const std::vector<Address>& addresses, RpcClient& client) {
    KindResolution out;
    for (const Address& a : addresses) {
        if (a.is_zero()) {
            out.kinds.set(a, AddressKind::CA);
            continue;
        }
        try {
            nlohmann::json code = client.call("eth_getCode", {a.hex(), "latest"});
            const std::string hex = code.get<std::string>();
            out.kinds.set(a, hex.size() > 2 ? AddressKind::CA : AddressKind::EOA);
        } catch (const RpcError&) {
            out.kinds.set(a, AddressKind::UNKNOWN);
            ++out.warnings;
        }
    }
    return out;
}

/// Offline resolution from a fixture sidecar; absent addresses are UNKNOWN.
inline KindResolution resolve_kinds(const std::vector<Address>& addresses,
                                    const AddressKindMap& sidecar) {
    KindResolution out;
    for (const Address& a : addresses) out.kinds.set(a, sidecar.kind_of(a));
    return out;
}

}  // namespace mevflow
