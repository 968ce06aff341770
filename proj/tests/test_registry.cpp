#include "mevflow/registry.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace mevflow;

#ifndef MEVFLOW_SOURCE_DIR
#define MEVFLOW_SOURCE_DIR "."
#endif

namespace {

Address addr(std::uint8_t tag) {
    Address a{};
    a.value[19] = tag;
    return a;
}

const Hash32 kSwapTopic =
    Hash32::from_hex("0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822");
const Selector kLeave = Selector::from_hex("0x67dfd4c9");

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST(Registry, BundledSampleLoadsWithUniswapRow) {
    const ExchangeRegistry registry =
        load_registry(std::string(MEVFLOW_SOURCE_DIR) + "/data/registry.sample.json");
    EXPECT_GE(registry.size(), 1u);
    const Address uniswap = Address::from_hex("0xd34d4916440dba56a5719af981e646d69c9cec0d");
    const RegistryEntry* entry = registry.match_event(uniswap, kSwapTopic);
    ASSERT_NE(entry, nullptr);
    EXPECT_EQ(entry->platform, "Uniswap V2");
    EXPECT_EQ(entry->action, "Swap");
    // xSHIB enter/leave rows are selector-based
    const Address xshib = Address::from_hex("0xb4a81261b16b92af0b9f7c4a83f1e885132d81e4");
    EXPECT_NE(registry.match_call(xshib, kLeave), nullptr);
}

TEST(Registry, SingleRowParses) {
    const std::string path = write_temp("reg_one.json", R"({
      "format_version": 1,
      "entries": [{"platform":"Uniswap V2","contract":"0xd34d4916440dba56a5719af981e646d69c9cec0d",
                   "kind":"event","topic0":"0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822",
                   "action":"Swap"}]
    })");
    EXPECT_EQ(load_registry(path).size(), 1u);
    std::remove(path.c_str());
}

TEST(Registry, EmptyFileYieldsEmptyRegistry) {
    const std::string path = write_temp("reg_empty.json",
                                        R"({"format_version":1,"entries":[]})");
    EXPECT_EQ(load_registry(path).size(), 0u);
    std::remove(path.c_str());
}

TEST(Registry, DuplicateKeyRejected) {
    ExchangeRegistry registry;
    RegistryEntry entry;
    entry.platform = "A";
    entry.contract = addr(1);
    entry.kind = MatchKind::EventTopic;
    entry.topic0 = kSwapTopic;
    entry.action = "Swap";
    registry.add(entry);
    entry.platform = "B";  // same (contract, topic0)
    EXPECT_THROW(registry.add(entry), std::invalid_argument);
}

TEST(Registry, MalformedHexRejected) {
    const std::string path = write_temp("reg_bad.json", R"({
      "format_version": 1,
      "entries": [{"platform":"X","contract":"0x1234","kind":"event",
                   "topic0":"0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822",
                   "action":"Swap"}]
    })");
    EXPECT_THROW(load_registry(path), std::invalid_argument);
    std::remove(path.c_str());
}

TEST(Registry, SaveLoadRoundTrip) {
    ExchangeRegistry registry;
    RegistryEntry event_row{"P1", addr(1), MatchKind::EventTopic, kSwapTopic, {}, "Swap"};
    RegistryEntry call_row{"P2", addr(2), MatchKind::FunctionSelector, {}, kLeave, "leave"};
    registry.add(event_row);
    registry.add(call_row);
    const std::string path =
        (std::filesystem::temp_directory_path() / "reg_roundtrip.json").string();
    save_registry(registry, path);
    const ExchangeRegistry loaded = load_registry(path);
    ASSERT_EQ(loaded.size(), 2u);
    EXPECT_NE(loaded.match_event(addr(1), kSwapTopic), nullptr);
    EXPECT_NE(loaded.match_call(addr(2), kLeave), nullptr);
    std::remove(path.c_str());
}

TEST(IdentifyExchanges, EventAndSelectorAndTraceMatches) {
    ExchangeRegistry registry;
    registry.add(RegistryEntry{"DEX", addr(1), MatchKind::EventTopic, kSwapTopic, {}, "Swap"});
    registry.add(
        RegistryEntry{"Stake", addr(2), MatchKind::FunctionSelector, {}, kLeave, "leave"});

    // one registered swap log
    Transaction tx;
    tx.from = addr(0xaa);
    tx.to = addr(0xbb);
    Log swap;
    swap.address = addr(1);
    swap.topics.push_back(kSwapTopic);
    tx.logs.push_back(swap);
    auto actions = identify_exchanges(tx, registry);
    ASSERT_EQ(actions.size(), 1u);
    EXPECT_EQ(actions[0].contract, addr(1));
    EXPECT_EQ(actions[0].action, "Swap");
    ASSERT_TRUE(actions[0].log_index.has_value());
    EXPECT_EQ(*actions[0].log_index, 0u);

    // top-level call matched by selector with zero matching events
    Transaction call;
    call.from = addr(0xaa);
    call.to = addr(2);
    call.input_selector = kLeave;
    actions = identify_exchanges(call, registry);
    ASSERT_EQ(actions.size(), 1u);
    EXPECT_EQ(actions[0].action, "leave");
    EXPECT_EQ(actions[0].call_position, -1);

    // internal trace call
    Transaction traced;
    traced.from = addr(0xaa);
    traced.to = addr(0xcc);
    traced.trace_calls = std::vector<TraceCall>{{addr(2), kLeave}};
    actions = identify_exchanges(traced, registry);
    ASSERT_EQ(actions.size(), 1u);
    EXPECT_EQ(actions[0].call_position, 0);

    // unregistered event matches nothing
    Transaction other;
    other.from = addr(0xaa);
    other.to = addr(0xbb);
    Log unknown;
    unknown.address = addr(9);
    unknown.topics.push_back(kSwapTopic);
    other.logs.push_back(unknown);
    EXPECT_TRUE(identify_exchanges(other, registry).empty());
}
