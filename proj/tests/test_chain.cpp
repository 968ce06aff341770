#include "mevflow/chain.hpp"

#include <gtest/gtest.h>

using namespace mevflow;

namespace {

Address addr(std::uint8_t tag) {
    Address a{};
    a.value[0] = tag;
    a.value[19] = tag;
    return a;
}

}  // namespace

TEST(Address, NormalizeLowercasesAndRoundTrips) {
    // mixed-case pool address, canonical form is lowercase and byte-identical
    const std::string mixed = "0xD34D4916440DBa56A5719af981e646d69C9Cec0d";
    const Address a = normalize_address(mixed);
    EXPECT_EQ(a.hex(), "0xd34d4916440dba56a5719af981e646d69c9cec0d");
    EXPECT_EQ(normalize_address(a.hex()), a);
    EXPECT_EQ(a.hex().size(), 42u);
}

TEST(Address, NullAddressIsAllZero) {
    const Address a = normalize_address("0x0000000000000000000000000000000000000000");
    EXPECT_TRUE(a.is_zero());
    EXPECT_EQ(a, null_address());
}

TEST(Address, MalformedInputsThrow) {
    EXPECT_THROW(normalize_address("0x123"), std::invalid_argument);
    EXPECT_THROW(normalize_address("d34d4916440dba56a5719af981e646d69c9cec0d"),
                 std::invalid_argument);
    EXPECT_THROW(normalize_address("0xd34d4916440dba56a5719af981e646d69c9cecZZ"),
                 std::invalid_argument);
}

TEST(Decode, TransferTopicConstant) {
    // keccak-256("Transfer(address,address,uint256)"), fixed by the standard
    EXPECT_EQ(transfer_event_topic().hex(),
              "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef");
}

TEST(Decode, Erc20TransferFromThreeTopics) {
    Transaction tx;
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x01), addr(0x02), 5));
    const DecodedTransfers out = decode_transfers(tx);
    ASSERT_EQ(out.erc20.size(), 1u);
    EXPECT_TRUE(out.erc721.empty());
    EXPECT_EQ(out.erc20[0].token, addr(0x10));
    EXPECT_EQ(out.erc20[0].from, addr(0x01));
    EXPECT_EQ(out.erc20[0].to, addr(0x02));
    EXPECT_EQ(out.erc20[0].amount, 5);
    EXPECT_EQ(out.erc20[0].log_index, 0u);
}

TEST(Decode, Erc721TransferFromFourTopics) {
    Transaction tx;
    tx.logs.push_back(make_erc721_transfer_log(addr(0x20), addr(0x01), addr(0x02), 9795));
    const DecodedTransfers out = decode_transfers(tx);
    ASSERT_EQ(out.erc721.size(), 1u);
    EXPECT_TRUE(out.erc20.empty());
    EXPECT_EQ(out.erc721[0].collection, addr(0x20));
    EXPECT_EQ(out.erc721[0].token_id, 9795);
}

TEST(Decode, ZeroLogsYieldNothing) {
    const DecodedTransfers out = decode_transfers(Transaction{});
    EXPECT_TRUE(out.erc20.empty());
    EXPECT_TRUE(out.erc721.empty());
}

TEST(Decode, MalformedDataLengthIsAnErrorNamingTheLog) {
    Transaction tx;
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x01), addr(0x02), 1));
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x01), addr(0x02), 1));
    tx.logs[1].data.resize(31);  // truncated amount word
    try {
        decode_transfers(tx);
        FAIL() << "expected DecodeError";
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.log_index(), 1u);
    }

    Transaction nft;
    nft.logs.push_back(make_erc721_transfer_log(addr(0x20), addr(0x01), addr(0x02), 7));
    nft.logs[0].data.resize(32);  // ERC-721 transfer carries no data
    EXPECT_THROW(decode_transfers(nft), DecodeError);
}

TEST(Decode, NonTransferAndShortTopicLogsAreIgnored) {
    Transaction tx;
    Log odd;  // transfer hash with only two topics: not a token transfer
    odd.address = addr(0x10);
    odd.topics = {transfer_event_topic(), Hash32{}};
    tx.logs.push_back(odd);
    Log other;  // unrelated event
    other.address = addr(0x11);
    other.topics = {Hash32::from_hex(
        "0x5e01000000000000000000000000000000000000000000000000000000000001")};
    tx.logs.push_back(other);
    const DecodedTransfers out = decode_transfers(tx);
    EXPECT_TRUE(out.erc20.empty());
    EXPECT_TRUE(out.erc721.empty());
}

TEST(Decode, OutputOrderedByLogIndex) {
    Transaction tx;
    Log unrelated;
    unrelated.address = addr(0x30);
    tx.logs.push_back(unrelated);  // index 0, no topics
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x01), addr(0x02), 1));
    tx.logs.push_back(make_erc721_transfer_log(addr(0x20), addr(0x03), addr(0x04), 2));
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x02), addr(0x01), 3));
    const DecodedTransfers out = decode_transfers(tx);
    ASSERT_EQ(out.erc20.size(), 2u);
    EXPECT_LT(out.erc20[0].log_index, out.erc20[1].log_index);
    EXPECT_EQ(out.erc20[0].log_index, 1u);
    EXPECT_EQ(out.erc721[0].log_index, 2u);
    // decoded token always equals the emitting contract
    for (const TokenTransfer& t : out.erc20) EXPECT_EQ(t.token, addr(0x10));
}

TEST(Decode, Amount256BitRoundTrip) {
    const BigInt big = (BigInt(1) << 255) + 12345;
    Transaction tx;
    tx.logs.push_back(make_erc20_transfer_log(addr(0x10), addr(0x01), addr(0x02), big));
    const DecodedTransfers out = decode_transfers(tx);
    ASSERT_EQ(out.erc20.size(), 1u);
    EXPECT_EQ(out.erc20[0].amount, big);
}
