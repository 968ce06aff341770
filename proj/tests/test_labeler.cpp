#include "mevflow/labeler.hpp"

#include <gtest/gtest.h>

#include "mevflow/synthgen.hpp"

using namespace mevflow;

namespace {

Address addr(std::uint8_t tag) {
    Address a{};
    a.value[19] = tag;
    return a;
}

const Hash32 kSwap = synth_detail::synth_swap_topic();
const Hash32 kRedeem = synth_detail::synth_redeem_topic();
const Selector kLeave = synth_detail::synth_leave_selector();

const Address kBot = addr(0xb0);
const Address kEoa = addr(0xe0);
const Address kP1 = addr(0x71);
const Address kP2 = addr(0x72);
const Address kTokenX = addr(0x01);
const Address kTokenY = addr(0x02);

ExchangeRegistry pools_registry(std::initializer_list<Address> pools) {
    ExchangeRegistry registry;
    for (const Address& pool : pools)
        registry.add(RegistryEntry{"SynthSwap", pool, MatchKind::EventTopic, kSwap, {}, "Swap"});
    return registry;
}

void add_swap_event(Transaction& tx, const Address& pool) {
    Log log;
    log.address = pool;
    log.topics.push_back(kSwap);
    tx.logs.push_back(log);
}

Transaction figure6_tx() {
    Transaction tx;
    tx.hash.value[31] = 1;
    tx.from = kEoa;
    tx.to = kBot;
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kBot, kP1, 100));
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kP1, kBot, 50));
    add_swap_event(tx, kP1);
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kBot, kP2, 50));
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kP2, kBot, 110));
    add_swap_event(tx, kP2);
    return tx;
}

std::optional<MevLabel> classify(const Transaction& tx, const ExchangeRegistry& registry) {
    return classify_arbitrage(tx, build_graph(tx), identify_exchanges(tx, registry));
}

}  // namespace

TEST(Arbitrage, Figure6LoopIsA1) {
    const Transaction tx = figure6_tx();
    const auto label = classify(tx, pools_registry({kP1, kP2}));
    ASSERT_TRUE(label.has_value());
    EXPECT_EQ(label->category, MevCategory::A1);
    EXPECT_EQ(label->profit.at(kTokenX), 10);
    EXPECT_EQ(label->profit.at(kTokenY), 0);
    ASSERT_EQ(label->takers.size(), 2u);
    EXPECT_EQ(label->contracts.size(), 2u);
}

TEST(Arbitrage, UncoveredLoopIsNotArbitrage) {
    // same transfers, but only one venue is registered: the P2 junction pair
    // has no associated action, so the loop does not qualify
    const Transaction tx = figure6_tx();
    EXPECT_FALSE(classify(tx, pools_registry({kP1})).has_value());
    EXPECT_FALSE(classify(tx, pools_registry({})).has_value());
}

TEST(Arbitrage, NoPositiveNetMeansNoLabel) {
    Transaction tx;
    tx.from = kEoa;
    tx.to = kP1;  // plain user swap
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kEoa, kP1, 100));
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kP1, kEoa, 50));
    add_swap_event(tx, kP1);
    EXPECT_FALSE(classify(tx, pools_registry({kP1})).has_value());
}

TEST(Arbitrage, BurnMintRouteIsA2) {
    const Address stake = addr(0x73);  // staking contract doubles as its token
    const Address tokenT = addr(0x03);
    ExchangeRegistry registry = pools_registry({kP1, kP2});
    registry.add(RegistryEntry{"Stake", stake, MatchKind::FunctionSelector, {}, kLeave, "leave"});

    Transaction tx;
    tx.from = kEoa;
    tx.to = kBot;
    tx.trace_calls = std::vector<TraceCall>{{stake, kLeave}};
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kBot, kP1, 100));
    tx.logs.push_back(make_erc20_transfer_log(stake, kP1, kBot, 50));
    add_swap_event(tx, kP1);
    tx.logs.push_back(make_erc20_transfer_log(stake, kBot, null_address(), 50));  // burn
    tx.logs.push_back(make_erc20_transfer_log(tokenT, stake, kBot, 60));          // mint leg
    tx.logs.push_back(make_erc20_transfer_log(tokenT, kBot, kP2, 60));
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kP2, kBot, 108));
    add_swap_event(tx, kP2);

    const auto label = classify(tx, registry);
    ASSERT_TRUE(label.has_value());
    EXPECT_EQ(label->category, MevCategory::A2);
    EXPECT_EQ(label->profit.at(kTokenX), 8);

    // without the trace the burn/mint hop is uncovered: nothing labels
    Transaction blind = tx;
    blind.trace_calls.reset();
    EXPECT_FALSE(classify(blind, registry).has_value());
}

TEST(Arbitrage, SetRedemptionIsA3) {
    const Address issuer = addr(0x74);  // set token contract emits the redeem event
    const Address c1 = addr(0x04), c2 = addr(0x05), c3 = addr(0x06);
    const Address p3 = addr(0x75);
    ExchangeRegistry registry = pools_registry({kP1, kP2, p3});
    registry.add(RegistryEntry{"Index", issuer, MatchKind::EventTopic, kRedeem, {}, "Redeem"});

    Transaction tx;
    tx.from = kEoa;
    tx.to = kBot;
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kBot, kP1, 100));
    tx.logs.push_back(make_erc20_transfer_log(issuer, kP1, kBot, 10));
    add_swap_event(tx, kP1);
    tx.logs.push_back(make_erc20_transfer_log(issuer, kBot, null_address(), 10));
    tx.logs.push_back(make_erc20_transfer_log(c1, issuer, kBot, 30));
    tx.logs.push_back(make_erc20_transfer_log(c2, issuer, kBot, 40));
    tx.logs.push_back(make_erc20_transfer_log(c3, issuer, kBot, 50));
    {
        Log log;
        log.address = issuer;
        log.topics.push_back(kRedeem);
        tx.logs.push_back(log);
    }
    tx.logs.push_back(make_erc20_transfer_log(c1, kBot, kP2, 30));
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kP2, kBot, 60));
    add_swap_event(tx, kP2);
    tx.logs.push_back(make_erc20_transfer_log(c2, kBot, p3, 40));
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, p3, kBot, 45));
    add_swap_event(tx, p3);

    const auto label = classify(tx, registry);
    ASSERT_TRUE(label.has_value());
    EXPECT_EQ(label->category, MevCategory::A3);
    EXPECT_EQ(label->profit.at(kTokenX), 5);
    EXPECT_EQ(label->profit.at(c3), 50);
}

TEST(Arbitrage, SecondaryAddressMergeIsA4) {
    const Address second = addr(0xe2);
    Transaction tx;
    tx.from = kEoa;
    tx.to = kBot;
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kBot, kP1, 100));
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kP1, kBot, 50));
    add_swap_event(tx, kP1);
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kBot, kP2, 50));
    add_swap_event(tx, kP2);
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kP2, second, 105));  // payout aside
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kP2, kBot, 5));

    const auto label = classify(tx, pools_registry({kP1, kP2}));
    ASSERT_TRUE(label.has_value());
    EXPECT_EQ(label->category, MevCategory::A4);
    EXPECT_EQ(label->profit.at(kTokenX), 10);
    EXPECT_EQ(label->takers.size(), 3u);  // sender, bot, secondary
    EXPECT_TRUE(std::count(label->takers.begin(), label->takers.end(), second));
}

TEST(Arbitrage, LabelsSatisfyTheProfitabilityGate) {
    // labeled profit rows are non-negative with at least one positive,
    // re-derivable from the raw transfers
    GenConfig cfg;
    cfg.blocks = 8;
    cfg.patterns_per_block = 2;
    cfg.benign_ratio = 0.5;
    cfg.categories = {PatternCategory::A1, PatternCategory::A2, PatternCategory::A3,
                      PatternCategory::A4};
    const GeneratedCorpus generated = gen_corpus(cfg);
    for (const MevLabel& label : generated.truth.labels) {
        bool any_positive = false;
        for (const auto& [token, v] : label.profit) {
            EXPECT_GE(v, 0);
            if (v > 0) any_positive = true;
        }
        EXPECT_TRUE(any_positive);
    }
}

TEST(Sandwiches, SinglePoolPairIsS1AndCrossDexIsS2) {
    GenConfig cfg;
    cfg.blocks = 4;
    cfg.patterns_per_block = 1;
    cfg.benign_ratio = 0.5;
    cfg.categories = {PatternCategory::S1, PatternCategory::S2};
    const GeneratedCorpus generated = gen_corpus(cfg);
    int s1 = 0, s2 = 0;
    for (const Block& block : generated.corpus.blocks)
        for (const MevLabel& label : classify_sandwiches(block, generated.registry)) {
            if (label.category == MevCategory::S1) {
                ++s1;
                EXPECT_EQ(label.contracts.size(), 1u);
            }
            if (label.category == MevCategory::S2) {
                ++s2;
                EXPECT_GE(label.contracts.size(), 2u);
            }
            ASSERT_EQ(label.txs.size(), 2u);
            EXPECT_LT(label.txs[0].tx_index, label.txs[1].tx_index);
        }
    EXPECT_EQ(s1, 2);
    EXPECT_EQ(s2, 2);
}

TEST(Sandwiches, PairsWithoutRegisteredActionsStayUnlabeled) {
    // canonical Algorithm-1 pair with no exchange events at all
    Transaction front;
    front.from = kEoa;
    front.to = kBot;
    front.tx_index = 0;
    front.logs.push_back(make_erc20_transfer_log(kTokenX, kBot, kP1, 100));
    front.logs.push_back(make_erc20_transfer_log(kTokenY, kP1, kBot, 50));
    Transaction back;
    back.from = kEoa;
    back.to = kBot;
    back.tx_index = 1;
    back.hash.value[31] = 1;
    back.logs.push_back(make_erc20_transfer_log(kTokenY, kBot, kP1, 50));
    back.logs.push_back(make_erc20_transfer_log(kTokenX, kP1, kBot, 110));
    Block block;
    block.number = 9;
    block.transactions = {front, back};

    EXPECT_EQ(detect_sandwiches(block).size(), 1u);  // the heuristic still fires
    EXPECT_TRUE(classify_sandwiches(block, pools_registry({})).empty());
}

TEST(LabelJson, RoundTrip) {
    MevLabel label;
    label.category = MevCategory::A2;
    label.txs = {TxRef{Hash32{}, 123, 7}};
    label.takers = {kBot, kEoa};
    label.profit[kTokenX] = BigInt("123456789012345678901234567890");
    label.contracts = {kP1};
    const MevLabel back = label_from_json(label_to_json(label));
    EXPECT_EQ(back.category, label.category);
    EXPECT_EQ(back.txs.size(), 1u);
    EXPECT_EQ(back.txs[0].block_number, 123u);
    EXPECT_EQ(back.profit.at(kTokenX), label.profit.at(kTokenX));
    EXPECT_EQ(back.takers, label.takers);
    EXPECT_EQ(back.contracts, label.contracts);
}

TEST(Dataset, BalancedTrainAndNaturalTest) {
    GenConfig train_cfg;
    train_cfg.blocks = 10;
    train_cfg.patterns_per_block = 2;
    train_cfg.benign_ratio = 0.7;
    train_cfg.seed = 5;
    train_cfg.categories = {PatternCategory::A1, PatternCategory::A2};
    const GeneratedCorpus generated = gen_corpus(train_cfg);

    DatasetConfig cfg;
    cfg.seed = 3;
    cfg.train_begin = 1'000'000;
    cfg.train_end = 1'000'004;
    cfg.test_begin = 1'000'005;
    cfg.test_end = 1'000'009;
    const LabeledDataset ds =
        build_dataset(generated.corpus.blocks, generated.registry, generated.corpus.kinds, cfg);

    std::size_t train_pos = 0;
    for (const FeatureGraph& fg : ds.train) train_pos += fg.label.value_or(0);
    EXPECT_EQ(ds.train.size(), 2 * train_pos);  // exactly balanced
    EXPECT_EQ(train_pos, 10u);                  // 2 patterns x 5 blocks

    std::size_t test_pos = 0;
    for (const FeatureGraph& fg : ds.test) test_pos += fg.label.value_or(0);
    EXPECT_EQ(test_pos, 10u);
    EXPECT_GT(ds.test.size(), 3 * test_pos);  // imbalance preserved

    // determinism
    const LabeledDataset again =
        build_dataset(generated.corpus.blocks, generated.registry, generated.corpus.kinds, cfg);
    ASSERT_EQ(again.train.size(), ds.train.size());
    for (std::size_t i = 0; i < ds.train.size(); ++i)
        EXPECT_EQ(again.train[i].tx_ref.hash, ds.train[i].tx_ref.hash);

    // overlapping ranges rejected
    DatasetConfig bad = cfg;
    bad.test_begin = cfg.train_end;
    EXPECT_THROW(
        build_dataset(generated.corpus.blocks, generated.registry, generated.corpus.kinds, bad),
        DatasetError);

    // no positives in range
    DatasetConfig empty = cfg;
    empty.train_begin = 999'000;
    empty.train_end = 999'001;
    EXPECT_THROW(
        build_dataset(generated.corpus.blocks, generated.registry, generated.corpus.kinds, empty),
        DatasetError);
}
