#include "mevflow/features.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "mevflow/synthgen.hpp"

using namespace mevflow;

namespace {

Address addr(std::uint8_t tag) {
    Address a{};
    a.value[19] = tag;
    return a;
}

const Address kTaker = addr(0xbb);
const Address kPool1 = addr(0x21);
const Address kPool2 = addr(0x22);
const Address kTokenX = addr(0x01);
const Address kTokenY = addr(0x02);

Transaction figure6_loop() {
    Transaction tx;
    tx.from = addr(0xaa);
    tx.to = kTaker;
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kTaker, kPool1, 100));
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kPool1, kTaker, 50));
    tx.logs.push_back(make_erc20_transfer_log(kTokenY, kTaker, kPool2, 50));
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, kPool2, kTaker, 110));
    return tx;
}

FeatureContext context_for(const Transaction& tx, const AddressKindMap& kinds,
                           Address builder = addr(0xdd)) {
    return FeatureContext{builder, tx.from, tx.to, &kinds};
}

int row_of(const FeatureGraph& fg, const Address& a) {
    for (int i = 0; i < fg.num_nodes(); ++i)
        if (fg.nodes[i] == a) return i;
    return -1;
}

}  // namespace

TEST(Features, NullAddressBurnRow) {
    // one burn: A -> null of token X
    Transaction tx;
    tx.from = addr(0xaa);
    tx.to = addr(0x10);
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, addr(0x0a), null_address(), 9));
    AddressKindMap kinds;
    const FeatureGraph fg = extract_features(build_graph(tx), context_for(tx, kinds));
    const int row = row_of(fg, null_address());
    ASSERT_GE(row, 0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF7IsNull), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF5TokensReceived), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF13TransfersIn), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF1TokensNegative), 0.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF2TokensPositive), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF9IsContract), 1.0);  // null is CA by convention
}

TEST(Features, Figure6TakerRow) {
    const Transaction tx = figure6_loop();
    AddressKindMap kinds;
    kinds.set(kTaker, AddressKind::CA);
    const FeatureGraph fg = extract_features(build_graph(tx), context_for(tx, kinds));
    const int row = row_of(fg, kTaker);
    ASSERT_GE(row, 0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF1TokensNegative), 0.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF2TokensPositive), 1.0);  // X nets +10
    EXPECT_DOUBLE_EQ(fg.at(row, kF3TokensZero), 1.0);      // Y nets 0
    EXPECT_DOUBLE_EQ(fg.at(row, kF4TokensSent), 2.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF5TokensReceived), 2.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF6TokensInTx), 2.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF10IsSender), 0.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF11IsRecipient), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF12TransfersOut), 2.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF13TransfersIn), 2.0);
    EXPECT_DOUBLE_EQ(fg.at(row, kF14TransfersInTx), 4.0);
    // tri-state contract feature: unknown pools score 0.5
    EXPECT_DOUBLE_EQ(fg.at(row_of(fg, kPool1), kF9IsContract), 0.5);
}

TEST(Features, EmptyTransactionYieldsEmptyGraph) {
    Transaction tx;
    tx.from = addr(0xaa);
    AddressKindMap kinds;
    const FeatureGraph fg = extract_features(build_graph(tx), context_for(tx, kinds));
    EXPECT_EQ(fg.num_nodes(), 0);
    EXPECT_TRUE(fg.edges.empty());
    EXPECT_TRUE(fg.x.empty());
}

TEST(Features, SelfTransfersCountInTotalsButNotEdges) {
    Transaction tx;
    tx.from = addr(0x0a);
    tx.to = kTokenX;
    tx.logs.push_back(make_erc20_transfer_log(kTokenX, addr(0x0a), addr(0x0a), 5));
    AddressKindMap kinds;
    const FeatureGraph fg = extract_features(build_graph(tx), context_for(tx, kinds));
    ASSERT_EQ(fg.num_nodes(), 1);
    EXPECT_TRUE(fg.edges.empty());  // self-edges excluded
    EXPECT_DOUBLE_EQ(fg.at(0, kF12TransfersOut), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(0, kF13TransfersIn), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(0, kF14TransfersInTx), 1.0);
    EXPECT_DOUBLE_EQ(fg.at(0, kF3TokensZero), 1.0);
}

TEST(Scaling, Log1pCountsOnCountColumnsOnly) {
    const Transaction tx = figure6_loop();
    AddressKindMap kinds;
    const FeatureGraph raw = extract_features(build_graph(tx), context_for(tx, kinds));
    const FeatureGraph scaled = scale_features(raw, ScaleScheme::Log1pCounts);
    const int row = row_of(raw, kTaker);
    EXPECT_DOUBLE_EQ(scaled.at(row, kF1TokensNegative), 0.0);  // log1p(0) = 0
    EXPECT_NEAR(scaled.at(row, kF2TokensPositive), std::log(2.0), 1e-12);  // ln 2
    EXPECT_DOUBLE_EQ(scaled.at(row, kF11IsRecipient), raw.at(row, kF11IsRecipient));
    EXPECT_NEAR(scaled.at(row, kF14TransfersInTx), std::log1p(4.0), 1e-12);

    const FeatureGraph same = scale_features(raw, ScaleScheme::None);
    EXPECT_EQ(same.x, raw.x);

    EXPECT_THROW(scale_scheme_from_string("sqrt"), std::invalid_argument);
}

TEST(Masking, ZeroesTheGroupAndIsIdempotent) {
    const Transaction tx = figure6_loop();
    AddressKindMap kinds;
    const FeatureGraph raw = extract_features(build_graph(tx), context_for(tx, kinds));
    const FeatureGraph masked = mask_feature_group(raw, FeatureGroup::Profits);
    for (int i = 0; i < masked.num_nodes(); ++i) {
        EXPECT_DOUBLE_EQ(masked.at(i, kF1TokensNegative), 0.0);
        EXPECT_DOUBLE_EQ(masked.at(i, kF2TokensPositive), 0.0);
        EXPECT_DOUBLE_EQ(masked.at(i, kF3TokensZero), 0.0);
        EXPECT_DOUBLE_EQ(masked.at(i, kF4TokensSent), raw.at(i, kF4TokensSent));
    }
    const FeatureGraph twice = mask_feature_group(masked, FeatureGroup::Profits);
    EXPECT_EQ(twice.x, masked.x);

    const FeatureGraph no_addresses = mask_feature_group(raw, FeatureGroup::Addresses);
    const int row = row_of(raw, kTaker);
    EXPECT_DOUBLE_EQ(no_addresses.at(row, kF10IsSender), 0.0);
    EXPECT_DOUBLE_EQ(no_addresses.at(row, kF11IsRecipient), 0.0);
}

TEST(Features, PermutationEquivariance) {
    DetRng rng(31);
    for (std::uint64_t b = 0; b < 20; ++b) {
        const Block block = gen_fuzz_block(b, 808 + b);
        AddressKindMap kinds;
        for (const Transaction& tx : block.transactions) {
            const FeatureGraph fg =
                extract_features(build_graph(tx), context_for(tx, kinds, block.fee_recipient));
            if (fg.num_nodes() < 2) continue;
            std::vector<int> perm(fg.num_nodes());
            for (int i = 0; i < fg.num_nodes(); ++i) perm[i] = i;
            std::vector<int> as_indices(perm.begin(), perm.end());
            rng.shuffle(as_indices);
            const FeatureGraph permuted = permute_feature_graph(fg, as_indices);
            for (int i = 0; i < fg.num_nodes(); ++i)
                for (int c = 0; c < kFeatureCount; ++c)
                    ASSERT_DOUBLE_EQ(permuted.at(as_indices[i], c), fg.at(i, c));
            EXPECT_EQ(permuted.edges.size(), fg.edges.size());
        }
    }
}

TEST(Features, CountInvariantsOnFuzzGraphs) {
    for (std::uint64_t b = 0; b < 30; ++b) {
        const Block block = gen_fuzz_block(b, 909 + b);
        AddressKindMap kinds;
        for (const Transaction& tx : block.transactions) {
            const TransferGraph graph = build_graph(tx);
            const FeatureGraph fg =
                extract_features(graph, context_for(tx, kinds, block.fee_recipient));
            double sum_out = 0, sum_in = 0;
            for (int i = 0; i < fg.num_nodes(); ++i) {
                EXPECT_GE(fg.at(i, kF12TransfersOut), fg.at(i, kF4TokensSent));
                EXPECT_GE(fg.at(i, kF13TransfersIn), fg.at(i, kF5TokensReceived));
                sum_out += fg.at(i, kF12TransfersOut);
                sum_in += fg.at(i, kF13TransfersIn);
            }
            if (fg.num_nodes() > 0) {
                EXPECT_DOUBLE_EQ(sum_out, fg.at(0, kF14TransfersInTx));
                EXPECT_DOUBLE_EQ(sum_in, fg.at(0, kF14TransfersInTx));
            }
            EXPECT_LE(fg.edges.size(), graph.edges.size());
        }
    }
}

TEST(Features, DatasetJsonlRoundTrip) {
    const Transaction tx = figure6_loop();
    AddressKindMap kinds;
    FeatureGraph fg = extract_features(build_graph(tx), context_for(tx, kinds));
    fg.label = 1;
    const std::string path =
        (std::filesystem::temp_directory_path() / "fg_roundtrip.jsonl").string();
    save_feature_graphs(path, {fg});
    const auto loaded = load_feature_graphs(path);
    ASSERT_EQ(loaded.size(), 1u);
    EXPECT_EQ(loaded[0].x, fg.x);
    EXPECT_EQ(loaded[0].edges, fg.edges);
    EXPECT_EQ(loaded[0].label, fg.label);
    EXPECT_EQ(loaded[0].tx_ref.hash, fg.tx_ref.hash);
    std::remove(path.c_str());
}
