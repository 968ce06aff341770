#include "mevflow/synthgen.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace mevflow;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST(Synthgen, SameSeedSameBytes) {
    GenConfig cfg;
    cfg.blocks = 5;
    cfg.patterns_per_block = 2;
    cfg.benign_ratio = 0.8;
    cfg.seed = 7;
    const auto dir_a = std::filesystem::temp_directory_path() / "synth_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "synth_b";
    write_generated(gen_corpus(cfg), dir_a.string());
    write_generated(gen_corpus(cfg), dir_b.string());
    for (const char* name : {"corpus.mevcorpus.jsonl", "registry.json", "truth.jsonl"})
        EXPECT_EQ(slurp((dir_a / name).string()), slurp((dir_b / name).string())) << name;
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST(Synthgen, DifferentSeedsDiffer) {
    GenConfig cfg;
    cfg.blocks = 2;
    cfg.patterns_per_block = 1;
    cfg.benign_ratio = 0.5;
    cfg.seed = 1;
    const GeneratedCorpus a = gen_corpus(cfg);
    cfg.seed = 2;
    const GeneratedCorpus b = gen_corpus(cfg);
    // at minimum the drawn amounts differ; compare serialized transactions
    const auto dump = [](const GeneratedCorpus& g) {
        std::string out;
        for (const Block& blk : g.corpus.blocks)
            for (const Transaction& tx : blk.transactions)
                out += corpus_json::tx_to_json(tx).dump();
        return out;
    };
    EXPECT_NE(dump(a), dump(b));
}

TEST(Synthgen, TruthOnlyForPlantedPatterns) {
    GenConfig cfg;
    cfg.blocks = 10;
    cfg.patterns_per_block = 2;
    cfg.benign_ratio = 0.9;
    cfg.seed = 3;
    const GeneratedCorpus g = gen_corpus(cfg);
    EXPECT_EQ(g.truth.labels.size(), 20u);
    // benign ratio: MEV txs never exceed (1 - ratio) of each block
    for (const Block& block : g.corpus.blocks) {
        std::size_t mev = 0;
        std::set<std::pair<std::uint64_t, std::uint32_t>> planted;
        for (const MevLabel& l : g.truth.labels)
            for (const TxRef& ref : l.txs)
                if (ref.block_number == block.number) ++mev;
        EXPECT_LE(static_cast<double>(mev),
                  0.11 * static_cast<double>(block.transactions.size()));
    }
}

TEST(Synthgen, LabelerReproducesTruthOnReload) {
    // mini criterion-10: write, reload from disk, relabel, compare
    GenConfig cfg;
    cfg.blocks = 7;
    cfg.patterns_per_block = 2;
    cfg.benign_ratio = 0.7;
    cfg.seed = 11;
    const auto dir = std::filesystem::temp_directory_path() / "synth_check";
    write_generated(gen_corpus(cfg), dir.string());

    const Corpus corpus = load_corpus((dir / "corpus.mevcorpus.jsonl").string());
    const ExchangeRegistry registry = load_registry((dir / "registry.json").string());
    const std::vector<MevLabel> truth = load_labels((dir / "truth.jsonl").string());

    std::vector<MevLabel> found;
    for (const Block& block : corpus.blocks)
        for (MevLabel& label : label_block(block, registry)) found.push_back(std::move(label));

    ASSERT_EQ(found.size(), truth.size());
    std::map<std::pair<std::uint64_t, std::uint32_t>, std::string> truth_by_tx, found_by_tx;
    for (const MevLabel& l : truth)
        truth_by_tx[{l.txs[0].block_number, l.txs[0].tx_index}] = to_string(l.category);
    for (const MevLabel& l : found)
        found_by_tx[{l.txs[0].block_number, l.txs[0].tx_index}] = to_string(l.category);
    EXPECT_EQ(truth_by_tx, found_by_tx);
    std::filesystem::remove_all(dir);
}

TEST(Synthgen, FirstA5PatternMirrorsThePaperTrade) {
    GenConfig cfg;
    cfg.blocks = 2;
    cfg.patterns_per_block = 1;
    cfg.benign_ratio = 0.5;
    cfg.seed = 13;
    cfg.categories = {PatternCategory::A5};
    const GeneratedCorpus g = gen_corpus(cfg);
    ASSERT_GE(g.truth.labels.size(), 1u);
    const MevLabel& first = g.truth.labels.front();
    EXPECT_EQ(first.category, MevCategory::A5);
    ASSERT_EQ(first.profit.size(), 1u);
    EXPECT_EQ(first.profit.begin()->second, BigInt("45000000000000000"));  // 0.045 in wei
}

TEST(Synthgen, InfeasibleRangesAbort) {
    GenConfig cfg;
    cfg.spec.amount_min = 100;
    cfg.spec.amount_max = 50;
    EXPECT_THROW(gen_corpus(cfg), SynthError);
    GenConfig margins;
    margins.spec.margin_min = 0;
    EXPECT_THROW(gen_corpus(margins), SynthError);
    GenConfig ratio;
    ratio.benign_ratio = 1.0;
    EXPECT_THROW(gen_corpus(ratio), SynthError);
    GenConfig cats;
    cats.categories.clear();
    EXPECT_THROW(gen_corpus(cats), SynthError);
}

TEST(Synthgen, FuzzBlocksAreDeterministicAndDecodable) {
    const Block a = gen_fuzz_block(42, 9);
    const Block b = gen_fuzz_block(42, 9);
    ASSERT_EQ(a.transactions.size(), b.transactions.size());
    for (std::size_t i = 0; i < a.transactions.size(); ++i) {
        EXPECT_EQ(a.transactions[i].hash, b.transactions[i].hash);
        EXPECT_EQ(a.transactions[i].logs.size(), b.transactions[i].logs.size());
        decode_transfers(a.transactions[i]);  // must not throw
    }
}
