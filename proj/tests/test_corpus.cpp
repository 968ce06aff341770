#include "mevflow/corpus.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mevflow/synthgen.hpp"

using namespace mevflow;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

const char* kHeader = R"({"format_version":1,"chain_id":1,"source":"fixture"})";

}  // namespace

TEST(Corpus, SaveLoadSaveIsByteIdentical) {
    GenConfig cfg;
    cfg.blocks = 4;
    cfg.patterns_per_block = 2;
    cfg.benign_ratio = 0.6;
    cfg.seed = 9;
    const GeneratedCorpus generated = gen_corpus(cfg);

    const std::string path_a = temp_path("corpus_a.mevcorpus.jsonl");
    const std::string path_b = temp_path("corpus_b.mevcorpus.jsonl");
    save_corpus(path_a, generated.corpus);
    const Corpus loaded = load_corpus(path_a);
    save_corpus(path_b, loaded);
    EXPECT_EQ(slurp(path_a), slurp(path_b));
    EXPECT_EQ(loaded.blocks.size(), generated.corpus.blocks.size());
    EXPECT_EQ(loaded.kinds.size(), generated.corpus.kinds.size());
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
}

TEST(Corpus, TwoBlocksStreamInOrder) {
    const std::string path = temp_path("corpus_two.jsonl");
    spit(path, std::string(kHeader) + "\n" +
                   R"({"block":{"number":5,"fee_recipient":"0x00000000000000000000000000000000000000aa","transactions":[]}})" +
                   "\n" +
                   R"({"block":{"number":6,"fee_recipient":"0x00000000000000000000000000000000000000aa","transactions":[]}})" +
                   "\n");
    CorpusReader reader(path);
    auto b1 = reader.next();
    auto b2 = reader.next();
    ASSERT_TRUE(b1 && b2);
    EXPECT_EQ(b1->number, 5u);
    EXPECT_EQ(b2->number, 6u);
    EXPECT_FALSE(reader.next().has_value());
    std::remove(path.c_str());
}

TEST(Corpus, EmptyBodyAfterHeaderIsAnEmptyStream) {
    const std::string path = temp_path("corpus_empty.jsonl");
    spit(path, std::string(kHeader) + "\n");
    const Corpus corpus = load_corpus(path);
    EXPECT_TRUE(corpus.blocks.empty());
    EXPECT_EQ(corpus.kinds.size(), 0u);
    std::remove(path.c_str());
}

TEST(Corpus, MissingFieldNamesTheLine) {
    const std::string path = temp_path("corpus_bad.jsonl");
    spit(path, std::string(kHeader) + "\n" + R"({"block":{"number":5,"transactions":[]}})" + "\n");
    try {
        load_corpus(path);
        FAIL() << "expected CorpusError";
    } catch (const CorpusError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("fee_recipient"), std::string::npos);
    }
    std::remove(path.c_str());
}

TEST(Corpus, VersionMismatchRejected) {
    const std::string path = temp_path("corpus_v9.jsonl");
    spit(path, R"({"format_version":9,"chain_id":1,"source":"fixture"})" "\n");
    EXPECT_THROW(load_corpus(path), CorpusError);
    std::remove(path.c_str());
}

TEST(Corpus, NonMonotoneBlockNumbersRejected) {
    const std::string path = temp_path("corpus_order.jsonl");
    spit(path, std::string(kHeader) + "\n" +
                   R"({"block":{"number":7,"fee_recipient":"0x00000000000000000000000000000000000000aa","transactions":[]}})" +
                   "\n" +
                   R"({"block":{"number":6,"fee_recipient":"0x00000000000000000000000000000000000000aa","transactions":[]}})" +
                   "\n");
    EXPECT_THROW(load_corpus(path), CorpusError);
    std::remove(path.c_str());
}

TEST(Corpus, AddressKindLinesMergeAndNullIsAlwaysContract) {
    const std::string path = temp_path("corpus_kinds.jsonl");
    spit(path, std::string(kHeader) + "\n" +
                   R"({"address_kind":{"address":"0x00000000000000000000000000000000000000aa","kind":"EOA"}})" +
                   "\n" +
                   R"({"address_kind":{"address":"0x00000000000000000000000000000000000000bb","kind":"CA"}})" +
                   "\n");
    const Corpus corpus = load_corpus(path);
    const Address eoa = Address::from_hex("0x00000000000000000000000000000000000000aa");
    const Address ca = Address::from_hex("0x00000000000000000000000000000000000000bb");
    EXPECT_EQ(corpus.kinds.kind_of(eoa), AddressKind::EOA);
    EXPECT_EQ(corpus.kinds.kind_of(ca), AddressKind::CA);
    EXPECT_EQ(corpus.kinds.kind_of(null_address()), AddressKind::CA);
    Address unknown{};
    unknown.value[0] = 0x99;
    EXPECT_EQ(corpus.kinds.kind_of(unknown), AddressKind::UNKNOWN);
    std::remove(path.c_str());
}

TEST(Corpus, MalformedJsonNamesTheLine) {
    const std::string path = temp_path("corpus_garbled.jsonl");
    spit(path, std::string(kHeader) + "\nnot json at all\n");
    try {
        load_corpus(path);
        FAIL() << "expected CorpusError";
    } catch (const CorpusError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::remove(path.c_str());
}
