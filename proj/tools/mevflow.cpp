// mevflow: MEV detection toolkit over ERC-20/721 transfer data.
// Subcommands cover the whole pipeline: synthetic corpus generation, corpus
// ingest/fetch, sandwich and NFT-arbitrage detection, registry labeling,
// dataset construction, GNN training/inference, evaluation, ablation,
// dominance reporting and gradient checking. All outputs are files
// (machine-readable JSONL) plus a short human summary on stdout.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mevflow/gnn.hpp"
#include "mevflow/labeler.hpp"
#include "mevflow/metrics.hpp"
#include "mevflow/rpc.hpp"
#include "mevflow/synthgen.hpp"

namespace fs = std::filesystem;
using namespace mevflow;

namespace {

struct LoadedCorpus {
    std::vector<Block> blocks;
    AddressKindMap kinds;
};

LoadedCorpus load_corpora(const std::vector<std::string>& paths) {
    LoadedCorpus out;
    for (const std::string& path : paths) {
        Corpus corpus = load_corpus(path);
        for (Block& b : corpus.blocks) out.blocks.push_back(std::move(b));
        for (const auto& [addr, kind] : corpus.kinds.entries()) out.kinds.set(addr, kind);
    }
    return out;
}

ExchangeRegistry load_registries(const std::vector<std::string>& paths) {
    ExchangeRegistry merged;
    for (const std::string& path : paths)
        for (const RegistryEntry& e : load_registry(path).entries()) merged.add(e);
    return merged;
}

std::ofstream open_out(const std::string& path) {
    if (const fs::path dir = fs::path(path).parent_path(); !dir.empty())
        fs::create_directories(dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

ordered_json tx_ref_json(const TxRef& ref) {
    ordered_json j;
    j["hash"] = ref.hash.hex();
    j["block"] = ref.block_number;
    j["tx_index"] = ref.tx_index;
    return j;
}

/// Collects every transaction hash a report line refers to ("txs" arrays,
/// "front"/"back" pairs, single "tx" objects or strings).
void collect_hashes(const ordered_json& j, std::set<Hash32>& out) {
    if (j.contains("txs"))
        for (const auto& t : j["txs"]) out.insert(Hash32::from_hex(t.at("hash").get<std::string>()));
    for (const char* key : {"front", "back", "tx"}) {
        if (!j.contains(key)) continue;
        const auto& v = j[key];
        if (v.is_string()) out.insert(Hash32::from_hex(v.get<std::string>()));
        else if (v.is_object()) out.insert(Hash32::from_hex(v.at("hash").get<std::string>()));
    }
}

std::set<Hash32> hashes_from_report(const std::string& path,
                                    const std::set<std::string>& categories) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report " + path);
    std::set<Hash32> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) throw std::runtime_error("malformed report line in " + path);
        if (!categories.empty()) {
            const std::string cat = j.value("category", std::string());
            if (!categories.count(cat)) continue;
        }
        collect_hashes(j, out);
    }
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("range", "expected BEGIN:END, got \"" + text + "\"");
    return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
}

std::vector<FeatureGraph> masked_copy(std::vector<FeatureGraph> graphs,
                                      const std::optional<FeatureGroup>& group) {
    if (group)
        for (FeatureGraph& fg : graphs) fg = mask_feature_group(std::move(fg), *group);
    return graphs;
}

void write_history(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out = open_out(path);
    for (const EpochStats& e : history) {
        ordered_json j;
        j["epoch"] = e.epoch;
        j["train_loss"] = e.train_loss;
        j["val_precision"] = e.val.precision;
        j["val_recall"] = e.val.recall;
        j["val_f1"] = e.val.f1;
        j["val_accuracy"] = e.val.accuracy;
        out << j.dump() << '\n';
    }
}

ordered_json metrics_json(const Metrics& m) {
    ordered_json j;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["tn"] = m.tn;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["accuracy"] = m.accuracy;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"MEV detection toolkit over token transfer data"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    // ---- gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus with ground truth");
    GenConfig gen_cfg;
    std::string gen_out = "corpus";
    std::vector<std::string> gen_categories;
    gen->add_option("--blocks", gen_cfg.blocks, "number of blocks");
    gen->add_option("--patterns", gen_cfg.patterns_per_block, "planted patterns per block");
    gen->add_option("--benign-ratio", gen_cfg.benign_ratio, "fraction of benign transactions");
    gen->add_option("--seed", gen_cfg.seed, "generator seed");
    gen->add_option("--first-block", gen_cfg.first_block, "number of the first block");
    gen->add_option("--chain-id", gen_cfg.chain_id, "chain id for the corpus header");
    gen->add_option("--categories", gen_categories,
                    "pattern categories, e.g. S1,S2,A1 (default: all MEV)")
        ->delimiter(',');
    gen->add_option("--out", gen_out, "output directory")->required();

    // ---- ingest
    auto* ingest = app.add_subcommand("ingest", "validate a corpus and rewrite it canonically");
    std::string ingest_in, ingest_out;
    ingest->add_option("--corpus", ingest_in, "corpus file")->required();
    ingest->add_option("--out", ingest_out, "canonical rewrite destination");

    // ---- fetch
    auto* fetch = app.add_subcommand("fetch", "fetch blocks from a JSON-RPC node into a corpus");
    std::string fetch_rpc;
    std::uint64_t fetch_from = 0, fetch_to = 0, fetch_chain = 1;
    std::string fetch_out;
    bool fetch_kinds = false;
    fetch->add_option("--rpc", fetch_rpc, "endpoint (default $MEVFLOW_RPC_URL)");
    fetch->add_option("--from", fetch_from, "first block")->required();
    fetch->add_option("--to", fetch_to, "last block (inclusive)")->required();
    fetch->add_option("--chain-id", fetch_chain, "chain id for the header");
    fetch->add_flag("--resolve-kinds", fetch_kinds, "resolve address kinds via eth_getCode");
    fetch->add_option("--out", fetch_out, "corpus file to write")->required();

    // ---- detect-sandwich
    auto* det_s = app.add_subcommand("detect-sandwich", "run Algorithm 1 over a corpus");
    std::vector<std::string> det_s_corpus;
    std::string det_s_out;
    SandwichConfig sandwich_cfg;
    std::string profit_scope = "combined";
    det_s->add_option("--corpus", det_s_corpus, "corpus file(s)")->required();
    det_s->add_option("--out", det_s_out, "findings JSONL")->required();
    det_s->add_flag("--require-victim", sandwich_cfg.require_victim,
                    "demand a transaction between front and back");
    det_s->add_flag("--c6-literal", sandwich_cfg.c6_all_entries_negative,
                    "literal reading of condition 6 (every entry negative)");
    bool c7_all_zero = false;
    det_s->add_flag("--c7-all-zero", c7_all_zero,
                    "alternative condition 7 (reject only all-zero back-runs)");
    det_s->add_option("--profit-scope", profit_scope, "combined|recipient");

    // ---- detect-nft-arb
    auto* det_n = app.add_subcommand("detect-nft-arb", "run the NFT arbitrage heuristic");
    std::vector<std::string> det_n_corpus;
    std::string det_n_out;
    det_n->add_option("--corpus", det_n_corpus, "corpus file(s)")->required();
    det_n->add_option("--out", det_n_out, "findings JSONL")->required();

    // ---- label
    auto* label = app.add_subcommand("label", "taxonomy labeling (S1/S2, A1-A5)");
    std::vector<std::string> label_corpus, label_registry;
    std::string label_out;
    label->add_option("--corpus", label_corpus, "corpus file(s)")->required();
    label->add_option("--registry", label_registry, "registry file(s)")->required();
    label->add_option("--out", label_out, "labels JSONL")->required();

    // ---- dataset
    auto* dataset = app.add_subcommand("dataset", "build a train/test graph dataset");
    std::vector<std::string> ds_corpus, ds_registry;
    std::string ds_train_range, ds_test_range, ds_scheme = "log1p-counts", ds_out;
    DatasetConfig ds_cfg;
    dataset->add_option("--corpus", ds_corpus, "corpus file(s)")->required();
    dataset->add_option("--registry", ds_registry, "registry file(s)")->required();
    dataset->add_option("--train-range", ds_train_range, "train blocks BEGIN:END")->required();
    dataset->add_option("--test-range", ds_test_range, "test blocks BEGIN:END")->required();
    dataset->add_option("--seed", ds_cfg.seed, "negative sampling seed");
    dataset->add_option("--min-transfers", ds_cfg.min_transfers,
                        "train-side minimum transfer count");
    dataset->add_option("--scheme", ds_scheme, "feature scaling: none|log1p-counts");
    dataset->add_option("--out", ds_out, "output directory")->required();

    // ---- train
    auto* train_cmd = app.add_subcommand("train", "train an ArbiNet classifier");
    std::string tr_train, tr_val, tr_kind = "sage", tr_out, tr_history, tr_mask, tr_opt = "adam";
    TrainConfig tr_cfg;
    int tr_hidden = 64;
    train_cmd->add_option("--train", tr_train, "training dataset JSONL")->required();
    train_cmd->add_option("--val", tr_val, "validation dataset JSONL");
    train_cmd->add_option("--kind", tr_kind, "gcn|sage|gat");
    train_cmd->add_option("--epochs", tr_cfg.epochs, "training epochs");
    train_cmd->add_option("--batch", tr_cfg.batch_size, "batch size");
    train_cmd->add_option("--lr", tr_cfg.learning_rate, "learning rate");
    train_cmd->add_option("--optimizer", tr_opt, "adam|sgd");
    train_cmd->add_option("--hidden", tr_hidden, "hidden dimension");
    train_cmd->add_option("--seed", tr_cfg.seed, "training seed");
    train_cmd->add_option("--mask", tr_mask, "feature group to mask");
    train_cmd->add_option("--out", tr_out, "checkpoint path (.arbinet.json)")->required();
    train_cmd->add_option("--history", tr_history, "per-epoch metrics JSONL");

    // ---- infer
    auto* infer = app.add_subcommand("infer", "classify graphs with a checkpoint");
    std::string in_model, in_data, in_out;
    infer->add_option("--model", in_model, "checkpoint")->required();
    infer->add_option("--data", in_data, "dataset JSONL")->required();
    infer->add_option("--out", in_out, "predictions JSONL")->required();

    // ---- eval
    auto* eval_cmd = app.add_subcommand("eval", "confusion metrics of predictions vs truth");
    std::string ev_pred, ev_truth, ev_out;
    std::vector<std::string> ev_universe, ev_categories;
    eval_cmd->add_option("--pred", ev_pred, "predictions/findings JSONL")->required();
    eval_cmd->add_option("--truth", ev_truth, "truth labels JSONL")->required();
    eval_cmd->add_option("--universe", ev_universe, "corpus file(s) defining the universe")
        ->required();
    eval_cmd->add_option("--categories", ev_categories,
                         "restrict truth/pred to these categories")
        ->delimiter(',');
    eval_cmd->add_option("--out", ev_out, "metrics JSON");

    // ---- ablate
    auto* ablate = app.add_subcommand("ablate", "feature-group ablation table");
    std::string ab_train, ab_val, ab_out;
    std::vector<std::string> ab_kinds{"gcn", "gat", "sage"};
    TrainConfig ab_cfg;
    int ab_hidden = 64;
    ablate->add_option("--train", ab_train, "training dataset JSONL")->required();
    ablate->add_option("--val", ab_val, "validation dataset JSONL")->required();
    ablate->add_option("--kinds", ab_kinds, "layer kinds")->delimiter(',');
    ablate->add_option("--epochs", ab_cfg.epochs, "training epochs");
    ablate->add_option("--batch", ab_cfg.batch_size, "batch size");
    ablate->add_option("--lr", ab_cfg.learning_rate, "learning rate");
    ablate->add_option("--hidden", ab_hidden, "hidden dimension");
    ablate->add_option("--seed", ab_cfg.seed, "training seed");
    ablate->add_option("--out", ab_out, "ablation table JSON")->required();

    // ---- report-dominance
    auto* dom = app.add_subcommand("report-dominance", "per-window contract dominance shares");
    std::string dom_labels, dom_out;
    std::uint64_t dom_window = 20'000;
    dom->add_option("--labels", dom_labels, "labels JSONL")->required();
    dom->add_option("--window", dom_window, "window size in blocks");
    dom->add_option("--out", dom_out, "report JSON")->required();

    // ---- grad-check
    auto* gc = app.add_subcommand("grad-check", "finite-difference gradient verification");
    std::string gc_kind = "all";
    int gc_graphs = 20;
    double gc_eps = 1e-5;
    std::uint64_t gc_seed = 99;
    gc->add_option("--kind", gc_kind, "gcn|sage|gat|all");
    gc->add_option("--graphs", gc_graphs, "random graphs per kind");
    gc->add_option("--eps", gc_eps, "finite-difference step");
    gc->add_option("--seed", gc_seed, "graph generation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error plus usage
        return 2;
    }

    if (gen->parsed()) {
        if (!gen_categories.empty()) {
            gen_cfg.categories.clear();
            for (const std::string& c : gen_categories)
                gen_cfg.categories.push_back(pattern_category_from_string(c));
        }
        GeneratedCorpus generated = gen_corpus(gen_cfg);
        write_generated(generated, gen_out);
        std::size_t txs = 0;
        for (const Block& b : generated.corpus.blocks) txs += b.transactions.size();
        std::cout << "gen: " << generated.corpus.blocks.size() << " blocks, " << txs
                  << " txs, " << generated.truth.labels.size() << " planted labels -> " << gen_out
                  << "\n";
        return 0;
    }

    if (ingest->parsed()) {
        Corpus corpus = load_corpus(ingest_in);
        std::size_t txs = 0, transfers = 0;
        for (const Block& b : corpus.blocks)
            for (const Transaction& tx : b.transactions) {
                ++txs;
                transfers += decode_transfers(tx).erc20.size();
            }
        if (!ingest_out.empty()) save_corpus(ingest_out, corpus);
        std::cout << "ingest: " << corpus.blocks.size() << " blocks, " << txs << " txs, "
                  << transfers << " ERC-20 transfers, " << corpus.kinds.size()
                  << " address kinds\n";
        return 0;
    }

    if (fetch->parsed()) {
        if (fetch_rpc.empty()) {
            if (const char* env = std::getenv(kRpcUrlEnvVar)) fetch_rpc = env;
        }
        if (fetch_rpc.empty())
            throw std::runtime_error(std::string("no RPC endpoint: pass --rpc or set ") +
                                     kRpcUrlEnvVar);
        RpcClient client(fetch_rpc);
        Corpus corpus;
        corpus.header.chain_id = fetch_chain;
        corpus.header.source = CorpusSource::Rpc;
        std::set<Address> seen;
        for (std::uint64_t n = fetch_from; n <= fetch_to; ++n) {
            Block block = fetch_block(client, n);
            for (const Transaction& tx : block.transactions) {
                seen.insert(tx.from);
                if (tx.to) seen.insert(*tx.to);
            }
            corpus.blocks.push_back(std::move(block));
        }
        if (fetch_kinds) {
            const std::vector<Address> addresses(seen.begin(), seen.end());
            KindResolution res = resolve_kinds(addresses, client);
            corpus.kinds = std::move(res.kinds);
            if (res.warnings > 0)
                std::cerr << "fetch: " << res.warnings << " addresses degraded to UNKNOWN\n";
        }
        save_corpus(fetch_out, corpus);
        std::cout << "fetch: " << corpus.blocks.size() << " blocks -> " << fetch_out << "\n";
        return 0;
    }

    if (det_s->parsed()) {
        sandwich_cfg.c7_reject_any_zero = !c7_all_zero;
        sandwich_cfg.scope =
            profit_scope == "recipient" ? ProfitScope::RecipientOnly : ProfitScope::Combined;
        LoadedCorpus data = load_corpora(det_s_corpus);
        std::ofstream out = open_out(det_s_out);
        std::size_t found = 0;
        for (const Block& block : data.blocks) {
            for (const SandwichPair& pair : detect_sandwiches(block, sandwich_cfg)) {
                ordered_json j;
                j["category"] = "sandwich";
                j["txs"] = ordered_json::array({tx_ref_json(pair.front), tx_ref_json(pair.back)});
                j["recipient"] = pair.shared_recipient.hex();
                ordered_json totals = ordered_json::object();
                for (const auto& [token, v] : pair.per_token_total)
                    totals[token.hex()] = to_decimal(v);
                j["totals"] = std::move(totals);
                out << j.dump() << '\n';
                ++found;
            }
        }
        std::cout << "detect-sandwich: " << found << " pairs -> " << det_s_out << "\n";
        return 0;
    }

    if (det_n->parsed()) {
        LoadedCorpus data = load_corpora(det_n_corpus);
        std::ofstream out = open_out(det_n_out);
        std::size_t found = 0;
        for (const Block& block : data.blocks) {
            for (const Transaction& tx : block.transactions) {
                const auto report = detect_nft_arbitrage(tx);
                if (!report) continue;
                ordered_json j;
                j["category"] = "A5";
                j["txs"] = ordered_json::array({tx_ref_json(report->tx)});
                j["collection"] = report->collection.hex();
                j["token_id"] = to_decimal(report->token_id);
                j["seller"] = report->seller.hex();
                j["taker"] = report->taker.hex();
                j["buyer"] = report->buyer.hex();
                j["pay_token"] = report->pay_token.hex();
                j["paid"] = to_decimal(report->paid);
                j["received"] = to_decimal(report->received);
                out << j.dump() << '\n';
                ++found;
            }
        }
        std::cout << "detect-nft-arb: " << found << " findings -> " << det_n_out << "\n";
        return 0;
    }

    if (label->parsed()) {
        LoadedCorpus data = load_corpora(label_corpus);
        ExchangeRegistry registry = load_registries(label_registry);
        std::ofstream out = open_out(label_out);
        std::size_t count = 0;
        for (const Block& block : data.blocks) {
            for (const MevLabel& l : label_block(block, registry)) {
                out << label_to_json(l).dump() << '\n';
                ++count;
            }
        }
        std::cout << "label: " << count << " labels -> " << label_out << "\n";
        return 0;
    }

    if (dataset->parsed()) {
        LoadedCorpus data = load_corpora(ds_corpus);
        ExchangeRegistry registry = load_registries(ds_registry);
        std::tie(ds_cfg.train_begin, ds_cfg.train_end) = parse_range(ds_train_range);
        std::tie(ds_cfg.test_begin, ds_cfg.test_end) = parse_range(ds_test_range);
        ds_cfg.scheme = scale_scheme_from_string(ds_scheme);
        LabeledDataset ds = build_dataset(data.blocks, registry, data.kinds, ds_cfg);
        fs::create_directories(ds_out);
        save_feature_graphs((fs::path(ds_out) / "train.jsonl").string(), ds.train);
        save_feature_graphs((fs::path(ds_out) / "test.jsonl").string(), ds.test);
        std::size_t pos = 0;
        for (const FeatureGraph& fg : ds.test) pos += fg.label.value_or(0);
        std::cout << "dataset: train " << ds.train.size() << " (balanced), test " << ds.test.size()
                  << " (" << pos << " positive) -> " << ds_out << "\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        tr_cfg.optimizer = tr_opt == "sgd" ? OptimizerKind::SGD : OptimizerKind::Adam;
        std::optional<FeatureGroup> mask;
        if (!tr_mask.empty()) mask = feature_group_from_string(tr_mask);
        const auto train_graphs = masked_copy(load_feature_graphs(tr_train), mask);
        const auto val_graphs =
            tr_val.empty() ? std::vector<FeatureGraph>{}
                           : masked_copy(load_feature_graphs(tr_val), mask);
        ArbiNetModel init = make_model(layer_kind_from_string(tr_kind), tr_cfg.seed, tr_hidden);
        init.masked_group = mask;
        TrainResult result = train(init, train_graphs, val_graphs, tr_cfg);
        result.model.masked_group = mask;
        save_checkpoint(result.model, tr_out);
        if (!tr_history.empty()) write_history(tr_history, result.history);
        const EpochStats& last = result.history.back();
        std::cout << "train: kind=" << tr_kind << " selected epoch " << result.model.selected_epoch
                  << ", final loss " << last.train_loss;
        if (!val_graphs.empty()) {
            double best = 0;
            for (const EpochStats& e : result.history) best = std::max(best, e.val.f1);
            std::cout << ", best val F1 " << best;
        }
        std::cout << " -> " << tr_out << "\n";
        return 0;
    }

    if (infer->parsed()) {
        const ArbiNetModel model = load_checkpoint(in_model);
        const auto graphs = masked_copy(load_feature_graphs(in_data), model.masked_group);
        std::ofstream out = open_out(in_out);
        std::size_t positive = 0;
        for (const FeatureGraph& fg : graphs) {
            const auto logits = model_forward(model, fg);
            const int pred = logits[1] > logits[0] ? 1 : 0;
            positive += pred;
            ordered_json j;
            j["tx"] = fg.tx_ref.hash.hex();
            j["logits"] = ordered_json::array({logits[0], logits[1]});
            j["pred"] = pred;
            out << j.dump() << '\n';
        }
        std::cout << "infer: " << graphs.size() << " graphs, " << positive << " flagged -> "
                  << in_out << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        const std::set<std::string> cats(ev_categories.begin(), ev_categories.end());
        const std::set<Hash32> predicted = hashes_from_report(ev_pred, {});
        const std::set<Hash32> truth = hashes_from_report(ev_truth, cats);
        std::set<Hash32> universe;
        for (const Block& b : load_corpora(ev_universe).blocks)
            for (const Transaction& tx : b.transactions) universe.insert(tx.hash);
        const Metrics m = evaluate(predicted, truth, universe);
        const ordered_json j = metrics_json(m);
        if (!ev_out.empty()) open_out(ev_out) << j.dump(2) << '\n';
        std::cout << "eval: P=" << m.precision << " R=" << m.recall << " F1=" << m.f1
                  << " acc=" << m.accuracy << "\n";
        return 0;
    }

    if (ablate->parsed()) {
        const auto train_graphs = load_feature_graphs(ab_train);
        const auto val_graphs = load_feature_graphs(ab_val);
        static const std::vector<std::optional<FeatureGroup>> groups = {
            std::nullopt, FeatureGroup::Profits, FeatureGroup::Tokens, FeatureGroup::Addresses,
            FeatureGroup::Transfers};
        ordered_json rows = ordered_json::array();
        for (const std::string& kind_name : ab_kinds) {
            const LayerKind kind = layer_kind_from_string(kind_name);
            for (const auto& group : groups) {
                const auto masked_train = masked_copy(train_graphs, group);
                const auto masked_val = masked_copy(val_graphs, group);
                ArbiNetModel init = make_model(kind, ab_cfg.seed, ab_hidden);
                init.masked_group = group;
                const TrainResult result = train(init, masked_train, masked_val, ab_cfg);
                double best_f1 = 0;
                for (const EpochStats& e : result.history) best_f1 = std::max(best_f1, e.val.f1);
                ordered_json row;
                row["kind"] = kind_name;
                row["excluded_group"] = group ? to_string(*group) : "none";
                row["f1"] = best_f1;
                std::cout << "ablate: " << kind_name << " / "
                          << (group ? to_string(*group) : "none") << " -> F1 " << best_f1 << "\n";
                rows.push_back(std::move(row));
            }
        }
        ordered_json j;
        j["epochs"] = ab_cfg.epochs;
        j["results"] = std::move(rows);
        open_out(ab_out) << j.dump(2) << '\n';
        std::cout << "ablate: table -> " << ab_out << "\n";
        return 0;
    }

    if (dom->parsed()) {
        std::vector<std::pair<std::uint64_t, std::vector<Address>>> tx_contracts;
        for (const MevLabel& l : load_labels(dom_labels))
            tx_contracts.emplace_back(l.txs.front().block_number, l.contracts);
        const DominanceReport report = dominance_report(tx_contracts, dom_window);
        ordered_json windows = ordered_json::array();
        for (const auto& [start, shares] : report.windows) {
            ordered_json w;
            w["start"] = start;
            ordered_json s = ordered_json::object();
            for (const auto& [contract, share] : shares) s[contract.hex()] = share;
            w["shares"] = std::move(s);
            windows.push_back(std::move(w));
        }
        ordered_json j;
        j["window_blocks"] = report.window_blocks;
        j["windows"] = std::move(windows);
        open_out(dom_out) << j.dump(2) << '\n';
        std::cout << "report-dominance: " << report.windows.size() << " windows -> " << dom_out
                  << "\n";
        return 0;
    }

    if (gc->parsed()) {
        std::vector<LayerKind> kinds;
        if (gc_kind == "all") kinds = {LayerKind::GCN, LayerKind::SAGE, LayerKind::GAT};
        else kinds = {layer_kind_from_string(gc_kind)};
        DetRng rng(gc_seed);
        bool ok = true;
        for (LayerKind kind : kinds) {
            double worst = 0;
            for (int g = 0; g < gc_graphs; ++g) {
                FeatureGraph fg;
                const int n = static_cast<int>(rng.between(2, 10));
                fg.nodes.resize(n);
                std::set<std::pair<int, int>> edges;
                const int edge_count = static_cast<int>(rng.between(1, 2 * n));
                for (int e = 0; e < edge_count; ++e) {
                    const int s = static_cast<int>(rng.below(n));
                    const int d = static_cast<int>(rng.below(n));
                    if (s != d) edges.insert({s, d});
                }
                fg.edges.assign(edges.begin(), edges.end());
                fg.x.resize(static_cast<std::size_t>(n) * kFeatureCount);
                for (double& v : fg.x) v = rng.uniform(-1.0, 1.0);
                ArbiNetModel model = make_model(kind, rng.next_u64(), 8);
                const double err =
                    grad_check(model, fg, static_cast<int>(rng.below(2)), gc_eps, rng.next_u64());
                worst = std::max(worst, err);
            }
            const bool pass = worst < 1e-3;
            ok = ok && pass;
            std::cout << "grad-check " << to_string(kind) << ": max rel err " << worst << " "
                      << (pass ? "OK" : "FAIL") << "\n";
        }
        return ok ? 0 : 1;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "mevflow: " << e.what() << "\n";
        return 1;
    }
}
