#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevflow/labeler.hpp"
#include "mevflow/rng.hpp"

namespace mevflow {

enum class PatternCategory {
    S1,
    S2,
    A1,
    A2,
    A3,
    A4,
    A5,
    BenignSwap,
    BenignTransfer,
    BenignNftSelfTrade,  // sender = seller, rejected by the NFT heuristic
    BenignMimicA2,       // burn routed to a treasury instead of null
    BenignExecutor,      // bystander loop through unregistered venues
};

inline std::string to_string(PatternCategory c) {
    switch (c) {
        case PatternCategory::S1: return "S1";
        case PatternCategory::S2: return "S2";
        case PatternCategory::A1: return "A1";
        case PatternCategory::A2: return "A2";
        case PatternCategory::A3: return "A3";
        case PatternCategory::A4: return "A4";
        case PatternCategory::A5: return "A5";
        case PatternCategory::BenignSwap: return "BENIGN-swap";
        case PatternCategory::BenignTransfer: return "BENIGN-transfer";
        case PatternCategory::BenignNftSelfTrade: return "BENIGN-nft-selftrade";
        case PatternCategory::BenignMimicA2: return "BENIGN-mimic-a2";
        default: return "BENIGN-executor";
    }
}

inline PatternCategory pattern_category_from_string(const std::string& s) {
    static const std::map<std::string, PatternCategory> table = {
        {"S1", PatternCategory::S1},
        {"S2", PatternCategory::S2},
        {"A1", PatternCategory::A1},
        {"A2", PatternCategory::A2},
        {"A3", PatternCategory::A3},
        {"A4", PatternCategory::A4},
        {"A5", PatternCategory::A5},
        {"BENIGN-swap", PatternCategory::BenignSwap},
        {"BENIGN-transfer", PatternCategory::BenignTransfer},
        {"BENIGN-nft-selftrade", PatternCategory::BenignNftSelfTrade},
        {"BENIGN-mimic-a2", PatternCategory::BenignMimicA2},
        {"BENIGN-executor", PatternCategory::BenignExecutor},
    };
    auto it = table.find(s);
    if (it == table.end()) throw std::invalid_argument("unknown pattern category \"" + s + "\"");
    return it->second;
}

/// Amount knobs, in abstract units of 10^12 base units each so values look
/// wei-scale without drowning the generator in big-int arithmetic.
struct PatternSpec {
    PatternCategory category = PatternCategory::A1;
    std::uint64_t amount_min = 50;
    std::uint64_t amount_max = 200;
    std::uint64_t margin_min = 1;
    std::uint64_t margin_max = 20;
    int token_pool = 6;  // shared benign tokens
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<MevLabel> labels;  // one per planted pattern, none for benign
};

struct GenConfig {
    int blocks = 100;
    int patterns_per_block = 2;
    double benign_ratio = 0.95;  // fraction of non-MEV transactions
    std::uint64_t seed = 7;
    std::uint64_t first_block = 1'000'000;
    std::uint64_t chain_id = 1337;
    std::vector<PatternCategory> categories = {
        PatternCategory::S1, PatternCategory::S2, PatternCategory::A1, PatternCategory::A2,
        PatternCategory::A3, PatternCategory::A4, PatternCategory::A5};
    PatternSpec spec;  // amount template for every pattern
    // benign traffic mix, normalized internally
    double weight_swap = 0.55;
    double weight_transfer = 0.25;
    double weight_mimic_a2 = 0.07;
    double weight_executor = 0.07;
    double weight_nft_selftrade = 0.06;
};

struct GeneratedCorpus {
    Corpus corpus;
    ExchangeRegistry registry;
    GroundTruth truth;
};

class SynthError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace synth_detail {

inline constexpr std::uint64_t kUnit = 1'000'000'000'000ULL;  // 10^12 base units

// synthetic event/selector constants; reserved 0x5e prefix keeps them clear
// of real signatures
inline const Hash32& synth_swap_topic() {
    static const Hash32 t =
        Hash32::from_hex("0x5e01000000000000000000000000000000000000000000000000000000000001");
    return t;
}
inline const Hash32& synth_redeem_topic() {
    static const Hash32 t =
        Hash32::from_hex("0x5e02000000000000000000000000000000000000000000000000000000000002");
    return t;
}
inline const Selector& synth_leave_selector() {
    static const Selector s = Selector::from_hex("0x5ef10001");
    return s;
}

enum class Role : std::uint8_t {
    Token = 0x01,
    Pool = 0x02,
    Bot = 0x03,
    Eoa = 0x04,
    Contract = 0x05,  // treasuries, marketplaces, executors
    Issuer = 0x06,
    Nft = 0x07,
    Builder = 0x08,
};

/// Deterministic synthetic addresses under the reserved 0x5e prefix:
/// role byte, 8-byte space (block index or shared), 8-byte counter.
class AddressFactory {
  public:
    AddressFactory(AddressKindMap* kinds) : kinds_(kinds) {}

    Address make(Role role, std::uint64_t space, AddressKind kind) {
        Address a;
        a.value[0] = 0x5e;
        a.value[1] = static_cast<std::uint8_t>(role);
        const std::uint64_t counter = counters_[{role, space}]++;
        for (int i = 0; i < 8; ++i)
            a.value[2 + i] = static_cast<std::uint8_t>(space >> (8 * (7 - i)));
        for (int i = 0; i < 8; ++i)
            a.value[10 + i] = static_cast<std::uint8_t>(counter >> (8 * (7 - i)));
        kinds_->set(a, kind);
        return a;
    }

  private:
    AddressKindMap* kinds_;
    std::map<std::pair<Role, std::uint64_t>, std::uint64_t> counters_;
};

struct BenignPool {
    Address pool;
    Address token_a;
    Address token_b;
    std::uint64_t ratio = 2;  // token_b units per token_a unit, fee 0.3%
};

inline TokenAmount scaled(std::uint64_t units) { return TokenAmount(units) * kUnit; }

}  // namespace synth_detail

/// Deterministic corpus generator. Every planted pattern is re-checked with
/// the real detectors and classifiers at generation time; any mismatch aborts
/// rather than writing invalid ground truth.
class CorpusBuilder {
  public:
    explicit CorpusBuilder(GenConfig cfg) : cfg_(std::move(cfg)), factory_(&out_.corpus.kinds) {
        validate();
        // address namespace derived from the seed, so corpora generated with
        // different seeds can be merged without venue collisions
        ns_ = static_cast<std::uint32_t>(cfg_.seed ^ (cfg_.seed >> 32) ^ 0x9e3779b9ULL);
        out_.corpus.header.format_version = kCorpusFormatVersion;
        out_.corpus.header.chain_id = cfg_.chain_id;
        out_.corpus.header.source = CorpusSource::Fixture;
        make_shared_materials();
    }

    GeneratedCorpus build() {
        for (int b = 0; b < cfg_.blocks; ++b) build_block(b);
        return std::move(out_);
    }

  private:
    using Role = synth_detail::Role;

    void validate() const {
        const PatternSpec& s = cfg_.spec;
        if (cfg_.blocks <= 0) throw SynthError("blocks must be positive");
        if (cfg_.benign_ratio < 0.0 || cfg_.benign_ratio >= 1.0)
            throw SynthError("benign ratio must be in [0, 1)");
        if (cfg_.categories.empty()) throw SynthError("no pattern categories selected");
        if (s.amount_min < 4 || s.amount_max < s.amount_min)
            throw SynthError("infeasible amount range");
        if (s.margin_min < 1 || s.margin_max < s.margin_min ||
            s.margin_max + 2 >= s.amount_min)
            throw SynthError("infeasible margin range");
    }

    std::uint64_t block_space(int index) const {
        return (static_cast<std::uint64_t>(ns_) << 32) |
               static_cast<std::uint32_t>(index + 1);
    }
    std::uint64_t shared_space() const { return static_cast<std::uint64_t>(ns_) << 32; }

    void make_shared_materials() {
        const std::uint64_t shared = shared_space();
        DetRng rng(cfg_.seed ^ 0x5e5e5e5e5e5e5e5eULL);
        for (int i = 0; i < cfg_.spec.token_pool; ++i)
            shared_tokens_.push_back(factory_.make(Role::Token, shared, AddressKind::CA));
        for (int i = 0; i < 8; ++i) {
            synth_detail::BenignPool pool;
            pool.pool = new_registered_pool(shared);
            pool.token_a = shared_tokens_[i % shared_tokens_.size()];
            pool.token_b = shared_tokens_[(i + 1) % shared_tokens_.size()];
            pool.ratio = 1 + rng.below(4);
            benign_pools_.push_back(pool);
        }
    }

    // ---- registry-backed venue factories

    Address new_registered_pool(std::uint64_t space) {
        const Address pool = factory_.make(Role::Pool, space, AddressKind::CA);
        RegistryEntry entry;
        entry.platform = "SynthSwap";
        entry.contract = pool;
        entry.kind = MatchKind::EventTopic;
        entry.topic0 = synth_detail::synth_swap_topic();
        entry.action = "Swap";
        out_.registry.add(std::move(entry));
        return pool;
    }

    Address new_stake_contract(std::uint64_t space) {
        const Address c = factory_.make(Role::Issuer, space, AddressKind::CA);
        RegistryEntry entry;
        entry.platform = "SynthStake";
        entry.contract = c;
        entry.kind = MatchKind::FunctionSelector;
        entry.selector = synth_detail::synth_leave_selector();
        entry.action = "leave";
        out_.registry.add(std::move(entry));
        return c;
    }

    Address new_issuer(std::uint64_t space) {
        const Address c = factory_.make(Role::Issuer, space, AddressKind::CA);
        RegistryEntry entry;
        entry.platform = "SynthIndex";
        entry.contract = c;
        entry.kind = MatchKind::EventTopic;
        entry.topic0 = synth_detail::synth_redeem_topic();
        entry.action = "Redeem";
        out_.registry.add(std::move(entry));
        return c;
    }

    // ---- transaction assembly helpers

    Transaction make_tx(const Address& from, const Address& to) {
        Transaction tx;
        tx.hash.value[0] = 0x5e;
        const std::uint64_t n = tx_counter_++;
        for (int i = 0; i < 8; ++i)
            tx.hash.value[24 + i] = static_cast<std::uint8_t>(n >> (8 * (7 - i)));
        tx.from = from;
        tx.to = to;
        return tx;
    }

    static void add_transfer(Transaction& tx, const Address& token, const Address& from,
                             const Address& to, const TokenAmount& amount) {
        tx.logs.push_back(make_erc20_transfer_log(token, from, to, amount));
    }

    static void add_nft(Transaction& tx, const Address& collection, const Address& from,
                        const Address& to, const BigInt& id) {
        tx.logs.push_back(make_erc721_transfer_log(collection, from, to, id));
    }

    static void add_event(Transaction& tx, const Address& contract, const Hash32& topic) {
        Log log;
        log.address = contract;
        log.topics.push_back(topic);
        tx.logs.push_back(log);
    }

    struct Planted {
        PatternCategory category;
        std::vector<std::size_t> tx_slots;  // indices into the staged tx list
    };

    struct BlockDraft {
        std::vector<Transaction> txs;
        std::vector<Planted> planted;
    };

    std::uint64_t units(DetRng& rng) const {
        return rng.between(cfg_.spec.amount_min, cfg_.spec.amount_max);
    }
    std::uint64_t margin_units(DetRng& rng) const {
        return rng.between(cfg_.spec.margin_min, cfg_.spec.margin_max);
    }

    // ---- MEV pattern emitters (amounts in units, scaled on emission)

    void emit_s1(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_a = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_b = factory_.make(Role::Token, space, AddressKind::CA);
        const Address pool = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address victim = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t a1 = units(rng);
        const std::uint64_t b1 = units(rng);
        const std::uint64_t margin = margin_units(rng);

        Transaction front = make_tx(eoa, bot);
        add_transfer(front, token_a, bot, pool, scaled(a1));
        add_transfer(front, token_b, pool, bot, scaled(b1));
        add_event(front, pool, synth_detail::synth_swap_topic());

        Transaction victim_tx = make_tx(victim, pool);
        add_transfer(victim_tx, token_a, victim, pool, scaled(units(rng)));
        add_transfer(victim_tx, token_b, pool, victim, scaled(units(rng)));
        add_event(victim_tx, pool, synth_detail::synth_swap_topic());

        Transaction back = make_tx(eoa, bot);
        add_transfer(back, token_b, bot, pool, scaled(b1));
        add_transfer(back, token_a, pool, bot, scaled(a1 + margin));
        add_event(back, pool, synth_detail::synth_swap_topic());

        Planted planted{PatternCategory::S1, {}};
        planted.tx_slots.push_back(stage(draft, std::move(front)));
        stage(draft, std::move(victim_tx));
        planted.tx_slots.push_back(stage(draft, std::move(back)));
        draft.planted.push_back(std::move(planted));
    }

    void emit_s2(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_a = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_b = factory_.make(Role::Token, space, AddressKind::CA);
        const Address dex1 = new_registered_pool(space);
        const Address dex2 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address victim = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t b0 = units(rng);
        const std::uint64_t a1 =
            rng.between(std::max(cfg_.spec.amount_min, cfg_.spec.margin_max + 3),
                        cfg_.spec.amount_max);
        const std::uint64_t margin_a = rng.between(cfg_.spec.margin_min,
                                                   std::min(cfg_.spec.margin_max, a1 - 2));
        const std::uint64_t margin_b = margin_units(rng);
        const std::uint64_t a_back = a1 - margin_a;      // >= 2
        const std::uint64_t a3 = rng.between(1, a_back - 1);
        const std::uint64_t a4 = a_back - a3;
        const std::uint64_t b_back = b0 + margin_b;
        const std::uint64_t b3 = rng.between(1, b0);
        const std::uint64_t b4 = b_back - b3;

        Transaction front = make_tx(eoa, bot);  // positions token A via DEX2
        add_transfer(front, token_b, bot, dex2, scaled(b0));
        add_transfer(front, token_a, dex2, bot, scaled(a1));
        add_event(front, dex2, synth_detail::synth_swap_topic());

        Transaction victim_tx = make_tx(victim, dex1);
        add_transfer(victim_tx, token_a, victim, dex1, scaled(units(rng)));
        add_transfer(victim_tx, token_b, dex1, victim, scaled(units(rng)));
        add_event(victim_tx, dex1, synth_detail::synth_swap_topic());

        Transaction back = make_tx(eoa, bot);  // unwinds across both venues
        add_transfer(back, token_a, bot, dex1, scaled(a3));
        add_transfer(back, token_b, dex1, bot, scaled(b3));
        add_event(back, dex1, synth_detail::synth_swap_topic());
        add_transfer(back, token_a, bot, dex2, scaled(a4));
        add_transfer(back, token_b, dex2, bot, scaled(b4));
        add_event(back, dex2, synth_detail::synth_swap_topic());

        Planted planted{PatternCategory::S2, {}};
        planted.tx_slots.push_back(stage(draft, std::move(front)));
        stage(draft, std::move(victim_tx));
        planted.tx_slots.push_back(stage(draft, std::move(back)));
        draft.planted.push_back(std::move(planted));
    }

    void emit_a1(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_x = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_y = factory_.make(Role::Token, space, AddressKind::CA);
        const Address p1 = new_registered_pool(space);
        const Address p2 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t x1 = units(rng);
        const std::uint64_t y1 = units(rng);
        const std::uint64_t margin = margin_units(rng);
        const std::uint64_t tip = rng.below(margin);  // strictly below keeps net positive

        Transaction tx = make_tx(eoa, bot);
        add_transfer(tx, token_x, bot, p1, scaled(x1));
        add_transfer(tx, token_y, p1, bot, scaled(y1));
        add_event(tx, p1, synth_detail::synth_swap_topic());
        add_transfer(tx, token_y, bot, p2, scaled(y1));
        add_transfer(tx, token_x, p2, bot, scaled(x1 + margin));
        add_event(tx, p2, synth_detail::synth_swap_topic());
        if (tip > 0) add_transfer(tx, token_x, bot, builder_, scaled(tip));

        Planted planted{PatternCategory::A1, {stage(draft, std::move(tx))}};
        draft.planted.push_back(std::move(planted));
    }

    void emit_a2(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_w = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_t = factory_.make(Role::Token, space, AddressKind::CA);
        const Address stake = new_stake_contract(space);  // also the staked-token contract
        const Address dex1 = new_registered_pool(space);
        const Address dex2 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t w1 = units(rng);
        const std::uint64_t staked = units(rng);
        const std::uint64_t unstaked = units(rng);
        const std::uint64_t margin = margin_units(rng);

        Transaction tx = make_tx(eoa, bot);
        tx.trace_calls = std::vector<TraceCall>{{stake, synth_detail::synth_leave_selector()}};
        add_transfer(tx, token_w, bot, dex1, scaled(w1));
        add_transfer(tx, stake, dex1, bot, scaled(staked));  // staking token, contract == token
        add_event(tx, dex1, synth_detail::synth_swap_topic());
        add_transfer(tx, stake, bot, null_address(), scaled(staked));  // burn
        add_transfer(tx, token_t, stake, bot, scaled(unstaked));       // mint leg
        add_transfer(tx, token_t, bot, dex2, scaled(unstaked));
        add_transfer(tx, token_w, dex2, bot, scaled(w1 + margin));
        add_event(tx, dex2, synth_detail::synth_swap_topic());

        Planted planted{PatternCategory::A2, {stage(draft, std::move(tx))}};
        draft.planted.push_back(std::move(planted));
    }

    void emit_a3(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_w = factory_.make(Role::Token, space, AddressKind::CA);
        const Address comp1 = factory_.make(Role::Token, space, AddressKind::CA);
        const Address comp2 = factory_.make(Role::Token, space, AddressKind::CA);
        const Address comp3 = factory_.make(Role::Token, space, AddressKind::CA);
        const Address issuer = new_issuer(space);  // the set token contract itself
        const Address dex1 = new_registered_pool(space);
        const Address dex2 = new_registered_pool(space);
        const Address dex3 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t w1 = units(rng);
        const std::uint64_t set_amount = units(rng);
        const std::uint64_t c1 = units(rng);
        const std::uint64_t c2 = units(rng);
        const std::uint64_t c3 = units(rng);
        const std::uint64_t margin = margin_units(rng);
        const std::uint64_t w2 = rng.between(1, w1 + margin - 1);
        const std::uint64_t w3 = w1 + margin - w2;

        Transaction tx = make_tx(eoa, bot);
        add_transfer(tx, token_w, bot, dex1, scaled(w1));
        add_transfer(tx, issuer, dex1, bot, scaled(set_amount));  // buy the set token
        add_event(tx, dex1, synth_detail::synth_swap_topic());
        add_transfer(tx, issuer, bot, null_address(), scaled(set_amount));  // redeem burns it
        add_transfer(tx, comp1, issuer, bot, scaled(c1));
        add_transfer(tx, comp2, issuer, bot, scaled(c2));
        add_transfer(tx, comp3, issuer, bot, scaled(c3));
        add_event(tx, issuer, synth_detail::synth_redeem_topic());
        add_transfer(tx, comp1, bot, dex2, scaled(c1));
        add_transfer(tx, token_w, dex2, bot, scaled(w2));
        add_event(tx, dex2, synth_detail::synth_swap_topic());
        add_transfer(tx, comp2, bot, dex3, scaled(c2));
        add_transfer(tx, token_w, dex3, bot, scaled(w3));
        add_event(tx, dex3, synth_detail::synth_swap_topic());

        Planted planted{PatternCategory::A3, {stage(draft, std::move(tx))}};
        draft.planted.push_back(std::move(planted));
    }

    void emit_a4(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_x = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_y = factory_.make(Role::Token, space, AddressKind::CA);
        const Address p1 = new_registered_pool(space);
        const Address p2 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address second = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t x1 = units(rng);
        const std::uint64_t y1 = units(rng);
        const std::uint64_t margin = margin_units(rng);
        const std::uint64_t keep = rng.between(1, x1 - 1);  // below x1: base scope stays negative
        const std::uint64_t payout = x1 + margin - keep;

        Transaction tx = make_tx(eoa, bot);
        add_transfer(tx, token_x, bot, p1, scaled(x1));
        add_transfer(tx, token_y, p1, bot, scaled(y1));
        add_event(tx, p1, synth_detail::synth_swap_topic());
        add_transfer(tx, token_y, bot, p2, scaled(y1));
        add_event(tx, p2, synth_detail::synth_swap_topic());
        add_transfer(tx, token_x, p2, second, scaled(payout));  // profit lands one hop away
        add_transfer(tx, token_x, p2, bot, scaled(keep));

        Planted planted{PatternCategory::A4, {stage(draft, std::move(tx))}};
        draft.planted.push_back(std::move(planted));
    }

    void emit_a5(BlockDraft& draft, DetRng& rng, std::uint64_t space, bool mirror) {
        using synth_detail::scaled;
        const Address collection = factory_.make(Role::Nft, space, AddressKind::CA);
        const Address pay_token = factory_.make(Role::Token, space, AddressKind::CA);
        const Address seller = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address market = factory_.make(Role::Contract, space, AddressKind::CA);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const BigInt token_id = BigInt(space) * 1000 + rng.below(1000);

        // the 1.35 -> 1.395 trade: margin 0.045, in 10^12-unit steps
        const std::uint64_t paid = mirror ? 1'350'000 : units(rng) * 100;
        const std::uint64_t received = mirror ? 1'395'000 : paid + margin_units(rng) * 100;

        Transaction tx = make_tx(eoa, bot);
        add_nft(tx, collection, seller, bot, token_id);
        add_transfer(tx, pay_token, bot, seller, scaled(paid));
        add_nft(tx, collection, bot, market, token_id);
        add_transfer(tx, pay_token, market, bot, scaled(received));

        Planted planted{PatternCategory::A5, {stage(draft, std::move(tx))}};
        draft.planted.push_back(std::move(planted));
    }

    // ---- benign traffic

    void emit_benign_swap(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const auto& pool = benign_pools_[rng.below(benign_pools_.size())];
        const Address user = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const std::uint64_t in_units = units(rng);
        Transaction tx = make_tx(user, pool.pool);
        if (rng.below(2) == 0) {
            const std::uint64_t out_units = in_units * pool.ratio * 997 / 1000;
            add_transfer(tx, pool.token_a, user, pool.pool, scaled(in_units));
            add_transfer(tx, pool.token_b, pool.pool, user, scaled(out_units));
        } else {
            const std::uint64_t out_units = in_units * 997 / (1000 * pool.ratio);
            add_transfer(tx, pool.token_b, user, pool.pool, scaled(in_units));
            add_transfer(tx, pool.token_a, pool.pool, user, scaled(out_units));
        }
        add_event(tx, pool.pool, synth_detail::synth_swap_topic());
        stage(draft, std::move(tx));
    }

    void emit_benign_transfer(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        const Address token = shared_tokens_[rng.below(shared_tokens_.size())];
        const Address from = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address to =
            rng.below(20) == 0 ? from : factory_.make(Role::Eoa, space, AddressKind::EOA);
        TokenAmount amount;
        if (rng.below(10) == 0) {
            amount = (TokenAmount(1) << static_cast<int>(rng.between(180, 250))) + rng.below(1000);
        } else {
            amount = synth_detail::scaled(units(rng));
        }
        Transaction tx = make_tx(from, token);
        add_transfer(tx, token, from, to, amount);
        stage(draft, std::move(tx));
    }

    void emit_benign_nft_selftrade(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address collection = factory_.make(Role::Nft, space, AddressKind::CA);
        const Address pay_token = factory_.make(Role::Token, space, AddressKind::CA);
        const Address seller = factory_.make(Role::Eoa, space, AddressKind::EOA);
        const Address market = factory_.make(Role::Contract, space, AddressKind::CA);
        const Address taker = factory_.make(Role::Bot, space, AddressKind::CA);
        const BigInt token_id = BigInt(space) * 1000 + rng.below(1000);
        const std::uint64_t paid = units(rng) * 100;
        const std::uint64_t received = paid + margin_units(rng) * 100;

        Transaction tx = make_tx(seller, taker);  // sender IS the seller
        add_nft(tx, collection, seller, taker, token_id);
        add_transfer(tx, pay_token, taker, seller, scaled(paid));
        add_nft(tx, collection, taker, market, token_id);
        add_transfer(tx, pay_token, market, taker, scaled(received));
        stage(draft, std::move(tx));
    }

    void emit_benign_mimic_a2(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_w = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_t = factory_.make(Role::Token, space, AddressKind::CA);
        const Address wrapped = factory_.make(Role::Token, space, AddressKind::CA);  // unregistered
        const Address treasury = factory_.make(Role::Contract, space, AddressKind::CA);
        const Address dex1 = new_registered_pool(space);
        const Address dex2 = new_registered_pool(space);
        const Address bot = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t w1 = units(rng);
        const std::uint64_t staked = units(rng);
        const std::uint64_t unstaked = units(rng);
        const std::uint64_t margin = margin_units(rng);

        Transaction tx = make_tx(eoa, bot);
        add_transfer(tx, token_w, bot, dex1, scaled(w1));
        add_transfer(tx, wrapped, dex1, bot, scaled(staked));
        add_event(tx, dex1, synth_detail::synth_swap_topic());
        add_transfer(tx, wrapped, bot, treasury, scaled(staked));  // not the null address
        add_transfer(tx, token_t, wrapped, bot, scaled(unstaked));
        add_transfer(tx, token_t, bot, dex2, scaled(unstaked));
        add_transfer(tx, token_w, dex2, bot, scaled(w1 + margin));
        add_event(tx, dex2, synth_detail::synth_swap_topic());
        stage(draft, std::move(tx));
    }

    void emit_benign_executor(BlockDraft& draft, DetRng& rng, std::uint64_t space) {
        using synth_detail::scaled;
        const Address token_x = factory_.make(Role::Token, space, AddressKind::CA);
        const Address token_y = factory_.make(Role::Token, space, AddressKind::CA);
        const Address p1 = factory_.make(Role::Contract, space, AddressKind::CA);  // unregistered
        const Address p2 = factory_.make(Role::Contract, space, AddressKind::CA);
        const Address walker = factory_.make(Role::Bot, space, AddressKind::CA);
        const Address executor = factory_.make(Role::Contract, space, AddressKind::CA);
        const Address eoa = factory_.make(Role::Eoa, space, AddressKind::EOA);

        const std::uint64_t x1 = units(rng);
        const std::uint64_t y1 = units(rng);
        const std::uint64_t margin = margin_units(rng);
        const std::uint64_t tip = rng.below(margin);

        Transaction tx = make_tx(eoa, executor);  // profit accrues off the taker scope
        add_transfer(tx, token_x, walker, p1, scaled(x1));
        add_transfer(tx, token_y, p1, walker, scaled(y1));
        add_transfer(tx, token_y, walker, p2, scaled(y1));
        add_transfer(tx, token_x, p2, walker, scaled(x1 + margin));
        if (tip > 0) add_transfer(tx, token_x, walker, builder_, scaled(tip));
        stage(draft, std::move(tx));
    }

    static std::size_t stage(BlockDraft& draft, Transaction tx) {
        draft.txs.push_back(std::move(tx));
        return draft.txs.size() - 1;
    }

    // ---- block assembly and self-verification

    void build_block(int index) {
        const std::uint64_t space = block_space(index);
        DetRng rng(cfg_.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1)));
        builder_ = factory_.make(Role::Builder, space, AddressKind::EOA);

        BlockDraft draft;
        int mev_txs = 0;
        for (int k = 0; k < cfg_.patterns_per_block; ++k) {
            const PatternCategory cat =
                cfg_.categories[(static_cast<std::size_t>(index) * cfg_.patterns_per_block + k) %
                                cfg_.categories.size()];
            switch (cat) {
                case PatternCategory::S1: emit_s1(draft, rng, space); mev_txs += 2; break;
                case PatternCategory::S2: emit_s2(draft, rng, space); mev_txs += 2; break;
                case PatternCategory::A1: emit_a1(draft, rng, space); mev_txs += 1; break;
                case PatternCategory::A2: emit_a2(draft, rng, space); mev_txs += 1; break;
                case PatternCategory::A3: emit_a3(draft, rng, space); mev_txs += 1; break;
                case PatternCategory::A4: emit_a4(draft, rng, space); mev_txs += 1; break;
                case PatternCategory::A5:
                    emit_a5(draft, rng, space, !a5_mirror_planted_);
                    a5_mirror_planted_ = true;
                    mev_txs += 1;
                    break;
                default:
                    throw SynthError("benign categories cannot be planted as patterns");
            }
        }

        // benign fill to reach the configured ratio of non-MEV transactions
        const double r = cfg_.benign_ratio;
        const int total_needed =
            mev_txs == 0 ? cfg_.patterns_per_block
                         : static_cast<int>(std::ceil(static_cast<double>(mev_txs) / (1.0 - r)));
        const int benign_needed = std::max(0, total_needed - static_cast<int>(draft.txs.size()));
        const double wsum = cfg_.weight_swap + cfg_.weight_transfer + cfg_.weight_mimic_a2 +
                            cfg_.weight_executor + cfg_.weight_nft_selftrade;
        for (int i = 0; i < benign_needed; ++i) {
            const double roll = rng.uniform() * wsum;
            if (roll < cfg_.weight_swap) {
                emit_benign_swap(draft, rng, space);
            } else if (roll < cfg_.weight_swap + cfg_.weight_transfer) {
                emit_benign_transfer(draft, rng, space);
            } else if (roll < cfg_.weight_swap + cfg_.weight_transfer + cfg_.weight_mimic_a2) {
                emit_benign_mimic_a2(draft, rng, space);
            } else if (roll < wsum - cfg_.weight_nft_selftrade) {
                emit_benign_executor(draft, rng, space);
            } else {
                emit_benign_nft_selftrade(draft, rng, space);
            }
        }

        // deterministic interleave that keeps each pattern's txs in relative
        // order: stable sort by a per-tx draw, patterns pinned by slot chain
        Block block;
        block.number = cfg_.first_block + static_cast<std::uint64_t>(index);
        block.fee_recipient = builder_;
        std::vector<std::size_t> order(draft.txs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        // pattern txs must keep their staged relative order (front < victim < back)
        std::vector<std::size_t> pos_of(order.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos) pos_of[order[pos]] = pos;
        for (const Planted& p : draft.planted) {
            std::vector<std::size_t> slots;
            for (std::size_t s = 0; s < draft.txs.size(); ++s)
                if (pattern_member(draft, s, p)) slots.push_back(s);
            std::vector<std::size_t> positions;
            for (std::size_t s : slots) positions.push_back(pos_of[s]);
            std::sort(positions.begin(), positions.end());
            for (std::size_t i = 0; i < slots.size(); ++i) order[positions[i]] = slots[i];
            for (std::size_t i = 0; i < slots.size(); ++i) pos_of[slots[i]] = positions[i];
        }

        std::map<std::size_t, std::size_t> slot_to_index;
        for (std::uint32_t idx = 0; idx < order.size(); ++idx) {
            Transaction tx = std::move(draft.txs[order[idx]]);
            tx.block_number = block.number;
            tx.tx_index = idx;
            slot_to_index[order[idx]] = idx;
            block.transactions.push_back(std::move(tx));
        }

        verify_block(block, draft, slot_to_index);
        out_.corpus.blocks.push_back(std::move(block));
    }

    bool pattern_member(const BlockDraft& draft, std::size_t slot, const Planted& p) const {
        // pattern tx groups are contiguous slot ranges [first..last]
        if (p.tx_slots.empty()) return false;
        const std::size_t first = p.tx_slots.front();
        const std::size_t last = p.tx_slots.back();
        (void)draft;
        return slot >= first && slot <= last;
    }

    /// Re-labels the finished block with the real pipeline; the label set
    /// must be exactly the planted set or generation aborts.
    void verify_block(const Block& block, const BlockDraft& draft,
                      const std::map<std::size_t, std::size_t>& slot_to_index) {
        std::vector<MevLabel> labels = label_block(block, out_.registry);

        std::map<std::uint32_t, const MevLabel*> by_front;
        for (const MevLabel& l : labels) by_front[l.txs.front().tx_index] = &l;
        if (labels.size() != draft.planted.size())
            throw SynthError("block " + std::to_string(block.number) + ": labeler found " +
                             std::to_string(labels.size()) + " labels, planted " +
                             std::to_string(draft.planted.size()));

        for (const Planted& p : draft.planted) {
            const std::uint32_t front_index =
                static_cast<std::uint32_t>(slot_to_index.at(p.tx_slots.front()));
            auto it = by_front.find(front_index);
            if (it == by_front.end())
                throw SynthError("planted " + to_string(p.category) + " not found by labeler");
            const MevLabel& label = *it->second;
            if (to_string(label.category) != to_string(p.category))
                throw SynthError("planted " + to_string(p.category) + " labeled as " +
                                 to_string(label.category));
            if (p.tx_slots.size() == 2) {
                const std::uint32_t back_index =
                    static_cast<std::uint32_t>(slot_to_index.at(p.tx_slots.back()));
                if (label.txs.size() != 2 || label.txs.back().tx_index != back_index)
                    throw SynthError("planted pair back leg mismatch");
            }
            out_.truth.labels.push_back(label);
        }
    }

    GenConfig cfg_;
    std::uint32_t ns_ = 0;
    GeneratedCorpus out_;
    synth_detail::AddressFactory factory_;
    std::vector<Address> shared_tokens_;
    std::vector<synth_detail::BenignPool> benign_pools_;
    Address builder_;
    std::uint64_t tx_counter_ = 0;
    bool a5_mirror_planted_ = false;
};

inline GeneratedCorpus gen_corpus(const GenConfig& cfg) { return CorpusBuilder(cfg).build(); }

/// Uniform fuzz block: small address/token pools force recipient collisions
/// and zero/negative profit boundaries for the detector oracle comparison.
inline Block gen_fuzz_block(std::uint64_t number, std::uint64_t seed) {
    DetRng rng(seed ^ (number * 0xd1342543de82ef95ULL + 17));
    AddressKindMap scratch;
    synth_detail::AddressFactory factory(&scratch);
    std::vector<Address> recipients, actors, tokens;
    for (int i = 0; i < 5; ++i)
        recipients.push_back(factory.make(synth_detail::Role::Bot, number, AddressKind::CA));
    for (int i = 0; i < 7; ++i)
        actors.push_back(factory.make(synth_detail::Role::Eoa, number, AddressKind::EOA));
    actors.push_back(null_address());
    for (int i = 0; i < 4; ++i)
        tokens.push_back(factory.make(synth_detail::Role::Token, number, AddressKind::CA));

    Block block;
    block.number = number;
    block.fee_recipient = factory.make(synth_detail::Role::Builder, number, AddressKind::EOA);
    const int tx_count = static_cast<int>(rng.between(4, 24));
    std::uint64_t hash_counter = 0;
    for (int i = 0; i < tx_count; ++i) {
        Transaction tx;
        tx.hash.value[0] = 0xfa;
        for (int b = 0; b < 8; ++b)
            tx.hash.value[8 + b] = static_cast<std::uint8_t>(number >> (8 * (7 - b)));
        tx.hash.value[31] = static_cast<std::uint8_t>(hash_counter++);
        tx.from = actors[rng.below(actors.size() - 1)];  // never the null address
        if (rng.below(12) == 0) {
            tx.to = std::nullopt;  // contract creation
        } else if (rng.below(12) == 0) {
            tx.to = null_address();
        } else {
            tx.to = recipients[rng.below(recipients.size())];
        }
        tx.block_number = number;
        tx.tx_index = static_cast<std::uint32_t>(i);
        const int transfers = static_cast<int>(rng.below(7));
        for (int t = 0; t < transfers; ++t) {
            const Address& token = tokens[rng.below(tokens.size())];
            Address from = actors[rng.below(actors.size())];
            Address to = rng.below(4) == 0 && tx.to ? *tx.to : actors[rng.below(actors.size())];
            const TokenAmount amount = synth_detail::scaled(rng.below(5));  // zeros included
            tx.logs.push_back(make_erc20_transfer_log(token, from, to, amount));
            if (rng.below(3) == 0)  // opposing leg, often exact cancellation
                tx.logs.push_back(make_erc20_transfer_log(token, to, from, amount));
        }
        block.transactions.push_back(std::move(tx));
    }
    return block;
}

/// Writes corpus.mevcorpus.jsonl, registry.json and truth.jsonl into dir.
inline void write_generated(const GeneratedCorpus& generated, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    save_corpus((base / "corpus.mevcorpus.jsonl").string(), generated.corpus);
    save_registry(generated.registry, (base / "registry.json").string());
    save_labels((base / "truth.jsonl").string(), generated.truth.labels);
}

}  // namespace mevflow
