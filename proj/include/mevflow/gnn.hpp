#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mevflow/features.hpp"
#include "mevflow/metrics.hpp"
#include "mevflow/rng.hpp"
#include "mevflow/tensor.hpp"

namespace mevflow {

enum class LayerKind { GCN, SAGE, GAT };

inline std::string to_string(LayerKind k) {
    switch (k) {
        case LayerKind::GCN: return "gcn";
        case LayerKind::SAGE: return "sage";
        default: return "gat";
    }
}

inline LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "gcn") return LayerKind::GCN;
    if (s == "sage") return LayerKind::SAGE;
    if (s == "gat") return LayerKind::GAT;
    throw std::invalid_argument("unknown layer kind \"" + s + "\"");
}

/// One layer's parameters. GCN carries the neighbor weight plus a separate
/// self weight; SAGE one weight over the concatenated [self || neighbor-mean];
/// GAT a shared weight plus the attention vector of length 2*d_out.
struct GnnLayerParams {
    LayerKind kind = LayerKind::GCN;
    int d_in = 0;
    int d_out = 0;
    Tensor2 weight;
    Tensor2 self_weight;  // GCN only
    Tensor2 attention;    // GAT only, 1 x 2*d_out
};

enum class OptimizerKind { SGD, Adam };

struct TrainConfig {
    int epochs = 40;
    int batch_size = 64;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 0;
    double leaky_slope = 0.2;       // GAT attention nonlinearity
    bool final_layer_relu = false;  // identity before readout by default
};

struct ArbiNetModel {
    std::vector<GnnLayerParams> layers;
    Tensor2 head_weight;  // d_hidden x 2
    Tensor2 head_bias;    // 1 x 2
    ScaleScheme feature_scheme = ScaleScheme::Log1pCounts;
    std::optional<FeatureGroup> masked_group;
    TrainConfig config;
    int selected_epoch = 0;

    int input_dim() const { return layers.empty() ? 0 : layers.front().d_in; }
    int hidden_dim() const { return layers.empty() ? 0 : layers.back().d_out; }
};

namespace gnn_detail {

using Rng = DetRng;

inline Tensor2 glorot(int rows, int cols, Rng& rng) {
    Tensor2 t(rows, cols);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : t.data) v = rng.uniform(-limit, limit);
    return t;
}

struct Adjacency {
    std::vector<std::vector<int>> undirected;  // GCN neighbor sets
    std::vector<std::vector<int>> incoming;    // SAGE/GAT in-neighbors
    std::vector<int> att_src, att_dst;         // GAT edges incl. self loops
};

inline Adjacency build_adjacency(const FeatureGraph& fg) {
    const int n = fg.num_nodes();
    Adjacency adj;
    std::vector<std::set<int>> und(static_cast<std::size_t>(n)), in(static_cast<std::size_t>(n));
    for (const auto& [s, d] : fg.edges) {
        und[static_cast<std::size_t>(s)].insert(d);
        und[static_cast<std::size_t>(d)].insert(s);
        in[static_cast<std::size_t>(d)].insert(s);
    }
    adj.undirected.reserve(n);
    adj.incoming.reserve(n);
    for (int v = 0; v < n; ++v) {
        adj.undirected.emplace_back(und[static_cast<std::size_t>(v)].begin(),
                                    und[static_cast<std::size_t>(v)].end());
        adj.incoming.emplace_back(in[static_cast<std::size_t>(v)].begin(),
                                  in[static_cast<std::size_t>(v)].end());
    }
    for (int v = 0; v < n; ++v) {  // attention set: N_in(v) plus v itself
        adj.att_src.push_back(v);
        adj.att_dst.push_back(v);
        for (int u : adj.incoming[static_cast<std::size_t>(v)]) {
            adj.att_src.push_back(u);
            adj.att_dst.push_back(v);
        }
    }
    return adj;
}

struct LayerNodes {
    Tape::NodeId weight = -1;
    Tape::NodeId self_weight = -1;
    Tape::NodeId attention = -1;
};

inline Tape::NodeId layer_forward_on_tape(Tape& tape, const GnnLayerParams& params,
                                          const LayerNodes& nodes, const Adjacency& adj,
                                          Tape::NodeId h, bool apply_relu, double leaky_slope) {
    Tape::NodeId out;
    switch (params.kind) {
        case LayerKind::GCN: {
            const auto agg = tape.neighbor_mean(h, adj.undirected);
            out = tape.add(tape.matmul(agg, nodes.weight), tape.matmul(h, nodes.self_weight));
            break;
        }
        case LayerKind::SAGE: {
            const auto agg = tape.neighbor_mean(h, adj.incoming);
            out = tape.matmul(tape.concat_cols(h, agg), nodes.weight);
            break;
        }
        case LayerKind::GAT: {
            const auto z = tape.matmul(h, nodes.weight);
            const auto a_self = tape.transpose(tape.slice_cols(nodes.attention, 0, params.d_out));
            const auto a_neigh =
                tape.transpose(tape.slice_cols(nodes.attention, params.d_out, params.d_out));
            const auto score_self = tape.matmul(z, a_self);    // |V| x 1
            const auto score_neigh = tape.matmul(z, a_neigh);  // |V| x 1
            const auto e = tape.leaky_relu(
                tape.add(tape.gather_rows(score_self, adj.att_dst),
                         tape.gather_rows(score_neigh, adj.att_src)),
                leaky_slope);
            const auto alpha =
                tape.segment_softmax(e, adj.att_dst, static_cast<int>(adj.undirected.size()));
            out = tape.weighted_rows_sum(z, alpha, adj.att_src, adj.att_dst,
                                         static_cast<int>(adj.undirected.size()));
            break;
        }
        default:
            throw std::logic_error("unreachable layer kind");
    }
    return apply_relu ? tape.relu(out) : out;
}

struct ForwardNodes {
    std::vector<LayerNodes> layers;
    Tape::NodeId head_weight = -1;
    Tape::NodeId head_bias = -1;
    Tape::NodeId logits = -1;
};

inline ForwardNodes model_forward_on_tape(Tape& tape, const ArbiNetModel& model,
                                          const FeatureGraph& fg) {
    if (fg.num_nodes() == 0)
        throw std::invalid_argument("model_forward requires at least one node");
    if (model.input_dim() != kFeatureCount)
        throw std::invalid_argument("model input dim must be " + std::to_string(kFeatureCount));

    const Adjacency adj = build_adjacency(fg);
    Tensor2 features(fg.num_nodes(), kFeatureCount);
    features.data = fg.x;

    ForwardNodes out;
    Tape::NodeId h = tape.leaf(std::move(features));
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const GnnLayerParams& params = model.layers[i];
        LayerNodes nodes;
        nodes.weight = tape.leaf(params.weight);
        if (params.kind == LayerKind::GCN) nodes.self_weight = tape.leaf(params.self_weight);
        if (params.kind == LayerKind::GAT) nodes.attention = tape.leaf(params.attention);
        const bool last = i + 1 == model.layers.size();
        const bool relu_here = last ? model.config.final_layer_relu : true;
        h = layer_forward_on_tape(tape, params, nodes, adj, h, relu_here,
                                  model.config.leaky_slope);
        out.layers.push_back(nodes);
    }
    out.head_weight = tape.leaf(model.head_weight);
    out.head_bias = tape.leaf(model.head_bias);
    out.logits = tape.add(tape.matmul(tape.mean_rows(h), out.head_weight), out.head_bias);
    return out;
}

}  // namespace gnn_detail

/// Single-layer forward pass on explicit inputs (the unit-test surface).
inline Tensor2 layer_forward(const GnnLayerParams& params,
                             const std::vector<std::pair<int, int>>& edges, const Tensor2& h,
                             bool apply_relu = false, double leaky_slope = 0.2) {
    FeatureGraph topo;
    topo.nodes.resize(static_cast<std::size_t>(h.rows));
    topo.edges = edges;
    const gnn_detail::Adjacency adj = gnn_detail::build_adjacency(topo);
    Tape tape;
    gnn_detail::LayerNodes nodes;
    const Tape::NodeId input = tape.leaf(h);
    nodes.weight = tape.leaf(params.weight);
    if (params.kind == LayerKind::GCN) nodes.self_weight = tape.leaf(params.self_weight);
    if (params.kind == LayerKind::GAT) nodes.attention = tape.leaf(params.attention);
    const Tape::NodeId out =
        gnn_detail::layer_forward_on_tape(tape, params, nodes, adj, input, apply_relu, leaky_slope);
    return tape.value(out);
}

/// GAT attention coefficients per (src,dst) pair including self loops,
/// grouped by destination; each destination's coefficients sum to 1.
inline std::vector<std::tuple<int, int, double>> gat_attention_coefficients(
    const GnnLayerParams& params, const std::vector<std::pair<int, int>>& edges, const Tensor2& h,
    double leaky_slope = 0.2) {
    if (params.kind != LayerKind::GAT) throw std::invalid_argument("not a GAT layer");
    FeatureGraph topo;
    topo.nodes.resize(static_cast<std::size_t>(h.rows));
    topo.edges = edges;
    const gnn_detail::Adjacency adj = gnn_detail::build_adjacency(topo);
    Tape tape;
    const auto input = tape.leaf(h);
    const auto w = tape.leaf(params.weight);
    const auto att = tape.leaf(params.attention);
    const auto z = tape.matmul(input, w);
    const auto a_self = tape.transpose(tape.slice_cols(att, 0, params.d_out));
    const auto a_neigh = tape.transpose(tape.slice_cols(att, params.d_out, params.d_out));
    const auto e = tape.leaky_relu(tape.add(tape.gather_rows(tape.matmul(z, a_self), adj.att_dst),
                                            tape.gather_rows(tape.matmul(z, a_neigh), adj.att_src)),
                                   leaky_slope);
    const auto alpha = tape.segment_softmax(e, adj.att_dst, h.rows);
    std::vector<std::tuple<int, int, double>> out;
    for (std::size_t k = 0; k < adj.att_src.size(); ++k)
        out.emplace_back(adj.att_src[k], adj.att_dst[k], tape.value(alpha).data[k]);
    return out;
}

/// Column-wise mean of node embeddings. Errors on an empty graph.
inline std::vector<double> readout_mean(const Tensor2& h) {
    if (h.rows == 0) throw std::invalid_argument("readout over an empty graph");
    std::vector<double> out(static_cast<std::size_t>(h.cols), 0.0);
    for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.cols; ++j) out[static_cast<std::size_t>(j)] += h.at(i, j);
    for (double& v : out) v /= static_cast<double>(h.rows);
    return out;
}

inline std::array<double, 2> model_forward(const ArbiNetModel& model, const FeatureGraph& fg) {
    Tape tape;
    const auto nodes = gnn_detail::model_forward_on_tape(tape, model, fg);
    const Tensor2& logits = tape.value(nodes.logits);
    return {logits.at(0, 0), logits.at(0, 1)};
}

inline int predict(const ArbiNetModel& model, const FeatureGraph& fg) {
    const auto logits = model_forward(model, fg);
    return logits[1] > logits[0] ? 1 : 0;
}

/// Fresh model with Glorot-initialized parameters; deterministic in the seed.
inline ArbiNetModel make_model(LayerKind kind, std::uint64_t seed, int hidden_dim = 64,
                               int num_layers = 2, int input_dim = kFeatureCount) {
    gnn_detail::Rng rng(seed ^ 0x6d65766e65740001ULL);
    ArbiNetModel model;
    model.config.seed = seed;
    int d_in = input_dim;
    for (int i = 0; i < num_layers; ++i) {
        GnnLayerParams layer;
        layer.kind = kind;
        layer.d_in = d_in;
        layer.d_out = hidden_dim;
        switch (kind) {
            case LayerKind::GCN:
                layer.weight = gnn_detail::glorot(d_in, hidden_dim, rng);
                layer.self_weight = gnn_detail::glorot(d_in, hidden_dim, rng);
                break;
            case LayerKind::SAGE:
                layer.weight = gnn_detail::glorot(2 * d_in, hidden_dim, rng);
                break;
            case LayerKind::GAT:
                layer.weight = gnn_detail::glorot(d_in, hidden_dim, rng);
                layer.attention = gnn_detail::glorot(1, 2 * hidden_dim, rng);
                break;
        }
        model.layers.push_back(std::move(layer));
        d_in = hidden_dim;
    }
    model.head_weight = gnn_detail::glorot(d_in, 2, rng);
    model.head_bias = Tensor2(1, 2);
    return model;
}

class TrainDivergence : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    Metrics val;
};

struct TrainResult {
    ArbiNetModel model;
    std::vector<EpochStats> history;
};

namespace gnn_detail {

inline std::vector<Tensor2*> parameter_tensors(ArbiNetModel& model) {
    std::vector<Tensor2*> out;
    for (GnnLayerParams& layer : model.layers) {
        out.push_back(&layer.weight);
        if (layer.kind == LayerKind::GCN) out.push_back(&layer.self_weight);
        if (layer.kind == LayerKind::GAT) out.push_back(&layer.attention);
    }
    out.push_back(&model.head_weight);
    out.push_back(&model.head_bias);
    return out;
}

struct ParamNodeIds {
    std::vector<Tape::NodeId> ids;  // same order as parameter_tensors
};

inline ParamNodeIds collect_param_nodes(const ForwardNodes& fn, const ArbiNetModel& model) {
    ParamNodeIds out;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        out.ids.push_back(fn.layers[i].weight);
        if (model.layers[i].kind == LayerKind::GCN) out.ids.push_back(fn.layers[i].self_weight);
        if (model.layers[i].kind == LayerKind::GAT) out.ids.push_back(fn.layers[i].attention);
    }
    out.ids.push_back(fn.head_weight);
    out.ids.push_back(fn.head_bias);
    return out;
}

class Optimizer {
  public:
    Optimizer(OptimizerKind kind, double lr, std::vector<Tensor2*> params)
        : kind_(kind), lr_(lr), params_(std::move(params)) {
        if (kind_ == OptimizerKind::Adam) {
            for (Tensor2* p : params_) {
                m_.emplace_back(p->rows, p->cols);
                v_.emplace_back(p->rows, p->cols);
            }
        }
    }

    void step(const std::vector<Tensor2>& grads) {
        ++t_;
        for (std::size_t i = 0; i < params_.size(); ++i) {
            Tensor2& p = *params_[i];
            const Tensor2& g = grads[i];
            if (kind_ == OptimizerKind::SGD) {
                for (std::size_t k = 0; k < p.data.size(); ++k) p.data[k] -= lr_ * g.data[k];
                continue;
            }
            const double bc1 = 1.0 - std::pow(kBeta1, t_);
            const double bc2 = 1.0 - std::pow(kBeta2, t_);
            for (std::size_t k = 0; k < p.data.size(); ++k) {
                m_[i].data[k] = kBeta1 * m_[i].data[k] + (1.0 - kBeta1) * g.data[k];
                v_[i].data[k] = kBeta2 * v_[i].data[k] + (1.0 - kBeta2) * g.data[k] * g.data[k];
                p.data[k] -= lr_ * (m_[i].data[k] / bc1) / (std::sqrt(v_[i].data[k] / bc2) + kEps);
            }
        }
    }

  private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    OptimizerKind kind_;
    double lr_;
    int t_ = 0;
    std::vector<Tensor2*> params_;
    std::vector<Tensor2> m_, v_;
};

}  // namespace gnn_detail

/// Loss plus parameter gradients for one labeled graph.
inline double loss_and_gradients(ArbiNetModel& model, const FeatureGraph& fg, int label,
                                 std::vector<Tensor2>* grads_out) {
    Tape tape;
    const auto fn = gnn_detail::model_forward_on_tape(tape, model, fg);
    const auto loss = tape.softmax_cross_entropy(fn.logits, label);
    const double loss_value = tape.value(loss).data[0];
    if (grads_out) {
        tape.backward(loss);
        const auto ids = gnn_detail::collect_param_nodes(fn, model);
        grads_out->clear();
        for (Tape::NodeId id : ids.ids) grads_out->push_back(tape.grad(id));
    }
    return loss_value;
}

/// Cross-entropy training with max-validation-F1 model selection. Ties pick
/// the earliest epoch; an empty validation set falls back to the final epoch.
inline TrainResult train(const ArbiNetModel& model_init, const std::vector<FeatureGraph>& train_set,
                         const std::vector<FeatureGraph>& val_set, const TrainConfig& cfg) {
    if (train_set.empty()) throw std::invalid_argument("empty training set");
    for (const FeatureGraph& fg : train_set)
        if (!fg.label || (*fg.label != 0 && *fg.label != 1))
            throw std::invalid_argument("training graphs need 0/1 labels");

    TrainResult result;
    result.model = model_init;
    result.model.config = cfg;
    ArbiNetModel& model = result.model;

    gnn_detail::Rng rng(cfg.seed ^ 0x747261696e5eedULL);
    gnn_detail::Optimizer optimizer(cfg.optimizer, cfg.learning_rate,
                                    gnn_detail::parameter_tensors(model));

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    ArbiNetModel best;
    double best_f1 = -1.0;
    int best_epoch = -1;

    std::vector<Tensor2> grads, batch_grads;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t cursor = 0;
        while (cursor < order.size()) {
            const std::size_t batch_end =
                std::min(order.size(), cursor + static_cast<std::size_t>(cfg.batch_size));
            batch_grads.clear();
            for (std::size_t i = cursor; i < batch_end; ++i) {
                const FeatureGraph& fg = train_set[order[i]];
                const double loss = loss_and_gradients(model, fg, *fg.label, &grads);
                if (!std::isfinite(loss))
                    throw TrainDivergence("loss diverged at epoch " + std::to_string(epoch));
                epoch_loss += loss;
                if (batch_grads.empty()) {
                    batch_grads = grads;
                } else {
                    for (std::size_t g = 0; g < grads.size(); ++g)
                        for (std::size_t k = 0; k < grads[g].data.size(); ++k)
                            batch_grads[g].data[k] += grads[g].data[k];
                }
            }
            const double inv = 1.0 / static_cast<double>(batch_end - cursor);
            for (Tensor2& g : batch_grads)
                for (double& v : g.data) v *= inv;
            optimizer.step(batch_grads);
            cursor = batch_end;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss / static_cast<double>(train_set.size());
        if (!val_set.empty()) {
            std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
            for (const FeatureGraph& fg : val_set) {
                const int label = fg.label.value_or(0);
                const int pred = predict(model, fg);
                if (pred == 1 && label == 1) ++tp;
                else if (pred == 1) ++fp;
                else if (label == 1) ++fn;
                else ++tn;
            }
            stats.val = metrics_from_counts(tp, fp, fn, tn);
            if (stats.val.f1 > best_f1) {
                best_f1 = stats.val.f1;
                best_epoch = epoch;
                best = model;
            }
        }
        result.history.push_back(stats);
    }

    if (best_epoch >= 0) {
        best.config = cfg;
        best.selected_epoch = best_epoch;
        result.model = std::move(best);
    } else {
        result.model.selected_epoch = cfg.epochs;
    }
    return result;
}

/// Max relative error between analytic gradients and central finite
/// differences over a random parameter subsample (>=100 coordinates when the
/// model has that many). Near-zero pairs fall back to an absolute test.
inline double grad_check(const ArbiNetModel& model_in, const FeatureGraph& fg, int label,
                         double eps, std::uint64_t seed = 12345) {
    if (eps < 1e-7 || eps > 1e-3) throw std::invalid_argument("eps outside [1e-7, 1e-3]");
    ArbiNetModel model = model_in;
    std::vector<Tensor2> analytic;
    loss_and_gradients(model, fg, label, &analytic);

    std::vector<Tensor2*> params = gnn_detail::parameter_tensors(model);
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t p = 0; p < params.size(); ++p)
        for (std::size_t k = 0; k < params[p]->data.size(); ++k) coords.emplace_back(p, k);

    gnn_detail::Rng rng(seed);
    if (coords.size() > 100) {
        rng.shuffle(coords);
        coords.resize(100);
    }

    double max_err = 0.0;
    for (const auto& [p, k] : coords) {
        double& slot = params[p]->data[k];
        const double saved = slot;
        slot = saved + eps;
        const double up = loss_and_gradients(model, fg, label, nullptr);
        slot = saved - eps;
        const double down = loss_and_gradients(model, fg, label, nullptr);
        slot = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double exact = analytic[p].data[k];
        const double scale = std::max(std::abs(numeric), std::abs(exact));
        if (scale < 1e-8) continue;  // both ~0: absolute pass
        max_err = std::max(max_err, std::abs(numeric - exact) / scale);
    }
    return max_err;
}

// ---- checkpoints (.arbinet.json)

inline constexpr int kCheckpointFormatVersion = 1;

namespace gnn_detail {

inline ordered_json tensor_to_json(const Tensor2& t) {
    ordered_json j;
    j["rows"] = t.rows;
    j["cols"] = t.cols;
    j["data"] = t.data;
    return j;
}

inline Tensor2 tensor_from_json(const ordered_json& j) {
    Tensor2 t(j.at("rows").get<int>(), j.at("cols").get<int>());
    const auto& data = j.at("data");
    if (data.size() != t.data.size()) throw std::invalid_argument("tensor payload size mismatch");
    for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = data.at(i).get<double>();
    return t;
}

}  // namespace gnn_detail

inline void save_checkpoint(const ArbiNetModel& model, const std::string& path) {
    ordered_json j;
    j["format_version"] = kCheckpointFormatVersion;
    ordered_json layers = ordered_json::array();
    for (const GnnLayerParams& layer : model.layers) {
        ordered_json l;
        l["kind"] = to_string(layer.kind);
        l["d_in"] = layer.d_in;
        l["d_out"] = layer.d_out;
        l["weight"] = gnn_detail::tensor_to_json(layer.weight);
        if (layer.kind == LayerKind::GCN)
            l["self_weight"] = gnn_detail::tensor_to_json(layer.self_weight);
        if (layer.kind == LayerKind::GAT)
            l["attention"] = gnn_detail::tensor_to_json(layer.attention);
        layers.push_back(std::move(l));
    }
    j["layers"] = std::move(layers);
    j["head_weight"] = gnn_detail::tensor_to_json(model.head_weight);
    j["head_bias"] = gnn_detail::tensor_to_json(model.head_bias);
    j["feature_scheme"] = to_string(model.feature_scheme);
    j["masked_group"] =
        model.masked_group ? ordered_json(to_string(*model.masked_group)) : ordered_json(nullptr);
    ordered_json meta;
    meta["seed"] = model.config.seed;
    meta["epochs"] = model.config.epochs;
    meta["batch_size"] = model.config.batch_size;
    meta["learning_rate"] = model.config.learning_rate;
    meta["optimizer"] = model.config.optimizer == OptimizerKind::Adam ? "adam" : "sgd";
    meta["selected_epoch"] = model.selected_epoch;
    j["metadata"] = std::move(meta);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

inline ArbiNetModel load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed checkpoint " + path);
    if (j.at("format_version").get<int>() != kCheckpointFormatVersion)
        throw std::runtime_error("unsupported checkpoint version");

    ArbiNetModel model;
    int expected_in = -1;
    for (const auto& l : j.at("layers")) {
        GnnLayerParams layer;
        layer.kind = layer_kind_from_string(l.at("kind").get<std::string>());
        layer.d_in = l.at("d_in").get<int>();
        layer.d_out = l.at("d_out").get<int>();
        layer.weight = gnn_detail::tensor_from_json(l.at("weight"));
        const int want_rows = layer.kind == LayerKind::SAGE ? 2 * layer.d_in : layer.d_in;
        if (layer.weight.rows != want_rows || layer.weight.cols != layer.d_out)
            throw std::runtime_error("checkpoint layer weight shape mismatch");
        if (layer.kind == LayerKind::GCN) {
            layer.self_weight = gnn_detail::tensor_from_json(l.at("self_weight"));
            if (layer.self_weight.rows != layer.d_in || layer.self_weight.cols != layer.d_out)
                throw std::runtime_error("checkpoint self weight shape mismatch");
        }
        if (layer.kind == LayerKind::GAT) {
            layer.attention = gnn_detail::tensor_from_json(l.at("attention"));
            if (layer.attention.rows != 1 || layer.attention.cols != 2 * layer.d_out)
                throw std::runtime_error("checkpoint attention shape mismatch");
        }
        if (expected_in >= 0 && layer.d_in != expected_in)
            throw std::runtime_error("checkpoint layer dimension chain mismatch");
        expected_in = layer.d_out;
        model.layers.push_back(std::move(layer));
    }
    model.head_weight = gnn_detail::tensor_from_json(j.at("head_weight"));
    model.head_bias = gnn_detail::tensor_from_json(j.at("head_bias"));
    if (!model.layers.empty() && model.head_weight.rows != model.layers.back().d_out)
        throw std::runtime_error("checkpoint head shape mismatch");
    if (model.head_weight.cols != 2 || model.head_bias.rows != 1 || model.head_bias.cols != 2)
        throw std::runtime_error("checkpoint head must map to two classes");
    model.feature_scheme = scale_scheme_from_string(j.at("feature_scheme").get<std::string>());
    if (!j.at("masked_group").is_null())
        model.masked_group = feature_group_from_string(j.at("masked_group").get<std::string>());
    const auto& meta = j.at("metadata");
    model.config.seed = meta.at("seed").get<std::uint64_t>();
    model.config.epochs = meta.at("epochs").get<int>();
    model.config.batch_size = meta.at("batch_size").get<int>();
    model.config.learning_rate = meta.at("learning_rate").get<double>();
    model.config.optimizer = meta.at("optimizer").get<std::string>() == "adam"
                                 ? OptimizerKind::Adam
                                 : OptimizerKind::SGD;
    model.selected_epoch = meta.at("selected_epoch").get<int>();
    return model;
}

}  // namespace mevflow
