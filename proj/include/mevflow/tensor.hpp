#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mevflow {

/// Dense row-major matrix of doubles. The whole GNN runs on these; graphs are
/// small enough that nothing fancier pays for itself.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    static Tensor2 zeros(int r, int c) { return Tensor2(r, c); }

    static Tensor2 identity(int n) {
        Tensor2 t(n, n);
        for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
        return t;
    }

    static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows_init) {
        const int r = static_cast<int>(rows_init.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows_init.begin()->size());
        Tensor2 t(r, c);
        int i = 0;
        for (const auto& row : rows_init) {
            if (static_cast<int>(row.size()) != c)
                throw std::invalid_argument("ragged initializer");
            int j = 0;
            for (double v : row) t.at(i, j++) = v;
            ++i;
        }
        return t;
    }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }

    bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
};

/// Reverse-mode tape over Tensor2 values. Construction order is the
/// topological order, so backward is a single reverse sweep; every loop runs
/// in a fixed index order, which keeps training bit-deterministic.
class Tape {
  public:
    using NodeId = int;

    NodeId leaf(Tensor2 value) { return push(std::move(value), {}); }

    const Tensor2& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Tensor2& grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].grad; }

    NodeId matmul(NodeId a, NodeId b) {
        const Tensor2& A = value(a);
        const Tensor2& B = value(b);
        if (A.cols != B.rows) throw std::invalid_argument("matmul shape mismatch");
        Tensor2 C(A.rows, B.cols);
        for (int i = 0; i < A.rows; ++i)
            for (int k = 0; k < A.cols; ++k) {
                const double aik = A.at(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
            }
        return push(std::move(C), [a, b](Tape& t, NodeId self) {
            const Tensor2& A = t.value(a);
            const Tensor2& B = t.value(b);
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            Tensor2& dB = t.mutable_grad(b);
            for (int i = 0; i < A.rows; ++i)
                for (int j = 0; j < B.cols; ++j) {
                    const double g = dC.at(i, j);
                    if (g == 0.0) continue;
                    for (int k = 0; k < A.cols; ++k) {
                        dA.at(i, k) += g * B.at(k, j);
                        dB.at(k, j) += g * A.at(i, k);
                    }
                }
        });
    }

    NodeId add(NodeId a, NodeId b) {
        const Tensor2& A = value(a);
        const Tensor2& B = value(b);
        if (!A.same_shape(B)) throw std::invalid_argument("add shape mismatch");
        Tensor2 C = A;
        for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] += B.data[i];
        return push(std::move(C), [a, b](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            Tensor2& dB = t.mutable_grad(b);
            for (std::size_t i = 0; i < dC.data.size(); ++i) {
                dA.data[i] += dC.data[i];
                dB.data[i] += dC.data[i];
            }
        });
    }

    NodeId relu(NodeId a) { return leaky_relu(a, 0.0); }

    NodeId leaky_relu(NodeId a, double slope) {
        const Tensor2& A = value(a);
        Tensor2 C = A;
        for (double& v : C.data)
            if (v < 0.0) v *= slope;
        return push(std::move(C), [a, slope](Tape& t, NodeId self) {
            const Tensor2& A = t.value(a);
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            for (std::size_t i = 0; i < A.data.size(); ++i)
                dA.data[i] += dC.data[i] * (A.data[i] > 0.0 ? 1.0 : slope);
        });
    }

    NodeId concat_cols(NodeId a, NodeId b) {
        const Tensor2& A = value(a);
        const Tensor2& B = value(b);
        if (A.rows != B.rows) throw std::invalid_argument("concat_cols row mismatch");
        Tensor2 C(A.rows, A.cols + B.cols);
        for (int i = 0; i < A.rows; ++i) {
            for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
            for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
        }
        return push(std::move(C), [a, b](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            Tensor2& dB = t.mutable_grad(b);
            for (int i = 0; i < dA.rows; ++i) {
                for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(i, j);
                for (int j = 0; j < dB.cols; ++j) dB.at(i, j) += dC.at(i, dA.cols + j);
            }
        });
    }

    NodeId slice_cols(NodeId a, int first, int count) {
        const Tensor2& A = value(a);
        if (first < 0 || count < 0 || first + count > A.cols)
            throw std::invalid_argument("slice_cols out of range");
        Tensor2 C(A.rows, count);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < count; ++j) C.at(i, j) = A.at(i, first + j);
        return push(std::move(C), [a, first, count](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            for (int i = 0; i < dC.rows; ++i)
                for (int j = 0; j < count; ++j) dA.at(i, first + j) += dC.at(i, j);
        });
    }

    NodeId transpose(NodeId a) {
        const Tensor2& A = value(a);
        Tensor2 C(A.cols, A.rows);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
        return push(std::move(C), [a](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            for (int i = 0; i < dA.rows; ++i)
                for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(j, i);
        });
    }

    NodeId gather_rows(NodeId a, std::vector<int> idx) {
        const Tensor2& A = value(a);
        Tensor2 C(static_cast<int>(idx.size()), A.cols);
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (int j = 0; j < A.cols; ++j) C.at(static_cast<int>(k), j) = A.at(idx[k], j);
        return push(std::move(C), [a, idx = std::move(idx)](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            for (std::size_t k = 0; k < idx.size(); ++k)
                for (int j = 0; j < dA.cols; ++j)
                    dA.at(idx[k], j) += dC.at(static_cast<int>(k), j);
        });
    }

    /// out[v] = mean of A rows listed in nbrs[v]; empty list gives a zero row.
    NodeId neighbor_mean(NodeId a, std::vector<std::vector<int>> nbrs) {
        const Tensor2& A = value(a);
        Tensor2 C(static_cast<int>(nbrs.size()), A.cols);
        for (std::size_t v = 0; v < nbrs.size(); ++v) {
            if (nbrs[v].empty()) continue;
            const double inv = 1.0 / static_cast<double>(nbrs[v].size());
            for (int u : nbrs[v])
                for (int j = 0; j < A.cols; ++j) C.at(static_cast<int>(v), j) += A.at(u, j) * inv;
        }
        return push(std::move(C), [a, nbrs = std::move(nbrs)](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            for (std::size_t v = 0; v < nbrs.size(); ++v) {
                if (nbrs[v].empty()) continue;
                const double inv = 1.0 / static_cast<double>(nbrs[v].size());
                for (int u : nbrs[v])
                    for (int j = 0; j < dA.cols; ++j)
                        dA.at(u, j) += dC.at(static_cast<int>(v), j) * inv;
            }
        });
    }

    /// Softmax of a column vector within segments (scores grouped by segment
    /// id). Max-shift per segment for stability.
    NodeId segment_softmax(NodeId scores, std::vector<int> segment, int num_segments) {
        const Tensor2& S = value(scores);
        if (S.cols != 1 || static_cast<std::size_t>(S.rows) != segment.size())
            throw std::invalid_argument("segment_softmax expects an E x 1 score column");
        std::vector<double> seg_max(static_cast<std::size_t>(num_segments),
                                    -std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < segment.size(); ++k)
            seg_max[segment[k]] = std::max(seg_max[segment[k]], S.data[k]);
        std::vector<double> seg_sum(static_cast<std::size_t>(num_segments), 0.0);
        Tensor2 C(S.rows, 1);
        for (std::size_t k = 0; k < segment.size(); ++k) {
            C.data[k] = std::exp(S.data[k] - seg_max[segment[k]]);
            seg_sum[segment[k]] += C.data[k];
        }
        for (std::size_t k = 0; k < segment.size(); ++k) C.data[k] /= seg_sum[segment[k]];
        return push(std::move(C), [scores, segment = std::move(segment),
                                   num_segments](Tape& t, NodeId self) {
            const Tensor2& alpha = t.value(self);
            const Tensor2& dAlpha = t.grad(self);
            Tensor2& dS = t.mutable_grad(scores);
            std::vector<double> seg_dot(static_cast<std::size_t>(num_segments), 0.0);
            for (std::size_t k = 0; k < segment.size(); ++k)
                seg_dot[segment[k]] += alpha.data[k] * dAlpha.data[k];
            for (std::size_t k = 0; k < segment.size(); ++k)
                dS.data[k] += alpha.data[k] * (dAlpha.data[k] - seg_dot[segment[k]]);
        });
    }

    /// out[dst[k]] += alpha[k] * A[src[k]] over all per-edge weights.
    NodeId weighted_rows_sum(NodeId a, NodeId alpha, std::vector<int> src, std::vector<int> dst,
                             int out_rows) {
        const Tensor2& A = value(a);
        const Tensor2& W = value(alpha);
        if (W.cols != 1 || static_cast<std::size_t>(W.rows) != src.size() || src.size() != dst.size())
            throw std::invalid_argument("weighted_rows_sum arity mismatch");
        Tensor2 C(out_rows, A.cols);
        for (std::size_t k = 0; k < src.size(); ++k)
            for (int j = 0; j < A.cols; ++j) C.at(dst[k], j) += W.data[k] * A.at(src[k], j);
        return push(std::move(C), [a, alpha, src = std::move(src),
                                   dst = std::move(dst)](Tape& t, NodeId self) {
            const Tensor2& A = t.value(a);
            const Tensor2& W = t.value(alpha);
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            Tensor2& dW = t.mutable_grad(alpha);
            for (std::size_t k = 0; k < src.size(); ++k) {
                double dot = 0.0;
                for (int j = 0; j < A.cols; ++j) {
                    dA.at(src[k], j) += W.data[k] * dC.at(dst[k], j);
                    dot += A.at(src[k], j) * dC.at(dst[k], j);
                }
                dW.data[k] += dot;
            }
        });
    }

    /// Column-wise mean over rows (the readout). Errors on an empty matrix.
    NodeId mean_rows(NodeId a) {
        const Tensor2& A = value(a);
        if (A.rows == 0) throw std::invalid_argument("mean over zero rows");
        Tensor2 C(1, A.cols);
        const double inv = 1.0 / static_cast<double>(A.rows);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) C.at(0, j) += A.at(i, j) * inv;
        return push(std::move(C), [a](Tape& t, NodeId self) {
            const Tensor2& dC = t.grad(self);
            Tensor2& dA = t.mutable_grad(a);
            const double inv = 1.0 / static_cast<double>(dA.rows);
            for (int i = 0; i < dA.rows; ++i)
                for (int j = 0; j < dA.cols; ++j) dA.at(i, j) += dC.at(0, j) * inv;
        });
    }

    /// Mean cross-entropy of softmax(logits) against the label, one row here
    /// (batching accumulates outside). Stable log-sum-exp form.
    NodeId softmax_cross_entropy(NodeId logits, int label) {
        const Tensor2& L = value(logits);
        if (L.rows != 1 || label < 0 || label >= L.cols)
            throw std::invalid_argument("softmax_cross_entropy expects 1 x k logits");
        double max_logit = L.data[0];
        for (double v : L.data) max_logit = std::max(max_logit, v);
        double sum = 0.0;
        for (double v : L.data) sum += std::exp(v - max_logit);
        Tensor2 C(1, 1);
        C.data[0] = std::log(sum) + max_logit - L.data[static_cast<std::size_t>(label)];
        return push(std::move(C), [logits, label, max_logit](Tape& t, NodeId self) {
            const Tensor2& L = t.value(logits);
            const Tensor2& dC = t.grad(self);
            Tensor2& dL = t.mutable_grad(logits);
            double sum = 0.0;
            for (double v : L.data) sum += std::exp(v - max_logit);
            for (int j = 0; j < L.cols; ++j) {
                const double p = std::exp(L.at(0, j) - max_logit) / sum;
                dL.at(0, j) += dC.data[0] * (p - (j == label ? 1.0 : 0.0));
            }
        });
    }

    /// Seeds d(root)/d(root) = 1 and sweeps the tape in reverse.
    void backward(NodeId root) {
        for (Node& n : nodes_) {
            n.grad = Tensor2(n.value.rows, n.value.cols);
        }
        Tensor2& seed = nodes_[static_cast<std::size_t>(root)].grad;
        if (seed.size() != 1) throw std::invalid_argument("backward root must be scalar");
        seed.data[0] = 1.0;
        for (int id = root; id >= 0; --id) {
            const auto& back = nodes_[static_cast<std::size_t>(id)].back;
            if (back) back(*this, id);
        }
    }

  private:
    struct Node {
        Tensor2 value;
        Tensor2 grad;
        std::function<void(Tape&, NodeId)> back;
    };

    Tensor2& mutable_grad(NodeId id) { return nodes_[static_cast<std::size_t>(id)].grad; }

    NodeId push(Tensor2 value, std::function<void(Tape&, NodeId)> back) {
        nodes_.push_back(Node{std::move(value), Tensor2(), std::move(back)});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    std::vector<Node> nodes_;
};

}  // namespace mevflow
