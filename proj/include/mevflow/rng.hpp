#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mevflow {

/// mt19937_64 (the engine's output sequence is pinned by the standard) with
/// explicit mappings instead of std distributions, so every stream is
/// reproducible across platforms and standard libraries.
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, n); modulo bias is irrelevant at these ranges.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {  // inclusive
        return lo + below(hi - lo + 1);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mevflow
