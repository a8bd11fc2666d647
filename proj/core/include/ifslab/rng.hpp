#pragma once

#include <cstdint>
#include <string_view>

namespace ifslab {

/// Deterministic splitmix64 generator. All stochastic code in the library
/// draws from this so that a single master seed reproduces a whole run,
/// independent of platform and of how work is split into stages: each stage
/// takes a substream derived from a stable label.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Child generator derived from a stable label; does not advance *this.
    Rng substream(std::string_view label) const {
        std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ull;
        }
        Rng child(state_ ^ h);
        child.next_u64();  // decorrelate from the raw xor
        return child;
    }

    Rng substream(std::uint64_t index) const {
        Rng child(state_ ^ (0x9E3779B97F4A7C15ull * (index + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

}  // namespace ifslab
