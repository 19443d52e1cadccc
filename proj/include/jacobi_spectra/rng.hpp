#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace jacobi_spectra {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t z) {
    return splitmix64_next(z);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// Deterministic variate stream keyed by (master_seed, stream_id).
// The same key yields the same sequence on every run and under any worker
// count; distinct stream_ids give statistically independent streams.
// Engine: xoshiro256++ seeded by a SplitMix64 expansion of the key.
class SeededStream {
public:
    SeededStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id) {
        std::uint64_t sm = master_seed;
        sm = detail::mix64(sm) ^ detail::mix64(stream_id + 0x0ddc0ffeebadf00dull);
        for (auto& word : state_) word = detail::splitmix64_next(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Independent child stream; (id, tag) pairs map to fresh keys.
    SeededStream substream(std::uint64_t tag) const {
        std::uint64_t child = detail::mix64(stream_id_ * 0xd1342543de82ef95ull + 1) ^
                              detail::mix64(tag + 0x9e3779b97f4a7c15ull);
        return SeededStream(master_seed_, child);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1): 53-bit mantissa, half-ulp offset.
    double u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method; caches the paired draw.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Gamma(shape, 1) by Marsaglia–Tsang squeeze/accept-reject; shapes below 1
// use the boost Gamma(shape+1) * U^{1/shape}.
inline double sample_gamma(double shape, SeededStream& stream) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::invalid_argument("sample_gamma: shape must be positive and finite");
    if (shape < 1.0) {
        double boosted = sample_gamma(shape + 1.0, stream);
        return boosted * std::pow(stream.u01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = stream.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = stream.u01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Beta(a, b) as G1/(G1+G2); the result is clamped into the open unit
// interval so downstream square roots of x(1-x) stay strictly positive
// even when sub-unit shapes underflow.
inline double sample_beta(double a, double b, SeededStream& stream) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("sample_beta: shapes must be positive and finite");
    double g1 = sample_gamma(a, stream);
    double g2 = sample_gamma(b, stream);
    double sum = g1 + g2;
    double x = sum > 0.0 ? g1 / sum : 0.5;
    const double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::min(std::max(x, lo), hi);
}

} // namespace jacobi_spectra
