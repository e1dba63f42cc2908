#pragma once

#include <cstdint>

namespace rwalk {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

// Counter-based generator: output k is a hash of (key, k). Streams derived
// from (master seed, stream index) are independent of execution order and
// worker count, which is what makes parallel trials reproducible.
class CounterRng {
public:
    CounterRng() : key_(0), counter_(0) {}
    explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}

    std::uint64_t next_u64() {
        return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1} (n > 0); bias is negligible for n << 2^64.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

inline std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t stream_index) {
    return detail::mix64(master_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1)) ^
           detail::mix64(stream_index ^ 0xd1b54a32d192ed03ULL);
}

inline CounterRng trial_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return CounterRng(derive_stream_key(master_seed, stream_index));
}

} // namespace rwalk
