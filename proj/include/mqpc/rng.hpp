#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace mqpc {

// SplitMix64-based random stream with deterministic named/indexed substream
// derivation. Every sampling operation in the simulator takes one of these
// explicitly; there is no global randomness. Substream derivation is a pure
// function of (current state, label), so the same label always yields the
// same child stream -- callers must use distinct labels for distinct purposes.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 bits of mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, d). Rejection sampling on the top of
    // the 64-bit range keeps the draw modulo-bias free.
    int uniform_digit(int d) {
        const auto ud = static_cast<std::uint64_t>(d);
        const std::uint64_t reject_above = UINT64_MAX - (UINT64_MAX % ud + 1) % ud;
        std::uint64_t x = next_u64();
        while (x > reject_above) x = next_u64();
        return static_cast<int>(x % ud);
    }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) { return lo + uniform_digit(hi - lo + 1); }

    bool bernoulli(double p) { return next_double() < p; }

    // Standard normal via Box-Muller. Hand-rolled (not std::normal_distribution)
    // so that identical seeds give identical streams on every platform.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Derive an independent child stream. Does not advance this stream.
    RandomStream split(std::uint64_t index) const {
        return RandomStream(mix(state_ ^ mix(0x6A09E667F3BCC909ULL + index * 0x9E3779B97F4A7C15ULL)));
    }

    RandomStream split(std::string_view label) const { return split(fnv1a(label)); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mqpc
