#pragma once

#include <cstdint>

#include "rational.hpp"

namespace cubical {

/// Seedable xorshift64* generator.
///
/// The exact algorithm is part of the tool contract so that case streams
/// can be reproduced from a seed alone: state is the 64-bit seed (0 is
/// remapped to 0x9E3779B97F4A7C15); each draw does
///   s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
/// and returns s * 0x2545F4914F6CDD1D.
class Xorshift {
public:
    explicit Xorshift(std::uint64_t seed)
        : state_(seed ? seed : 0x9E3779B97F4A7C15ULL)
    {
    }

    std::uint64_t next()
    {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform integer in [lo, hi], inclusive.
    long long range(long long lo, long long hi)
    {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(next() % span);
    }

    /// Small rational with numerator in [-num_max, num_max] and denominator in [1, den_max].
    Rat rational(long long num_max, long long den_max)
    {
        return Rat(Int(range(-num_max, num_max)), Int(range(1, den_max)));
    }

private:
    std::uint64_t state_;
};

}  // namespace cubical
