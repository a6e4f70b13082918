#pragma once

#include <cstdint>
#include <random>

namespace mmsb {

/// Seedable 64-bit generator used everywhere randomness is needed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Floating-point draws are derived from the raw 64-bit words here
/// rather than through <random> distributions, whose algorithms are
/// implementation-defined, so a seed produces the same stream on every
/// platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Uniform on the open interval (0, 1).
    double uniform_open();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// Stream-splitting rule: trial t of a run seeded with `base` uses base ^ t.
constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) { return base ^ trial; }

}  // namespace mmsb
